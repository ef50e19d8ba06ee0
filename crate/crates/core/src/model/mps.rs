//! Free-form MPS reader and writer.
//!
//! Supported sections: `NAME`, `ROWS`, `COLUMNS` (with `MARKER`
//! `INTORG`/`INTEND`), `RHS`, `RANGES`, `BOUNDS`, `ENDATA`. Numbers are read
//! exactly; besides decimal literals the reader also accepts `p/q` so that
//! arbitrary rational models survive a write/read cycle.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Model, ModelError, ObjSense, RowSense};
use crate::numerics::{parse_rational, rat, ExtendedRational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Name,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    End,
}

enum RowRef {
    Objective,
    Ignored,
    Constraint(usize),
}

struct Reader {
    model: Model,
    row_index: HashMap<String, RowRef>,
    col_index: HashMap<String, usize>,
    seen_entry: HashMap<(usize, usize), ()>,
    current_col: Option<usize>,
    in_integer_block: bool,
    ranges: Vec<(usize, Rational)>,
    rhs_seen: HashMap<usize, ()>,
}

fn parse_err(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Parse { line, message: message.into() }
}

/// Parses a minimisation model.
pub fn parse_mps(text: &str) -> Result<Model, ModelError> {
    parse_mps_with_sense(text, ObjSense::Minimize)
}

/// Parses a model whose objective direction is supplied by the caller. With
/// [`ObjSense::Maximize`] the stored objective is negated.
pub fn parse_mps_with_sense(text: &str, sense: ObjSense) -> Result<Model, ModelError> {
    let mut reader = Reader {
        model: Model::new(""),
        row_index: HashMap::new(),
        col_index: HashMap::new(),
        seen_entry: HashMap::new(),
        current_col: None,
        in_integer_block: false,
        ranges: Vec::new(),
        rhs_seen: HashMap::new(),
    };
    let mut section: Option<Section> = None;
    let mut has_objective = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let is_header = !raw.starts_with(char::is_whitespace);
        if is_header {
            let next = match tokens[0] {
                "NAME" => {
                    reader.model.name = tokens[1..].join(" ");
                    Section::Name
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::End,
                other => return Err(parse_err(line_no, format!("unknown section `{other}`"))),
            };
            if next != Section::Name && tokens.len() > 1 {
                return Err(parse_err(line_no, "unexpected tokens after section header"));
            }
            section = Some(next);
            if next == Section::End {
                break;
            }
            continue;
        }
        match section {
            None | Some(Section::Name) => {
                return Err(parse_err(line_no, "data line outside of a section"))
            }
            Some(Section::Rows) => reader.row_line(line_no, &tokens, &mut has_objective)?,
            Some(Section::Columns) => reader.column_line(line_no, &tokens)?,
            Some(Section::Rhs) => reader.rhs_line(line_no, &tokens)?,
            Some(Section::Ranges) => reader.range_line(line_no, &tokens)?,
            Some(Section::Bounds) => reader.bound_line(line_no, &tokens)?,
            Some(Section::End) => unreachable!(),
        }
    }
    if section != Some(Section::End) {
        return Err(parse_err(text.lines().count(), "missing ENDATA"));
    }
    reader.apply_ranges();
    let mut model = reader.model;
    if sense == ObjSense::Maximize {
        model.sense = ObjSense::Maximize;
        for c in &mut model.objective {
            *c = -c.clone();
        }
        model.obj_offset = -model.obj_offset.clone();
    }
    Ok(model)
}

impl Reader {
    fn number(&self, line: usize, token: &str) -> Result<Rational, ModelError> {
        parse_rational(token).map_err(|e| parse_err(line, e.to_string()))
    }

    fn row_line(&mut self, line: usize, t: &[&str], has_obj: &mut bool) -> Result<(), ModelError> {
        if t.len() != 2 {
            return Err(parse_err(line, "ROWS entries are `type name`"));
        }
        let name = t[1].to_string();
        if self.row_index.contains_key(&name) {
            return Err(parse_err(line, format!("duplicate row `{name}`")));
        }
        let entry = match t[0] {
            "N" if !*has_obj => {
                *has_obj = true;
                RowRef::Objective
            }
            "N" => RowRef::Ignored,
            kind => {
                let sense = RowSense::from_symbol(kind)
                    .ok_or_else(|| parse_err(line, format!("unknown row type `{kind}`")))?;
                let i = self.model.rows.len();
                self.model.rows.push(super::Row {
                    name: name.clone(),
                    coefs: Vec::new(),
                    sense,
                    rhs: Rational::zero(),
                });
                RowRef::Constraint(i)
            }
        };
        self.row_index.insert(name, entry);
        Ok(())
    }

    fn column_line(&mut self, line: usize, t: &[&str]) -> Result<(), ModelError> {
        if t.len() >= 3 && t[1].trim_matches('\'') == "MARKER" {
            match t[2].trim_matches('\'') {
                "INTORG" => self.in_integer_block = true,
                "INTEND" => self.in_integer_block = false,
                other => return Err(parse_err(line, format!("unknown marker `{other}`"))),
            }
            return Ok(());
        }
        if t.len() != 3 && t.len() != 5 {
            return Err(parse_err(line, "COLUMNS entries are `col row value [row value]`"));
        }
        let name = t[0];
        let j = match self.col_index.get(name) {
            Some(&j) if self.current_col == Some(j) => j,
            Some(_) => return Err(parse_err(line, format!("duplicate column `{name}`"))),
            None => {
                let j = self.model.add_column(
                    name,
                    Rational::zero(),
                    ExtendedRational::zero(),
                    ExtendedRational::PosInf,
                    self.in_integer_block,
                );
                self.col_index.insert(name.to_string(), j);
                self.current_col = Some(j);
                j
            }
        };
        for pair in t[1..].chunks(2) {
            let value = self.number(line, pair[1])?;
            match self.row_index.get(pair[0]) {
                None => return Err(parse_err(line, format!("unknown row `{}`", pair[0]))),
                Some(RowRef::Ignored) => {}
                Some(RowRef::Objective) => {
                    if self.seen_entry.insert((usize::MAX, j), ()).is_some() {
                        return Err(parse_err(line, "duplicate objective entry"));
                    }
                    self.model.objective[j] = value;
                }
                Some(RowRef::Constraint(i)) => {
                    let i = *i;
                    if self.seen_entry.insert((i, j), ()).is_some() {
                        return Err(parse_err(line, format!("duplicate entry for row `{}`", pair[0])));
                    }
                    if !value.is_zero() {
                        self.model.rows[i].coefs.push((j, value));
                    }
                }
            }
        }
        Ok(())
    }

    /// `[set] row value [row value]`: an odd token count means a set name is present.
    fn pairs<'a>(t: &'a [&'a str]) -> &'a [&'a str] {
        if t.len() % 2 == 1 {
            &t[1..]
        } else {
            t
        }
    }

    fn rhs_line(&mut self, line: usize, t: &[&str]) -> Result<(), ModelError> {
        let body = Self::pairs(t);
        if body.is_empty() || body.len() > 4 {
            return Err(parse_err(line, "RHS entries are `[set] row value [row value]`"));
        }
        for pair in body.chunks(2) {
            let value = self.number(line, pair[1])?;
            match self.row_index.get(pair[0]) {
                None => return Err(parse_err(line, format!("unknown row `{}`", pair[0]))),
                Some(RowRef::Ignored) => {}
                // Objective constant enters with opposite sign.
                Some(RowRef::Objective) => self.model.obj_offset = -value,
                Some(RowRef::Constraint(i)) => {
                    let i = *i;
                    if self.rhs_seen.insert(i, ()).is_some() {
                        return Err(parse_err(line, format!("duplicate rhs for `{}`", pair[0])));
                    }
                    self.model.rows[i].rhs = value;
                }
            }
        }
        Ok(())
    }

    fn range_line(&mut self, line: usize, t: &[&str]) -> Result<(), ModelError> {
        let body = Self::pairs(t);
        if body.is_empty() || body.len() > 4 {
            return Err(parse_err(line, "RANGES entries are `[set] row value [row value]`"));
        }
        for pair in body.chunks(2) {
            let value = self.number(line, pair[1])?;
            match self.row_index.get(pair[0]) {
                Some(RowRef::Constraint(i)) => {
                    let i = *i;
                    if self.ranges.iter().any(|(k, _)| *k == i) {
                        return Err(parse_err(line, format!("duplicate range for `{}`", pair[0])));
                    }
                    self.ranges.push((i, value));
                }
                _ => return Err(parse_err(line, format!("range on unknown row `{}`", pair[0]))),
            }
        }
        Ok(())
    }

    fn bound_line(&mut self, line: usize, t: &[&str]) -> Result<(), ModelError> {
        let kind = t[0];
        let needs_value = matches!(kind, "UP" | "LO" | "FX" | "LI" | "UI");
        let valueless = matches!(kind, "FR" | "MI" | "PL" | "BV");
        if !needs_value && !valueless {
            return Err(parse_err(line, format!("unknown bound type `{kind}`")));
        }
        // Strip the optional bound-set name.
        let (col_name, value_token) = match (needs_value, t.len()) {
            (true, 4) => (t[2], Some(t[3])),
            (true, 3) => (t[1], Some(t[2])),
            (false, 2) => (t[1], None),
            // `BV col value` versus `BV set col`.
            (false, 3) if kind == "BV" && !self.col_index.contains_key(t[2]) => (t[1], Some(t[2])),
            (false, 3) => (t[2], None),
            (false, 4) => (t[2], Some(t[3])), // BV set col value
            _ => return Err(parse_err(line, "malformed BOUNDS entry")),
        };
        let j = *self
            .col_index
            .get(col_name)
            .ok_or_else(|| parse_err(line, format!("bound on unknown column `{col_name}`")))?;
        let value = value_token.map(|v| self.number(line, v)).transpose()?;
        let m = &mut self.model;
        let fin = |v: &Option<Rational>| ExtendedRational::Finite(v.clone().expect("value present"));
        match kind {
            "UP" => m.upper[j] = fin(&value),
            "LO" => m.lower[j] = fin(&value),
            "FX" => {
                m.lower[j] = fin(&value);
                m.upper[j] = fin(&value);
            }
            "LI" => {
                m.lower[j] = fin(&value);
                m.integer[j] = true;
            }
            "UI" => {
                m.upper[j] = fin(&value);
                m.integer[j] = true;
            }
            "FR" => {
                m.lower[j] = ExtendedRational::NegInf;
                m.upper[j] = ExtendedRational::PosInf;
            }
            "MI" => m.lower[j] = ExtendedRational::NegInf,
            "PL" => m.upper[j] = ExtendedRational::PosInf,
            "BV" => {
                m.lower[j] = ExtendedRational::zero();
                m.upper[j] = ExtendedRational::Finite(rat(1));
                m.integer[j] = true;
            }
            _ => unreachable!(),
        }
        Ok(())
    }

    /// Turns every ranged row into a pair of one-sided rows.
    fn apply_ranges(&mut self) {
        let ranges = std::mem::take(&mut self.ranges);
        for (i, r) in ranges {
            let row = &self.model.rows[i];
            let b = row.rhs.clone();
            let width = r.abs();
            let (sense, other_sense, other_rhs) = match row.sense {
                RowSense::Le => (RowSense::Le, RowSense::Ge, &b - &width),
                RowSense::Ge => (RowSense::Ge, RowSense::Le, &b + &width),
                RowSense::Eq if r.is_zero() => continue,
                RowSense::Eq if r.is_positive() => (RowSense::Ge, RowSense::Le, &b + &width),
                RowSense::Eq => (RowSense::Le, RowSense::Ge, &b - &width),
            };
            let mut name = format!("{}_rng", row.name);
            while self.row_index.contains_key(&name) {
                name.push('_');
            }
            self.row_index.insert(name.clone(), RowRef::Ignored);
            let coefs = row.coefs.clone();
            self.model.rows[i].sense = sense;
            self.model.rows.push(super::Row { name, coefs, sense: other_sense, rhs: other_rhs });
        }
    }
}

/// Exact decimal text when the denominator only has factors 2 and 5,
/// otherwise `p/q`.
fn number_text(q: &Rational) -> String {
    let mut den = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return q.to_string();
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return q.numer().to_string();
    }
    let scaled = q * Rational::from_integer(num_traits::pow(BigInt::from(10), digits));
    let mag = scaled.numer().abs().to_string();
    let padded = format!("{mag:0>width$}", width = digits + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - digits);
    let sign = if q.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

/// Writes the model so that [`parse_mps_with_sense`] with the model's sense
/// reads back identical data. Objective coefficients are written in the
/// original direction.
pub fn write_mps(model: &Model) -> String {
    let flip = model.sense == ObjSense::Maximize;
    let orient = |q: &Rational| if flip { -q.clone() } else { q.clone() };
    let mut out = String::new();
    let _ = writeln!(out, "NAME {}", model.name);
    out.push_str("ROWS\n N obj\n");
    for row in &model.rows {
        let _ = writeln!(out, " {} {}", row.sense.symbol(), row.name);
    }
    out.push_str("COLUMNS\n");
    let columns = model.columns();
    let mut in_int = false;
    let mut marker = 0;
    for j in 0..model.num_cols() {
        if model.integer[j] != in_int {
            let tag = if model.integer[j] { "INTORG" } else { "INTEND" };
            let _ = writeln!(out, " M{marker} 'MARKER' '{tag}'");
            marker += 1;
            in_int = model.integer[j];
        }
        let name = &model.col_names[j];
        // A column with no entries still needs one line to exist.
        let _ = writeln!(out, " {name} obj {}", number_text(&orient(&model.objective[j])));
        for (i, a) in &columns[j] {
            let _ = writeln!(out, " {name} {} {}", model.rows[*i].name, number_text(a));
        }
    }
    if in_int {
        let _ = writeln!(out, " M{marker} 'MARKER' 'INTEND'");
    }
    out.push_str("RHS\n");
    if !model.obj_offset.is_zero() {
        let _ = writeln!(out, " RHS obj {}", number_text(&-orient(&model.obj_offset)));
    }
    for row in &model.rows {
        if !row.rhs.is_zero() {
            let _ = writeln!(out, " RHS {} {}", row.name, number_text(&row.rhs));
        }
    }
    out.push_str("BOUNDS\n");
    for j in 0..model.num_cols() {
        let name = &model.col_names[j];
        let (lo, up) = (&model.lower[j], &model.upper[j]);
        if lo == up {
            if let ExtendedRational::Finite(v) = lo {
                let _ = writeln!(out, " FX BND {name} {}", number_text(v));
                continue;
            }
        }
        match lo {
            ExtendedRational::NegInf => {
                let _ = writeln!(out, " MI BND {name}");
            }
            ExtendedRational::Finite(v) if !v.is_zero() => {
                let _ = writeln!(out, " LO BND {name} {}", number_text(v));
            }
            ExtendedRational::Finite(_) => {}
            ExtendedRational::PosInf => {
                // An empty domain from above; keep it representable.
                let _ = writeln!(out, " LO BND {name} 1e100000");
            }
        }
        match up {
            ExtendedRational::Finite(v) => {
                let _ = writeln!(out, " UP BND {name} {}", number_text(v));
            }
            ExtendedRational::PosInf => {}
            ExtendedRational::NegInf => {
                let _ = writeln!(out, " UP BND {name} -1e100000");
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    const KNAPSACK: &str = "\
NAME knapsack
ROWS
 N obj
 L cap
COLUMNS
 M1 'MARKER' 'INTORG'
 x1 obj -5 cap 2
 x2 obj -4 cap 3
 M2 'MARKER' 'INTEND'
RHS
 RHS cap 4
BOUNDS
 UP BND x1 1
 UP BND x2 1
ENDATA
";

    #[test]
    fn knapsack_fixture() {
        let m = parse_mps(KNAPSACK).unwrap();
        assert_eq!((m.num_rows(), m.num_cols()), (1, 2));
        assert_eq!(m.integer, vec![true, true]);
        assert_eq!(m.objective, vec![rat(-5), rat(-4)]);
        assert_eq!(m.rows[0].coefs, vec![(0, rat(2)), (1, rat(3))]);
        assert_eq!(m.rows[0].sense, RowSense::Le);
        assert_eq!(m.upper[1], ExtendedRational::Finite(rat(1)));
        m.validate().unwrap();
    }

    #[test]
    fn decimal_coefficient_is_exact() {
        let text = KNAPSACK.replace("x1 obj -5 cap 2", "x1 obj -5 cap 0.1");
        let m = parse_mps(&text).unwrap();
        assert_eq!(m.rows[0].coefs[0].1, ratio(1, 10));
    }

    #[test]
    fn maximize_negates_objective() {
        let m = parse_mps_with_sense(KNAPSACK, ObjSense::Maximize).unwrap();
        assert_eq!(m.objective, vec![rat(5), rat(4)]);
        assert_eq!(m.reported_objective(&rat(3)), rat(-3));
    }

    #[test]
    fn ranges_become_row_pairs() {
        let text = "NAME r\nROWS\n N obj\n L c1\n E c2\nCOLUMNS\n x obj 1 c1 1\n x c2 1\nRHS\n RHS c1 5 c2 2\nRANGES\n RNG c1 -3 c2 -1\nENDATA\n";
        let m = parse_mps(text).unwrap();
        assert_eq!(m.num_rows(), 4);
        assert_eq!((m.rows[0].sense, m.rows[0].rhs.clone()), (RowSense::Le, rat(5)));
        assert_eq!((m.rows[2].sense, m.rows[2].rhs.clone()), (RowSense::Ge, rat(2)));
        assert_eq!((m.rows[1].sense, m.rows[1].rhs.clone()), (RowSense::Le, rat(2)));
        assert_eq!((m.rows[3].sense, m.rows[3].rhs.clone()), (RowSense::Ge, rat(1)));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("NAME a\nFOO\nENDATA\n", 2, "unknown section"),
            ("NAME a\nROWS\n N obj\n L r\n L r\nENDATA\n", 5, "duplicate row"),
            ("NAME a\nROWS\n N obj\nCOLUMNS\n x zz 1\nENDATA\n", 5, "unknown row"),
            ("NAME a\nROWS\n N obj\nCOLUMNS\n x obj 1\n y obj 1\n x obj 2\nENDATA\n", 7, "duplicate column"),
            ("NAME a\nROWS\n N obj\nCOLUMNS\n x obj 1\nBOUNDS\n UP BND y 1\nENDATA\n", 7, "unknown column"),
            ("NAME a\nROWS\n N obj\nCOLUMNS\n x obj 1.2.3\nENDATA\n", 5, "malformed"),
        ];
        for (text, line, fragment) in cases {
            match parse_mps(text) {
                Err(ModelError::Parse { line: l, message }) => {
                    assert_eq!(l, line, "{message}");
                    assert!(message.contains(fragment), "{message}");
                }
                other => panic!("expected parse error, got {other:?}"),
            }
        }
        assert!(parse_mps("NAME a\nROWS\n N obj\n").is_err());
    }

    #[test]
    fn bound_types() {
        let text = "NAME b\nROWS\n N obj\nCOLUMNS\n a obj 1\n b obj 1\n c obj 1\n d obj 1\nBOUNDS\n FR BND a\n MI b\n BV BND c\n FX BND d 3/2\nENDATA\n";
        let m = parse_mps(text).unwrap();
        assert_eq!((m.lower[0].clone(), m.upper[0].clone()), (ExtendedRational::NegInf, ExtendedRational::PosInf));
        assert_eq!(m.lower[1], ExtendedRational::NegInf);
        assert!(m.integer[2]);
        assert_eq!(m.upper[2], ExtendedRational::Finite(rat(1)));
        assert_eq!(m.lower[3], ExtendedRational::Finite(ratio(3, 2)));
    }

    #[test]
    fn trivially_infeasible_bounds() {
        let text = KNAPSACK.replace(" UP BND x2 1", " UP BND x2 1\n LO BND x2 2");
        let m = parse_mps(&text).unwrap();
        assert_eq!(m.empty_domain(), Some(1));
    }

    #[test]
    fn number_text_forms() {
        assert_eq!(number_text(&ratio(1, 10)), "0.1");
        assert_eq!(number_text(&ratio(-1, 40)), "-0.025");
        assert_eq!(number_text(&ratio(1, 3)), "1/3");
        assert_eq!(number_text(&rat(-7)), "-7");
        assert_eq!(number_text(&ratio(5, 4)), "1.25");
    }
}
