//! Per-run statistics and their aggregation.

use std::fmt::Write as _;
use std::fs::OpenOptions;
use std::path::Path;

use thiserror::Error;

use crate::numerics::{format_rational, nearest_float, parse_rational, ExtendedRational, Rational};
use crate::tree::SolveStatus;

use super::{NODE_SHIFT, TIME_SHIFT};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("no values to aggregate")]
    Empty,
    #[error("shifted value is not positive")]
    NonPositive,
    #[error("stats file: {0}")]
    Csv(#[from] csv::Error),
    #[error("stats file: {0}")]
    Io(#[from] std::io::Error),
    #[error("stats file line {line}: bad {field}")]
    Field { line: usize, field: &'static str },
}

/// `(prod (v_i + s))^(1/k) - s`.
pub fn shifted_geomean(values: &[f64], shift: f64) -> Result<f64, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    if values.iter().any(|v| !(v + shift > 0.0)) {
        return Err(StatsError::NonPositive);
    }
    let k = values.len() as f64;
    let product: f64 = values.iter().map(|v| v + shift).product();
    let mean = if product.is_finite() && product > 0.0 {
        product.powf(1.0 / k)
    } else {
        // Out of range: fall back to logarithms.
        (values.iter().map(|v| (v + shift).ln()).sum::<f64>() / k).exp()
    };
    Ok(mean - shift)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunStats {
    pub instance: String,
    pub seed: u64,
    pub status: SolveStatus,
    /// In the stated objective direction.
    pub objective: Option<Rational>,
    pub nodes: usize,
    /// Seconds.
    pub time: f64,
    /// Safe bounding seconds: bshift, pshift, exlp.
    pub dbtime: [f64; 3],
    pub gap: ExtendedRational,
    pub time_limit: f64,
}

const COLUMNS: [&str; 11] = [
    "instance",
    "seed",
    "status",
    "objective",
    "nodes",
    "time",
    "dbtime_bshift",
    "dbtime_pshift",
    "dbtime_exlp",
    "gap",
    "time_limit",
];

impl RunStats {
    fn objective_text(&self) -> String {
        self.objective.as_ref().map_or_else(|| "-".to_string(), format_rational)
    }

    /// `status objective nodes time dbtime[bshift,pshift,exlp]`.
    pub fn line(&self) -> String {
        format!(
            "{} {} {} {:.6} [{:.6},{:.6},{:.6}]",
            self.status,
            self.objective_text(),
            self.nodes,
            self.time,
            self.dbtime[0],
            self.dbtime[1],
            self.dbtime[2]
        )
    }

    pub fn table(&self, dual: &ExtendedRational) -> String {
        let mut t = String::new();
        let _ = writeln!(t, "  solved      {}", if self.status.is_solved() { "yes" } else { "no" });
        let _ = writeln!(t, "  time        {:.6} s", self.time);
        let _ = writeln!(t, "  nodes       {}", self.nodes);
        let _ = writeln!(
            t,
            "  dbtime      {:.6} s (bshift {:.6}, pshift {:.6}, exlp {:.6})",
            self.dbtime.iter().sum::<f64>(),
            self.dbtime[0],
            self.dbtime[1],
            self.dbtime[2]
        );
        let _ = writeln!(t, "  primal      {}", self.objective_text());
        let _ = writeln!(t, "  dual        {dual}");
        let _ = writeln!(t, "  gap         {}", self.gap);
        t
    }

    /// Time with unsolved runs censored at the limit.
    pub fn censored_time(&self) -> f64 {
        if self.status.is_solved() {
            self.time
        } else {
            self.time_limit
        }
    }

    /// Gap as a float; infinite gaps count as 1.
    pub fn gap_value(&self) -> f64 {
        match &self.gap {
            ExtendedRational::Finite(g) => nearest_float(g).value.min(1.0),
            _ => 1.0,
        }
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.instance.clone(),
            self.seed.to_string(),
            self.status.to_string(),
            self.objective_text(),
            self.nodes.to_string(),
            self.time.to_string(),
            self.dbtime[0].to_string(),
            self.dbtime[1].to_string(),
            self.dbtime[2].to_string(),
            self.gap.to_string(),
            self.time_limit.to_string(),
        ]
    }
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>, StatsError> {
    let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new().delimiter(b'\t').from_writer(file);
    if fresh {
        w.write_record(COLUMNS)?;
    }
    Ok(w)
}

/// Appends runs to a tab-separated file, writing the header first if the
/// file is new.
pub fn write_stats(path: &Path, runs: &[RunStats]) -> Result<(), StatsError> {
    let mut w = writer(path)?;
    for r in runs {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn parse_stats(text: &str) -> Result<Vec<RunStats>, StatsError> {
    let mut reader = csv::ReaderBuilder::new().delimiter(b'\t').from_reader(text.as_bytes());
    let mut runs = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = k + 2;
        let field = |i: usize| rec.get(i).ok_or(StatsError::Field { line, field: COLUMNS[i] });
        let num = |i: usize| -> Result<f64, StatsError> {
            field(i)?.parse().map_err(|_| StatsError::Field { line, field: COLUMNS[i] })
        };
        let bad = |i: usize| StatsError::Field { line, field: COLUMNS[i] };
        let objective = match field(3)? {
            "-" => None,
            t => Some(parse_rational(t).map_err(|_| bad(3))?),
        };
        let gap = match field(9)? {
            "inf" => ExtendedRational::PosInf,
            "-inf" => ExtendedRational::NegInf,
            t => ExtendedRational::Finite(parse_rational(t).map_err(|_| bad(9))?),
        };
        runs.push(RunStats {
            instance: field(0)?.to_string(),
            seed: field(1)?.parse().map_err(|_| bad(1))?,
            status: SolveStatus::from_name(field(2)?).ok_or_else(|| bad(2))?,
            objective,
            nodes: field(4)?.parse().map_err(|_| bad(4))?,
            time: num(5)?,
            dbtime: [num(6)?, num(7)?, num(8)?],
            gap,
            time_limit: num(10)?,
        });
    }
    Ok(runs)
}

/// Batch summary; every instance-seed pair is one observation.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub runs: usize,
    pub solved: usize,
    /// Shifted geometric means: time and dbtime with shift 0.001 s, nodes
    /// with shift 100.
    pub time: f64,
    pub nodes: f64,
    pub dbtime: f64,
    /// Arithmetic mean of the gaps of unsolved runs (0 when all solved).
    pub gap: f64,
}

pub fn aggregate(runs: &[RunStats]) -> Result<Aggregate, StatsError> {
    let times: Vec<f64> = runs.iter().map(RunStats::censored_time).collect();
    let nodes: Vec<f64> = runs.iter().map(|r| r.nodes as f64).collect();
    let dbtimes: Vec<f64> = runs.iter().map(|r| r.dbtime[0] + r.dbtime[1] + r.dbtime[2]).collect();
    let unsolved: Vec<f64> = runs.iter().filter(|r| !r.status.is_solved()).map(RunStats::gap_value).collect();
    Ok(Aggregate {
        runs: runs.len(),
        solved: runs.iter().filter(|r| r.status.is_solved()).count(),
        time: shifted_geomean(&times, TIME_SHIFT)?,
        nodes: shifted_geomean(&nodes, NODE_SHIFT)?,
        dbtime: shifted_geomean(&dbtimes, TIME_SHIFT)?,
        gap: if unsolved.is_empty() { 0.0 } else { unsolved.iter().sum::<f64>() / unsolved.len() as f64 },
    })
}

impl Aggregate {
    pub fn header() -> &'static str {
        "config\truns\tsolved\ttime_sgm\tnodes_sgm\tdbtime_sgm\tgap_mean"
    }

    pub fn row(&self, name: &str) -> String {
        format!(
            "{name}\t{}\t{}\t{:.4}\t{:.1}\t{:.4}\t{:.4}",
            self.runs, self.solved, self.time, self.nodes, self.dbtime, self.gap
        )
    }
}
