use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MIN_GAIN: f64 = 1e-6;

/// Per-column average objective gain per unit of bound change.
#[derive(Debug, Clone, PartialEq)]
pub struct Pseudocosts {
    sum: Vec<[f64; 2]>,
    count: Vec<[usize; 2]>,
}

/// Branching direction: 0 = down (`x <= floor`), 1 = up (`x >= ceil`).
pub const DOWN: usize = 0;
pub const UP: usize = 1;

impl Pseudocosts {
    pub fn new(n: usize) -> Self {
        Self { sum: vec![[0.0; 2]; n], count: vec![[0; 2]; n] }
    }

    pub fn record(&mut self, col: usize, dir: usize, gain: f64, distance: f64) {
        if gain.is_finite() && distance > 0.0 {
            self.sum[col][dir] += gain.max(0.0) / distance;
            self.count[col][dir] += 1;
        }
    }

    pub fn observations(&self, col: usize) -> usize {
        self.count[col][DOWN].min(self.count[col][UP])
    }

    /// Average unit gain; columns without history use the mean over all
    /// observed columns, or 1.
    pub fn unit_gain(&self, col: usize, dir: usize) -> f64 {
        if self.count[col][dir] > 0 {
            return self.sum[col][dir] / self.count[col][dir] as f64;
        }
        let (s, c) = self
            .sum
            .iter()
            .zip(&self.count)
            .fold((0.0, 0), |(s, c), (sum, cnt)| (s + sum[dir], c + cnt[dir]));
        if c > 0 {
            s / c as f64
        } else {
            1.0
        }
    }
}

/// Product rule.
pub fn score(gain_down: f64, gain_up: f64) -> f64 {
    gain_down.max(MIN_GAIN) * gain_up.max(MIN_GAIN)
}

/// Rank of every column for tie-breaking: identity for seed 0, a seeded
/// permutation otherwise.
pub fn tie_ranks(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    if seed != 0 {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut rank = vec![0; n];
    for (r, &j) in order.iter().enumerate() {
        rank[j] = r;
    }
    rank
}

/// Index of the best `(column, score)` pair; ties go to the lowest rank.
pub fn pick(scored: &[(usize, f64)], rank: &[usize]) -> Option<usize> {
    scored
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1).then(rank[b.0].cmp(&rank[a.0])))
        .map(|(j, _)| *j)
}
