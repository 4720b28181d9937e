//! Sample statistics for Monte Carlo checks.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Mean, standard error and count of a sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation divided by `sqrt(count)`.
    pub se: f64,
    pub count: usize,
}

/// Streaming mean/variance accumulator (Welford).
#[derive(Clone, Copy, Debug, Default)]
pub struct Accumulator {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn summary(&self) -> Summary {
        let se = if self.count > 1 {
            (self.m2 / (self.count - 1) as f64).sqrt() / (self.count as f64).sqrt()
        } else {
            0.0
        };
        Summary { mean: self.mean, se, count: self.count }
    }
}

impl FromIterator<f64> for Accumulator {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Accumulator::default();
        for x in iter {
            acc.push(x);
        }
        acc
    }
}

pub fn summarize<I: IntoIterator<Item = f64>>(xs: I) -> Summary {
    xs.into_iter().collect::<Accumulator>().summary()
}

/// Frequency of `hits` out of `trials` with its binomial standard error.
pub fn frequency(hits: usize, trials: usize) -> Summary {
    if trials == 0 {
        return Summary::default();
    }
    let p = hits as f64 / trials as f64;
    Summary { mean: p, se: (p * (1.0 - p) / trials as f64).sqrt(), count: trials }
}

/// Pearson chi-square goodness-of-fit against the uniform distribution over
/// `counts.len()` categories. Returns `(statistic, p_value)`.
pub fn chi_square_uniform(counts: &[u64]) -> (f64, f64) {
    let k = counts.len();
    let total: u64 = counts.iter().sum();
    if k < 2 || total == 0 {
        return (0.0, 1.0);
    }
    let expected = total as f64 / k as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dist = ChiSquared::new((k - 1) as f64).expect("positive degrees of freedom");
    (stat, 1.0 - dist.cdf(stat))
}

/// Rounds to 12 significant digits, the precision used for all emitted numbers.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}
