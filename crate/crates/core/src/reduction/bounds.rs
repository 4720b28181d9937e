use std::f64::consts::E;

use serde::Serialize;
use thiserror::Error;

use super::Variant;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("alpha = {0} must be a finite value >= 1")]
    InvalidAlpha(f64),
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("beta = {beta} >= 1 at p = {p}; the laminar bound is undefined")]
    BetaOutOfRange { beta: f64, p: f64 },
}

fn check_alpha(alpha: f64) -> Result<(), BoundError> {
    if alpha.is_finite() && alpha >= 1.0 {
        Ok(())
    } else {
        Err(BoundError::InvalidAlpha(alpha))
    }
}

fn check_q(q: Option<f64>) -> Result<(), BoundError> {
    match q {
        Some(q) if !(q > 0.0 && q <= 1.0) => Err(BoundError::InvalidArgs(format!("q = {q} is not in (0, 1]"))),
        _ => Ok(()),
    }
}

/// Parameter `p` for the reductions.
///
/// Non-monotone: `1/(3 alpha)`, or `1/(3 alpha q)` with a selection cap.
/// Monotone: `(2b + 1)/(2(b + 1))` with `b = alpha` (or `alpha q` with a cap),
/// and `3/4` when the linear algorithm selects every element of some optimal
/// solution with probability at least `1/alpha` (`opt_probability`).
pub fn choose_p(alpha: f64, variant: Variant, q: Option<f64>, opt_probability: bool) -> Result<f64, BoundError> {
    check_alpha(alpha)?;
    check_q(q)?;
    let beta = alpha * q.unwrap_or(1.0);
    let p = match variant {
        Variant::Nonmonotone if opt_probability => {
            return Err(BoundError::InvalidArgs("the optimal-solution form is monotone only".into()))
        }
        Variant::Nonmonotone => 1.0 / (3.0 * beta),
        Variant::Monotone if opt_probability => 0.75,
        Variant::Monotone => (2.0 * beta + 1.0) / (2.0 * (beta + 1.0)),
    };
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(BoundError::InvalidArgs(format!("alpha q = {beta} gives p = {p} outside (0, 1)")))
    }
}

/// Competitive ratio guaranteed by the reduction with `p` from [`choose_p`].
///
/// | variant | plain | `k` unions | cap `q` |
/// |---|---|---|---|
/// | non-monotone | `24a(3a+1)` | `24ka(3a+1)` | `24a(3qa+1)` |
/// | monotone | `8a(a+1)` | `8ka(a+1)` | `8a(aq+1)` |
pub fn ratio_bound(alpha: f64, variant: Variant, k: Option<usize>, q: Option<f64>) -> Result<f64, BoundError> {
    check_alpha(alpha)?;
    check_q(q)?;
    if k.is_some() && q.is_some() {
        return Err(BoundError::InvalidArgs("k and q cannot be combined".into()));
    }
    if k == Some(0) {
        return Err(BoundError::InvalidArgs("k must be at least 1".into()));
    }
    let kf = k.unwrap_or(1) as f64;
    let a = alpha;
    Ok(match (variant, q) {
        (Variant::Nonmonotone, None) => 24.0 * kf * a * (3.0 * a + 1.0),
        (Variant::Nonmonotone, Some(q)) => 24.0 * a * (3.0 * q * a + 1.0),
        (Variant::Monotone, None) => 8.0 * kf * a * (a + 1.0),
        (Variant::Monotone, Some(q)) => 8.0 * a * (a * q + 1.0),
    })
}

/// Ratio `16 alpha` for monotone objectives when the linear algorithm
/// selects each element of some optimal solution with probability at least
/// `1/alpha`.
pub fn opt_probability_ratio(alpha: f64) -> Result<f64, BoundError> {
    check_alpha(alpha)?;
    Ok(16.0 * alpha)
}

/// Laminar-matroid guarantee with the greedy acceptance linear algorithm,
/// returned as a competitive ratio (the reciprocal of the guaranteed
/// fraction of `f(OPT)`).
///
/// Monotone, `beta = 2e(1-p)`:
/// `(p/2) (1 - p - 4e(1-p)^2 / (p (1-beta)^3))`.
/// Non-monotone, `beta = 2e(1 - 1/(1+p))`:
/// `(p/8) ((1-p)/(1+p) - 2 beta / (1-beta)^3)`.
pub fn laminar_ratio(p: f64, variant: Variant) -> Result<f64, BoundError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(BoundError::InvalidArgs(format!("p = {p} is not in (0, 1)")));
    }
    let beta = laminar_beta(p, variant);
    if beta >= 1.0 {
        return Err(BoundError::BetaOutOfRange { beta, p });
    }
    let fraction = match variant {
        Variant::Monotone => p / 2.0 * (1.0 - p - 4.0 * E * (1.0 - p).powi(2) / (p * (1.0 - beta).powi(3))),
        Variant::Nonmonotone => p / 8.0 * ((1.0 - p) / (1.0 + p) - 2.0 * beta / (1.0 - beta).powi(3)),
    };
    if fraction > 0.0 {
        Ok(1.0 / fraction)
    } else {
        Err(BoundError::InvalidArgs(format!("the guarantee at p = {p} is not positive")))
    }
}

/// The `beta` of [`laminar_ratio`].
pub fn laminar_beta(p: f64, variant: Variant) -> f64 {
    match variant {
        Variant::Monotone => 2.0 * E * (1.0 - p),
        Variant::Nonmonotone => 2.0 * E * (1.0 - 1.0 / (1.0 + p)),
    }
}

/// Best `p` for [`laminar_ratio`] on a grid of the given step, with its
/// ratio.
pub fn laminar_optimum(variant: Variant, step: f64) -> (f64, f64) {
    let steps = (1.0 / step).round() as usize;
    (1..steps)
        .map(|i| i as f64 * step)
        .filter_map(|p| laminar_ratio(p, variant).ok().map(|r| (p, r)))
        .fold((f64::NAN, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

/// One row of the bound table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub matroid: String,
    pub variant: Variant,
    pub alpha: Option<f64>,
    pub q: Option<f64>,
    pub p: f64,
    pub ratio: f64,
}

/// Competitive ratios for the matroid classes with known linear algorithms.
/// `ks` lists the sparsities for the k-sparse linear rows.
pub fn bound_table(ks: &[usize]) -> Vec<BoundRow> {
    let capped = |matroid: String, variant: Variant, alpha: f64, q: f64| BoundRow {
        matroid,
        variant,
        alpha: Some(alpha),
        q: Some(q),
        p: choose_p(alpha, variant, Some(q), false).expect("table parameters are valid"),
        ratio: ratio_bound(alpha, variant, None, Some(q)).expect("table parameters are valid"),
    };
    let mut rows = vec![
        capped("unitary partition".into(), Variant::Nonmonotone, E, 1.0 / E),
        capped("transversal".into(), Variant::Nonmonotone, 8.0, 0.5),
    ];
    for &k in ks {
        rows.push(capped(format!("{k}-sparse linear"), Variant::Nonmonotone, k as f64 * E, 1.0 / E));
        rows.push(capped(format!("{k}-sparse linear"), Variant::Monotone, k as f64 * E, 1.0 / E));
    }
    for variant in [Variant::Nonmonotone, Variant::Monotone] {
        let (p, ratio) = laminar_optimum(variant, 1e-6);
        rows.push(BoundRow { matroid: "laminar".into(), variant, alpha: None, q: None, p, ratio });
    }
    rows
}
