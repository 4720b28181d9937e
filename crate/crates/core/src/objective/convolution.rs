use super::{ObjectiveError, ObjectiveOracle, WeightVector};

/// Largest set accepted by [`convolve_fw`].
pub const CONVOLUTION_LIMIT: usize = 20;

/// `f_w(S) = min over A ⊆ S of f(A) + w(S \ A)`, by enumerating every `A`.
pub fn convolve_fw(f: &ObjectiveOracle, w: &WeightVector, set: &[usize]) -> Result<f64, ObjectiveError> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&bad) = s.iter().find(|&&u| !f.ground().contains(u)) {
        return Err(ObjectiveError::UnknownElement(bad));
    }
    if s.len() > CONVOLUTION_LIMIT {
        return Err(ObjectiveError::SetTooLargeForExactConvolution { size: s.len(), limit: CONVOLUTION_LIMIT });
    }
    let full = (1usize << s.len()) - 1;
    let mut best = f64::INFINITY;
    let mut a = Vec::with_capacity(s.len());
    for mask in 0..=full {
        a.clear();
        let mut rest = 0.0;
        for (i, &u) in s.iter().enumerate() {
            if mask >> i & 1 == 1 {
                a.push(u);
            } else {
                rest += w.get(u);
            }
        }
        best = best.min(f.value(&a) + rest);
    }
    Ok(best)
}
