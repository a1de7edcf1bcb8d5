//! Deterministic floating-point reductions.

const BLOCK: usize = 64;

/// Pairwise (cascade) summation with a fixed split order, so the result only
/// depends on the input slice and never on thread scheduling.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Arithmetic mean via [`pairwise_sum`]; zero for an empty slice.
pub fn pairwise_mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        pairwise_sum(xs) / xs.len() as f64
    }
}
