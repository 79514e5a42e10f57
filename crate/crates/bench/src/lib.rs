//! Deterministic inputs shared by the benchmarks.

use condspec::{CMatrix, Complex64};

/// Dense non-normal test matrix of order `n` with a fixed pseudo-random
/// pattern (no RNG so that runs are comparable across machines).
pub fn test_matrix(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        let t = (i * 31 + j * 17 + 7) as f64;
        Complex64::new((t * 0.618).sin(), (t * 0.377).cos() * 0.5) + if i == j { -2.0 } else { 0.0 }
    })
}

/// Grcar-like banded matrix, a standard non-normal pseudospectra example.
pub fn grcar(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        let v = if i == j + 1 {
            -1.0
        } else if j >= i && j <= i + 3 {
            1.0
        } else {
            0.0
        };
        Complex64::new(v, 0.0)
    })
}
