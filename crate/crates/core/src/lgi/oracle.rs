//! Closed-form references and the macrorealist bound.

use crate::error::{Error, Result};

/// Weights of `(C_AB, C_BC, C_AC)` in the Leggett-Garg combination.
pub const LGI_SIGNS: [i8; 3] = [1, 1, -1];

/// `K_n` for `J = 0`, any `n >= 2`, axis `x`:
/// `[3 cos(ht) - 2 cos(2ht) + cos(3ht)] / 2`.
pub fn noninteracting_k(ht: f64) -> f64 {
    0.5 * (3.0 * ht.cos() - 2.0 * (2.0 * ht).cos() + (3.0 * ht).cos())
}

/// Single precessing spin: `2 cos(ht) - cos(2ht)`.
pub fn single_spin_k(ht: f64) -> f64 {
    2.0 * ht.cos() - (2.0 * ht).cos()
}

/// Extremes of `s1 ab + s2 bc + s3 ac` over deterministic assignments
/// `(a, b, c) in {-1, +1}^3`.
pub fn classical_bound(signs: [i8; 3]) -> Result<(f64, f64)> {
    if signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::InvalidArgument(format!("signs must be +-1, got {signs:?}")));
    }
    let [s1, s2, s3] = signs.map(f64::from);
    let values = (0..8u8).map(|bits| {
        let [a, b, c] = [0, 1, 2].map(|i| if bits >> i & 1 == 0 { 1.0 } else { -1.0 });
        s1 * a * b + s2 * b * c + s3 * a * c
    });
    Ok(values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v))))
}
