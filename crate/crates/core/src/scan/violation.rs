use crate::error::Result;

/// Bisection stops once the bracket is this narrow (in `h t`).
pub const REFINE_TOL: f64 = 1e-4;

/// Earliest grid time whose value exceeds `threshold`.
///
/// `times` must be increasing. Non-finite values (failed points) never
/// count as violations. With `refine`, the crossing between the bracketing
/// grid points is located by bisection on the supplied evaluator.
pub fn first_violation<F>(times: &[f64], values: &[f64], threshold: f64, refine: Option<F>) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    debug_assert!(times.windows(2).all(|w| w[0] < w[1]));
    let Some(k) = values.iter().position(|&v| v > threshold) else {
        return Ok(None);
    };
    match refine {
        Some(f) if k > 0 => refine_crossing(times[k - 1], times[k], threshold, f).map(Some),
        _ => Ok(Some(times[k])),
    }
}

/// Shrinks `(lo, hi]` with `f(lo) <= threshold < f(hi)` to width [`REFINE_TOL`]
/// and returns the upper end.
pub fn refine_crossing<F>(mut lo: f64, mut hi: f64, threshold: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    while hi - lo > REFINE_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
