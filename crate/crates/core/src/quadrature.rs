//! Composite Simpson quadrature on uniform grids.

use crate::error::{Error, Result};

/// Default node count for integrals over `s ∈ [0, 1]`.
pub const DEFAULT_POINTS: usize = 1025;

/// Smallest node count accepted by the Richardson-checked integrators.
pub const MIN_POINTS: usize = 9;

/// A quadrature value together with its Richardson error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Uniform grid of `points` nodes on `[a, b]`.
pub fn grid(a: f64, b: f64, points: usize) -> Vec<f64> {
    let h = (b - a) / (points - 1) as f64;
    (0..points)
        .map(|k| if k + 1 == points { b } else { a + h * k as f64 })
        .collect()
}

/// Composite Simpson rule over equally spaced samples with spacing `h`.
/// Requires an odd sample count of at least 3.
pub fn simpson(samples: &[f64], h: f64) -> f64 {
    let n = samples.len();
    debug_assert!(n >= 3 && n % 2 == 1);
    let mut odd = 0.0;
    let mut even = 0.0;
    for (k, &y) in samples.iter().enumerate().take(n - 1).skip(1) {
        if k % 2 == 1 {
            odd += y;
        } else {
            even += y;
        }
    }
    h / 3.0 * (samples[0] + samples[n - 1] + 4.0 * odd + 2.0 * even)
}

/// Checks that `points` supports a Simpson rule at full and half resolution.
pub fn check_points(points: usize) -> Result<()> {
    if points < MIN_POINTS || !(points - 1).is_multiple_of(4) {
        return Err(Error::Domain(format!(
            "quadrature needs at least {MIN_POINTS} nodes with (points - 1) divisible by 4, got {points}"
        )));
    }
    Ok(())
}

/// Simpson integral of pre-sampled values on `[a, b]`, with the error
/// estimated from the half-resolution rule as `|S_h − S_2h|`. The textbook
/// Richardson factor `1/15` is dropped: before the asymptotic regime the
/// refinement ratio can sit well below 16.
///
/// The estimate carries a rounding floor proportional to the sum of
/// absolute sample magnitudes, so it never collapses below what double
/// precision can resolve.
pub fn simpson_richardson(samples: &[f64], a: f64, b: f64) -> Result<Estimate> {
    check_points(samples.len())?;
    let n = samples.len();
    let h = (b - a) / (n - 1) as f64;
    let fine = simpson(samples, h);
    let coarse_samples: Vec<f64> = samples.iter().step_by(2).copied().collect();
    let coarse = simpson(&coarse_samples, 2.0 * h);
    let magnitude: f64 = samples.iter().map(|y| y.abs()).sum::<f64>() * h.abs();
    let floor = 64.0 * f64::EPSILON * magnitude;
    Ok(Estimate {
        value: fine,
        error: (fine - coarse).abs().max(floor),
    })
}

/// Integrates a fallible function over `[a, b]` with a Richardson estimate.
pub fn integrate<F>(a: f64, b: f64, points: usize, mut f: F) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    check_points(points)?;
    let samples = grid(a, b, points)
        .into_iter()
        .map(&mut f)
        .collect::<Result<Vec<_>>>()?;
    simpson_richardson(&samples, a, b)
}
