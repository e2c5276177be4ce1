//! Instantaneous eigensystems of a schedule and the path integrals built on
//! them: average gaps and the ground-state path length.

use num_complex::Complex64;

use super::{check_s, HamiltonianSchedule};
use crate::error::{Error, Result};
use crate::linalg::{eigh, hermitian_spectral_norm, sandwich, CMatrix, CVector};
use crate::quadrature::{self, Estimate};

pub const DEFAULT_GAP_FLOOR: f64 = 1e-8;
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
/// Highest derivative order searched for a nonvanishing endpoint derivative.
pub const MAX_DERIVATIVE_ORDER: usize = 8;

/// Relative tolerance for treating two entry magnitudes as tied when
/// choosing the gauge-fixing entry.
const GAUGE_TIE_TOL: f64 = 1e-10;

/// Eigensystem of `H(s)` with ascending energies and gauge-fixed vectors.
#[derive(Debug, Clone)]
pub struct SpectralFrame {
    pub s: f64,
    pub energies: Vec<f64>,
    pub eigenvectors: Vec<CVector>,
    /// `E_j − E_g` for `j = 1..d`.
    pub gaps: Vec<f64>,
}

impl SpectralFrame {
    pub fn ground(&self) -> &CVector {
        &self.eigenvectors[0]
    }

    pub fn excited(&self) -> &[CVector] {
        &self.eigenvectors[1..]
    }

    /// `Σ_j E_j |j⟩⟨j|`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.energies.len();
        let mut m = CMatrix::zeros(d, d);
        for (e, v) in self.energies.iter().zip(&self.eigenvectors) {
            m += (v * v.adjoint()).scale(*e);
        }
        m
    }

    /// Excited-state amplitudes of the covariant ground-state velocity,
    /// `⟨j|H'|g⟩ / Δ_j`, for the given `H'`.
    pub(crate) fn ground_velocity(&self, h_prime: &CMatrix) -> Vec<Complex64> {
        self.excited()
            .iter()
            .zip(&self.gaps)
            .map(|(v, gap)| sandwich(v, h_prime, self.ground()) / *gap)
            .collect()
    }
}

/// Rotates `v` so that its largest-magnitude entry is real and positive.
/// Entries within a relative `1e-10` of the maximum count as tied, and the
/// lowest such index wins.
pub fn gauge_fix(v: &mut CVector) {
    let max = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - GAUGE_TIE_TOL))
        .expect("max is attained");
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    // Exact zero imaginary part at the pivot.
    v[pivot] = Complex64::new(v[pivot].norm(), 0.0);
}

impl HamiltonianSchedule {
    /// Full eigendecomposition of `H(s)`. Fails with a gap-closure error if the
    /// ground level is within `gap_floor` of the first excited level.
    pub fn spectral_frame(&self, s: f64, gap_floor: f64) -> Result<SpectralFrame> {
        check_s(s)?;
        if !(gap_floor > 0.0) {
            return Err(Error::Domain(format!(
                "gap floor must be positive, got {gap_floor}"
            )));
        }
        let (energies, mut eigenvectors) = eigh(&self.matrix_at(s));
        for v in &mut eigenvectors {
            gauge_fix(v);
        }
        let gaps: Vec<f64> = energies[1..].iter().map(|e| e - energies[0]).collect();
        if gaps[0] < gap_floor {
            return Err(Error::GapClosure {
                s,
                gap: gaps[0],
                floor: gap_floor,
            });
        }
        Ok(SpectralFrame {
            s,
            energies,
            eigenvectors,
            gaps,
        })
    }

    /// Gauge-fixed frames on a uniform grid of `points` nodes over `[0, 1]`.
    pub fn frames(&self, points: usize, gap_floor: f64) -> Result<Vec<SpectralFrame>> {
        quadrature::check_points(points)?;
        quadrature::grid(0.0, 1.0, points)
            .into_iter()
            .map(|s| self.spectral_frame(s, gap_floor))
            .collect()
    }

    /// Average gaps `w_j = ∫₀¹ Δ_j(s) ds` for every excited level, each with
    /// a Richardson error estimate.
    pub fn average_gaps(&self, points: usize) -> Result<Vec<Estimate>> {
        let frames = self.frames(points, DEFAULT_GAP_FLOOR)?;
        average_gaps_from(&frames)
    }

    /// Smallest `n ≥ 1` whose derivative `H⁽ⁿ⁾` is nonzero at either endpoint,
    /// judged in Frobenius norm relative to the largest endpoint derivative
    /// norm up to order [`MAX_DERIVATIVE_ORDER`].
    pub fn endpoint_derivative_order(&self, zero_tol: f64) -> Result<usize> {
        if !(zero_tol > 0.0) {
            return Err(Error::Domain(format!(
                "zero tolerance must be positive, got {zero_tol}"
            )));
        }
        let norms: Vec<f64> = (1..=MAX_DERIVATIVE_ORDER)
            .map(|n| {
                let a = self.derivative_matrix(0.0, n).norm();
                let b = self.derivative_matrix(1.0, n).norm();
                a.max(b)
            })
            .collect();
        let scale = norms.iter().copied().fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::OrderUndetermined {
                max_order: MAX_DERIVATIVE_ORDER,
            });
        }
        let n = norms
            .iter()
            .position(|&v| v > zero_tol * scale)
            .expect("the maximum exceeds a fraction of itself");
        Ok(n + 1)
    }

    /// Ground-state path length `L = ∫₀¹ ‖(1 − |g⟩⟨g|) d|g⟩/ds‖ ds`.
    pub fn path_length(&self, points: usize) -> Result<Estimate> {
        quadrature::integrate(0.0, 1.0, points, |s| {
            let frame = self.spectral_frame(s, DEFAULT_GAP_FLOOR)?;
            let h_prime = self.derivative_matrix(s, 1);
            let velocity = frame.ground_velocity(&h_prime);
            Ok(velocity.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        })
    }

    /// Spectral norm of `H⁽ⁿ⁾(s)`.
    pub(crate) fn derivative_norm(&self, s: f64, order: usize) -> f64 {
        hermitian_spectral_norm(&self.derivative_matrix(s, order))
    }
}

pub(crate) fn average_gaps_from(frames: &[SpectralFrame]) -> Result<Vec<Estimate>> {
    let levels = frames[0].gaps.len();
    (0..levels)
        .map(|j| {
            let samples: Vec<f64> = frames.iter().map(|f| f.gaps[j]).collect();
            quadrature::simpson_richardson(&samples, 0.0, 1.0)
        })
        .collect()
}
