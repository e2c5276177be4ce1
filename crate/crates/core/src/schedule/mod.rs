//! Time-dependent Hamiltonians `H(s) = Σ_k f_k(s) A_k` on the scaled time
//! `s ∈ [0, 1]`, with exact derivatives of every order.

mod config;
pub(crate) mod spectral;

pub use config::{load_schedule, ScheduleFile, TermSpec};
pub use spectral::{
    gauge_fix, SpectralFrame, DEFAULT_GAP_FLOOR, DEFAULT_ZERO_TOL, MAX_DERIVATIVE_ORDER,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::{hermitian_part, hermiticity_defect, CMatrix};

/// Per-entry tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Name of the built-in two-level avoided-crossing schedule.
pub const QUADRATIC_CROSSING: &str = "quadratic-crossing";
/// The same schedule traversed through one smoothstep reparametrization.
pub const QUADRATIC_CROSSING_SMOOTH: &str = "quadratic-crossing-smooth";

/// The two endpoints of the scaled-time interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Start,
    End,
}

impl Endpoint {
    pub fn s(self) -> f64 {
        match self {
            Endpoint::Start => 0.0,
            Endpoint::End => 1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Endpoint::Start => 0,
            Endpoint::End => 1,
        }
    }
}

/// A constant Hermitian matrix of dimension at least 2.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianTerm {
    matrix: CMatrix,
}

impl HermitianTerm {
    /// Accepts `matrix` if it is square, at least 2×2 and Hermitian within
    /// [`HERMITIAN_TOL`] per entry. The stored matrix is the exact Hermitian
    /// part of the input.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidSchedule(format!(
                "matrix is {}x{}, expected square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() < 2 {
            return Err(Error::InvalidSchedule(
                "dimension must be at least 2".into(),
            ));
        }
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidSchedule(
                "matrix has non-finite entries".into(),
            ));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidSchedule(format!(
                "matrix is not Hermitian (max |A - A†| = {defect:e})"
            )));
        }
        Ok(HermitianTerm {
            matrix: hermitian_part(&matrix),
        })
    }

    /// Builds a term from a real symmetric row-major array.
    pub fn from_real(dim: usize, rows: &[f64]) -> Result<Self> {
        let entries: Vec<Complex64> = rows.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        if entries.len() != dim * dim {
            return Err(Error::InvalidSchedule(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(CMatrix::from_row_slice(dim, dim, &entries))
    }

    pub(crate) fn from_hermitian_unchecked(matrix: CMatrix) -> Self {
        HermitianTerm { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

/// Real polynomial envelope `p(u_k(s))` where `u_0(s) = s` and `u_k` applies
/// the smoothstep `u(x) = 3x² − 2x³` `k` times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub poly: Vec<f64>,
    #[serde(default)]
    pub smooth_wrap: u32,
}

const SMOOTHSTEP: [f64; 4] = [0.0, 0.0, 3.0, -2.0];

impl Envelope {
    pub fn polynomial(poly: Vec<f64>) -> Self {
        Envelope {
            poly,
            smooth_wrap: 0,
        }
    }

    pub fn constant(value: f64) -> Self {
        Envelope::polynomial(vec![value])
    }

    pub fn with_smooth_wrap(mut self, k: u32) -> Self {
        self.smooth_wrap = k;
        self
    }

    /// Taylor jet of the envelope at `s` up to `order`.
    pub fn jet(&self, s: f64, order: usize) -> Jet {
        let mut x = Jet::variable(s, order);
        for _ in 0..self.smooth_wrap {
            x = x.compose_poly(&SMOOTHSTEP);
        }
        x.compose_poly(&self.poly)
    }

    pub fn value(&self, s: f64) -> f64 {
        let mut x = s;
        for _ in 0..self.smooth_wrap {
            x = x * x * (3.0 - 2.0 * x);
        }
        self.poly.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self, s: f64, order: usize) -> f64 {
        self.jet(s, order).derivative(order)
    }

    fn is_finite(&self) -> bool {
        self.poly.iter().all(|c| c.is_finite())
    }
}

/// `H(s) = Σ_k f_k(s) A_k` over `s ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSchedule {
    dim: usize,
    terms: Vec<(Envelope, HermitianTerm)>,
}

fn check_s(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::Domain(format!("scaled time s = {s} outside [0, 1]")))
    }
}

impl HamiltonianSchedule {
    pub fn new(terms: Vec<(Envelope, HermitianTerm)>) -> Result<Self> {
        let dim = match terms.first() {
            Some((_, a)) => a.dim(),
            None => return Err(Error::InvalidSchedule("schedule has no terms".into())),
        };
        for (k, (env, a)) in terms.iter().enumerate() {
            if a.dim() != dim {
                return Err(Error::InvalidSchedule(format!(
                    "term {k} has dimension {}, expected {dim}",
                    a.dim()
                )));
            }
            if !env.is_finite() {
                return Err(Error::InvalidSchedule(format!(
                    "term {k} has a non-finite envelope coefficient"
                )));
            }
        }
        Ok(HamiltonianSchedule { dim, terms })
    }

    /// `H(s) = s(1−s) σ_z + 0.2 σ_x`.
    pub fn quadratic_crossing() -> Self {
        let z = HermitianTerm::from_real(2, &[1.0, 0.0, 0.0, -1.0]).expect("static matrix");
        let x = HermitianTerm::from_real(2, &[0.0, 0.2, 0.2, 0.0]).expect("static matrix");
        HamiltonianSchedule {
            dim: 2,
            terms: vec![
                (Envelope::polynomial(vec![0.0, 1.0, -1.0]), z),
                (Envelope::constant(1.0), x),
            ],
        }
    }

    /// Looks up a named built-in schedule.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            QUADRATIC_CROSSING => Some(Self::quadratic_crossing()),
            QUADRATIC_CROSSING_SMOOTH => Some(Self::quadratic_crossing().with_smooth_wrap(1)),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Envelope, HermitianTerm)] {
        &self.terms
    }

    /// Adds `k` smoothstep wraps to every envelope.
    pub fn with_smooth_wrap(mut self, k: u32) -> Self {
        for (env, _) in &mut self.terms {
            env.smooth_wrap += k;
        }
        self
    }

    /// `λ H(s)`.
    pub fn scaled(&self, factor: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(env, a)| {
                let poly = env.poly.iter().map(|c| c * factor).collect();
                (
                    Envelope {
                        poly,
                        smooth_wrap: env.smooth_wrap,
                    },
                    a.clone(),
                )
            })
            .collect();
        HamiltonianSchedule {
            dim: self.dim,
            terms,
        }
    }

    /// `U H(s) U†` for a unitary `U`.
    pub fn conjugated(&self, unitary: &CMatrix) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(env, a)| {
                let m = unitary * a.matrix() * unitary.adjoint();
                Ok((env.clone(), HermitianTerm::new(m)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }

    /// Appends a term to the schedule.
    pub fn with_term(mut self, envelope: Envelope, term: HermitianTerm) -> Result<Self> {
        self.terms.push((envelope, term));
        Self::new(self.terms)
    }

    fn combine(&self, coefficient: impl Fn(&Envelope) -> f64) -> CMatrix {
        let mut h = CMatrix::zeros(self.dim, self.dim);
        for (env, a) in &self.terms {
            let f = coefficient(env);
            if f != 0.0 {
                for (dst, src) in h.iter_mut().zip(a.matrix().iter()) {
                    *dst += src * f;
                }
            }
        }
        h
    }

    pub(crate) fn matrix_at(&self, s: f64) -> CMatrix {
        self.combine(|env| env.value(s))
    }

    pub(crate) fn derivative_matrix(&self, s: f64, order: usize) -> CMatrix {
        self.combine(|env| env.derivative(s, order))
    }

    /// `H(s)`.
    pub fn evaluate(&self, s: f64) -> Result<HermitianTerm> {
        check_s(s)?;
        Ok(HermitianTerm::from_hermitian_unchecked(self.matrix_at(s)))
    }

    /// Exact `order`-th derivative `dⁿH/dsⁿ` at `s`.
    pub fn derivative(&self, s: f64, order: usize) -> Result<HermitianTerm> {
        check_s(s)?;
        if order == 0 {
            return Err(Error::Domain("derivative order must be at least 1".into()));
        }
        Ok(HermitianTerm::from_hermitian_unchecked(
            self.derivative_matrix(s, order),
        ))
    }

    /// Largest `|E|` of `H(s)` over a coarse uniform scan of `points` nodes.
    pub(crate) fn max_energy_scan(&self, points: usize) -> f64 {
        crate::quadrature::grid(0.0, 1.0, points)
            .into_iter()
            .map(|s| crate::linalg::hermitian_spectral_norm(&self.matrix_at(s)))
            .fold(0.0, f64::max)
    }
}
