//! Leading-order switching asymptotics of the diabatic error.
//!
//! For a schedule whose lowest nonvanishing endpoint derivative has order `n`,
//! each excited level `j` contributes an endpoint amplitude
//! `c_j = ⟨j|H⁽ⁿ⁾|g⟩ / Δ_jⁿ⁺¹` at `s = 0` and `s = 1`. The switching
//! coefficient mixes the two endpoints with the phase `e^{i w_j T}` accrued
//! over the average gap `w_j`, while the typical coefficient adds them in
//! quadrature and carries no phase at all.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::sandwich;
use crate::propagator::{true_error, IntegratorConfig};
use crate::quadrature::{self, DEFAULT_POINTS};
use crate::schedule::{
    Endpoint, HamiltonianSchedule, SpectralFrame, DEFAULT_GAP_FLOOR, DEFAULT_ZERO_TOL,
};

/// Overlap-product magnitude below which a level's transport phase is
/// considered undefined and left at 1.
const TRANSPORT_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticOptions {
    pub quadrature_points: usize,
    pub gap_floor: f64,
    pub zero_tol: f64,
    /// Overrides the detected endpoint derivative order.
    pub order: Option<usize>,
}

impl Default for AsymptoticOptions {
    fn default() -> Self {
        AsymptoticOptions {
            quadrature_points: DEFAULT_POINTS,
            gap_floor: DEFAULT_GAP_FLOOR,
            zero_tol: DEFAULT_ZERO_TOL,
            order: None,
        }
    }
}

/// `c_j = ⟨j|H⁽ⁿ⁾|g⟩ / Δ_jⁿ⁺¹` at one endpoint, in the fixed gauge.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointAmplitudes {
    pub endpoint: Endpoint,
    pub n: usize,
    pub c: Vec<Complex64>,
}

impl EndpointAmplitudes {
    /// `√Σ_j |c_j|²`.
    pub fn magnitude(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn from_frame(
        schedule: &HamiltonianSchedule,
        frame: &SpectralFrame,
        n: usize,
        endpoint: Endpoint,
    ) -> Self {
        let h_n = schedule.derivative_matrix(endpoint.s(), n);
        let c = frame
            .excited()
            .iter()
            .zip(&frame.gaps)
            .map(|(v, gap)| sandwich(v, &h_n, frame.ground()) / gap.powi(n as i32 + 1))
            .collect();
        EndpointAmplitudes { endpoint, n, c }
    }
}

/// Endpoint amplitudes of order `n` at `endpoint`.
pub fn endpoint_amplitudes(
    schedule: &HamiltonianSchedule,
    n: usize,
    endpoint: Endpoint,
) -> Result<EndpointAmplitudes> {
    if n == 0 {
        return Err(Error::Domain("derivative order must be at least 1".into()));
    }
    let frame = schedule.spectral_frame(endpoint.s(), DEFAULT_GAP_FLOOR)?;
    Ok(EndpointAmplitudes::from_frame(
        schedule, &frame, n, endpoint,
    ))
}

/// Everything the leading switching term needs.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticData {
    pub n: usize,
    pub amp0: EndpointAmplitudes,
    pub amp1: EndpointAmplitudes,
    /// Average gaps `w_j`.
    pub w: Vec<f64>,
    /// Per excited level, the unit phase that carries the end-point frame
    /// into the frame parallel-transported from `s = 0`, relative to the
    /// ground level. All ones for real schedules whose fixed gauge is
    /// continuous up to sign flips that cancel along the path.
    pub transport: Vec<Complex64>,
    pub b_bar0: f64,
    pub b_bar1: f64,
    pub b_bar: f64,
}

impl AsymptoticData {
    pub fn from_parts(
        amp0: EndpointAmplitudes,
        amp1: EndpointAmplitudes,
        w: Vec<f64>,
        transport: Vec<Complex64>,
    ) -> Self {
        let b_bar0 = amp0.magnitude();
        let b_bar1 = amp1.magnitude();
        AsymptoticData {
            n: amp0.n,
            amp0,
            amp1,
            w,
            transport,
            b_bar0,
            b_bar1,
            b_bar: b_bar0.hypot(b_bar1),
        }
    }

    /// `bₙ(T) = √Σ_j |e^{i w_j T} c_j⁽¹⁾ − c_j⁽⁰⁾|²`, with `c⁽¹⁾` expressed in
    /// the transported frame.
    pub fn switching_coefficient(&self, t: f64) -> f64 {
        self.amp0
            .c
            .iter()
            .zip(&self.amp1.c)
            .zip(self.w.iter().zip(&self.transport))
            .map(|((c0, c1), (w, tr))| {
                (Complex64::from_polar(1.0, w * t) * tr * c1 - c0).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Leading switching estimate `bₙ(T) / Tⁿ`.
    pub fn switching_error(&self, t: f64) -> f64 {
        self.switching_coefficient(t) / t.powi(self.n as i32)
    }

    /// Closed-form typical error `b̄ₙ / Tⁿ`.
    pub fn typical_error(&self, t: f64) -> f64 {
        self.b_bar / t.powi(self.n as i32)
    }

    /// `√2 b̄ₙ / Tⁿ`; bounds the error only in the hyperadiabatic regime.
    pub fn hyperadiabatic_bound(&self, t: f64) -> f64 {
        SQRT_2 * self.typical_error(t)
    }

    pub fn max_average_gap(&self) -> f64 {
        self.w.iter().copied().fold(0.0, f64::max)
    }
}

/// Relative unit phases of the parallel transport along the frame grid.
fn transport_phases(frames: &[SpectralFrame]) -> Vec<Complex64> {
    let d = frames[0].eigenvectors.len();
    let holonomy: Vec<Complex64> = (0..d)
        .map(|level| {
            let product = frames
                .windows(2)
                .fold(Complex64::new(1.0, 0.0), |acc, pair| {
                    acc * pair[0].eigenvectors[level].dotc(&pair[1].eigenvectors[level])
                });
            if product.norm() < TRANSPORT_FLOOR {
                Complex64::new(1.0, 0.0)
            } else {
                product / product.norm()
            }
        })
        .collect();
    holonomy[1..]
        .iter()
        .map(|h| h * holonomy[0].conj())
        .collect()
}

/// Switching data of order `n` from frames on a uniform grid over `[0, 1]`.
/// The frames may carry any eigenvector phases.
pub fn assemble(
    schedule: &HamiltonianSchedule,
    n: usize,
    frames: &[SpectralFrame],
) -> Result<AsymptoticData> {
    let first = &frames[0];
    let last = frames.last().expect("nonempty grid");
    let amp0 = EndpointAmplitudes::from_frame(schedule, first, n, Endpoint::Start);
    let amp1 = EndpointAmplitudes::from_frame(schedule, last, n, Endpoint::End);
    let w = crate::schedule::spectral::average_gaps_from(frames)?
        .into_iter()
        .map(|e| e.value)
        .collect();
    Ok(AsymptoticData::from_parts(
        amp0,
        amp1,
        w,
        transport_phases(frames),
    ))
}

/// Typical coefficient and everything else needed for the switching term,
/// with default options.
pub fn typical_coefficient(schedule: &HamiltonianSchedule) -> Result<AsymptoticData> {
    typical_coefficient_with(schedule, &AsymptoticOptions::default())
}

pub fn typical_coefficient_with(
    schedule: &HamiltonianSchedule,
    options: &AsymptoticOptions,
) -> Result<AsymptoticData> {
    let n = match options.order {
        Some(0) => return Err(Error::Domain("derivative order must be at least 1".into())),
        Some(n) => n,
        None => schedule.endpoint_derivative_order(options.zero_tol)?,
    };
    let frames = schedule.frames(options.quadrature_points, options.gap_floor)?;
    assemble(schedule, n, &frames)
}

/// Which error the window average runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowMode {
    /// One integration per sample.
    TrueError,
    /// The leading switching estimate `bₙ(T′)/T′ⁿ`.
    Asymptotic,
}

/// How samples in the window are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowAverage {
    /// Arithmetic mean of `ε(T′)`.
    Mean,
    /// Square root of the mean of `ε(T′)²`.
    Rms,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowConfig {
    pub tau0: f64,
    /// Odd Simpson node count; chosen automatically when `None`.
    pub samples: Option<usize>,
    pub mode: WindowMode,
    pub average: WindowAverage,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig {
            tau0: 1.0,
            samples: None,
            mode: WindowMode::TrueError,
            average: WindowAverage::Mean,
        }
    }
}

/// Minimum samples per oscillation period of the fastest phase.
pub const MIN_SAMPLES_PER_PERIOD: f64 = 8.0;
/// Density used when the sample count is chosen automatically.
const AUTO_SAMPLES_PER_PERIOD: f64 = 16.0;

/// Simpson nodes of the averaging window `[T − √(Tτ₀), T + √(Tτ₀)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowPlan {
    pub half_width: f64,
    pub nodes: Vec<f64>,
}

impl WindowPlan {
    pub fn new(t: f64, tau0: f64, samples: Option<usize>, w_max: f64) -> Result<Self> {
        if !(t > 0.0) || !(tau0 > 0.0) {
            return Err(Error::Domain(format!(
                "window needs T > 0 and tau0 > 0 (T = {t}, tau0 = {tau0})"
            )));
        }
        let half_width = (t * tau0).sqrt();
        if t - half_width <= 0.0 {
            return Err(Error::Domain(format!(
                "window [{}, {}] reaches nonpositive timescales",
                t - half_width,
                t + half_width
            )));
        }
        if !(w_max > 0.0) {
            return Err(Error::Domain("window needs a positive average gap".into()));
        }
        let period = 2.0 * PI / w_max;
        let required = period / MIN_SAMPLES_PER_PERIOD;
        let samples = match samples {
            Some(k) if k < 3 || k % 2 == 0 => {
                return Err(Error::Domain(format!(
                    "window samples must be odd and >= 3, got {k}"
                )))
            }
            Some(k) => k,
            None => {
                let intervals =
                    (2.0 * half_width / (period / AUTO_SAMPLES_PER_PERIOD)).ceil() as usize;
                let intervals = intervals.max(2);
                intervals + intervals % 2 + 1
            }
        };
        let spacing = 2.0 * half_width / (samples - 1) as f64;
        if spacing > required {
            return Err(Error::Sampling { spacing, required });
        }
        Ok(WindowPlan {
            half_width,
            nodes: quadrature::grid(t - half_width, t + half_width, samples),
        })
    }

    pub fn spacing(&self) -> f64 {
        self.nodes[1] - self.nodes[0]
    }

    /// Averages pre-computed values at the nodes.
    pub fn average(&self, values: &[f64], average: WindowAverage) -> f64 {
        let width = 2.0 * self.half_width;
        match average {
            WindowAverage::Mean => quadrature::simpson(values, self.spacing()) / width,
            WindowAverage::Rms => {
                let sq: Vec<f64> = values.iter().map(|v| v * v).collect();
                (quadrature::simpson(&sq, self.spacing()) / width).sqrt()
            }
        }
    }
}

/// Window average of the error around `t`, with asymptotic data supplied by
/// the caller (used in asymptotic mode and for the largest average gap).
pub fn windowed_with_data(
    schedule: &HamiltonianSchedule,
    data: &AsymptoticData,
    t: f64,
    window: &WindowConfig,
    integrator: &IntegratorConfig,
) -> Result<f64> {
    let plan = WindowPlan::new(t, window.tau0, window.samples, data.max_average_gap())?;
    let values = match window.mode {
        WindowMode::Asymptotic => plan
            .nodes
            .iter()
            .map(|&tp| data.switching_error(tp))
            .collect(),
        WindowMode::TrueError => sample_true_errors(schedule, &plan, integrator)?,
    };
    Ok(plan.average(&values, window.average))
}

fn sample_true_errors(
    schedule: &HamiltonianSchedule,
    plan: &WindowPlan,
    integrator: &IntegratorConfig,
) -> Result<Vec<f64>> {
    plan.nodes
        .par_iter()
        .map(|&tp| true_error(schedule, tp, integrator))
        .collect()
}

/// Typical error `ε̄(T)` as the average of `ε(T′)` over
/// `T′ ∈ [T − √(Tτ₀), T + √(Tτ₀)]`.
pub fn typical_error_windowed(
    schedule: &HamiltonianSchedule,
    t: f64,
    window: &WindowConfig,
    integrator: &IntegratorConfig,
) -> Result<f64> {
    match window.mode {
        WindowMode::Asymptotic => {
            let data = typical_coefficient(schedule)?;
            windowed_with_data(schedule, &data, t, window, integrator)
        }
        WindowMode::TrueError => {
            let w_max = schedule
                .average_gaps(DEFAULT_POINTS)?
                .iter()
                .map(|e| e.value)
                .fold(0.0, f64::max);
            let plan = WindowPlan::new(t, window.tau0, window.samples, w_max)?;
            let values = sample_true_errors(schedule, &plan, integrator)?;
            Ok(plan.average(&values, window.average))
        }
    }
}

/// Derivative-norm bound
/// `ε_B = (1/T) [‖H'(0)‖/Δ(0)² + ‖H'(1)‖/Δ(1)² + ∫₀¹ (‖H''‖/Δ² + 7‖H'‖²/Δ³) ds]`
/// with spectral norms and `Δ` the ground-state gap.
pub fn rigorous_bound(
    schedule: &HamiltonianSchedule,
    t: f64,
    quadrature_points: usize,
) -> Result<f64> {
    Ok(rigorous_bound_coefficient(schedule, quadrature_points)? / t)
}

/// `T · ε_B`, independent of the timescale.
pub fn rigorous_bound_coefficient(
    schedule: &HamiltonianSchedule,
    quadrature_points: usize,
) -> Result<f64> {
    let gap =
        |s: f64| -> Result<f64> { Ok(schedule.spectral_frame(s, DEFAULT_GAP_FLOOR)?.gaps[0]) };
    let boundary = [0.0, 1.0]
        .iter()
        .map(|&s| Ok(schedule.derivative_norm(s, 1) / gap(s)?.powi(2)))
        .sum::<Result<f64>>()?;
    let bulk = quadrature::integrate(0.0, 1.0, quadrature_points, |s| {
        let g = gap(s)?;
        let d1 = schedule.derivative_norm(s, 1);
        let d2 = schedule.derivative_norm(s, 2);
        Ok(d2 / (g * g) + 7.0 * d1 * d1 / (g * g * g))
    })?;
    Ok(boundary + bulk.value)
}
