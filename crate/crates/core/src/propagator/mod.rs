//! Integration of the rescaled Schrödinger equation `i dψ/ds = T H(s) ψ`
//! and the true diabatic error of the evolved ground state.

mod dopri;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::schedule::{HamiltonianSchedule, DEFAULT_GAP_FLOOR};

/// Nominal order of the propagated solution.
pub const STEPPER_ORDER: i32 = dopri::ORDER;

/// Nodes of the coarse scan that bounds the fastest phase rotation.
const ENERGY_SCAN_POINTS: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub norm_drift_limit: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 1e-3,
            norm_drift_limit: 1e-8,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.rel_tol,
            self.abs_tol,
            self.max_step,
            self.norm_drift_limit,
        ]
        .iter()
        .all(|v| *v > 0.0 && v.is_finite());
        if !positive || self.max_step > 1.0 {
            return Err(Error::Config(format!(
                "integrator tolerances must be positive and max_step <= 1: {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub timescale: f64,
    pub final_state: CVector,
    /// `|1 − ‖ψ(1)‖|`.
    pub norm_drift: f64,
    pub steps: usize,
    pub rejected: usize,
    /// Sum of the embedded local error estimates over accepted steps.
    pub error_estimate: f64,
}

fn check_evolve_args(t: f64, init: &CVector, dim: usize) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "timescale must be positive, got {t}"
        )));
    }
    if init.len() != dim {
        return Err(Error::Domain(format!(
            "initial state has dimension {}, expected {dim}",
            init.len()
        )));
    }
    if (init.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "initial state must be normalized, |psi| = {}",
            init.norm()
        )));
    }
    Ok(())
}

fn generator(schedule: &HamiltonianSchedule, t: f64) -> impl Fn(f64, &CVector) -> CVector + '_ {
    let minus_i_t = Complex64::new(0.0, -t);
    move |s: f64, psi: &CVector| (schedule.matrix_at(s.clamp(0.0, 1.0)) * psi) * minus_i_t
}

fn finish(
    t: f64,
    state: CVector,
    steps: usize,
    rejected: usize,
    error_estimate: f64,
    limit: f64,
) -> Result<EvolutionResult> {
    let norm_drift = (1.0 - state.norm()).abs();
    if !(norm_drift <= limit) {
        return Err(Error::IntegrationFailure {
            timescale: t,
            norm_drift,
            limit,
            steps,
            rejected,
        });
    }
    Ok(EvolutionResult {
        timescale: t,
        final_state: state,
        norm_drift,
        steps,
        rejected,
        error_estimate,
    })
}

/// Adaptive Dormand–Prince integration of `i dψ/ds = T H(s) ψ` from `s = 0`
/// to `s = 1`. The state is never renormalized; the final norm drift is
/// checked against `config.norm_drift_limit`.
pub fn evolve(
    schedule: &HamiltonianSchedule,
    t: f64,
    init: &CVector,
    config: &IntegratorConfig,
) -> Result<EvolutionResult> {
    config.validate()?;
    check_evolve_args(t, init, schedule.dim())?;
    let f = generator(schedule, t);

    let e_max = schedule.max_energy_scan(ENERGY_SCAN_POINTS);
    let mut h = if e_max > 0.0 {
        config.max_step.min(0.1 / (t * e_max))
    } else {
        config.max_step
    };
    let h_min = 16.0 * f64::EPSILON;

    let mut s = 0.0;
    let mut y = init.clone();
    let mut dy = f(s, &y);
    let (mut steps, mut rejected) = (0usize, 0usize);
    let mut error_estimate = 0.0;

    while s < 1.0 {
        let last = s + h >= 1.0;
        let step_h = if last { 1.0 - s } else { h };
        let trial = dopri::step(&f, s, &y, &dy, step_h);
        let scale = (config.abs_tol + config.rel_tol * y.norm().max(trial.y.norm())) * step_h;
        let err = trial.error / scale;
        if err <= 1.0 {
            s = if last { 1.0 } else { s + step_h };
            y = trial.y;
            dy = trial.dy;
            steps += 1;
            error_estimate += trial.error;
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (step_h * grow).min(config.max_step);
        } else {
            rejected += 1;
            h = step_h * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            if h < h_min {
                return Err(Error::Stiffness { s, step: h });
            }
        }
    }
    finish(
        t,
        y,
        steps,
        rejected,
        error_estimate,
        config.norm_drift_limit,
    )
}

/// Fixed-step integration with `steps` equal Dormand–Prince steps, used for
/// convergence-order checks.
pub fn evolve_fixed(
    schedule: &HamiltonianSchedule,
    t: f64,
    init: &CVector,
    steps: usize,
) -> Result<EvolutionResult> {
    check_evolve_args(t, init, schedule.dim())?;
    if steps == 0 {
        return Err(Error::Domain(
            "fixed-step mode needs at least one step".into(),
        ));
    }
    let f = generator(schedule, t);
    let h = 1.0 / steps as f64;
    let mut y = init.clone();
    let mut dy = f(0.0, &y);
    let mut error_estimate = 0.0;
    for k in 0..steps {
        let trial = dopri::step(&f, k as f64 * h, &y, &dy, h);
        y = trial.y;
        dy = trial.dy;
        error_estimate += trial.error;
    }
    finish(t, y, steps, 0, error_estimate, f64::INFINITY)
}

/// True error together with the evolution it was measured on.
#[derive(Debug, Clone)]
pub struct ErrorMeasurement {
    pub epsilon: f64,
    pub evolution: EvolutionResult,
}

/// Evolves the initial ground state and measures
/// `ε_T = ‖(1 − |g_f⟩⟨g_f|) ψ(1)‖`.
pub fn measure_true_error(
    schedule: &HamiltonianSchedule,
    t: f64,
    config: &IntegratorConfig,
) -> Result<ErrorMeasurement> {
    let initial = schedule.spectral_frame(0.0, DEFAULT_GAP_FLOOR)?;
    let fin = schedule.spectral_frame(1.0, DEFAULT_GAP_FLOOR)?;
    let evolution = evolve(schedule, t, initial.ground(), config)?;
    let epsilon = projected_error(fin.ground(), &evolution.final_state);
    Ok(ErrorMeasurement { epsilon, evolution })
}

/// `ε_T` for timescale `t`.
pub fn true_error(
    schedule: &HamiltonianSchedule,
    t: f64,
    config: &IntegratorConfig,
) -> Result<f64> {
    measure_true_error(schedule, t, config).map(|m| m.epsilon)
}

/// `‖ψ − |g⟩⟨g|ψ⟩‖`.
pub fn projected_error(ground: &CVector, psi: &CVector) -> f64 {
    let overlap = ground.dotc(psi);
    (psi - ground * overlap).norm()
}
