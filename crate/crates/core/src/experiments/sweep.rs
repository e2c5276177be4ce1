use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    rigorous_bound_coefficient, typical_coefficient_with, windowed_with_data, AsymptoticData,
    AsymptoticOptions, WindowConfig,
};
use crate::error::{Error, Result};
use crate::propagator::{measure_true_error, IntegratorConfig};
use crate::quadrature::DEFAULT_POINTS;
use crate::schedule::{load_schedule, HamiltonianSchedule, QUADRATIC_CROSSING};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScheduleRef {
    Builtin(String),
    Path(PathBuf),
}

impl ScheduleRef {
    pub fn load(&self) -> Result<HamiltonianSchedule> {
        match self {
            ScheduleRef::Builtin(name) => HamiltonianSchedule::builtin(name)
                .ok_or_else(|| Error::Config(format!("unknown built-in schedule '{name}'"))),
            ScheduleRef::Path(path) => load_schedule(path).map_err(|e| match e {
                Error::InvalidSchedule(_) | Error::Config(_) => e,
                other => Error::Config(format!("cannot load {}: {other}", path.display())),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Log,
    Linear,
}

/// One column of the sweep output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Diagnostic {
    True,
    Switching,
    TypicalClosed,
    TypicalWindowed,
    BoundSqrt2,
    Rigorous,
}

impl Diagnostic {
    pub const ALL: [Diagnostic; 6] = [
        Diagnostic::True,
        Diagnostic::Switching,
        Diagnostic::TypicalClosed,
        Diagnostic::TypicalWindowed,
        Diagnostic::BoundSqrt2,
        Diagnostic::Rigorous,
    ];

    pub fn column(self) -> &'static str {
        match self {
            Diagnostic::True => "eps_true",
            Diagnostic::Switching => "eps_switching",
            Diagnostic::TypicalClosed => "eps_typical_closed",
            Diagnostic::TypicalWindowed => "eps_typical_windowed",
            Diagnostic::BoundSqrt2 => "eps_bound_sqrt2",
            Diagnostic::Rigorous => "eps_rigorous",
        }
    }
}

/// Built-in comparison scenarios. Both run the quadratic-crossing schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// True error against the switching estimate and the derivative-norm bound.
    Fig1,
    /// True error against the typical error and its √2 envelope.
    Fig2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub schedule: ScheduleRef,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub integrator: IntegratorConfig,
    pub typical: WindowConfig,
    pub outputs: Vec<Diagnostic>,
    pub workers: usize,
    pub quadrature_points: usize,
}

impl SweepConfig {
    pub fn new(schedule: ScheduleRef) -> Self {
        SweepConfig {
            schedule,
            t_min: 10.0,
            t_max: 3000.0,
            points: 200,
            spacing: Spacing::Log,
            integrator: IntegratorConfig::default(),
            typical: WindowConfig::default(),
            outputs: Diagnostic::ALL.to_vec(),
            workers: default_workers(),
            quadrature_points: DEFAULT_POINTS,
        }
    }

    pub fn scenario(scenario: Scenario) -> Self {
        let mut config = Self::new(ScheduleRef::Builtin(QUADRATIC_CROSSING.into()));
        config.outputs = match scenario {
            Scenario::Fig1 => vec![
                Diagnostic::True,
                Diagnostic::Switching,
                Diagnostic::TypicalClosed,
                Diagnostic::TypicalWindowed,
                Diagnostic::Rigorous,
            ],
            Scenario::Fig2 => vec![
                Diagnostic::True,
                Diagnostic::TypicalClosed,
                Diagnostic::TypicalWindowed,
                Diagnostic::BoundSqrt2,
            ],
        };
        config
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_min < self.t_max && self.t_max.is_finite()) {
            return Err(Error::Config(format!(
                "need 0 < T_min < T_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.points < 2 {
            return Err(Error::Config(format!(
                "need at least 2 grid points, got {}",
                self.points
            )));
        }
        if self.workers == 0 {
            return Err(Error::Config("worker count must be positive".into()));
        }
        if !(self.typical.tau0 > 0.0) {
            return Err(Error::Config(format!(
                "tau0 must be positive, got {}",
                self.typical.tau0
            )));
        }
        crate::quadrature::check_points(self.quadrature_points)
            .map_err(|e| Error::Config(e.to_string()))?;
        self.integrator.validate()
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    return self.t_max;
                }
                let x = k as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.t_min + x * (self.t_max - self.t_min),
                    Spacing::Log => (self.t_min.ln() + x * (self.t_max / self.t_min).ln()).exp(),
                }
            })
            .collect()
    }

    fn wants(&self, d: Diagnostic) -> bool {
        self.outputs.contains(&d)
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// All diagnostics at one timescale. `None` marks a diagnostic that was not
/// requested or whose computation failed; failures are listed in `failures`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub t: f64,
    pub eps_true: Option<f64>,
    pub eps_switching: Option<f64>,
    pub eps_typical_closed: Option<f64>,
    pub eps_typical_windowed: Option<f64>,
    pub eps_bound_sqrt2: Option<f64>,
    pub eps_rigorous: Option<f64>,
    pub norm_drift: Option<f64>,
    pub failures: Vec<(Diagnostic, String)>,
}

impl SweepRecord {
    pub fn empty(t: f64) -> Self {
        SweepRecord {
            t,
            eps_true: None,
            eps_switching: None,
            eps_typical_closed: None,
            eps_typical_windowed: None,
            eps_bound_sqrt2: None,
            eps_rigorous: None,
            norm_drift: None,
            failures: Vec::new(),
        }
    }

    pub fn get(&self, d: Diagnostic) -> Option<f64> {
        match d {
            Diagnostic::True => self.eps_true,
            Diagnostic::Switching => self.eps_switching,
            Diagnostic::TypicalClosed => self.eps_typical_closed,
            Diagnostic::TypicalWindowed => self.eps_typical_windowed,
            Diagnostic::BoundSqrt2 => self.eps_bound_sqrt2,
            Diagnostic::Rigorous => self.eps_rigorous,
        }
    }

    fn slot(&mut self, d: Diagnostic) -> &mut Option<f64> {
        match d {
            Diagnostic::True => &mut self.eps_true,
            Diagnostic::Switching => &mut self.eps_switching,
            Diagnostic::TypicalClosed => &mut self.eps_typical_closed,
            Diagnostic::TypicalWindowed => &mut self.eps_typical_windowed,
            Diagnostic::BoundSqrt2 => &mut self.eps_bound_sqrt2,
            Diagnostic::Rigorous => &mut self.eps_rigorous,
        }
    }

    fn set(&mut self, d: Diagnostic, value: Result<f64>) {
        match value {
            Ok(v) => *self.slot(d) = Some(v),
            Err(e) => self.failures.push((d, e.to_string())),
        }
    }

    /// True when no diagnostic produced a value.
    pub fn all_failed(&self) -> bool {
        Diagnostic::ALL.iter().all(|d| self.get(*d).is_none())
    }
}

/// Shared per-sweep quantities that do not depend on `T`.
struct SweepContext<'a> {
    config: &'a SweepConfig,
    schedule: HamiltonianSchedule,
    data: std::result::Result<AsymptoticData, String>,
    rigorous: std::result::Result<f64, String>,
}

impl SweepContext<'_> {
    fn data(&self) -> Result<&AsymptoticData> {
        self.data.as_ref().map_err(|e| Error::Domain(e.clone()))
    }

    fn record(&self, t: f64) -> SweepRecord {
        let mut rec = SweepRecord::empty(t);
        let cfg = self.config;
        if cfg.wants(Diagnostic::True) {
            match measure_true_error(&self.schedule, t, &cfg.integrator) {
                Ok(m) => {
                    rec.eps_true = Some(m.epsilon);
                    rec.norm_drift = Some(m.evolution.norm_drift);
                }
                Err(e) => rec.failures.push((Diagnostic::True, e.to_string())),
            }
        }
        if cfg.wants(Diagnostic::Switching) {
            rec.set(
                Diagnostic::Switching,
                self.data().map(|d| d.switching_error(t)),
            );
        }
        if cfg.wants(Diagnostic::TypicalClosed) {
            rec.set(
                Diagnostic::TypicalClosed,
                self.data().map(|d| d.typical_error(t)),
            );
        }
        if cfg.wants(Diagnostic::BoundSqrt2) {
            rec.set(
                Diagnostic::BoundSqrt2,
                self.data().map(|d| d.hyperadiabatic_bound(t)),
            );
        }
        if cfg.wants(Diagnostic::TypicalWindowed) {
            let value = self.data().and_then(|d| {
                windowed_with_data(&self.schedule, d, t, &cfg.typical, &cfg.integrator)
            });
            rec.set(Diagnostic::TypicalWindowed, value);
        }
        if cfg.wants(Diagnostic::Rigorous) {
            let value = self.rigorous.clone().map(|b| b / t).map_err(Error::Domain);
            rec.set(Diagnostic::Rigorous, value);
        }
        rec
    }
}

/// Runs every requested diagnostic on the timescale grid. Per-point failures
/// are recorded and the sweep continues; only configuration and schedule
/// loading errors abort.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let schedule = config.schedule.load()?;
    let options = AsymptoticOptions {
        quadrature_points: config.quadrature_points,
        ..AsymptoticOptions::default()
    };
    let ctx = SweepContext {
        config,
        data: typical_coefficient_with(&schedule, &options).map_err(|e| e.to_string()),
        rigorous: rigorous_bound_coefficient(&schedule, config.quadrature_points)
            .map_err(|e| e.to_string()),
        schedule,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let grid = config.grid();
    Ok(pool.install(|| grid.par_iter().map(|&t| ctx.record(t)).collect()))
}
