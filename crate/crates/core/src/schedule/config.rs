//! JSON schedule files.
//!
//! A schedule file is either the name of a built-in (`"quadratic-crossing"`,
//! `"quadratic-crossing-smooth"`), an object `{"builtin": name}`, or an
//! explicit description:
//!
//! ```json
//! {
//!   "dim": 2,
//!   "terms": [
//!     { "matrix": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
//!       "envelope": { "poly": [0, 1, -1], "smooth_wrap": 0 } }
//!   ]
//! }
//! ```
//!
//! Matrix entries are `[re, im]` pairs, rows first.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Envelope, HamiltonianSchedule, HermitianTerm};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub envelope: Envelope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleFile {
    Named(String),
    Builtin { builtin: String },
    Explicit { dim: usize, terms: Vec<TermSpec> },
}

impl ScheduleFile {
    pub fn build(&self) -> Result<HamiltonianSchedule> {
        match self {
            ScheduleFile::Named(name) | ScheduleFile::Builtin { builtin: name } => {
                HamiltonianSchedule::builtin(name)
                    .ok_or_else(|| Error::Config(format!("unknown built-in schedule '{name}'")))
            }
            ScheduleFile::Explicit { dim, terms } => {
                if terms.is_empty() {
                    return Err(Error::Config("schedule has no terms".into()));
                }
                let terms = terms
                    .iter()
                    .enumerate()
                    .map(|(k, t)| Ok((t.envelope.clone(), term_matrix(k, *dim, &t.matrix)?)))
                    .collect::<Result<Vec<_>>>()?;
                HamiltonianSchedule::new(terms)
            }
        }
    }

    /// Explicit form of an existing schedule.
    pub fn from_schedule(schedule: &HamiltonianSchedule) -> Self {
        let terms = schedule
            .terms()
            .iter()
            .map(|(env, a)| {
                let m = a.matrix();
                let matrix = (0..m.nrows())
                    .map(|i| {
                        (0..m.ncols())
                            .map(|j| [m[(i, j)].re, m[(i, j)].im])
                            .collect()
                    })
                    .collect();
                TermSpec {
                    matrix,
                    envelope: env.clone(),
                }
            })
            .collect();
        ScheduleFile::Explicit {
            dim: schedule.dim(),
            terms,
        }
    }
}

fn term_matrix(k: usize, dim: usize, rows: &[Vec<[f64; 2]>]) -> Result<HermitianTerm> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Config(format!(
            "term {k}: matrix is not {dim}x{dim}"
        )));
    }
    let entries: Vec<Complex64> = rows
        .iter()
        .flat_map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)))
        .collect();
    HermitianTerm::new(CMatrix::from_row_slice(dim, dim, &entries))
}

/// Reads and builds a schedule from a JSON file.
pub fn load_schedule(path: &Path) -> Result<HamiltonianSchedule> {
    let text = std::fs::read_to_string(path)?;
    let file: ScheduleFile = serde_json::from_str(&text)?;
    file.build()
}
