use super::SweepRecord;
use crate::error::{Error, Result};

pub const DEFAULT_DETECT_WINDOW: usize = 5;
pub const DEFAULT_DETECT_TOL: f64 = 0.1;

/// Relative gap between the windowed and closed-form typical errors, or
/// `None` when it is undefined.
fn deviation(rec: &SweepRecord) -> Option<f64> {
    let windowed = rec.eps_typical_windowed?;
    let closed = rec.eps_typical_closed?;
    if !(closed > 0.0) || !windowed.is_finite() {
        return None;
    }
    Some((windowed - closed).abs() / closed)
}

/// Start of the hyperadiabatic regime on a sorted sweep.
///
/// A window of `window` consecutive records passes when the mean relative
/// deviation between windowed and closed-form typical errors is at most
/// `tol`, and fails if any record in it lacks either value. Returns the `T`
/// of the first record from which every later window passes, or `None` if
/// the last window fails.
pub fn detect_hyperadiabatic(
    records: &[SweepRecord],
    window: usize,
    tol: f64,
) -> Result<Option<f64>> {
    if window < 3 {
        return Err(Error::Domain(format!(
            "detection window must be at least 3, got {window}"
        )));
    }
    if records.len() < window {
        return Err(Error::Domain(format!(
            "need at least {window} records for detection, got {}",
            records.len()
        )));
    }
    if records.windows(2).any(|p| !(p[0].t < p[1].t)) {
        return Err(Error::Domain(
            "records must be sorted by increasing T".into(),
        ));
    }
    let passes = |chunk: &[SweepRecord]| -> bool {
        let devs: Option<Vec<f64>> = chunk.iter().map(deviation).collect();
        match devs {
            Some(d) => d.iter().sum::<f64>() / d.len() as f64 <= tol,
            None => false,
        }
    };
    let mut start = None;
    for (i, chunk) in records.windows(window).enumerate().rev() {
        if passes(chunk) {
            start = Some(i);
        } else {
            break;
        }
    }
    Ok(start.map(|i| records[i].t))
}
