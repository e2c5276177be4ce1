use std::io::Write;
use std::path::Path;

use super::{Diagnostic, SweepRecord};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str =
    "T,eps_true,eps_switching,eps_typical_closed,eps_typical_windowed,eps_bound_sqrt2,eps_rigorous,norm_drift";

fn fmt(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.16e}"),
        _ => "nan".to_string(),
    }
}

fn fmt_log10(v: Option<f64>) -> String {
    fmt(v.filter(|x| *x > 0.0).map(f64::log10))
}

fn columns(rec: &SweepRecord) -> Vec<Option<f64>> {
    let mut cols = vec![Some(rec.t)];
    cols.extend(Diagnostic::ALL.iter().map(|d| rec.get(*d)));
    cols.push(rec.norm_drift);
    cols
}

/// Writes `contents` to `dest` through a temporary file in the same
/// directory and an atomic rename.
fn write_atomic(dest: &Path, contents: &str) -> Result<()> {
    let dir = match dest.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(dest).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Writes the sweep as CSV with 17 significant digits and `nan` for missing
/// values. Returns the number of data rows.
pub fn emit_csv(records: &[SweepRecord], dest: &Path) -> Result<usize> {
    if records.is_empty() {
        return Err(Error::Domain("no records to write".into()));
    }
    let mut text = String::with_capacity(200 * (records.len() + 1));
    text.push_str(CSV_HEADER);
    text.push('\n');
    for rec in records {
        let row: Vec<String> = columns(rec).into_iter().map(fmt).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write_atomic(dest, &text)?;
    Ok(records.len())
}

/// Same rows as [`emit_csv`] with every column replaced by its base-10
/// logarithm (`nan` for missing or nonpositive values).
pub fn emit_plot_data(records: &[SweepRecord], dest: &Path) -> Result<usize> {
    if records.is_empty() {
        return Err(Error::Domain("no records to write".into()));
    }
    let header: Vec<String> = CSV_HEADER
        .split(',')
        .map(|c| format!("log10_{c}"))
        .collect();
    let mut text = header.join(",");
    text.push('\n');
    for rec in records {
        let row: Vec<String> = columns(rec).into_iter().map(fmt_log10).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write_atomic(dest, &text)?;
    Ok(records.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(t: f64) -> SweepRecord {
        let mut r = SweepRecord::empty(t);
        r.eps_true = Some(0.1 / t);
        r.eps_switching = Some(0.09 / t);
        r.eps_typical_closed = Some(1.0 / 3.0);
        r.eps_typical_windowed = Some(0.2);
        r.eps_bound_sqrt2 = Some(0.5);
        r.eps_rigorous = Some(2.0);
        r.norm_drift = Some(1e-12);
        r
    }

    #[test]
    fn three_records_four_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let n = emit_csv(&[record(1.0), record(2.0), record(3.0)], &path).unwrap();
        assert_eq!(n, 3);
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("1.0000000000000000e0,1.0000000000000001e-1,"));
        assert!(lines[1].contains(",3.3333333333333331e-1,"));
    }

    #[test]
    fn empty_records_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            emit_csv(&[], &dir.path().join("x.csv")),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn failed_field_is_nan() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let mut r = record(5.0);
        r.eps_true = None;
        emit_csv(&[r], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[1], "nan");
        assert_eq!(row.len(), 8);
    }

    #[test]
    fn values_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let r = record(7.0);
        emit_csv(std::slice::from_ref(&r), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let row: Vec<f64> = text
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(row[1], r.eps_true.unwrap());
        assert_eq!(row[2], r.eps_switching.unwrap());
    }

    #[test]
    fn overwrite_and_unwritable() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        emit_csv(&[record(1.0), record(2.0)], &path).unwrap();
        emit_csv(&[record(1.0)], &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 2);
        let bad = dir.path().join("missing-dir").join("out.csv");
        assert!(matches!(emit_csv(&[record(1.0)], &bad), Err(Error::Io(_))));
    }

    #[test]
    fn plot_data_uses_log10() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plot.csv");
        emit_plot_data(&[record(10.0)], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("log10_T,log10_eps_true"));
        let row: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert!((row[0] - 1.0).abs() < 1e-15);
        assert!((row[1] + 2.0).abs() < 1e-15);
    }
}
