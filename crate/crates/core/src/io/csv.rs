//! Plain CSV time-series export. Floats are written with 17 significant
//! digits so that re-import is exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lebesgue::TimeSeries;

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `t,value` rows.
pub fn export_timeseries(series: &TimeSeries, path: impl AsRef<Path>) -> Result<()> {
    if series.is_empty() {
        return Err(Error::arg("series", "cannot export an empty series"));
    }
    let mut out = String::from("t,value\n");
    for (t, v) in series.times().iter().zip(series.values()) {
        writeln!(out, "{},{}", fmt_f64(*t), fmt_f64(*v)).expect("writing to String");
    }
    let path = path.as_ref();
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Reads back a `t,value` file as `(t, value)` pairs.
pub fn import_timeseries(path: impl AsRef<Path>) -> Result<Vec<(f64, f64)>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        reason: format!("line {line}: {reason}"),
    };
    let mut lines = text.lines();
    match lines.next() {
        Some("t,value") => {}
        other => return Err(parse_err(1, format!("expected header `t,value`, got {other:?}"))),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let (t, v) = line
                .split_once(',')
                .ok_or_else(|| parse_err(i + 2, "expected two columns".into()))?;
            let t = t.parse().map_err(|e| parse_err(i + 2, format!("{e}")))?;
            let v = v.parse().map_err(|e| parse_err(i + 2, format!("{e}")))?;
            Ok((t, v))
        })
        .collect()
}

/// Writes `t,observed,envelope,contained` rows for an envelope check.
pub fn export_envelope(
    times: &[f64],
    observed: &[f64],
    envelope: &[f64],
    contained: &[bool],
    path: impl AsRef<Path>,
) -> Result<()> {
    if times.len() != observed.len() || times.len() != envelope.len() || times.len() != contained.len() {
        return Err(Error::arg("envelope", "columns differ in length"));
    }
    let mut out = String::from("t,observed,envelope,contained\n");
    for i in 0..times.len() {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(times[i]),
            fmt_f64(observed[i]),
            fmt_f64(envelope[i]),
            contained[i]
        )
        .expect("writing to String");
    }
    let path = path.as_ref();
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sample_is_two_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k.csv");
        let ts = TimeSeries::new(vec![0.5], vec![1.0 / 3.0], vec![1.0]).unwrap();
        export_timeseries(&ts, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next(), Some("t,value"));
    }

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k.csv");
        let times: Vec<f64> = (0..50).map(|i| i as f64 * 0.1 + 1e-3).collect();
        let values: Vec<f64> = times.iter().map(|t| (t * 7.3).sin() / 3.0 + 1e-300).collect();
        let ts = TimeSeries::from_samples(times.clone(), values.clone()).unwrap();
        export_timeseries(&ts, &path).unwrap();
        let back = import_timeseries(&path).unwrap();
        for ((t, v), (bt, bv)) in times.iter().zip(&values).zip(&back) {
            assert_eq!(t.to_bits(), bt.to_bits());
            assert_eq!(v.to_bits(), bv.to_bits());
        }
    }

    #[test]
    fn envelope_columns() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("env.csv");
        export_envelope(&[0.0, 1.0], &[1.0, 2.0], &[3.0, 4.0], &[true, true], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("t,observed,envelope,contained\n"));
        assert!(text.lines().nth(1).unwrap().ends_with(",true"));
        assert!(export_timeseries(&TimeSeries::empty(), &path).is_err());
    }
}
