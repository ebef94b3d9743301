//! File formats: CSV curves with 17 significant digits, JSON reports.

use std::io::{Read, Write};

use ifm_core::montecarlo::TrialRecord;
use ifm_core::zeno::ZenoRow;
use ifm_core::{Axis, Normalization, SampledPattern, TrialOutcome, Window};
use serde::Serialize;

use crate::CliError;

/// Lossless decimal form of an `f64`: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// `axis,bin_center,density`, one row per bin.
pub fn write_pattern<W: Write>(out: W, p: &SampledPattern) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["axis", "bin_center", "density"])?;
    for (x, d) in p.bin_centers().zip(&p.densities) {
        w.write_record([p.axis.as_str(), &fmt_f64(x), &fmt_f64(*d)])?;
    }
    w.flush()?;
    Ok(())
}

/// Both hypotheses side by side on a shared binning:
/// `axis,bin_center,density_no_bomb,density_bomb`.
pub fn write_pattern_pair<W: Write>(out: W, none: &SampledPattern, bomb: &SampledPattern) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["axis", "bin_center", "density_no_bomb", "density_bomb"])?;
    for ((x, a), b) in none.bin_centers().zip(&none.densities).zip(&bomb.densities) {
        w.write_record([none.axis.as_str(), &fmt_f64(x), &fmt_f64(*a), &fmt_f64(*b)])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a single-pattern CSV back. Bin geometry comes from `window` (the
/// file stores only centres); the stored densities are kept verbatim and
/// relabelled as `normalization`.
pub fn read_pattern<R: Read>(
    input: R,
    window: Window,
    bin_width: f64,
    normalization: Normalization,
) -> Result<SampledPattern, CliError> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["axis", "bin_center", "density"] {
        return Err(CliError::Format(format!("unexpected pattern header: {headers:?}")));
    }
    let mut axis = None;
    let mut densities = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        let a = Axis::parse(&row[0]).ok_or_else(|| CliError::Format(format!("row {i}: unknown axis {:?}", &row[0])))?;
        if *axis.get_or_insert(a) != a {
            return Err(CliError::Format(format!("row {i}: mixed axes")));
        }
        let center = parse_f64(&row[1], i)?;
        let expected = window.lo + (i as f64 + 0.5) * bin_width;
        if center != expected {
            return Err(CliError::Format(format!("row {i}: bin centre {center} does not match the window")));
        }
        densities.push(parse_f64(&row[2], i)?);
    }
    if densities.len() != window.bin_count(bin_width)? {
        return Err(CliError::Format("row count does not match the window".into()));
    }
    let mass = bin_width * densities.iter().sum::<f64>();
    Ok(SampledPattern {
        axis: axis.unwrap_or(Axis::Position),
        x_lo: window.lo,
        x_hi: window.hi,
        bin_width,
        densities,
        mass,
        normalization,
        physical_mass: mass,
    })
}

fn parse_f64(s: &str, row: usize) -> Result<f64, CliError> {
    s.trim().parse().map_err(|_| CliError::Format(format!("row {row}: not a number: {s:?}")))
}

/// `axis,bin_center,posterior`; empty where the posterior is undefined.
pub fn write_posterior<W: Write>(out: W, window: Window, bin_width: f64, posteriors: &[Option<f64>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["axis", "bin_center", "posterior"])?;
    for (i, p) in posteriors.iter().enumerate() {
        let x = window.lo + (i as f64 + 0.5) * bin_width;
        w.write_record([Axis::Position.as_str(), &fmt_f64(x), &fmt_opt(*p)])?;
    }
    w.flush()?;
    Ok(())
}

/// `n_measurements,step_distance,p_absorbed`.
pub fn write_zeno_sweep<W: Write>(out: W, rows: &[ZenoRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n_measurements", "step_distance", "p_absorbed"])?;
    for r in rows {
        w.write_record([&r.n_measurements.to_string(), &fmt_f64(r.step_distance), &fmt_f64(r.p_absorbed)])?;
    }
    w.flush()?;
    Ok(())
}

/// `step,norm_squared`, starting from the initial state at step 0.
pub fn write_survival<W: Write>(out: W, curve: &[f64]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "norm_squared"])?;
    w.write_record(["0", &fmt_f64(1.0)])?;
    for (i, v) in curve.iter().enumerate() {
        w.write_record([&(i + 1).to_string(), &fmt_f64(*v)])?;
    }
    w.flush()?;
    Ok(())
}

/// `trial,true_class,outcome,x2,posterior,label`; the last three are empty
/// for explosions.
pub fn write_trials<W: Write>(out: W, records: &[TrialRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["trial", "true_class", "outcome", "x2", "posterior", "label"])?;
    for r in records {
        let (outcome, x2) = match r.outcome {
            TrialOutcome::Explosion => ("explosion", String::new()),
            TrialOutcome::Detection { bin_center, .. } => ("detection", fmt_f64(bin_center)),
        };
        let (posterior, label) = match r.classification {
            Some((p, l)) => (fmt_f64(p), l.as_str()),
            None => (String::new(), ""),
        };
        w.write_record([&r.trial.to_string(), r.true_class.as_str(), outcome, &x2, &posterior, label])?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<W: Write, T: Serialize>(mut out: W, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}
