//! Trace CSV files and number formatting.
//!
//! A trace file has the header line `t0,dt,n`, one line with those three
//! values, then `n` lines with one sample each.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::synth::Trace;

/// 17 significant digits; parses back to the same `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trace<W: Write>(mut w: W, trace: &Trace) -> Result<()> {
    writeln!(w, "t0,dt,n")?;
    writeln!(w, "{},{},{}", fmt17(trace.t0), fmt17(trace.dt), trace.len())?;
    for s in &trace.samples {
        writeln!(w, "{}", fmt17(*s))?;
    }
    Ok(())
}

fn number(field: &str, what: &str) -> Result<f64> {
    field.trim().parse().map_err(|_| Error::Parse(format!("{what}: `{}` is not a number", field.trim())))
}

pub fn read_trace<R: BufRead>(r: R) -> Result<Trace> {
    let mut lines = r.lines();
    let mut next = || -> Result<Option<String>> { lines.next().transpose().map_err(Error::from) };
    match next()? {
        Some(h) if h.trim() == "t0,dt,n" => {}
        _ => return Err(Error::Parse("missing `t0,dt,n` header".into())),
    }
    let meta = next()?.ok_or_else(|| Error::Parse("missing t0,dt,n values".into()))?;
    let parts: Vec<&str> = meta.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Parse("expected three values after the header".into()));
    }
    let t0 = number(parts[0], "t0")?;
    let dt = number(parts[1], "dt")?;
    let n: usize = parts[2].trim().parse().map_err(|_| Error::Parse("n must be a count".into()))?;
    let mut samples = Vec::with_capacity(n);
    while let Some(line) = next()? {
        if line.trim().is_empty() {
            continue;
        }
        samples.push(number(&line, "sample")?);
    }
    if samples.len() != n {
        return Err(Error::Parse(format!("header says {n} samples, found {}", samples.len())));
    }
    Trace::new(t0, dt, samples).map_err(|e| Error::Parse(e.to_string()))
}
