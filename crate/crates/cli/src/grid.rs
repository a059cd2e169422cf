//! `start:step:stop` sweep syntax (inclusive stop, positive step).

use anyhow::{bail, ensure, Context, Result};

/// Parses either a single value or an inclusive `start:step:stop` sweep.
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [one] => Ok(vec![parse_num(one)?]),
        [start, step, stop] => {
            let start = parse_num(start)?;
            let step = parse_num(step)?;
            let stop = parse_num(stop)?;
            ensure!(step > 0.0, "sweep step must be positive, got {step}");
            ensure!(stop >= start, "sweep stop {stop} lies before start {start}");
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|k| start + k as f64 * step).collect())
        }
        _ => bail!("expected VALUE or START:STEP:STOP, got \"{spec}\""),
    }
}

fn parse_num(s: &str) -> Result<f64> {
    let x: f64 = s
        .trim()
        .parse()
        .with_context(|| format!("\"{s}\" is not a number"))?;
    ensure!(x.is_finite(), "\"{s}\" is not finite");
    Ok(x)
}

/// Parses a comma-separated list of positive integers.
pub fn parse_usize_list(spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .with_context(|| format!("\"{s}\" is not a positive integer"))
        })
        .collect()
}
