//! Grid syntax: comma lists (`0.1,1,10`) or geometric ranges
//! `start:stop:count`. Dimensions span decades, so ranges interpolate
//! geometrically and land exactly on both endpoints.

use crate::CliError;

pub fn parse_f64_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(CliError::Usage("empty grid".into()));
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!(
                "geometric range must be start:stop:count, got `{spec}`"
            )));
        }
        let start: f64 = parse_num(parts[0])?;
        let stop: f64 = parse_num(parts[1])?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad count `{}`", parts[2])))?;
        if !(start > 0.0 && stop > 0.0) {
            return Err(CliError::Usage(
                "geometric ranges need positive endpoints".into(),
            ));
        }
        if count == 0 {
            return Err(CliError::Usage("count must be at least 1".into()));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let log_step = (stop / start).ln() / (count - 1) as f64;
        Ok((0..count)
            .map(|i| {
                if i + 1 == count {
                    stop
                } else {
                    start * (i as f64 * log_step).exp()
                }
            })
            .collect())
    } else {
        spec.split(',').map(parse_num).collect()
    }
}

pub fn parse_m_grid(spec: &str) -> Result<Vec<u32>, CliError> {
    let raw = parse_f64_grid(spec)?;
    let mut out = Vec::with_capacity(raw.len());
    for v in raw {
        let rounded = v.round();
        if !(2.0..=u32::MAX as f64).contains(&rounded) {
            return Err(CliError::Usage(format!(
                "dimension {v} out of range (need m >= 2)"
            )));
        }
        let m = rounded as u32;
        if out.last() != Some(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

fn parse_num(s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("cannot parse number `{}`", s.trim())))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("non-finite grid value `{s}`")));
    }
    Ok(v)
}
