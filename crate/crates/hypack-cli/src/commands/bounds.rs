//! `hypack bounds`: one row per (m, R) cell, columns
//! `m,R,epsilon,log_L,log_main,tau,log_delta,log_lambda,notes`.

use super::{emit, LINEAR_OVERFLOW_LN};
use crate::manifest::{write_sidecar, ManifestBuilder};
use crate::{BoundsArgs, CliError, CliResult, OutputFormat};
use hypack::bounds::{bounds_row, BoundsRow};
use rayon::prelude::*;
use serde_json::json;

pub fn run(args: &BoundsArgs) -> CliResult<()> {
    let ms = crate::grid::parse_m_grid(&args.m)?;
    let rs = crate::grid::parse_f64_grid(&args.r)?;
    if !(args.epsilon > 0.0 && args.epsilon < 1.0) {
        return Err(CliError::Usage(format!(
            "epsilon must be in (0, 1), got {}",
            args.epsilon
        )));
    }
    let manifest = ManifestBuilder::new(
        "bounds",
        json!({
            "m": ms,
            "R": rs,
            "epsilon": args.epsilon,
            "linear": args.linear,
            "format": if args.format == OutputFormat::Csv { "csv" } else { "json" },
        }),
        None,
    );

    let cells: Vec<(u32, f64)> = ms
        .iter()
        .flat_map(|&m| rs.iter().map(move |&r| (m, r)))
        .collect();
    // Row order follows input order regardless of scheduling.
    let rows: Vec<BoundsRow> = cells
        .par_iter()
        .map(|&(m, r)| bounds_row(m, r, args.epsilon).map_err(CliError::from))
        .collect::<CliResult<_>>()?;

    if args.linear {
        for row in &rows {
            let worst = row
                .log_l
                .max(row.log_main)
                .max(row.log_delta.unwrap_or(f64::NEG_INFINITY))
                .max(row.log_lambda.unwrap_or(f64::NEG_INFINITY));
            if worst > LINEAR_OVERFLOW_LN {
                return Err(CliError::Resource(format!(
                    "--linear would overflow at m={}, R={} (log value {worst:.1}); \
                     drop --linear to keep log scale",
                    row.m, row.r
                )));
            }
        }
    }

    let outputs = args
        .out
        .as_ref()
        .map(|p| vec![p.display().to_string()])
        .unwrap_or_default();
    let manifest = manifest.finish(outputs);

    match args.format {
        OutputFormat::Csv => {
            let payload = render_csv(&rows, args.linear);
            emit(args.out.as_deref(), &payload)?;
            if let Some(path) = &args.out {
                write_sidecar(path, &manifest)?;
            }
        }
        OutputFormat::Json => {
            let rows_json: Vec<serde_json::Value> = if args.linear {
                rows.iter().map(linear_row_json).collect()
            } else {
                rows.iter()
                    .map(|r| serde_json::to_value(r).expect("row serializes"))
                    .collect()
            };
            let doc = json!({ "manifest": manifest, "rows": rows_json });
            let payload = serde_json::to_string_pretty(&doc).expect("doc serializes") + "\n";
            emit(args.out.as_deref(), &payload)?;
        }
    }
    Ok(())
}

fn render_csv(rows: &[BoundsRow], linear: bool) -> String {
    let mut out = String::new();
    if linear {
        out.push_str("m,R,epsilon,L,main,tau,delta,lambda,notes\n");
    } else {
        out.push_str("m,R,epsilon,log_L,log_main,tau,log_delta,log_lambda,notes\n");
    }
    let scale = |v: f64| if linear { v.exp() } else { v };
    for row in rows {
        let opt = |v: Option<f64>| v.map(|x| scale(x).to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.m,
            row.r,
            row.epsilon,
            scale(row.log_l),
            scale(row.log_main),
            row.tau.map(|t| t.to_string()).unwrap_or_default(),
            opt(row.log_delta),
            opt(row.log_lambda),
            row.notes,
        ));
    }
    out
}

fn linear_row_json(row: &BoundsRow) -> serde_json::Value {
    json!({
        "m": row.m,
        "R": row.r,
        "epsilon": row.epsilon,
        "L": row.log_l.exp(),
        "main": row.log_main.exp(),
        "tau": row.tau,
        "delta": row.log_delta.map(f64::exp),
        "lambda": row.log_lambda.map(f64::exp),
        "notes": row.notes,
    })
}
