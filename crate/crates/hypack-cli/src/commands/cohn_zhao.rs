//! `hypack cohn-zhao`: the spherical-code packing upper bound
//! `min_theta sin^{m-1}(theta/2) A(m, theta)` over a user-supplied table.

use super::{emit, LINEAR_OVERFLOW_LN};
use crate::manifest::ManifestBuilder;
use crate::{CliError, CliResult, CohnZhaoArgs};
use hypack::bounds::{cohn_zhao_bound_log, read_code_table};
use serde_json::json;
use std::io::BufReader;

pub fn run(args: &CohnZhaoArgs) -> CliResult<()> {
    let file = std::fs::File::open(&args.codes)
        .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", args.codes.display())))?;
    let rows = read_code_table(BufReader::new(file)).map_err(CliError::from)?;
    let log_bound = cohn_zhao_bound_log(args.m, &rows).map_err(CliError::from)?;

    let linear = if args.linear {
        if log_bound > LINEAR_OVERFLOW_LN {
            return Err(CliError::Resource(format!(
                "--linear would overflow (log bound {log_bound:.1})"
            )));
        }
        Some(log_bound.exp())
    } else {
        None
    };

    let manifest = ManifestBuilder::new(
        "cohn-zhao",
        json!({
            "m": args.m,
            "codes": args.codes.display().to_string(),
            "rows": rows.len(),
            "linear": args.linear,
        }),
        None,
    )
    .finish(
        args.out
            .as_ref()
            .map(|p| vec![p.display().to_string()])
            .unwrap_or_default(),
    );
    let doc = json!({
        "manifest": manifest,
        "m": args.m,
        "log_bound": log_bound,
        "bound": linear,
    });
    emit(
        args.out.as_deref(),
        &(serde_json::to_string_pretty(&doc).expect("doc serializes") + "\n"),
    )
}
