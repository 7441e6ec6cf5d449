//! `hypack verify <suite>`: runs a battery of checks with fixed seeds and
//! emits a machine-readable JSON report. Nonzero exit on any failure.

use super::emit;
use crate::manifest::ManifestBuilder;
use crate::verify::run_suite;
use crate::{CliError, CliResult, VerifyArgs};
use serde_json::json;

pub fn run(args: &VerifyArgs) -> CliResult<()> {
    let manifest = ManifestBuilder::new(
        "verify",
        json!({ "suite": args.suite }),
        Some(args.seed),
    );
    let report = run_suite(&args.suite, args.seed)?;
    let manifest = manifest.finish(
        args.out
            .as_ref()
            .map(|p| vec![p.display().to_string()])
            .unwrap_or_default(),
    );
    let doc = json!({
        "manifest": manifest,
        "suite": args.suite,
        "seed": args.seed,
        "passed": report.passed(),
        "checks": report.checks,
    });
    emit(
        args.out.as_deref(),
        &(serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"),
    )?;
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::Science(format!(
            "suite `{}` failed: {}",
            args.suite,
            failed.join(", ")
        )))
    }
}
