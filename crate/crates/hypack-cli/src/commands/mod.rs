pub mod bounds;
pub mod cohn_zhao;
pub mod simulate;
pub mod verify_cmd;

use crate::CliResult;
use std::path::Path;

/// Writes to the path or stdout.
pub fn emit(out: Option<&Path>, payload: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, payload)?,
        None => print!("{payload}"),
    }
    Ok(())
}

/// The largest log value `--linear` will exponentiate (ln of f64::MAX).
pub const LINEAR_OVERFLOW_LN: f64 = 709.782712893384;
