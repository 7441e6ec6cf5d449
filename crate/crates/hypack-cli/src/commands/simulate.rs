//! `hypack simulate`: one seeded pipeline run, JSON result plus optional
//! points CSV. Exits 1 if the produced set fails the packing re-check
//! (which would indicate an internal bug).

use super::emit;
use crate::manifest::{write_sidecar, ManifestBuilder};
use crate::{CliError, CliResult, SimulateArgs};
use hypack::packing::{run_pipeline, sample_poisson, write_points_csv, Intensity, SimConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde_json::json;

pub fn run(args: &SimulateArgs) -> CliResult<()> {
    let intensity = match (args.lambda, args.target_degree) {
        (Some(l), None) => Intensity::Explicit(l),
        (None, Some(d)) => Intensity::TargetDegree(d),
        (None, None) => {
            return Err(CliError::Usage(
                "one of --lambda or --target-degree is required".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let cfg = SimConfig {
        m: args.m,
        r: args.r,
        l: args.l,
        intensity,
        seed: args.seed,
        degree_cap: args.degree_cap,
        codegree_cap: args.codegree_cap,
        mc_samples: args.mc_samples,
    };
    let resolved = cfg.resolve().map_err(CliError::from)?;
    let manifest = ManifestBuilder::new(
        "simulate",
        serde_json::to_value(&resolved).expect("config serializes"),
        Some(args.seed),
    );

    let result = run_pipeline(&cfg).map_err(CliError::from)?;

    let mut outputs = Vec::new();
    if let Some(p) = &args.out {
        outputs.push(p.display().to_string());
    }
    if let Some(points_path) = &args.points {
        // Re-derive the exact point sequence (same seed, same stream).
        let mut rng = ChaCha12Rng::seed_from_u64(resolved.seed);
        rng.set_stream(0);
        let points = sample_poisson(&resolved, &mut rng).map_err(CliError::from)?;
        let mut buf = Vec::new();
        write_points_csv(&mut buf, &points, &result)?;
        std::fs::write(points_path, buf)?;
        outputs.push(points_path.display().to_string());
    }
    let manifest = manifest.finish(outputs);
    if let Some(points_path) = &args.points {
        write_sidecar(points_path, &manifest)?;
    }

    let doc = json!({
        "manifest": manifest,
        "config": resolved,
        "result": result,
    });
    emit(
        args.out.as_deref(),
        &(serde_json::to_string_pretty(&doc).expect("doc serializes") + "\n"),
    )?;

    if !result.packing_valid {
        return Err(CliError::Science(
            "output failed the packing re-check (internal bug)".into(),
        ));
    }
    Ok(())
}
