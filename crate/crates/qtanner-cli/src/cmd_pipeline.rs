use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use planted_qtanner::inner::Rho;
use planted_qtanner::pipeline::{report_from_dir, run_pipeline, RunConfig, Stage};
use planted_qtanner::Error;

use crate::io::{emit, emit_text, precondition};

#[derive(Args)]
pub struct PipelineArgs {
    /// JSON config; omitted keys take their defaults, unknown keys are rejected.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Field prime of the code.
    #[arg(long)]
    p: Option<u32>,
    /// Prime of the congruence group; `n = |G| Δ²` must be coprime to the field prime.
    #[arg(long)]
    group_prime: Option<u64>,
    /// Group level, `|G| = group_prime^{3m}`.
    #[arg(long)]
    m: Option<u32>,
    /// Generator count, the inner code length.
    #[arg(long)]
    delta: Option<usize>,
    /// Dimension of the inner code `C_A`.
    #[arg(long)]
    ka: Option<usize>,
    /// Dimension of the inner code `C_B`.
    #[arg(long)]
    kb: Option<usize>,
    /// Target product expansion as `a/b`.
    #[arg(long)]
    rho: Option<Rho>,
    /// Master seed; every stage derives its own.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for artifacts and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated stage names, e.g. `expander,inner,code`.
    #[arg(long, value_delimiter = ',')]
    stages: Option<Vec<String>>,
}

#[derive(Args)]
pub struct ReportArgs {
    /// Pipeline output directory holding `manifest.json`.
    #[arg(long)]
    dir: PathBuf,
}

fn parse_stage(name: &str) -> anyhow::Result<Stage> {
    Stage::ALL
        .into_iter()
        .find(|s| s.label() == name.trim())
        .ok_or_else(|| precondition(format!("unknown stage `{name}`")))
}

/// File values first, then every flag that was given.
pub fn config(a: PipelineArgs) -> anyhow::Result<RunConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(v) = a.p {
        cfg.p = v;
    }
    if let Some(v) = a.group_prime {
        cfg.group_prime = v;
    }
    if let Some(v) = a.m {
        cfg.m = v;
    }
    if let Some(v) = a.delta {
        cfg.delta = v;
    }
    if let Some(v) = a.ka {
        cfg.k_a = v;
    }
    if let Some(v) = a.kb {
        cfg.k_b = v;
    }
    if let Some(v) = a.rho {
        cfg.rho_target = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.out {
        cfg.output_dir = v;
    }
    if let Some(names) = a.stages {
        cfg.stages = names.iter().map(|s| parse_stage(s)).collect::<anyhow::Result<_>>()?;
    }
    Ok(cfg)
}

pub fn run(a: PipelineArgs) -> anyhow::Result<()> {
    let cfg = config(a)?;
    emit(&run_pipeline(&cfg)?, None)
}

pub fn report(a: ReportArgs) -> anyhow::Result<()> {
    emit_text(&report_from_dir(&a.dir)?, None)
}
