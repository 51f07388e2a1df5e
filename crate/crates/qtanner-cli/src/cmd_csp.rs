use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Subcommand, ValueEnum};
use planted_qtanner::csp::{certify_unsat, emit_lin_instance, max_sat, reduce_to_3xor, sos_level_bound, LinInstance, MaxSatOptions, SatMode};
use planted_qtanner::gf::{FVector, DEFAULT_BUDGET};
use serde_json::json;

use crate::io::{emit, emit_text, load_code, precondition};

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Exact,
    Ls,
}

#[derive(Subcommand)]
pub enum CspCmd {
    /// `H_Zᵀ y = β` as a JSON LIN instance; inconsistent when `β ∉ rowspace H_Z`.
    Emit {
        #[arg(long)]
        code: String,
        /// `one` for the all-ones vector, or comma-separated field elements.
        #[arg(long, default_value = "one")]
        beta: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank-test certificate of inconsistency.
    Unsat {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Maximum satisfiable fraction, exact or by local search.
    Maxsat {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Cap on `p^m` in exact mode.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        restarts: u64,
        /// Soundness constant: evidence is compared against `1 - c1`.
        #[arg(long)]
        c1: Option<f64>,
    },
    /// Binary instance to 3-XOR, in `p xor <vars> <clauses>` text.
    Reduce3 {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `c1 c2 m / (4 ℓ)`.
    SosBound {
        #[arg(long)]
        c1: f64,
        #[arg(long)]
        c2: f64,
        #[arg(long)]
        m: f64,
        #[arg(long)]
        ell: f64,
    },
}

fn load_instance(path: &Path) -> anyhow::Result<LinInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(LinInstance::from_json(&text)?)
}

pub fn run(cmd: CspCmd) -> anyhow::Result<()> {
    match cmd {
        CspCmd::Emit { code, beta, out } => {
            let code = load_code(&code)?;
            let f = code.field();
            let beta = if beta == "one" {
                FVector::ones(f, code.n())
            } else {
                let entries = beta
                    .split(',')
                    .map(|s| s.trim().parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| precondition(format!("beta must be `one` or comma-separated integers: {e}")))?;
                if entries.len() != code.n() {
                    return Err(precondition(format!("beta has {} entries, code length is {}", entries.len(), code.n())));
                }
                FVector::new(f, entries)?
            };
            emit(&emit_lin_instance(&code, &beta)?, out.as_deref())
        }
        CspCmd::Unsat { instance } => emit(&certify_unsat(&load_instance(&instance)?)?, None),
        CspCmd::Maxsat { instance, mode, budget, seed, restarts, c1 } => {
            let opts = MaxSatOptions {
                mode: match mode {
                    ModeArg::Exact => SatMode::Exact,
                    ModeArg::Ls => SatMode::LocalSearch,
                },
                budget,
                seed,
                restarts,
                c1,
            };
            emit(&max_sat(&load_instance(&instance)?, &opts)?, None)
        }
        CspCmd::Reduce3 { instance, out } => emit_text(&reduce_to_3xor(&load_instance(&instance)?)?.to_dimacs(), out.as_deref()),
        CspCmd::SosBound { c1, c2, m, ell } => emit(&json!({ "sos_level_bound": sos_level_bound(c1, c2, m, ell)? }), None),
    }
}
