use std::fs;
use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use planted_qtanner::expander::{symmetric_generators, CayleyMultigraph, GraphJson, SearchOptions};
use planted_qtanner::gf::{io as gfio, DEFAULT_BUDGET};
use planted_qtanner::inner::InnerCodePair;
use planted_qtanner::pipeline::coprimality_precheck;
use planted_qtanner::tanner::{build_code, build_complex, code_dimension, estimate_distance, estimate_ssexp, verify_planted, GridConvention};
use serde_json::json;

use crate::io::{emit, load_code, precondition, read_json};

#[derive(Clone, Copy, ValueEnum)]
pub enum Convention {
    NeighborMove,
    Direct,
}

impl From<Convention> for GridConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::NeighborMove => GridConvention::NeighborMove,
            Convention::Direct => GridConvention::Direct,
        }
    }
}

#[derive(Subcommand)]
pub enum CodeCmd {
    /// Builds the code from an inner pair and a Cayley expander.
    Build {
        /// Field of the code; must match the inner pair.
        #[arg(long)]
        p: Option<u32>,
        /// Prime of the congruence group.
        #[arg(long, default_value_t = 3)]
        group_prime: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Generator count; must match the inner code length.
        #[arg(long)]
        delta: Option<usize>,
        /// Inner pair JSON, as written by `inner search`.
        #[arg(long)]
        inner: PathBuf,
        /// Expander JSON; otherwise a best-effort multiset is searched from `--seed`.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "neighbor-move")]
        convention: Convention,
        /// Code JSON destination; a summary goes to stdout instead.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for `hx.alist` and `hz.alist`.
        #[arg(long)]
        alist: Option<PathBuf>,
    },
    /// The four planting flags.
    Verify {
        #[arg(long)]
        code: String,
    },
    /// `k = n - rank H_X - rank H_Z` against the check-counting bound.
    Dimension {
        #[arg(long)]
        code: String,
    },
    /// Exact distance within `--budget`, else a sampled upper bound.
    Distance {
        #[arg(long)]
        code: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sampled small-set expansion curve on both sides.
    Ssexp {
        #[arg(long)]
        code: String,
        #[arg(long, value_delimiter = ',', default_values_t = [0.02, 0.05, 0.1])]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn run(cmd: CodeCmd) -> anyhow::Result<()> {
    match cmd {
        CodeCmd::Build { p, group_prime, m, delta, inner, graph, seed, convention, out, alist } => {
            let pair: InnerCodePair = read_json(&inner)?;
            let field = pair.field().p();
            if p.is_some_and(|p| p != field) {
                return Err(precondition(format!("--p {} differs from the inner pair field {field}", p.unwrap())));
            }
            if delta.is_some_and(|d| d != pair.delta) {
                return Err(precondition(format!("--delta {} differs from the inner code length {}", delta.unwrap(), pair.delta)));
            }
            coprimality_precheck(field, group_prime, m, pair.delta)?;
            let gens = match graph {
                Some(path) => {
                    let g = CayleyMultigraph::from_json(&read_json::<GraphJson>(&path)?)?;
                    g.generators().clone()
                }
                None => symmetric_generators(group_prime, m, pair.delta, seed, &SearchOptions::default())?.generators,
            };
            if gens.degree() != pair.delta {
                return Err(precondition(format!("expander degree {} differs from inner code length {}", gens.degree(), pair.delta)));
            }
            let code = build_code(&build_complex(&gens, &gens, convention.into())?, &pair)?;
            if let Some(dir) = alist {
                fs::create_dir_all(&dir)?;
                fs::write(dir.join("hx.alist"), gfio::to_alist(code.hx()))?;
                fs::write(dir.join("hz.alist"), gfio::to_alist(code.hz()))?;
            }
            match out {
                Some(path) => {
                    emit(&code, Some(&path))?;
                    emit(
                        &json!({
                            "n": code.n(),
                            "m_x": code.m_x(),
                            "m_z": code.m_z(),
                            "locality": code.locality(),
                            "orthogonal": code.orthogonality_defect() == 0,
                        }),
                        None,
                    )
                }
                None => emit(&code, None),
            }
        }
        CodeCmd::Verify { code } => emit(&verify_planted(&load_code(&code)?), None),
        CodeCmd::Dimension { code } => emit(&code_dimension(&load_code(&code)?)?, None),
        CodeCmd::Distance { code, budget, trials, seed } => emit(&estimate_distance(&load_code(&code)?, budget, trials, seed)?, None),
        CodeCmd::Ssexp { code, eps, trials, seed } => emit(&estimate_ssexp(&load_code(&code)?, &eps, trials, seed)?, None),
    }
}
