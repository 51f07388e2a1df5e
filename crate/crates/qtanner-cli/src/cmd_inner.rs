use std::path::PathBuf;

use clap::Subcommand;
use planted_qtanner::gf::DEFAULT_BUDGET;
use planted_qtanner::inner::{search_inner_pair, InnerSearchOptions, Rho};

use crate::io::emit;

#[derive(Subcommand)]
pub enum InnerCmd {
    /// Lowest-index planted pair certified at `--rho` in both directions.
    Search {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        ka: usize,
        #[arg(long)]
        kb: usize,
        /// Target product expansion, e.g. `1/8`.
        #[arg(long, default_value = "1/8")]
        rho: Rho,
        /// Candidates tried before giving up.
        #[arg(long, default_value_t = 256)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Budget of the exact product-expansion checker.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        exact_budget: u64,
        #[arg(long, default_value_t = 20_000)]
        falsify_trials: u64,
        /// Also require property (*) of both codes.
        #[arg(long)]
        property_star: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cmd: InnerCmd) -> anyhow::Result<()> {
    match cmd {
        InnerCmd::Search { p, delta, ka, kb, rho, budget, seed, exact_budget, falsify_trials, property_star, out } => {
            let opts = InnerSearchOptions {
                exact_budget,
                falsify_trials,
                require_property_star: property_star,
                ..InnerSearchOptions::default()
            };
            let pair = search_inner_pair(p, delta, ka, kb, rho, budget, seed, &opts)?;
            emit(&pair, out.as_deref())
        }
    }
}
