use std::path::PathBuf;

use clap::Subcommand;
use num_bigint::BigUint;
use planted_qtanner::expander::{
    default_generators, neighbor, spectral_expansion, symmetric_generators, CayleyMultigraph, Circulant, GraphJson, SearchOptions,
    SpectralOptions,
};
use serde_json::json;

use crate::io::{emit, precondition, read_json};

#[derive(Subcommand)]
pub enum ExpanderCmd {
    /// Symmetric generating multiset; prints the graph JSON.
    Build {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Return the best symmetric multiset even when none generates.
        #[arg(long)]
        best_effort: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectral report of a graph file, or of the cycle on Z/nZ.
    Spectrum {
        #[arg(long, conflicts_with = "cycle", required_unless_present = "cycle")]
        graph: Option<PathBuf>,
        #[arg(long)]
        cycle: Option<usize>,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Neighbor of a vertex index along one generator, without building the graph.
    Neighbor {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        vertex: BigUint,
        #[arg(long)]
        gen: usize,
    },
}

pub fn run(cmd: ExpanderCmd) -> anyhow::Result<()> {
    match cmd {
        ExpanderCmd::Build { p, m, degree, seed, best_effort, out } => {
            let gens = if best_effort {
                let sel = symmetric_generators(p, m, degree, seed, &SearchOptions::default())?;
                if !sel.generates() {
                    eprintln!("warning: multiset does not generate (level-1 closure {})", sel.closure_level1);
                }
                sel.generators
            } else {
                default_generators(p, m, degree, seed)?
            };
            emit(&CayleyMultigraph::new(gens).to_json(), out.as_deref())
        }
        ExpanderCmd::Spectrum { graph, cycle, budget, seed } => {
            let opts = SpectralOptions { seed, ..SpectralOptions::default() };
            let report = match (graph, cycle) {
                (Some(path), _) => {
                    let g = CayleyMultigraph::from_json(&read_json::<GraphJson>(&path)?)?;
                    spectral_expansion(&g.table(budget)?, &opts)?
                }
                (None, Some(n)) if n >= 3 => spectral_expansion(&Circulant::cycle(n), &opts)?,
                (None, Some(n)) => return Err(precondition(format!("cycle length {n} < 3"))),
                (None, None) => unreachable!("clap requires --graph or --cycle"),
            };
            emit(&report, None)
        }
        ExpanderCmd::Neighbor { graph, vertex, gen } => {
            let g = CayleyMultigraph::from_json(&read_json::<GraphJson>(&graph)?)?;
            let nb = neighbor(&g, &vertex, gen)?;
            emit(&json!({ "vertex": vertex.to_string(), "gen": gen, "neighbor": nb.to_string() }), None)
        }
    }
}
