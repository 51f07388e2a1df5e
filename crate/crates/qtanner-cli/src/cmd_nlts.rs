use std::path::Path;

use clap::{Subcommand, ValueEnum};
use planted_qtanner::nlts::{
    build_clusters, compute_logicals, depth_lower_bound, enumerate_syndrome_set, measure_spread, nlts_depth_bound,
    random_low_energy_state, spread_dichotomy, verify_cluster_lemma, Basis, ClusterPartition, QuantumState, SpreadOptions,
};
use planted_qtanner::rng::index_seed;
use planted_qtanner::tanner::CssCode;
use serde_json::json;

use crate::io::{emit, load_code, read_json};

#[derive(Clone, Copy, ValueEnum)]
pub enum BasisArg {
    X,
    Z,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::X => Basis::X,
            BasisArg::Z => Basis::Z,
        }
    }
}

#[derive(Subcommand)]
pub enum NltsCmd {
    /// Clusters of the low-syndrome set and the four cluster-lemma checks.
    Clusters {
        /// `steane`, `shor`, or a code JSON file (n <= 22).
        #[arg(long)]
        code: String,
        #[arg(long, value_enum, default_value = "z")]
        basis: BasisArg,
        /// Syndrome radius `ε'`, relative to the number of checks.
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long)]
        c2: f64,
    },
    /// Exact X and Z measurement spread of a state file or of random low-energy states.
    Spread {
        /// `steane`, `shor`, or a code JSON file (n <= 12).
        #[arg(long)]
        code: String,
        /// State JSON (amplitudes or density rows as `[re, im]` pairs), or `random`.
        #[arg(long, default_value = "random")]
        state: String,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        /// Random states drawn when `--state random`.
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Required relative separation of `S^0` and `S^1`.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Circuit-depth lower bound for a `μ`-spread state over `δ n`-separated sets.
    DepthBound {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        delta: f64,
    },
}

fn partition(code: &CssCode, basis: Basis, eps: f64, c1: f64) -> anyhow::Result<ClusterPartition> {
    Ok(build_clusters(&enumerate_syndrome_set(code, basis, eps)?, c1)?)
}

pub fn run(cmd: NltsCmd) -> anyhow::Result<()> {
    match cmd {
        NltsCmd::Clusters { code, basis, eps, c1, c2 } => {
            let code = load_code(&code)?;
            let part = partition(&code, basis.into(), eps, c1)?;
            let report = verify_cluster_lemma(&part, c2);
            emit(
                &json!({
                    "basis": part.basis,
                    "epsilon_prime": eps,
                    "c1": c1,
                    "c2": c2,
                    "threshold": part.threshold,
                    "set_size": part.clusters.iter().map(Vec::len).sum::<usize>(),
                    "clusters": part.clusters.len(),
                    "translate_classes": part.representative_cluster.len(),
                    "all_passed": report.all_passed(),
                    "report": report,
                }),
                None,
            )
        }
        NltsCmd::Spread { code, state, eps, c1, trials, seed, delta } => {
            let code = load_code(&code)?;
            let px = partition(&code, Basis::X, eps, c1)?;
            let pz = partition(&code, Basis::Z, eps, c1)?;
            let logicals = compute_logicals(&code)?;
            let opts = SpreadOptions { delta, ..SpreadOptions::default() };
            let one = |s: &QuantumState| -> anyhow::Result<serde_json::Value> {
                let (x, z) = measure_spread(s, &code, &px, &pz, &logicals, &opts)?;
                let dichotomy = spread_dichotomy(s, &code, &px, &pz, &logicals, &opts)?;
                Ok(json!({ "x": x, "z": z, "dichotomy": dichotomy }))
            };
            if state != "random" {
                let s: QuantumState = read_json(Path::new(&state))?;
                return emit(&one(&s)?, None);
            }
            let mut held = 0u64;
            let mut worst = f64::INFINITY;
            for t in 0..trials {
                let s = random_low_energy_state(&code, eps, index_seed(seed, t))?;
                let (x, z) = measure_spread(&s, &code, &px, &pz, &logicals, &opts)?;
                worst = worst.min(x.min_mass().max(z.min_mass()));
                held += spread_dichotomy(&s, &code, &px, &pz, &logicals, &opts)? as u64;
            }
            emit(
                &json!({
                    "trials": trials,
                    "dichotomy_held": held,
                    "worst_best_basis_mass": (trials > 0).then_some(worst),
                }),
                None,
            )
        }
        NltsCmd::DepthBound { n, mu, delta } => emit(
            &json!({
                "depth_lower_bound": depth_lower_bound(n, mu, delta)?,
                "nlts_depth_bound": nlts_depth_bound(n, mu, delta)?,
            }),
            None,
        ),
    }
}
