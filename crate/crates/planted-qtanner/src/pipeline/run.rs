use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{RunConfig, Stage};
use crate::csp::{certify_unsat, emit_planted_instance, reduce_to_3xor};
use crate::expander::{
    spectral_expansion, symmetric_generators, CayleyMultigraph, GeneratorMultiset, RegularGraph, SearchOptions, SpectralOptions,
};
use crate::gf::{enumeration_budget, io, set_enumeration_budget};
use crate::inner::{search_inner_pair, Certification, InnerCodePair, InnerSearchOptions};
use crate::rng::{derive_seed, sha256_hex};
use crate::tanner::{build_code, build_complex, code_dimension, estimate_ssexp, verify_planted, CssCode, DimensionReport, PlantedReport, SsexpPoint};
use crate::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

/// A persisted file, relative to the output directory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub stage: Stage,
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderSummary {
    pub group_prime: u64,
    pub m: u32,
    pub group_order: u64,
    pub degree: usize,
    pub closure: Option<usize>,
    pub generates: bool,
    pub lambda: f64,
    pub lambda_over_delta: f64,
    pub second_eigenvalue: f64,
    pub spectral_method: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerSummary {
    pub k_a: usize,
    pub k_b: usize,
    pub rate_a: f64,
    pub rate_b: f64,
    pub candidate_index: Option<u64>,
    pub primal: Option<Certification>,
    pub dual: Option<Certification>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSummary {
    pub n: usize,
    pub m_x: usize,
    pub m_z: usize,
    pub locality: usize,
    pub orthogonal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub planted: PlantedReport,
    pub all_flags: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionSummary {
    pub report: DimensionReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SsexpSummary {
    pub trials: u64,
    /// `(ε, min ratio, retained samples)` per side.
    pub boundary: Vec<(f64, Option<f64>, u64)>,
    pub coboundary: Vec<(f64, Option<f64>, u64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CspSummary {
    pub variables: usize,
    pub constraints: usize,
    pub max_arity: usize,
    pub inconsistent: bool,
    pub xor_variables: Option<usize>,
    pub xor_constraints: Option<usize>,
}

/// Everything a run produced. Contains no timestamps or paths outside the
/// output directory, so identical configs give byte-identical manifests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: RunConfig,
    pub n: u128,
    pub expander: Option<ExpanderSummary>,
    pub inner: Option<InnerSummary>,
    pub code: Option<CodeSummary>,
    pub verify: Option<VerifySummary>,
    pub dimension: Option<DimensionSummary>,
    pub ssexp: Option<SsexpSummary>,
    pub csp: Option<CspSummary>,
    pub artifacts: Vec<Artifact>,
}

struct Writer<'a> {
    dir: &'a Path,
    artifacts: Vec<Artifact>,
}

impl Writer<'_> {
    fn put(&mut self, stage: Stage, name: &str, contents: &str) -> Result<()> {
        fs::write(self.dir.join(name), contents)?;
        self.artifacts.push(Artifact {
            stage,
            path: name.into(),
            sha256: sha256_hex(contents.as_bytes()),
            bytes: contents.len(),
        });
        Ok(())
    }

    fn json<T: Serialize>(&mut self, stage: Stage, name: &str, value: &T) -> Result<()> {
        self.put(stage, name, &(serde_json::to_string_pretty(value)? + "\n"))
    }

    /// `stage` annotated with the hashes of the artifacts it consumed.
    fn context(&self, stage: Stage) -> String {
        let inputs: Vec<String> = self
            .artifacts
            .iter()
            .filter(|a| stage.requires().contains(&a.stage))
            .map(|a| format!("{} sha256:{}", a.path, &a.sha256[..12]))
            .collect();
        if inputs.is_empty() {
            stage.label().to_string()
        } else {
            format!("{} (inputs: {})", stage.label(), inputs.join(", "))
        }
    }
}

#[derive(Serialize)]
struct ExpanderArtifact<'a> {
    graph: crate::expander::GraphJson,
    spectral: &'a crate::expander::SpectralReport,
}

#[derive(Default)]
struct State {
    generators: Option<GeneratorMultiset>,
    pair: Option<InnerCodePair>,
    code: Option<CssCode>,
}

/// Restores the process-wide enumeration budget on drop.
struct BudgetScope(u64);

impl Drop for BudgetScope {
    fn drop(&mut self) {
        set_enumeration_budget(self.0);
    }
}

fn side(points: &[SsexpPoint]) -> Vec<(f64, Option<f64>, u64)> {
    points.iter().map(|p| (p.epsilon, p.min_ratio, p.samples - p.excluded)).collect()
}

fn run_stage(stage: Stage, cfg: &RunConfig, st: &mut State, w: &mut Writer, man: &mut Manifest) -> Result<()> {
    let seed = derive_seed(cfg.seed, stage.label());
    match stage {
        Stage::Expander => {
            let opts = SearchOptions {
                candidates: cfg.budgets.generator_candidates,
                bfs_budget: cfg.budgets.enumeration,
                ..SearchOptions::default()
            };
            let sel = symmetric_generators(cfg.group_prime, cfg.m, cfg.delta, seed, &opts)?;
            let graph = CayleyMultigraph::new(sel.generators.clone());
            let table = graph.table(cfg.budgets.enumeration)?;
            let spec = spectral_expansion(&table, &SpectralOptions { seed, ..SpectralOptions::default() })?;
            w.json(stage, "expander.json", &ExpanderArtifact { graph: graph.to_json(), spectral: &spec })?;
            man.expander = Some(ExpanderSummary {
                group_prime: cfg.group_prime,
                m: cfg.m,
                group_order: table.num_vertices() as u64,
                degree: cfg.delta,
                closure: sel.closure,
                generates: sel.generates(),
                lambda: spec.lambda,
                lambda_over_delta: spec.ratio,
                second_eigenvalue: spec.second_eigenvalue,
                spectral_method: spec.method.clone(),
            });
            st.generators = Some(sel.generators);
        }
        Stage::Inner => {
            let opts = InnerSearchOptions {
                exact_budget: cfg.budgets.enumeration,
                falsify_trials: cfg.budgets.falsify_trials,
                ..InnerSearchOptions::default()
            };
            let pair = search_inner_pair(cfg.p, cfg.delta, cfg.k_a, cfg.k_b, cfg.rho_target, cfg.budgets.inner_candidates, seed, &opts)?;
            w.json(stage, "inner.json", &pair)?;
            let prov = pair.provenance.as_ref();
            man.inner = Some(InnerSummary {
                k_a: pair.k_a(),
                k_b: pair.k_b(),
                rate_a: pair.rate_a(),
                rate_b: pair.rate_b(),
                candidate_index: prov.map(|p| p.candidate_index),
                primal: prov.map(|p| p.primal.clone()),
                dual: prov.map(|p| p.dual.clone()),
            });
            st.pair = Some(pair);
        }
        Stage::Code => {
            let gens = st.generators.as_ref().ok_or_else(|| Error::MissingArtifact("expander.json".into()))?;
            let pair = st.pair.as_ref().ok_or_else(|| Error::MissingArtifact("inner.json".into()))?;
            let complex = build_complex(gens, gens, cfg.grid_convention)?;
            let code = build_code(&complex, pair)?;
            w.put(stage, "hx.alist", &io::to_alist(code.hx()))?;
            w.put(stage, "hz.alist", &io::to_alist(code.hz()))?;
            w.json(stage, "code.json", &code)?;
            man.code = Some(CodeSummary {
                n: code.n(),
                m_x: code.m_x(),
                m_z: code.m_z(),
                locality: code.locality(),
                orthogonal: code.orthogonality_defect() == 0,
            });
            st.code = Some(code);
        }
        Stage::Verify => {
            let code = st.code.as_ref().ok_or_else(|| Error::MissingArtifact("code.json".into()))?;
            let planted = verify_planted(code);
            w.json(stage, "planted.json", &planted)?;
            man.verify = Some(VerifySummary {
                all_flags: planted.all_flags(),
                planted,
            });
        }
        Stage::Dimension => {
            let code = st.code.as_ref().ok_or_else(|| Error::MissingArtifact("code.json".into()))?;
            let report = code_dimension(code)?;
            w.json(stage, "dimension.json", &report)?;
            man.dimension = Some(DimensionSummary { report });
        }
        Stage::Ssexp => {
            let code = st.code.as_ref().ok_or_else(|| Error::MissingArtifact("code.json".into()))?;
            let grid: Vec<f64> = cfg.ssexp_eps.iter().map(|e| e.0).collect();
            let curve = estimate_ssexp(code, &grid, cfg.budgets.ssexp_trials, seed)?;
            w.json(stage, "ssexp.json", &curve)?;
            man.ssexp = Some(SsexpSummary {
                trials: cfg.budgets.ssexp_trials,
                boundary: side(&curve.boundary),
                coboundary: side(&curve.coboundary),
            });
        }
        Stage::Csp => {
            let code = st.code.as_ref().ok_or_else(|| Error::MissingArtifact("code.json".into()))?;
            let inst = emit_planted_instance(code)?;
            let cert = certify_unsat(&inst)?;
            w.json(stage, "csp_instance.json", &inst)?;
            w.json(stage, "csp_unsat.json", &cert)?;
            let xor = if inst.p == 2 { Some(reduce_to_3xor(&inst)?) } else { None };
            if let Some(x) = &xor {
                w.put(stage, "csp_3xor.txt", &x.to_dimacs())?;
            }
            man.csp = Some(CspSummary {
                variables: inst.m,
                constraints: inst.constraints.len(),
                max_arity: inst.max_arity(),
                inconsistent: cert.inconsistent,
                xor_variables: xor.as_ref().map(|x| x.num_vars),
                xor_constraints: xor.as_ref().map(|x| x.constraints.len()),
            });
        }
    }
    Ok(())
}

/// Validates the config, runs the selected stages in order, writes every
/// artifact and the manifest into `output_dir`.
pub fn run_pipeline(cfg: &RunConfig) -> Result<Manifest> {
    let n = cfg.validate()?;
    fs::create_dir_all(&cfg.output_dir)?;
    let _restore = BudgetScope(enumeration_budget());
    set_enumeration_budget(cfg.budgets.enumeration);
    let mut man = Manifest {
        config: cfg.clone(),
        n,
        expander: None,
        inner: None,
        code: None,
        verify: None,
        dimension: None,
        ssexp: None,
        csp: None,
        artifacts: Vec::new(),
    };
    let mut w = Writer {
        dir: &cfg.output_dir,
        artifacts: Vec::new(),
    };
    let mut st = State::default();
    for stage in cfg.ordered_stages() {
        let ctx = w.context(stage);
        run_stage(stage, cfg, &mut st, &mut w, &mut man).map_err(|e| Error::Stage {
            stage: ctx,
            source: Box::new(e),
        })?;
    }
    man.artifacts = w.artifacts;
    fs::write(cfg.output_dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&man)? + "\n")?;
    Ok(man)
}
