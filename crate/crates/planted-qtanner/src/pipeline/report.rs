use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::{Manifest, MANIFEST_FILE};
use crate::rng::sha256_hex;
use crate::{Error, Result};

/// Reads the manifest of `dir` and checks every listed artifact against its hash.
pub fn load_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|_| Error::MissingArtifact(path.display().to_string()))?;
    let man: Manifest = serde_json::from_str(&text)?;
    for a in &man.artifacts {
        let p = dir.join(&a.path);
        let bytes = fs::read(&p).map_err(|_| Error::MissingArtifact(p.display().to_string()))?;
        if sha256_hex(&bytes) != a.sha256 {
            return Err(Error::MissingArtifact(format!("{} (content hash changed)", p.display())));
        }
    }
    Ok(man)
}

/// Numbers are printed through the JSON serializer so they match the manifest text.
fn j<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain values serialize")
}

/// Human-readable summary. Only reads values stored in the manifest.
pub fn report(man: &Manifest) -> String {
    let c = &man.config;
    let mut s = String::new();
    let mut line = |t: String| {
        s.push_str(&t);
        s.push('\n');
    };
    line("parameters".into());
    line(format!("  field p            {}", j(&c.p)));
    line(format!("  group prime, m     {}, {}", j(&c.group_prime), j(&c.m)));
    line(format!("  degree Δ           {}", j(&c.delta)));
    line(format!("  k_A, k_B           {}, {}", j(&c.k_a), j(&c.k_b)));
    line(format!("  ρ target           {}", c.rho_target));
    line(format!("  seed               {}", j(&c.seed)));
    line(format!("  n = |G|Δ²          {}", j(&man.n)));
    match &man.expander {
        Some(e) => {
            line("expander".into());
            line(format!("  |G|                {}", j(&e.group_order)));
            line(format!("  generates          {} (closure {})", j(&e.generates), e.closure.map_or("unchecked".into(), |x| j(&x))));
            line(format!("  λ                  {}", j(&e.lambda)));
            line(format!("  λ/Δ                {}", j(&e.lambda_over_delta)));
            line(format!("  method             {}", e.spectral_method));
        }
        None => line("expander: skipped".into()),
    }
    match &man.inner {
        Some(i) => {
            line("inner codes".into());
            line(format!("  rates R_A, R_B     {}, {}", j(&i.rate_a), j(&i.rate_b)));
            line(format!("  certification      primal {}, dual {}", i.primal.as_ref().map_or("none".into(), j), i.dual.as_ref().map_or("none".into(), j)));
        }
        None => line("inner codes: skipped".into()),
    }
    if let Some(code) = &man.code {
        line("code".into());
        line(format!("  n, m_X, m_Z        {}, {}, {}", j(&code.n), j(&code.m_x), j(&code.m_z)));
        line(format!("  locality           {}", j(&code.locality)));
        line(format!("  H_X H_Z^T = 0      {}", j(&code.orthogonal)));
    }
    match &man.verify {
        Some(v) => line(format!("planted flags        {} {}", j(&v.all_flags), j(&v.planted))),
        None => line("planted flags: skipped".into()),
    }
    match &man.dimension {
        Some(d) => {
            let planted = man.verify.as_ref().is_some_and(|v| v.all_flags);
            line("dimension".into());
            line(format!("  k                  {}", j(&d.report.k)));
            line(format!("  counting bound     {}", j(&d.report.counting_bound)));
            if planted {
                line("  dimension ≥ 1 (planted)".into());
            }
        }
        None => line("dimension: skipped".into()),
    }
    match &man.ssexp {
        Some(x) => {
            line(format!("ssexp (trials {})", j(&x.trials)));
            for (name, pts) in [("boundary", &x.boundary), ("coboundary", &x.coboundary)] {
                for (eps, r, k) in pts {
                    line(format!("  {name:<10} ε={}  min ratio {}  samples {}", j(eps), r.map_or("none".into(), |v| j(&v)), j(k)));
                }
            }
        }
        None => line("ssexp: skipped".into()),
    }
    match &man.csp {
        Some(x) => {
            line("csp".into());
            line(format!("  variables          {}", j(&x.variables)));
            line(format!("  constraints        {}", j(&x.constraints)));
            line(format!("  max arity          {}", j(&x.max_arity)));
            line(format!("  inconsistent       {}", j(&x.inconsistent)));
            if let (Some(v), Some(k)) = (x.xor_variables, x.xor_constraints) {
                line(format!("  3-XOR              {} variables, {} constraints", j(&v), j(&k)));
            }
        }
        None => line("csp: skipped".into()),
    }
    let mut out = s;
    writeln!(out, "artifacts {}", man.artifacts.len()).expect("writing to a String");
    out
}

pub fn report_from_dir(dir: &Path) -> Result<String> {
    Ok(report(&load_manifest(dir)?))
}
