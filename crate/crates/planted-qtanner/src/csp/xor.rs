use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{LinConstraint, LinInstance};
use crate::{Error, Result};

/// `Σ x_v = rhs` over `F_2` on at most three variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorConstraint {
    pub vars: Vec<usize>,
    pub rhs: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorInstance {
    pub num_vars: usize,
    /// Variables `num_vars - dummies..` are introduced by the reduction.
    pub dummies: usize,
    pub constraints: Vec<XorConstraint>,
}

impl XorInstance {
    pub fn max_arity(&self) -> usize {
        self.constraints.iter().map(|c| c.vars.len()).max().unwrap_or(0)
    }

    /// The same system as a binary [`LinInstance`].
    pub fn to_lin(&self) -> LinInstance {
        LinInstance {
            p: 2,
            m: self.num_vars,
            constraints: self
                .constraints
                .iter()
                .map(|c| {
                    let mut vars = c.vars.clone();
                    vars.sort_unstable();
                    LinConstraint {
                        coeffs: vec![1; vars.len()],
                        vars,
                        rhs: u32::from(c.rhs),
                    }
                })
                .collect(),
            arity_bound: Some(3),
            provenance: None,
        }
    }

    /// `p xor <vars> <clauses>`, a `c dummies <k>` comment, then `x v1 v2 v3 b`
    /// lines with 1-based variable ids.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p xor {} {}\nc dummies {}\n", self.num_vars, self.constraints.len(), self.dummies);
        for c in &self.constraints {
            out.push('x');
            for v in &c.vars {
                write!(out, " {}", v + 1).expect("writing to a String");
            }
            writeln!(out, " {}", u8::from(c.rhs)).expect("writing to a String");
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<Self> {
        let dummies = text
            .lines()
            .find_map(|l| l.trim().strip_prefix("c dummies "))
            .map(|k| k.trim().parse::<usize>().map_err(|e| Error::Parse(format!("dummy count: {e}"))))
            .transpose()?
            .unwrap_or(0);
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('c'));
        let header: Vec<&str> = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?.split_whitespace().collect();
        let (num_vars, count) = match header.as_slice() {
            ["p", "xor", v, c] => (
                v.parse::<usize>().map_err(|e| Error::Parse(format!("variable count: {e}")))?,
                c.parse::<usize>().map_err(|e| Error::Parse(format!("clause count: {e}")))?,
            ),
            _ => return Err(Error::Parse("header must read `p xor <vars> <clauses>`".into())),
        };
        let mut constraints = Vec::with_capacity(count);
        for (k, line) in lines.enumerate() {
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok.first() != Some(&"x") || tok.len() < 2 || tok.len() > 5 {
                return Err(Error::Parse(format!("clause {k}: expected `x v1 .. v3 b`")));
            }
            let rhs = match *tok.last().expect("length checked") {
                "0" => false,
                "1" => true,
                b => return Err(Error::Parse(format!("clause {k}: parity `{b}` is not 0 or 1"))),
            };
            let vars = tok[1..tok.len() - 1]
                .iter()
                .map(|t| match t.parse::<usize>() {
                    Ok(v) if (1..=num_vars).contains(&v) => Ok(v - 1),
                    _ => Err(Error::Parse(format!("clause {k}: bad variable `{t}`"))),
                })
                .collect::<Result<Vec<_>>>()?;
            constraints.push(XorConstraint { vars, rhs });
        }
        if constraints.len() != count {
            return Err(Error::Parse(format!("header announces {count} clauses, found {}", constraints.len())));
        }
        if dummies > num_vars {
            return Err(Error::Parse(format!("{dummies} dummies among {num_vars} variables")));
        }
        Ok(XorInstance {
            num_vars,
            dummies,
            constraints,
        })
    }
}

/// Splits every binary constraint of arity `w > 3` into the chain
/// `x1 + x2 + z1 = 0`, `z_{j-1} + x_{j+1} + z_j = 0` for `j = 2..w-2`,
/// `z_{w-2} + x_w = b` on `w - 2` fresh variables.
pub fn reduce_to_3xor(inst: &LinInstance) -> Result<XorInstance> {
    if inst.p != 2 {
        return Err(Error::UnsupportedField(format!("F_{} (3-XOR reduction is binary only)", inst.p)));
    }
    inst.validate()?;
    let mut next = inst.m;
    let mut constraints = Vec::with_capacity(inst.constraints.len());
    for c in &inst.constraints {
        let (x, rhs) = (&c.vars, c.rhs == 1);
        let w = x.len();
        if w <= 3 {
            constraints.push(XorConstraint { vars: x.clone(), rhs });
            continue;
        }
        let z0 = next;
        next += w - 2;
        constraints.push(XorConstraint {
            vars: vec![x[0], x[1], z0],
            rhs: false,
        });
        for j in 2..=w - 2 {
            constraints.push(XorConstraint {
                vars: vec![z0 + j - 2, x[j], z0 + j - 1],
                rhs: false,
            });
        }
        constraints.push(XorConstraint {
            vars: vec![z0 + w - 3, x[w - 1]],
            rhs,
        });
    }
    Ok(XorInstance {
        num_vars: next,
        dummies: next - inst.m,
        constraints,
    })
}
