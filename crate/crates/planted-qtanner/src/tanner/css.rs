use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::GridConvention;
use crate::gf::{in_rowspace, rank, FMatrix, FVector, PrimeField};
use crate::{Error, Result};

/// Where a code came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CodeProvenance {
    Tanner {
        group_prime: u64,
        m: u32,
        delta: usize,
        k_a: usize,
        k_b: usize,
        convention: GridConvention,
    },
    Imported {
        name: String,
    },
}

/// `CSS(C_X = ker H_X, C_Z = ker H_Z)` with `H_X H_Zᵀ = 0`.
#[derive(Debug, Serialize, Deserialize)]
pub struct CssCode {
    field: PrimeField,
    n: usize,
    hx: FMatrix,
    hz: FMatrix,
    provenance: CodeProvenance,
    #[serde(skip)]
    ranks: OnceLock<(usize, usize)>,
}

impl Clone for CssCode {
    fn clone(&self) -> Self {
        CssCode {
            field: self.field,
            n: self.n,
            hx: self.hx.clone(),
            hz: self.hz.clone(),
            provenance: self.provenance.clone(),
            ranks: self.ranks.clone(),
        }
    }
}

impl PartialEq for CssCode {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.hx == other.hx && self.hz == other.hz && self.provenance == other.provenance
    }
}

impl CssCode {
    /// Fails unless both matrices have `n` columns over the same field and
    /// every X check is orthogonal to every Z check.
    pub fn new(hx: FMatrix, hz: FMatrix, provenance: CodeProvenance) -> Result<Self> {
        if hx.cols() != hz.cols() || hx.field() != hz.field() {
            return Err(Error::DimensionMismatch(format!(
                "H_X is {}x{} over F_{}, H_Z is {}x{} over F_{}",
                hx.rows(),
                hx.cols(),
                hx.field().p(),
                hz.rows(),
                hz.cols(),
                hz.field().p()
            )));
        }
        let code = CssCode {
            field: hx.field(),
            n: hx.cols(),
            hx,
            hz,
            provenance,
            ranks: OnceLock::new(),
        };
        let defect = code.orthogonality_defect();
        if defect != 0 {
            return Err(Error::DomainError(format!("H_X H_Z^T has {defect} nonzero entries")));
        }
        Ok(code)
    }

    fn imported(name: &str, n: usize, hx: &[Vec<u32>], hz: &[Vec<u32>]) -> Self {
        let f = PrimeField::binary();
        let m = |rows: &[Vec<u32>]| FMatrix::from_dense_rows(f, n, rows).expect("toy rows have length n");
        CssCode::new(m(hx), m(hz), CodeProvenance::Imported { name: name.into() }).expect("toy codes are CSS")
    }

    /// The `[[7,1,3]]` code with both check matrices equal to the Hamming parity check.
    pub fn steane() -> Self {
        let h = vec![
            vec![1, 0, 1, 0, 1, 0, 1],
            vec![0, 1, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1],
        ];
        Self::imported("steane", 7, &h, &h)
    }

    /// The `[[9,1,3]]` code: Z checks on adjacent pairs within three blocks of
    /// three, X checks on adjacent pairs of blocks.
    pub fn shor() -> Self {
        let mut hz = Vec::new();
        for b in 0..3 {
            for k in 0..2 {
                let mut r = vec![0; 9];
                r[3 * b + k] = 1;
                r[3 * b + k + 1] = 1;
                hz.push(r);
            }
        }
        let hx: Vec<Vec<u32>> = (0..2).map(|b| (0..9).map(|i| u32::from(i / 3 == b || i / 3 == b + 1)).collect()).collect();
        Self::imported("shor", 9, &hx, &hz)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hx(&self) -> &FMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &FMatrix {
        &self.hz
    }

    pub fn m_x(&self) -> usize {
        self.hx.rows()
    }

    pub fn m_z(&self) -> usize {
        self.hz.rows()
    }

    pub fn provenance(&self) -> &CodeProvenance {
        &self.provenance
    }

    /// Maximum row or column weight over both check matrices.
    pub fn locality(&self) -> usize {
        [self.hx.max_row_weight(), self.hx.max_col_weight(), self.hz.max_row_weight(), self.hz.max_col_weight()]
            .into_iter()
            .max()
            .unwrap_or(0)
    }

    /// Number of nonzero entries of `H_X H_Zᵀ`.
    pub fn orthogonality_defect(&self) -> usize {
        self.hx.mul_transpose(&self.hz).nnz()
    }

    /// `(rank H_X, rank H_Z)`, computed once.
    pub fn ranks(&self) -> (usize, usize) {
        *self.ranks.get_or_init(|| (rank(&self.hx), rank(&self.hz)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub n: usize,
    pub rank_x: usize,
    pub rank_z: usize,
    /// `k = (n - rank H_Z) - rank H_X`.
    pub k: usize,
    /// `n - m_X - m_Z`, which equals `-(1-2R_A)(1-2R_B) n` for Tanner codes.
    pub counting_bound: i64,
}

pub fn code_dimension(code: &CssCode) -> Result<DimensionReport> {
    let (rank_x, rank_z) = code.ranks();
    let k = code
        .n
        .checked_sub(rank_x + rank_z)
        .ok_or_else(|| Error::DomainError("rank H_X + rank H_Z exceeds n".into()))?;
    Ok(DimensionReport {
        n: code.n,
        rank_x,
        rank_z,
        k,
        counting_bound: code.n as i64 - code.m_x() as i64 - code.m_z() as i64,
    })
}

/// Membership of the all-ones vector on each side of the code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedReport {
    /// `H_X 1 = 0`.
    pub one_in_cx: bool,
    /// `H_Z 1 = 0`.
    pub one_in_cz: bool,
    /// `1 ∉ rowspace(H_Z)`.
    pub one_not_in_cz_perp: bool,
    /// `1 ∉ rowspace(H_X)`.
    pub one_not_in_cx_perp: bool,
    /// Every check row has entry sum `0 mod p`.
    pub row_sums_zero: bool,
    pub n_mod_p: u32,
}

impl PlantedReport {
    /// All four membership flags; then `1` is a nontrivial logical on both sides.
    pub fn all_flags(&self) -> bool {
        self.one_in_cx && self.one_in_cz && self.one_not_in_cz_perp && self.one_not_in_cx_perp
    }
}

pub fn verify_planted(code: &CssCode) -> PlantedReport {
    let ones = FVector::ones(code.field, code.n);
    let zero_rows = |h: &FMatrix| h.row_sums().iter().all(|&s| s == 0);
    PlantedReport {
        one_in_cx: code.hx.mul_vec(&ones).is_zero(),
        one_in_cz: code.hz.mul_vec(&ones).is_zero(),
        one_not_in_cz_perp: !in_rowspace(&code.hz, &ones),
        one_not_in_cx_perp: !in_rowspace(&code.hx, &ones),
        row_sums_zero: zero_rows(&code.hx) && zero_rows(&code.hz),
        n_mod_p: (code.n % code.field.p() as usize) as u32,
    }
}
