//! Matrix exchange formats.
//!
//! The alist-style text format is
//!
//! ```text
//! rows cols
//! max_row_weight max_col_weight
//! <one line per row: 1-based column indices>
//! <one line per column: 1-based row indices>
//! ```
//!
//! For `p > 2` every index carries its value as `index:value`. Empty rows and
//! columns are empty lines. The JSON format is
//! `{"p", "rows", "cols", "entries": [[r, c, value], ...]}` with 0-based,
//! row-major entries.

use serde::{Deserialize, Serialize};

use super::{FMatrix, PrimeField};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
pub struct JsonMatrix {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[u64; 3]>,
}

impl TryFrom<JsonMatrix> for FMatrix {
    type Error = Error;
    fn try_from(j: JsonMatrix) -> Result<Self> {
        let field = PrimeField::new(j.p)?;
        let mut seen = std::collections::HashSet::new();
        let mut trip = Vec::with_capacity(j.entries.len());
        for [r, c, v] in j.entries {
            if v == 0 || v >= j.p as u64 {
                return Err(Error::Parse(format!("entry ({r},{c}) has value {v} outside 1..{}", j.p)));
            }
            if !seen.insert((r, c)) {
                return Err(Error::Parse(format!("duplicate entry ({r},{c})")));
            }
            trip.push((r as usize, c as usize, v as u32));
        }
        FMatrix::from_triplets(field, j.rows, j.cols, trip)
    }
}

impl From<FMatrix> for JsonMatrix {
    fn from(m: FMatrix) -> Self {
        JsonMatrix {
            p: m.field().p(),
            rows: m.rows(),
            cols: m.cols(),
            entries: m.triplets().into_iter().map(|(r, c, v)| [r as u64, c as u64, v as u64]).collect(),
        }
    }
}

pub fn to_json(m: &FMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization cannot fail")
}

pub fn from_json(text: &str) -> Result<FMatrix> {
    Ok(serde_json::from_str(text)?)
}

fn join_entries(entries: &[(usize, u32)], binary: bool) -> String {
    entries
        .iter()
        .map(|&(i, v)| if binary { format!("{}", i + 1) } else { format!("{}:{}", i + 1, v) })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn to_alist(m: &FMatrix) -> String {
    let binary = m.field().p() == 2;
    let t = m.transpose();
    let mut out = format!("{} {}\n{} {}\n", m.rows(), m.cols(), m.max_row_weight(), t.max_row_weight());
    for r in 0..m.rows() {
        out.push_str(&join_entries(&m.row(r), binary));
        out.push('\n');
    }
    for c in 0..t.rows() {
        out.push_str(&join_entries(&t.row(c), binary));
        out.push('\n');
    }
    out
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::Parse(format!("line {line}: expected an integer, found `{tok}`")))
}

fn parse_list(text: &str, line: usize, p: u32, bound: usize) -> Result<Vec<(usize, u32)>> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        let (idx, val) = match tok.split_once(':') {
            Some((i, v)) => (parse_usize(i, line)?, parse_usize(v, line)? as u64),
            None if p == 2 => (parse_usize(tok, line)?, 1),
            None => return Err(Error::Parse(format!("line {line}: entry `{tok}` lacks a value"))),
        };
        if idx == 0 || idx > bound {
            return Err(Error::Parse(format!("line {line}: index {idx} outside 1..={bound}")));
        }
        if val == 0 || val >= p as u64 {
            return Err(Error::Parse(format!("line {line}: value {val} outside 1..{p}")));
        }
        out.push((idx - 1, val as u32));
    }
    Ok(out)
}

pub fn from_alist(field: PrimeField, text: &str) -> Result<FMatrix> {
    let lines: Vec<&str> = text.lines().collect();
    let header = |i: usize| -> Result<(usize, usize)> {
        let toks: Vec<&str> = lines
            .get(i)
            .ok_or_else(|| Error::Parse(format!("missing header line {}", i + 1)))?
            .split_whitespace()
            .collect();
        if toks.len() != 2 {
            return Err(Error::Parse(format!("line {}: expected two integers", i + 1)));
        }
        Ok((parse_usize(toks[0], i + 1)?, parse_usize(toks[1], i + 1)?))
    };
    let (rows, cols) = header(0)?;
    let (max_row, max_col) = header(1)?;
    if lines.len() != 2 + rows + cols {
        return Err(Error::Parse(format!("expected {} lines, found {}", 2 + rows + cols, lines.len())));
    }
    let mut trip = Vec::new();
    for r in 0..rows {
        let list = parse_list(lines[2 + r], 3 + r, field.p(), cols)?;
        trip.extend(list.into_iter().map(|(c, v)| (r, c, v)));
    }
    let m = FMatrix::from_triplets(field, rows, cols, trip.iter().copied())?;
    if m.nnz() != trip.len() {
        return Err(Error::Parse("duplicate entries in row lists".into()));
    }
    let t = m.transpose();
    for c in 0..cols {
        let list = parse_list(lines[2 + rows + c], 3 + rows + c, field.p(), rows)?;
        if list != t.row(c) {
            return Err(Error::Parse(format!("column list {} disagrees with the row lists", c + 1)));
        }
    }
    if m.max_row_weight() != max_row || t.max_row_weight() != max_col {
        return Err(Error::Parse("maximum weights in the header disagree with the lists".into()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binary_alist_layout() {
        let f = PrimeField::binary();
        let m = FMatrix::from_dense_rows(f, 3, &[vec![1, 1, 0], vec![0, 0, 0]]).unwrap();
        let text = to_alist(&m);
        assert_eq!(text, "2 3\n2 1\n1 2\n\n1\n1\n\n");
        assert_eq!(from_alist(f, &text).unwrap(), m);
    }

    #[test]
    fn ternary_alist_carries_values() {
        let f = PrimeField::new(3).unwrap();
        let m = FMatrix::from_dense_rows(f, 2, &[vec![2, 1]]).unwrap();
        let text = to_alist(&m);
        assert_eq!(text, "1 2\n2 1\n1:2 2:1\n1:2\n1:1\n");
        assert_eq!(from_alist(f, &text).unwrap(), m);
    }

    #[test]
    fn malformed_alist_is_rejected() {
        let f = PrimeField::binary();
        assert!(from_alist(f, "1 2\n1 1\n1\n1\n2\n").is_err());
        assert!(from_alist(f, "1 2\n1 1\n3\n\n\n").is_err());
        assert!(from_alist(f, "1 1\n1 1\n").is_err());
    }

    #[test]
    fn json_rejects_zero_and_duplicate_entries() {
        assert!(from_json(r#"{"p":3,"rows":1,"cols":1,"entries":[[0,0,0]]}"#).is_err());
        assert!(from_json(r#"{"p":3,"rows":1,"cols":1,"entries":[[0,0,1],[0,0,1]]}"#).is_err());
        assert!(from_json(r#"{"p":4,"rows":1,"cols":1,"entries":[]}"#).is_err());
    }

    proptest! {
        #[test]
        fn formats_round_trip_bit_exactly(p in prop::sample::select(vec![2u32, 3, 7]),
                                          rows in 0usize..6, cols in 0usize..6,
                                          vals in prop::collection::vec(0u32..7, 36)) {
            let f = PrimeField::new(p).unwrap();
            let dense: Vec<Vec<u32>> = (0..rows).map(|r| (0..cols).map(|c| vals[r * 6 + c] % p).collect()).collect();
            let m = FMatrix::from_dense_rows(f, cols, &dense).unwrap();
            let a = to_alist(&m);
            let back = from_alist(f, &a).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(to_alist(&back), a);
            let j = to_json(&m);
            let back = from_json(&j).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(to_json(&back), j);
        }
    }
}
