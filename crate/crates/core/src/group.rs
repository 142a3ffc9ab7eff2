//! The complex reflection group `S(r,n)` of generalized permutation matrices
//! with entries in `μ_r`, generated by `T = {s_0, s_1, …, s_{n-1}}`.
//!
//! An element is stored column by column: column `b` has its single nonzero
//! entry `ζ^{exp_of_col[b]}` in row `row_of_col[b]`. Rows and columns are 0-based
//! internally; every serialized form and every `*_1based` accessor is 1-based.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::complex::{YCoord, YPoint};
use crate::cyclo::RootExponent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("r must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("generator index {index} out of range for n={n}")]
    GeneratorOutOfRange { index: usize, n: usize },
    #[error("shape mismatch: S({r1},{n1}) vs S({r2},{n2})")]
    ShapeMismatch { r1: u32, n1: usize, r2: u32, n2: usize },
    #[error("tuple has {got} coordinates, expected {expected}")]
    TupleLength { got: usize, expected: usize },
    #[error("not a generalized permutation matrix: {0}")]
    Malformed(String),
}

/// An element of `S(r,n)`.
///
/// Ordering is lexicographic on `(row_of_col, exp_of_col)` as words, which is the
/// deterministic enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenPerm {
    r: u32,
    n: usize,
    row_of_col: Vec<usize>,
    exp_of_col: Vec<RootExponent>,
}

impl GenPerm {
    /// Builds from 0-based rows and raw exponents (reduced mod `r`).
    pub fn new(r: u32, row_of_col: Vec<usize>, exps: Vec<i64>) -> Result<Self, GroupError> {
        if r < 2 {
            return Err(GroupError::OrderTooSmall(r));
        }
        let n = row_of_col.len();
        if exps.len() != n {
            return Err(GroupError::Malformed(format!(
                "{} rows but {} exponents",
                n,
                exps.len()
            )));
        }
        let mut seen = vec![false; n];
        for &row in &row_of_col {
            if row >= n || std::mem::replace(&mut seen[row], true) {
                return Err(GroupError::Malformed(format!(
                    "row_of_col {row_of_col:?} is not a permutation"
                )));
            }
        }
        Ok(GenPerm {
            r,
            n,
            row_of_col,
            exp_of_col: exps.into_iter().map(|e| RootExponent::new(e, r)).collect(),
        })
    }

    /// Builds from a dense matrix of entries, `None` for zero and `Some(e)` for `ζ^e`.
    pub fn from_matrix(r: u32, rows: &[Vec<Option<i64>>]) -> Result<Self, GroupError> {
        let n = rows.len();
        let mut row_of_col = vec![usize::MAX; n];
        let mut exps = vec![0; n];
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::Malformed("matrix is not square".into()));
            }
            let nz: Vec<_> = row.iter().enumerate().filter(|(_, e)| e.is_some()).collect();
            if nz.len() != 1 {
                return Err(GroupError::Malformed(format!(
                    "row {} has {} nonzero entries",
                    a + 1,
                    nz.len()
                )));
            }
            let (b, e) = nz[0];
            row_of_col[b] = a;
            exps[b] = e.unwrap();
        }
        Self::new(r, row_of_col, exps)
    }

    pub(crate) fn from_parts(r: u32, row_of_col: Vec<usize>, exp_of_col: Vec<RootExponent>) -> Self {
        GenPerm {
            r,
            n: row_of_col.len(),
            row_of_col,
            exp_of_col,
        }
    }

    pub fn identity(r: u32, n: usize) -> Result<Self, GroupError> {
        Self::new(r, (0..n).collect(), vec![0; n])
    }

    /// `s_0 = diag(ζ, 1, …, 1)`; `s_i` (`i ≥ 1`) swaps columns `i` and `i+1` of the identity.
    pub fn generator(r: u32, n: usize, i: usize) -> Result<Self, GroupError> {
        if i >= n {
            return Err(GroupError::GeneratorOutOfRange { index: i, n });
        }
        let mut g = Self::identity(r, n)?;
        if i == 0 {
            g.exp_of_col[0] = RootExponent::new(1, r);
        } else {
            g.row_of_col.swap(i - 1, i);
        }
        Ok(g)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_of_col(&self) -> &[usize] {
        &self.row_of_col
    }

    pub fn exp_of_col(&self) -> &[RootExponent] {
        &self.exp_of_col
    }

    /// The exponent `m` with `A_{row,col} = ζ^m`, or `None` when the entry is zero (0-based).
    pub fn entry(&self, row: usize, col: usize) -> Option<RootExponent> {
        (self.row_of_col[col] == row).then(|| self.exp_of_col[col])
    }

    /// Column holding the nonzero entry of each row (0-based).
    pub fn col_of_row(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (c, &row) in self.row_of_col.iter().enumerate() {
            out[row] = c;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.row_of_col.iter().enumerate().all(|(c, &r)| c == r)
            && self.exp_of_col.iter().all(|e| e.value() == 0)
    }

    fn same_shape(&self, other: &GenPerm) -> Result<(), GroupError> {
        if self.r != other.r || self.n != other.n {
            return Err(GroupError::ShapeMismatch {
                r1: self.r,
                n1: self.n,
                r2: other.r,
                n2: other.n,
            });
        }
        Ok(())
    }

    /// Matrix product `self · other`.
    pub fn multiply(&self, other: &GenPerm) -> Result<GenPerm, GroupError> {
        self.same_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &GenPerm) -> GenPerm {
        let mut rows = Vec::with_capacity(self.n);
        let mut exps = Vec::with_capacity(self.n);
        for c in 0..self.n {
            let b = other.row_of_col[c];
            rows.push(self.row_of_col[b]);
            exps.push(self.exp_of_col[b].add(other.exp_of_col[c], self.r));
        }
        GenPerm::from_parts(self.r, rows, exps)
    }

    pub fn inverse(&self) -> GenPerm {
        // (A^{-1}) has column row_of_col[c] ↦ row c with the conjugate entry.
        let mut rows = vec![0; self.n];
        let mut exps = vec![RootExponent::ZERO; self.n];
        for c in 0..self.n {
            let a = self.row_of_col[c];
            rows[a] = c;
            exps[a] = self.exp_of_col[c].neg(self.r);
        }
        GenPerm::from_parts(self.r, rows, exps)
    }

    /// Row vector times matrix: coordinate `b` of the result is
    /// `x_{row_of_col[b]}·ζ^{exp_of_col[b]}`.
    pub fn act_on_tuple(&self, x: &YPoint) -> Result<YPoint, GroupError> {
        if x.len() != self.n {
            return Err(GroupError::TupleLength {
                got: x.len(),
                expected: self.n,
            });
        }
        let coords = (0..self.n)
            .map(|b| {
                let src = &x.coords()[self.row_of_col[b]];
                if src.mag.is_zero() {
                    src.clone()
                } else {
                    YCoord {
                        mag: src.mag.clone(),
                        branch: src.branch.add(self.exp_of_col[b], self.r),
                    }
                }
            })
            .collect();
        Ok(YPoint::new(coords))
    }

    /// Dense matrix, `None` for zero entries and `Some(e)` for `ζ^e`.
    pub fn to_matrix(&self) -> Vec<Vec<Option<u32>>> {
        let mut m = vec![vec![None; self.n]; self.n];
        for c in 0..self.n {
            m[self.row_of_col[c]][c] = Some(self.exp_of_col[c].value());
        }
        m
    }
}

impl fmt::Display for GenPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.to_matrix().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells = row.iter().map(|e| match e {
                None => "0".to_string(),
                Some(0) => "1".to_string(),
                Some(1) => "z".to_string(),
                Some(k) => format!("z^{k}"),
            });
            write!(f, "[{}]", cells.map(|c| format!("{c:>4}")).join(""))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ColJson {
    col: usize,
    row: usize,
    exp: u32,
}

#[derive(Serialize, Deserialize)]
struct GenPermJson {
    r: u32,
    n: usize,
    cols: Vec<ColJson>,
}

impl Serialize for GenPerm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GenPermJson {
            r: self.r,
            n: self.n,
            cols: (0..self.n)
                .map(|c| ColJson {
                    col: c + 1,
                    row: self.row_of_col[c] + 1,
                    exp: self.exp_of_col[c].value(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GenPerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GenPermJson::deserialize(d)?;
        if j.cols.len() != j.n {
            return Err(D::Error::custom(format!(
                "expected {} columns, got {}",
                j.n,
                j.cols.len()
            )));
        }
        let mut rows = vec![usize::MAX; j.n];
        let mut exps = vec![0i64; j.n];
        for c in &j.cols {
            if c.col == 0 || c.col > j.n || c.row == 0 || c.row > j.n {
                return Err(D::Error::custom(format!(
                    "column entry ({}, {}) outside [1, {}]",
                    c.col, c.row, j.n
                )));
            }
            if rows[c.col - 1] != usize::MAX {
                return Err(D::Error::custom(format!("column {} listed twice", c.col)));
            }
            if c.exp >= j.r {
                return Err(D::Error::custom(format!("exponent {} not below r={}", c.exp, j.r)));
            }
            rows[c.col - 1] = c.row - 1;
            exps[c.col - 1] = i64::from(c.exp);
        }
        GenPerm::new(j.r, rows, exps).map_err(D::Error::custom)
    }
}

/// `|S(r,n)| = r^n · n!`.
pub fn group_order(r: u32, n: usize) -> u128 {
    let mut out: u128 = 1;
    for i in 1..=n as u128 {
        out = out.saturating_mul(i).saturating_mul(u128::from(r));
    }
    out
}

/// All exponent words of length `n` over `Z_r`, lexicographically.
pub(crate) fn exponent_words(r: u32, n: usize) -> Vec<Vec<RootExponent>> {
    let mut out = Vec::new();
    let mut word = vec![0u32; n];
    loop {
        out.push(word.iter().map(|&e| RootExponent::new(i64::from(e), r)).collect());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            word[i] += 1;
            if word[i] < r {
                break;
            }
            word[i] = 0;
        }
    }
}

/// All permutations of `0..n` in lexicographic order (one empty word for `n = 0`).
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (0..n).permutations(n).collect()
}

/// Every element of `S(r,n)` in the deterministic order.
pub fn enumerate_group(r: u32, n: usize) -> Result<Vec<GenPerm>, GroupError> {
    if r < 2 {
        return Err(GroupError::OrderTooSmall(r));
    }
    let words = exponent_words(r, n);
    let mut out = Vec::new();
    for perm in permutations(n) {
        for w in &words {
            out.push(GenPerm::from_parts(r, perm.clone(), w.clone()));
        }
    }
    Ok(out)
}

/// Breadth-first closure of `{s_i : i ∈ gens}` under right multiplication,
/// returned sorted.
pub fn generate_subgroup(r: u32, n: usize, gens: &BTreeSet<usize>) -> Result<Vec<GenPerm>, GroupError> {
    let generators = gens
        .iter()
        .map(|&i| GenPerm::generator(r, n, i))
        .collect::<Result<Vec<_>, _>>()?;
    let id = GenPerm::identity(r, n)?;
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in &generators {
            let h = g.mul_unchecked(s);
            if !seen.contains(&h) {
                seen.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Whether `g` lies in the block-diagonal group generated by `{s_i : i ∈ gens}`:
/// an `S(r, j_1)` block on top (arbitrary exponents), then permutation blocks with
/// trivial exponents, cut at each missing generator index.
pub fn is_block_diagonal_for(g: &GenPerm, gens: &BTreeSet<usize>) -> bool {
    let n = g.n();
    let cuts: Vec<usize> = (0..n).filter(|i| !gens.contains(i)).collect();
    // block id of a 0-based row/column position
    let block_of = |pos: usize| cuts.iter().filter(|&&j| j <= pos).count();
    (0..n).all(|c| {
        let row = g.row_of_col()[c];
        let same_block = block_of(row) == block_of(c);
        let exp_ok = block_of(c) == 0 || g.exp_of_col()[c].value() == 0;
        same_block && exp_ok
    })
}
