//! The dictionary between chains and T-cosets `H_I·A`.
//!
//! `H_I` is generated by `{s_i : n − i ∉ {|I_1|, …, |I_k|}}`. It is block diagonal:
//! an `S(r, ·)` block on top and symmetric-group blocks below, one per gap
//! `I_j ∖ I_{j-1}`, with the bottom block belonging to `I_1`.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::{Chain, ChainError};
use crate::cyclo::RootExponent;
use crate::group::{self, GenPerm, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error("generator index {index} out of range for n={n}")]
    GeneratorOutOfRange { index: usize, n: usize },
    #[error("cosets live in different groups")]
    ShapeMismatch,
    #[error("coset inclusion is inconsistent: chain refinement says {by_chains}, elements say {by_elements}")]
    Inconsistent { by_chains: bool, by_elements: bool },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A right coset `⟨s_i : i ∈ gens⟩·rep`, with `rep` kept canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TCosetHandle {
    gens: BTreeSet<usize>,
    rep: GenPerm,
}

impl TCosetHandle {
    /// Builds the coset of any element `rep`, replacing `rep` by the canonical one.
    pub fn new(gens: BTreeSet<usize>, rep: GenPerm) -> Result<Self, CosetError> {
        if let Some(&i) = gens.iter().find(|&&i| i >= rep.n()) {
            return Err(CosetError::GeneratorOutOfRange { index: i, n: rep.n() });
        }
        let raw = TCosetHandle { gens, rep };
        Ok(chain_to_coset(&coset_to_chain(&raw)))
    }

    pub fn gens(&self) -> &BTreeSet<usize> {
        &self.gens
    }

    pub fn rep(&self) -> &GenPerm {
        &self.rep
    }

    pub fn r(&self) -> u32 {
        self.rep.r()
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    /// Number of distinct generators.
    pub fn dimension(&self) -> usize {
        self.gens.len()
    }

    pub fn elements(&self) -> Vec<GenPerm> {
        coset_elements(self)
    }
}

impl<'de> Deserialize<'de> for TCosetHandle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            gens: BTreeSet<usize>,
            rep: GenPerm,
        }
        let raw = Raw::deserialize(d)?;
        TCosetHandle::new(raw.gens, raw.rep).map_err(serde::de::Error::custom)
    }
}

/// Row blocks top-down: `[n] ∖ I_k` first, then `I_k ∖ I_{k-1}`, …, `I_1` at the bottom.
/// Each entry is `(level, rows, columns)`; level 0 is the top block.
fn row_blocks(c: &Chain) -> Vec<(usize, Range<usize>, Vec<usize>)> {
    let n = c.n();
    let gaps = c.gaps();
    let mut out = Vec::with_capacity(gaps.len() + 1);
    let top = n - c.top().len();
    out.push((0, 0..top, c.complement()));
    let mut start = top;
    for (j, gap) in gaps.into_iter().enumerate().rev() {
        let end = start + gap.len();
        out.push((j + 1, start..end, gap));
        start = end;
    }
    out
}

/// Generator indices of `H_I`.
pub fn chain_generators(c: &Chain) -> BTreeSet<usize> {
    let n = c.n();
    let sizes = c.sizes();
    (0..n).filter(|i| !sizes.contains(&(n - i))).collect()
}

/// Canonical `C_I`: within each row block the smallest column goes to the bottom row,
/// proceeding upward; column `i ∈ I_k` carries `ζ^{−a(i)}`, other columns carry 1.
pub fn chain_to_coset(c: &Chain) -> TCosetHandle {
    let n = c.n();
    let r = c.r();
    let mut rows = vec![0; n];
    let mut exps = vec![RootExponent::ZERO; n];
    for (_, block, cols) in row_blocks(c) {
        for (offset, &col) in cols.iter().enumerate() {
            rows[col - 1] = block.end - 1 - offset;
            if let Some(a) = c.decoration_at(col) {
                exps[col - 1] = a.neg(r);
            }
        }
    }
    TCosetHandle {
        gens: chain_generators(c),
        rep: GenPerm::from_parts(r, rows, exps),
    }
}

/// Reads `I_j` as the columns of the last `|I_j|` rows, with `|I_j| = n − j` for each
/// generator index `j` missing from `gens`, and `a(i) = −exp(column i)`.
pub fn coset_to_chain(h: &TCosetHandle) -> Chain {
    let n = h.n();
    let r = h.r();
    let rep = &h.rep;
    let mut sets = Vec::new();
    // ascending sizes: missing indices in descending order
    for j in (0..n).rev().filter(|j| !h.gens.contains(j)) {
        let size = n - j;
        let mut set: Vec<usize> = (0..n)
            .filter(|&c| rep.row_of_col()[c] >= n - size)
            .map(|c| c + 1)
            .collect();
        set.sort_unstable();
        sets.push(set);
    }
    let decoration = sets
        .last()
        .map(|top: &Vec<usize>| {
            top.iter()
                .map(|&i| (i, rep.exp_of_col()[i - 1].neg(r)))
                .collect()
        })
        .unwrap_or_default();
    Chain::from_parts_unchecked(r, n, sets, decoration)
}

type SubgroupKey = (u32, usize, BTreeSet<usize>);

fn subgroup_cache() -> &'static Mutex<HashMap<SubgroupKey, Arc<Vec<GenPerm>>>> {
    static CACHE: OnceLock<Mutex<HashMap<SubgroupKey, Arc<Vec<GenPerm>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `⟨s_i : i ∈ gens⟩`, memoized.
pub fn cached_subgroup(r: u32, n: usize, gens: &BTreeSet<usize>) -> Result<Arc<Vec<GenPerm>>, GroupError> {
    let key = (r, n, gens.clone());
    if let Some(h) = subgroup_cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(h));
    }
    let h = Arc::new(group::generate_subgroup(r, n, gens)?);
    subgroup_cache()
        .lock()
        .unwrap()
        .insert(key, Arc::clone(&h));
    Ok(h)
}

/// `{g·rep : g ∈ ⟨s_i : i ∈ gens⟩}`, sorted.
pub fn coset_elements(h: &TCosetHandle) -> Vec<GenPerm> {
    let sub = cached_subgroup(h.r(), h.n(), &h.gens).expect("handle generators are in range");
    let mut out: Vec<GenPerm> = sub.iter().map(|g| g.mul_unchecked(&h.rep)).collect();
    out.sort();
    out
}

/// `|C_I| = r^m·m!·∏_j |I_j ∖ I_{j-1}|!` with `m = |[n] ∖ I_k|`.
pub fn coset_size_formula(c: &Chain) -> u128 {
    let fact = |m: usize| (1..=m as u128).product::<u128>();
    let m = c.complement().len();
    let mut out = u128::from(c.r()).pow(m as u32) * fact(m);
    for gap in c.gaps() {
        out *= fact(gap.len());
    }
    out
}

/// Inclusion decided by chain refinement.
pub fn coset_subset_by_chains(g: &TCosetHandle, h: &TCosetHandle) -> bool {
    coset_to_chain(g).refines(&coset_to_chain(h))
}

/// Inclusion decided by comparing element sets.
pub fn coset_subset_by_elements(g: &TCosetHandle, h: &TCosetHandle) -> bool {
    let big: BTreeSet<GenPerm> = coset_elements(h).into_iter().collect();
    coset_elements(g).iter().all(|a| big.contains(a))
}

/// `g ⊆ h`, decided both ways; disagreement is reported as an error.
pub fn coset_subset(g: &TCosetHandle, h: &TCosetHandle) -> Result<bool, CosetError> {
    if g.r() != h.r() || g.n() != h.n() {
        return Err(CosetError::ShapeMismatch);
    }
    let by_chains = coset_subset_by_chains(g, h);
    let by_elements = coset_subset_by_elements(g, h);
    if by_chains != by_elements {
        return Err(CosetError::Inconsistent {
            by_chains,
            by_elements,
        });
    }
    Ok(by_chains)
}

/// Whether `a` satisfies both defining conditions of a representative of `C_I`: the last
/// `|I_j|` rows occupy exactly the columns `I_j`, and column `i ∈ I_k` holds `ζ^{−a(i)}`.
pub fn is_coset_representative(c: &Chain, a: &GenPerm) -> bool {
    let n = c.n();
    if a.n() != n || a.r() != c.r() {
        return false;
    }
    let rows_ok = c.sets().iter().all(|set| {
        let cols: Vec<usize> = (0..n)
            .filter(|&b| a.row_of_col()[b] >= n - set.len())
            .map(|b| b + 1)
            .collect();
        &cols == set
    });
    rows_ok
        && c
            .decoration()
            .iter()
            .all(|(&i, e)| a.exp_of_col()[i - 1] == e.neg(c.r()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    /// `S(r, m)`
    Reflection,
    /// `S_m`
    Symmetric,
}

/// One factor of `C_I` under the block embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetFactor {
    /// 0 for the top `S(r, ·)` block, otherwise the chain index `j` of the gap.
    pub level: usize,
    pub kind: GroupKind,
    pub size: usize,
    /// 0-based rows of the block.
    pub rows: Range<usize>,
    /// 1-based columns of the block, ascending.
    pub columns: Vec<usize>,
    /// For symmetric factors, a matrix in `S(r, size)` whose local column `q` holds
    /// `ζ^{−a(columns[q])}`.
    pub translation: Option<GenPerm>,
}

/// Factors top-down: `S(r, |[n] ∖ I_k|)`, then `S_{|I_k ∖ I_{k-1}|}`, …, `S_{|I_1|}`.
pub fn coset_block_decomposition(c: &Chain) -> Vec<CosetFactor> {
    let r = c.r();
    row_blocks(c)
        .into_iter()
        .map(|(level, rows, columns)| {
            let size = columns.len();
            let translation = (level > 0).then(|| {
                let exps = columns
                    .iter()
                    .map(|&i| c.decoration_at(i).expect("gap lies in I_k").neg(r))
                    .collect();
                GenPerm::from_parts(r, (0..size).collect(), exps)
            });
            CosetFactor {
                level,
                kind: if level == 0 {
                    GroupKind::Reflection
                } else {
                    GroupKind::Symmetric
                },
                size,
                rows,
                columns,
                translation,
            }
        })
        .collect()
}

/// Places local matrices into their blocks. Local row `p`, column `q` of factor `f`
/// lands at global row `f.rows.start + p`, column `f.columns[q]`.
pub fn block_embed(r: u32, n: usize, factors: &[CosetFactor], locals: &[GenPerm]) -> GenPerm {
    let mut rows = vec![0; n];
    let mut exps = vec![RootExponent::ZERO; n];
    for (f, m) in factors.iter().zip(locals) {
        for q in 0..f.size {
            let col = f.columns[q] - 1;
            rows[col] = f.rows.start + m.row_of_col()[q];
            exps[col] = m.exp_of_col()[q];
        }
    }
    GenPerm::from_parts(r, rows, exps)
}

/// `Φ_I(S(r, m) × ∏_j S_{m_j}·A_j)`, sorted.
pub fn reassemble_coset(c: &Chain) -> Vec<GenPerm> {
    let r = c.r();
    let factors = coset_block_decomposition(c);
    let choices: Vec<Vec<GenPerm>> = factors
        .iter()
        .map(|f| match &f.translation {
            None => group::enumerate_group(r, f.size).expect("r ≥ 2"),
            Some(t) => group::permutations(f.size)
                .into_iter()
                .map(|p| GenPerm::from_parts(r, p, vec![RootExponent::ZERO; f.size]).mul_unchecked(t))
                .collect(),
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let locals: Vec<GenPerm> = idx.iter().zip(&choices).map(|(&i, ch)| ch[i].clone()).collect();
        out.push(block_embed(r, c.n(), &factors, &locals));
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                out.sort();
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Right action `H·A ↦ H·(A·B)`; generators are unchanged.
pub fn act_on_coset(h: &TCosetHandle, b: &GenPerm) -> Result<TCosetHandle, CosetError> {
    let rep = h.rep.multiply(b)?;
    TCosetHandle::new(h.gens.clone(), rep)
}
