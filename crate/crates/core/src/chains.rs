//! Decorated nested chains `I_1 ⊊ … ⊊ I_k ⊆ [n]` with a decoration `a: I_k → Z_r`.
//!
//! Sets hold 1-based labels, sorted ascending. The derived order is the enumeration
//! order: length first, then the list of sets, then the decoration.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cyclo::RootExponent;
use crate::group::{GenPerm, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("r must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("element {element} outside [1, {n}]")]
    OutOfRange { element: usize, n: usize },
    #[error("set {index} is empty")]
    EmptySet { index: usize },
    #[error("set {index} repeats element {element}")]
    RepeatedElement { index: usize, element: usize },
    #[error("set {index} is not a proper superset of set {prev}")]
    NotNested { index: usize, prev: usize },
    #[error("decoration is defined on {got:?} but the largest set is {expected:?}")]
    DecorationDomain { got: Vec<usize>, expected: Vec<usize> },
    #[error("decoration value {value} for element {element} is not below r={r}")]
    DecorationValue { element: usize, value: u32, r: u32 },
    #[error("chain of length {k} is not maximal for n={n}")]
    NotMaximal { k: usize, n: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    r: u32,
    n: usize,
    sets: Vec<Vec<usize>>,
    decoration: BTreeMap<usize, RootExponent>,
}

impl Chain {
    /// Validates and builds a chain. Each set is sorted; decoration values must be `< r`.
    pub fn new(
        r: u32,
        n: usize,
        sets: Vec<Vec<usize>>,
        decoration: BTreeMap<usize, RootExponent>,
    ) -> Result<Self, ChainError> {
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        let c = Chain {
            r,
            n,
            sets,
            decoration,
        };
        c.validate()?;
        Ok(c)
    }

    /// Convenience constructor from `(element, exponent)` pairs; exponents are reduced mod `r`.
    pub fn from_pairs(
        r: u32,
        n: usize,
        sets: Vec<Vec<usize>>,
        decoration: &[(usize, i64)],
    ) -> Result<Self, ChainError> {
        let dec = decoration
            .iter()
            .map(|&(i, e)| (i, RootExponent::new(e, r)))
            .collect();
        Chain::new(r, n, sets, dec)
    }

    /// The unique chain of length 0.
    pub fn empty(r: u32, n: usize) -> Result<Self, ChainError> {
        Chain::new(r, n, Vec::new(), BTreeMap::new())
    }

    pub(crate) fn from_parts_unchecked(
        r: u32,
        n: usize,
        sets: Vec<Vec<usize>>,
        decoration: BTreeMap<usize, RootExponent>,
    ) -> Self {
        let c = Chain {
            r,
            n,
            sets,
            decoration,
        };
        debug_assert_eq!(c.validate(), Ok(()));
        c
    }

    pub fn validate(&self) -> Result<(), ChainError> {
        if self.r < 2 {
            return Err(ChainError::OrderTooSmall(self.r));
        }
        for (idx, set) in self.sets.iter().enumerate() {
            if set.is_empty() {
                return Err(ChainError::EmptySet { index: idx + 1 });
            }
            for w in set.windows(2) {
                if w[0] == w[1] {
                    return Err(ChainError::RepeatedElement {
                        index: idx + 1,
                        element: w[0],
                    });
                }
            }
            if let Some(&e) = set.iter().find(|&&e| e == 0 || e > self.n) {
                return Err(ChainError::OutOfRange {
                    element: e,
                    n: self.n,
                });
            }
            if idx > 0 {
                let prev = &self.sets[idx - 1];
                let proper = prev.len() < set.len() && prev.iter().all(|e| set.binary_search(e).is_ok());
                if !proper {
                    return Err(ChainError::NotNested {
                        index: idx + 1,
                        prev: idx,
                    });
                }
            }
        }
        let top: &[usize] = self.sets.last().map_or(&[], |s| s.as_slice());
        if !self.decoration.keys().copied().eq(top.iter().copied()) {
            return Err(ChainError::DecorationDomain {
                got: self.decoration.keys().copied().collect(),
                expected: top.to_vec(),
            });
        }
        for (&i, e) in &self.decoration {
            if e.value() >= self.r {
                return Err(ChainError::DecorationValue {
                    element: i,
                    value: e.value(),
                    r: self.r,
                });
            }
        }
        Ok(())
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn is_maximal(&self) -> bool {
        self.sets.len() == self.n
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn decoration(&self) -> &BTreeMap<usize, RootExponent> {
        &self.decoration
    }

    /// `I_k`, empty for the length-0 chain.
    pub fn top(&self) -> &[usize] {
        self.sets.last().map_or(&[], |s| s.as_slice())
    }

    /// `[n] ∖ I_k`, ascending.
    pub fn complement(&self) -> Vec<usize> {
        let top = self.top();
        (1..=self.n).filter(|i| top.binary_search(i).is_err()).collect()
    }

    /// `I_j ∖ I_{j-1}` for `j = 1..=k`, each ascending.
    pub fn gaps(&self) -> Vec<Vec<usize>> {
        let mut prev: &[usize] = &[];
        let mut out = Vec::with_capacity(self.sets.len());
        for s in &self.sets {
            out.push(s.iter().copied().filter(|e| prev.binary_search(e).is_err()).collect());
            prev = s;
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    /// Decoration value at `i`, if `i ∈ I_k`.
    pub fn decoration_at(&self, i: usize) -> Option<RootExponent> {
        self.decoration.get(&i).copied()
    }

    /// Whether `self` refines `other`: every set of `other` is a set of `self`, and the
    /// decoration of `other` is the restriction of that of `self`.
    pub fn refines(&self, other: &Chain) -> bool {
        if self.r != other.r || self.n != other.n || other.sets.len() > self.sets.len() {
            return false;
        }
        // sets in a chain have distinct sizes, so match by size
        let sets_ok = other.sets.iter().all(|js| {
            self.sets
                .iter()
                .find(|is| is.len() == js.len())
                .is_some_and(|is| is == js)
        });
        sets_ok
            && other
                .decoration
                .iter()
                .all(|(i, b)| self.decoration.get(i) == Some(b))
    }

    pub fn dimension(&self) -> usize {
        self.n - self.sets.len()
    }

    /// Right action: `I'_j = {ℓ : A_{iℓ} ≠ 0 for some i ∈ I_j}` and
    /// `a'(ℓ) = a(i) − m_{iℓ}` where `A_{iℓ} = ζ^{m_{iℓ}}`.
    pub fn act(&self, a: &GenPerm) -> Result<Chain, ChainError> {
        if a.r() != self.r || a.n() != self.n {
            return Err(GroupError::ShapeMismatch {
                r1: self.r,
                n1: self.n,
                r2: a.r(),
                n2: a.n(),
            }
            .into());
        }
        let rows = a.row_of_col();
        let exps = a.exp_of_col();
        let sets = self
            .sets
            .iter()
            .map(|s| {
                (1..=self.n)
                    .filter(|&l| s.binary_search(&(rows[l - 1] + 1)).is_ok())
                    .collect()
            })
            .collect();
        let mut decoration = BTreeMap::new();
        for l in 1..=self.n {
            if let Some(e) = self.decoration.get(&(rows[l - 1] + 1)) {
                decoration.insert(l, e.sub(exps[l - 1], self.r));
            }
        }
        Ok(Chain::from_parts_unchecked(self.r, self.n, sets, decoration))
    }

    /// The ordered labels `(i_1, …, i_n)` of a maximal chain, `I_j = {i_1, …, i_j}`.
    pub fn maximal_order(&self) -> Result<Vec<usize>, ChainError> {
        if !self.is_maximal() {
            return Err(ChainError::NotMaximal {
                k: self.len(),
                n: self.n,
            });
        }
        Ok(self.gaps().into_iter().map(|g| g[0]).collect())
    }

    /// The maximal chain with `I_j = {order[0], …, order[j-1]}`.
    pub(crate) fn maximal_from_order(
        r: u32,
        order: &[usize],
        decoration: BTreeMap<usize, RootExponent>,
    ) -> Chain {
        let mut sets = Vec::with_capacity(order.len());
        let mut cur: Vec<usize> = Vec::with_capacity(order.len());
        for &i in order {
            let pos = cur.binary_search(&i).unwrap_err();
            cur.insert(pos, i);
            sets.push(cur.clone());
        }
        Chain::from_parts_unchecked(r, order.len(), sets, decoration)
    }

    /// All maximal chains refining `self`: orderings of each gap, then orderings of
    /// `[n] ∖ I_k` with every decoration on it.
    pub fn maximal_refinements(&self) -> Vec<Chain> {
        let mut blocks = self.gaps();
        let rest = self.complement();
        let mut orders: Vec<Vec<usize>> = vec![Vec::new()];
        blocks.push(rest.clone());
        for block in &blocks {
            let perms: Vec<Vec<usize>> = block.iter().copied().permutations(block.len()).collect();
            orders = orders
                .into_iter()
                .flat_map(|o| {
                    perms.iter().map(move |p| {
                        let mut o = o.clone();
                        o.extend_from_slice(p);
                        o
                    })
                })
                .collect();
        }
        let words = crate::group::exponent_words(self.r, rest.len());
        let mut out = Vec::with_capacity(orders.len() * words.len());
        for o in &orders {
            for w in &words {
                let mut dec = self.decoration.clone();
                dec.extend(rest.iter().copied().zip(w.iter().copied()));
                out.push(Chain::maximal_from_order(self.r, o, dec));
            }
        }
        out
    }
}

impl PartialOrd for Chain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Chain {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.r, self.n, self.sets.len(), &self.sets, &self.decoration).cmp(&(
            other.r,
            other.n,
            other.sets.len(),
            &other.sets,
            &other.decoration,
        ))
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets = self
            .sets
            .iter()
            .map(|s| format!("{{{}}}", s.iter().join(",")))
            .join(", ");
        let dec = self
            .decoration
            .iter()
            .map(|(i, e)| format!("{i}:{}", e.value()))
            .join(",");
        write!(f, "({sets}; a={{{dec}}})")
    }
}

/// All chains of `[n]` with decorations in `Z_r`, in the deterministic order.
pub fn enumerate_chains(r: u32, n: usize) -> Result<Vec<Chain>, ChainError> {
    if r < 2 {
        return Err(ChainError::OrderTooSmall(r));
    }
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut set_chains: Vec<Vec<u32>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for ch in &frontier {
            let last = ch.last().copied().unwrap_or(0);
            // proper supersets of `last` inside [n]
            let free = full & !last;
            let mut sub = free;
            while sub != 0 {
                let mut ext = ch.clone();
                ext.push(last | sub);
                next.push(ext);
                sub = (sub - 1) & free;
            }
        }
        set_chains.extend(next.iter().cloned());
        frontier = next;
    }
    let mask_to_set = |m: u32| -> Vec<usize> { (0..n).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect() };
    let mut out = Vec::new();
    for masks in set_chains {
        let sets: Vec<Vec<usize>> = masks.iter().map(|&m| mask_to_set(m)).collect();
        let top = sets.last().cloned().unwrap_or_default();
        for w in crate::group::exponent_words(r, top.len()) {
            let dec = top.iter().copied().zip(w).collect();
            out.push(Chain::from_parts_unchecked(r, n, sets.clone(), dec));
        }
    }
    out.sort();
    Ok(out)
}

/// All chains of length `n`.
pub fn enumerate_maximal_chains(r: u32, n: usize) -> Result<Vec<Chain>, ChainError> {
    Ok(Chain::empty(r, n)?.maximal_refinements().into_iter().sorted().collect())
}

#[derive(Serialize, Deserialize)]
struct ChainJson {
    r: u32,
    n: usize,
    sets: Vec<Vec<usize>>,
    decoration: BTreeMap<usize, u32>,
}

impl Serialize for Chain {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ChainJson {
            r: self.r,
            n: self.n,
            sets: self.sets.clone(),
            decoration: self.decoration.iter().map(|(&i, e)| (i, e.value())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ChainJson::deserialize(d)?;
        let c = Chain {
            r: j.r,
            n: j.n,
            sets: j
                .sets
                .into_iter()
                .map(|mut s| {
                    s.sort_unstable();
                    s
                })
                .collect(),
            decoration: j.decoration.into_iter().map(|(i, e)| (i, RootExponent::raw(e))).collect(),
        };
        c.validate().map_err(D::Error::custom)?;
        Ok(c)
    }
}
