//! Exhaustive cross-checks of the three dictionaries for small `(r, n)`.
//!
//! Objects are interned (group elements, vertices, chains) and compared through
//! bitsets, so the pairwise checks stay cheap. Parallel loops collect their results in
//! index order, so reports are identical for any thread count.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::chains::{enumerate_chains, Chain};
use crate::complex::{
    chain_hyperplanes, chain_to_face_vertices, complex_vertices, face_dimension_bruteforce, face_membership,
    face_product_decomposition, hyperplanes_to_chain, hyperplanes_to_chain_by_ref, DecoratedSubset, FaceFactorKind, YPoint,
};
use crate::cosets::{
    act_on_coset, chain_to_coset, coset_block_decomposition, coset_elements, coset_size_formula, coset_to_chain,
    reassemble_coset, GroupKind, TCosetHandle,
};
use crate::cyclo::on_hyperplane;
use crate::group::{enumerate_group, group_order, GenPerm};
use crate::strata::{
    act_on_zero_dim_stratum, chain_to_stratum, stratum_includes, stratum_product_factors, stratum_to_chain,
    StratumFactorKind,
};

/// Upper bounds on instance size. The defaults cover `r ∈ {2,3,4}, n ≤ 3` and
/// `r ∈ {2,3}, n = 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeCaps {
    /// `|S(r,n)|` for the three-way and product suites.
    pub threeway_group_order: u128,
    /// `|S(r,n)|` for the equivariance suite.
    pub equivariance_group_order: u128,
    /// Number of hyperplane families for the nonemptiness suite.
    pub nonempty_families: u128,
}

impl Default for SizeCaps {
    fn default() -> Self {
        SizeCaps {
            threeway_group_order: 1944,
            equivariance_group_order: 1944,
            nonempty_families: 200_000_000,
        }
    }
}

impl SizeCaps {
    pub fn unlimited() -> Self {
        SizeCaps {
            threeway_group_order: u128::MAX,
            equivariance_group_order: u128::MAX,
            nonempty_families: u128::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("r must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("{suite} at r={r}, n={n} needs {size} {unit}, above the cap {cap}={limit}; rerun with --no-caps to override")]
    CapExceeded {
        suite: &'static str,
        r: u32,
        n: usize,
        cap: &'static str,
        unit: &'static str,
        size: u128,
        limit: u128,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

impl Violation {
    fn new(check: &str, detail: impl Into<String>) -> Self {
        Violation {
            check: check.to_string(),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub r: u32,
    pub n: usize,
    /// Number of objects of each dimension, indexed by dimension.
    pub counts_by_dim: Vec<u64>,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts_by_dim.iter().sum()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<String> = self.counts_by_dim.iter().map(u64::to_string).collect();
        write!(
            f,
            "{} r={} n={}: {} objects, counts by dimension ({}), {} violation(s)",
            self.suite,
            self.r,
            self.n,
            self.total(),
            counts.join(","),
            self.violations.len()
        )?;
        for v in self.violations.iter().take(20) {
            write!(f, "\n  [{}] {}", v.check, v.detail)?;
        }
        if self.violations.len() > 20 {
            write!(f, "\n  ... {} more", self.violations.len() - 20)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn and_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= b;
        }
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

fn check_order(r: u32) -> Result<(), VerifyError> {
    if r < 2 {
        Err(VerifyError::OrderTooSmall(r))
    } else {
        Ok(())
    }
}

fn check_group_cap(suite: &'static str, cap: &'static str, r: u32, n: usize, limit: u128) -> Result<(), VerifyError> {
    let size = group_order(r, n);
    if size > limit {
        return Err(VerifyError::CapExceeded {
            suite,
            r,
            n,
            cap,
            unit: "group elements",
            size,
            limit,
        });
    }
    Ok(())
}

fn counts_by_dim<'a>(n: usize, dims: impl Iterator<Item = usize> + 'a) -> Vec<u64> {
    let mut out = vec![0; n + 1];
    for d in dims {
        out[d] += 1;
    }
    out
}

/// Interned group elements, vertices and chains for one `(r, n)`.
struct Universe {
    group: Vec<GenPerm>,
    group_index: HashMap<GenPerm, usize>,
    vertices: Vec<YPoint>,
    vertex_index: HashMap<YPoint, usize>,
    chains: Vec<Chain>,
}

impl Universe {
    fn new(r: u32, n: usize) -> Self {
        let group = enumerate_group(r, n).expect("r ≥ 2");
        let group_index = group.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let vertices = complex_vertices(r, n).expect("r ≥ 2");
        let vertex_index = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let chains = enumerate_chains(r, n).expect("r ≥ 2");
        Universe {
            group,
            group_index,
            vertices,
            vertex_index,
            chains,
        }
    }

    fn element_bits<'a>(&self, elements: impl IntoIterator<Item = &'a GenPerm>) -> Bits {
        let mut b = Bits::new(self.group.len());
        for g in elements {
            b.set(self.group_index[g]);
        }
        b
    }

    fn vertex_bits<'a>(&self, points: impl IntoIterator<Item = &'a YPoint>) -> Bits {
        let mut b = Bits::new(self.vertices.len());
        for v in points {
            b.set(self.vertex_index[v]);
        }
        b
    }
}

/// Dictionaries for every chain: roundtrips, three dimension counts, and the four-way
/// inclusion equivalence on all ordered pairs.
pub fn verify_threeway(r: u32, n: usize, caps: &SizeCaps) -> Result<Report, VerifyError> {
    check_order(r)?;
    check_group_cap("threeway", "threeway_group_order", r, n, caps.threeway_group_order)?;
    let u = Universe::new(r, n);

    struct Data {
        coset: Bits,
        vertices: Bits,
        stratum: crate::strata::PinwheelStratum,
        violations: Vec<Violation>,
    }

    let data: Vec<Data> = u
        .chains
        .par_iter()
        .map(|c| {
            let mut v = Vec::new();
            let h = chain_to_coset(c);
            if coset_to_chain(&h) != *c {
                v.push(Violation::new("coset-roundtrip", c.to_string()));
            }
            let elements = coset_elements(&h);
            if elements.len() as u128 != coset_size_formula(c) {
                v.push(Violation::new("coset-size", format!("{c}: {} elements", elements.len())));
            }
            let face = chain_to_face_vertices(c);
            if face.is_empty() {
                v.push(Violation::new("face-empty", c.to_string()));
            }
            if let Some(p) = face.iter().find(|p| !face_membership(p, c)) {
                v.push(Violation::new("face-vertex-membership", format!("{c}: {p}")));
            }
            match hyperplanes_to_chain(r, n, &chain_hyperplanes(c)) {
                Ok(Some(back)) if back == *c => {}
                other => v.push(Violation::new("face-roundtrip", format!("{c}: {other:?}"))),
            }
            let s = chain_to_stratum(c);
            if let Err(e) = s.validate() {
                v.push(Violation::new("stratum-valid", format!("{c}: {e}")));
            }
            if stratum_to_chain(&s) != *c {
                v.push(Violation::new("stratum-roundtrip", c.to_string()));
            }
            let dims = [c.dimension(), h.dimension(), face_dimension_bruteforce(c), n - s.k()];
            if dims.iter().any(|&d| d != dims[0]) {
                v.push(Violation::new(
                    "dimension",
                    format!("{c}: chain {} coset {} face {} stratum {}", dims[0], dims[1], dims[2], dims[3]),
                ));
            }
            Data {
                coset: u.element_bits(&elements),
                vertices: u.vertex_bits(&face),
                stratum: s,
                violations: v,
            }
        })
        .collect();

    // dictionaries must be injective; roundtrips already imply it but duplicates would
    // also break the pair checks below
    let mut violations: Vec<Violation> = data.iter().flat_map(|d| d.violations.iter().cloned()).collect();
    let distinct_vertices: BTreeSet<&Bits> = data.iter().map(|d| &d.vertices).collect();
    let distinct_cosets: BTreeSet<&Bits> = data.iter().map(|d| &d.coset).collect();
    if distinct_vertices.len() != data.len() || distinct_cosets.len() != data.len() {
        violations.push(Violation::new(
            "injective",
            format!(
                "{} chains, {} vertex sets, {} cosets",
                data.len(),
                distinct_vertices.len(),
                distinct_cosets.len()
            ),
        ));
    }

    let pairs: Vec<Vec<Violation>> = (0..u.chains.len())
        .into_par_iter()
        .map(|i| {
            let mut v = Vec::new();
            let (ci, di) = (&u.chains[i], &data[i]);
            for (cj, dj) in u.chains.iter().zip(&data) {
                let by_chain = ci.refines(cj);
                let by_coset = di.coset.subset_of(&dj.coset);
                let by_face = di.vertices.subset_of(&dj.vertices);
                let by_stratum = stratum_includes(&di.stratum, &dj.stratum);
                if by_coset != by_chain || by_face != by_chain || by_stratum != by_chain {
                    v.push(Violation::new(
                        "inclusion",
                        format!(
                            "{ci} vs {cj}: refines {by_chain}, coset {by_coset}, face {by_face}, stratum {by_stratum}"
                        ),
                    ));
                }
            }
            v
        })
        .collect();
    violations.extend(pairs.into_iter().flatten());

    Ok(Report {
        suite: "threeway".into(),
        r,
        n,
        counts_by_dim: counts_by_dim(n, u.chains.iter().map(Chain::dimension)),
        violations,
    })
}

/// Right `S(r,n)`-equivariance of all three dictionaries, plus the description of a
/// coset as the matrices carrying `(1, …, n)` into the face.
pub fn verify_equivariance(r: u32, n: usize, caps: &SizeCaps) -> Result<Report, VerifyError> {
    check_order(r)?;
    check_group_cap("equivariance", "equivariance_group_order", r, n, caps.equivariance_group_order)?;
    let u = Universe::new(r, n);
    let g = u.group.len();

    // vertex_image[a][v] = index of v·A
    let vertex_image: Vec<Vec<u32>> = u
        .group
        .par_iter()
        .map(|a| {
            u.vertices
                .iter()
                .map(|v| u.vertex_index[&a.act_on_tuple(v).expect("shapes agree")] as u32)
                .collect()
        })
        .collect();
    // right_mul[a][h] = index of h·A
    let right_mul: Vec<Vec<u32>> = u
        .group
        .par_iter()
        .map(|a| u.group.iter().map(|h| u.group_index[&h.mul_unchecked(a)] as u32).collect())
        .collect();

    let chain_index: HashMap<&Chain, usize> = u.chains.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let handles: Vec<TCosetHandle> = u.chains.iter().map(chain_to_coset).collect();
    let coset_bits: Vec<Bits> = handles.iter().map(|h| u.element_bits(&coset_elements(h))).collect();
    let face_bits: Vec<Bits> = u.chains.iter().map(|c| u.vertex_bits(&chain_to_face_vertices(c))).collect();
    let strata: Vec<_> = u.chains.iter().map(chain_to_stratum).collect();
    let base = u.vertex_index[&YPoint::from_ints(&(1..=n as i64).collect::<Vec<_>>())];

    let per_chain: Vec<Vec<Violation>> = (0..u.chains.len())
        .into_par_iter()
        .map(|ci| {
            let c = &u.chains[ci];
            let mut v = Vec::new();

            let mut carried = Bits::new(g);
            for (ai, image) in vertex_image.iter().enumerate() {
                if face_bits[ci].get(image[base] as usize) {
                    carried.set(ai);
                }
            }
            if carried != coset_bits[ci] {
                v.push(Violation::new("reinterpretation", c.to_string()));
            }

            for (ai, a) in u.group.iter().enumerate() {
                let Some(&di) = c.act(a).ok().as_ref().and_then(|d| chain_index.get(d)) else {
                    v.push(Violation::new("chain-action", format!("{c} by {a}")));
                    continue;
                };
                let mut moved = Bits::new(u.vertices.len());
                for p in face_bits[ci].ones() {
                    moved.set(vertex_image[ai][p] as usize);
                }
                if moved != face_bits[di] {
                    v.push(Violation::new("face-action", format!("{c} by {a}")));
                }
                let mut shifted = Bits::new(g);
                for h in coset_bits[ci].ones() {
                    shifted.set(right_mul[ai][h] as usize);
                }
                if shifted != coset_bits[di] {
                    v.push(Violation::new("coset-elements-action", format!("{c} by {a}")));
                }
                match act_on_coset(&handles[ci], a) {
                    Ok(h) if h == handles[di] => {}
                    other => v.push(Violation::new("coset-action", format!("{c} by {a}: {other:?}"))),
                }
                if c.is_maximal() {
                    match act_on_zero_dim_stratum(&strata[ci], a) {
                        Ok(s) if s == strata[di] => {}
                        other => v.push(Violation::new("stratum-action", format!("{c} by {a}: {other:?}"))),
                    }
                }
            }
            v
        })
        .collect();

    Ok(Report {
        suite: "equivariance".into(),
        r,
        n,
        counts_by_dim: counts_by_dim(n, u.chains.iter().map(Chain::dimension)),
        violations: per_chain.into_iter().flatten().collect(),
    })
}

/// The three product decompositions have the same factor sizes by level, and the
/// coset size and face dimension follow from the factors.
pub fn verify_products(r: u32, n: usize, caps: &SizeCaps) -> Result<Report, VerifyError> {
    check_order(r)?;
    check_group_cap("products", "threeway_group_order", r, n, caps.threeway_group_order)?;
    let chains = enumerate_chains(r, n).expect("r ≥ 2");
    let fact = |m: usize| (1..=m as u128).product::<u128>();

    let per_chain: Vec<Vec<Violation>> = chains
        .par_iter()
        .map(|c| {
            let mut v = Vec::new();
            let mut expected: BTreeMap<usize, usize> = BTreeMap::new();
            expected.insert(0, c.complement().len());
            for (j, gap) in c.gaps().iter().enumerate() {
                expected.insert(j + 1, gap.len());
            }

            let strata = stratum_product_factors(c);
            let cosets = coset_block_decomposition(c);
            let faces = face_product_decomposition(c);
            let by_level = |it: Vec<(usize, usize)>| it.into_iter().collect::<BTreeMap<_, _>>();
            let s_sizes = by_level(strata.iter().map(|f| (f.level, f.size())).collect());
            let c_sizes = by_level(cosets.iter().map(|f| (f.level, f.size)).collect());
            let f_sizes = by_level(faces.iter().map(|f| (f.level, f.size())).collect());
            if s_sizes != expected || c_sizes != expected || f_sizes != expected {
                v.push(Violation::new(
                    "factor-sizes",
                    format!("{c}: expected {expected:?}, strata {s_sizes:?}, cosets {c_sizes:?}, faces {f_sizes:?}"),
                ));
            }
            let kinds_ok = strata.iter().all(|f| {
                matches!(
                    (f.level, f.kind),
                    (0, StratumFactorKind::Pinwheel { .. }) | (1.., StratumFactorKind::LosevManin { .. })
                )
            }) && cosets.iter().all(|f| (f.level == 0) == (f.kind == GroupKind::Reflection))
                && faces
                    .iter()
                    .all(|f| (f.level == 0) == matches!(f.kind, FaceFactorKind::Complex { .. }));
            if !kinds_ok {
                v.push(Violation::new("factor-kinds", c.to_string()));
            }

            let by_factors: u128 = cosets
                .iter()
                .map(|f| match f.kind {
                    GroupKind::Reflection => u128::from(r).pow(f.size as u32) * fact(f.size),
                    GroupKind::Symmetric => fact(f.size),
                })
                .product();
            let elements = coset_elements(&chain_to_coset(c));
            if elements.len() as u128 != by_factors || coset_size_formula(c) != by_factors {
                v.push(Violation::new(
                    "coset-size",
                    format!("{c}: {} elements, factors give {by_factors}", elements.len()),
                ));
            }
            if reassemble_coset(c) != elements {
                v.push(Violation::new("coset-reassembly", c.to_string()));
            }

            let face_dim: usize = faces.iter().map(|f| f.dimension()).sum();
            let stratum_dim: usize = strata
                .iter()
                .map(|f| match f.kind {
                    StratumFactorKind::Pinwheel { m, .. } => m,
                    StratumFactorKind::LosevManin { m } => m - 1,
                })
                .sum();
            let brute = face_dimension_bruteforce(c);
            if face_dim != brute || stratum_dim != c.dimension() || brute != c.dimension() {
                v.push(Violation::new(
                    "factor-dimension",
                    format!("{c}: face factors {face_dim}, measured {brute}, stratum factors {stratum_dim}"),
                ));
            }
            v
        })
        .collect();

    Ok(Report {
        suite: "products".into(),
        r,
        n,
        counts_by_dim: counts_by_dim(n, chains.iter().map(Chain::dimension)),
        violations: per_chain.into_iter().flatten().collect(),
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of families of at most `n` distinct decorated subsets.
pub fn family_count(r: u32, n: usize) -> u128 {
    let subsets = u128::from(r + 1).pow(n as u32) - 1;
    (0..=n as u128).map(|s| binomial(subsets, s)).sum()
}

/// For every family of at most `n` distinct decorated subsets: the combinatorial test
/// finds a chain exactly when some vertex lies on all the hyperplanes, and then the
/// vertices on all of them are those of the chain's face.
pub fn verify_nonemptiness(r: u32, n: usize, caps: &SizeCaps) -> Result<Report, VerifyError> {
    check_order(r)?;
    let families = family_count(r, n);
    if families > caps.nonempty_families {
        return Err(VerifyError::CapExceeded {
            suite: "nonempty",
            r,
            n,
            cap: "nonempty_families",
            unit: "hyperplane families",
            size: families,
            limit: caps.nonempty_families,
        });
    }
    let vertices = complex_vertices(r, n).expect("r ≥ 2");
    let vertex_index: HashMap<&YPoint, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let subsets = DecoratedSubset::enumerate(r, n);
    let on: Vec<Bits> = subsets
        .par_iter()
        .map(|s| {
            let mut b = Bits::new(vertices.len());
            for (i, v) in vertices.iter().enumerate() {
                if on_hyperplane(v, s, r).expect("r ≥ 2") {
                    b.set(i);
                }
            }
            b
        })
        .collect();
    let mut all = Bits::new(vertices.len());
    for i in 0..vertices.len() {
        all.set(i);
    }

    let check = |family: &[usize]| -> (Option<usize>, Option<Violation>) {
        let mut meet = all.clone();
        for &i in family {
            meet.and_assign(&on[i]);
        }
        let refs: Vec<&DecoratedSubset> = family.iter().map(|&i| &subsets[i]).collect();
        let chain = match hyperplanes_to_chain_by_ref(r, n, &refs) {
            Ok(c) => c,
            Err(e) => return (None, Some(Violation::new("hyperplanes-error", e.to_string()))),
        };
        let label = || refs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        match chain {
            None if meet.is_empty() => (None, None),
            None => (None, Some(Violation::new("nonempty", format!("[{}]: no chain but a vertex", label())))),
            Some(c) if meet.is_empty() => {
                (None, Some(Violation::new("nonempty", format!("[{}]: chain {c} but no vertex", label()))))
            }
            Some(c) => {
                let mut face = Bits::new(vertices.len());
                for p in chain_to_face_vertices(&c) {
                    face.set(vertex_index[&p]);
                }
                let v = (face != meet).then(|| Violation::new("face-vertices", format!("[{}]: {c}", label())));
                (Some(c.dimension()), v)
            }
        }
    };

    // families grouped by their smallest member; the empty family goes first
    type Tally = (Vec<u64>, Vec<Violation>);
    let tally = |acc: &mut Tally, (dim, v): (Option<usize>, Option<Violation>)| {
        if let Some(d) = dim {
            acc.0[d] += 1;
        }
        acc.1.extend(v);
    };
    let mut total: Tally = (vec![0; n + 1], Vec::new());
    tally(&mut total, check(&[]));
    let grouped: Vec<Tally> = (0..subsets.len())
        .into_par_iter()
        .map(|first| {
            let mut acc: Tally = (vec![0; n + 1], Vec::new());
            let mut family = vec![first];
            extend_families(&mut family, subsets.len(), n, &mut |f| tally(&mut acc, check(f)));
            acc
        })
        .collect();
    for (c, v) in grouped {
        for (t, x) in total.0.iter_mut().zip(c) {
            *t += x;
        }
        total.1.extend(v);
    }
    let (counts, violations) = total;
    Ok(Report {
        suite: "nonempty".into(),
        r,
        n,
        counts_by_dim: counts,
        violations,
    })
}

/// Visits `family` and every extension by larger indices up to `max_len` members.
fn extend_families(family: &mut Vec<usize>, total: usize, max_len: usize, visit: &mut impl FnMut(&[usize])) {
    if family.len() > max_len {
        return;
    }
    visit(family);
    let start = family.last().map_or(0, |&l| l + 1);
    for next in start..total {
        family.push(next);
        extend_families(family, total, max_len, visit);
        family.pop();
    }
}

pub const SUITES: [&str; 4] = ["threeway", "equivariance", "products", "nonempty"];

/// Runs one suite by name.
pub fn run_suite(name: &str, r: u32, n: usize, caps: &SizeCaps) -> Option<Result<Report, VerifyError>> {
    Some(match name {
        "threeway" => verify_threeway(r, n, caps),
        "equivariance" => verify_equivariance(r, n, caps),
        "products" => verify_products(r, n, caps),
        "nonempty" => verify_nonemptiness(r, n, caps),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octagon_threeway() {
        let rep = verify_threeway(2, 2, &SizeCaps::default()).unwrap();
        assert_eq!(rep.counts_by_dim, vec![8, 8, 1]);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn tripod_threeway() {
        let rep = verify_threeway(3, 2, &SizeCaps::default()).unwrap();
        assert_eq!(rep.counts_by_dim, vec![18, 15, 1]);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn trivial_instances() {
        for r in [2, 3] {
            let rep = verify_threeway(r, 0, &SizeCaps::default()).unwrap();
            assert_eq!(rep.counts_by_dim, vec![1]);
            assert!(rep.passed());
            assert!(verify_equivariance(r, 0, &SizeCaps::default()).unwrap().passed());
            assert!(verify_products(r, 0, &SizeCaps::default()).unwrap().passed());
            assert!(verify_nonemptiness(r, 0, &SizeCaps::default()).unwrap().passed());
        }
    }

    #[test]
    fn small_suites_pass() {
        for (r, n) in [(2, 1), (2, 2), (3, 2), (4, 1)] {
            for name in SUITES {
                let rep = run_suite(name, r, n, &SizeCaps::default()).unwrap().unwrap();
                assert!(rep.passed(), "{rep}");
            }
        }
    }

    #[test]
    fn nonempty_counts_faces_with_multiplicity() {
        let rep = verify_nonemptiness(2, 2, &SizeCaps::default()).unwrap();
        assert!(rep.passed(), "{rep}");
        // a nonempty family is exactly the hyperplane family of one chain
        assert_eq!(rep.counts_by_dim, vec![8, 8, 1]);
        assert_eq!(family_count(2, 2), 1 + 8 + 28);
    }

    #[test]
    fn caps_are_enforced() {
        let tight = SizeCaps {
            threeway_group_order: 7,
            equivariance_group_order: 7,
            nonempty_families: 10,
        };
        for name in SUITES {
            let err = run_suite(name, 2, 2, &tight).unwrap().unwrap_err();
            assert!(matches!(err, VerifyError::CapExceeded { .. }));
            assert!(err.to_string().contains("--no-caps"));
        }
        assert!(run_suite("bogus", 2, 2, &tight).is_none());
        assert!(matches!(
            verify_threeway(1, 2, &SizeCaps::default()),
            Err(VerifyError::OrderTooSmall(1))
        ));
    }

    #[test]
    fn report_json_shape() {
        let rep = verify_products(2, 1, &SizeCaps::default()).unwrap();
        let j = serde_json::to_string(&rep).unwrap();
        assert_eq!(j, r#"{"suite":"products","r":2,"n":1,"counts_by_dim":[2,1],"violations":[]}"#);
    }
}
