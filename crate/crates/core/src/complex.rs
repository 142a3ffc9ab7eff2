//! The `r`-permutohedral complex `Δ^r_n ⊆ 𝖸^n` and its Δ-faces.
//!
//! `𝖸` is the union of the `r` rays `ℝ^{≥0}·ζ^e`; a point stores per coordinate a
//! nonnegative rational magnitude and a branch. `Δ^r_n` is cut out by
//! `Σ_{i∈I} |x_i| ≤ δ^n_{|I|}` for all `I ⊆ [n]`, and the Δ-face of a chain is its
//! intersection with the hyperplanes `Σ_{i∈I_j} ζ^{a(i)}·x_i = δ^n_{|I_j|}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::chains::{enumerate_maximal_chains, Chain, ChainError};
use crate::cyclo::{on_hyperplane, CycloError, RootExponent};
use crate::group::{group_order, GenPerm, GroupError};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("negative magnitude {0}")]
    NegativeMagnitude(Rational),
    #[error("branch {branch} is not below r={r}")]
    BranchOutOfRange { branch: u32, r: u32 },
    #[error("decorated subset is empty")]
    EmptySubset,
    #[error("decorated subset repeats element {0}")]
    RepeatedElement(usize),
    #[error("decoration is defined on {got:?} but the set is {expected:?}")]
    DecorationDomain { got: Vec<usize>, expected: Vec<usize> },
    #[error("element {element} outside [1, {n}]")]
    OutOfRange { element: usize, n: usize },
    #[error("decorated subset listed twice: {0}")]
    DuplicateSubset(String),
    #[error("k={k} exceeds n={n}")]
    DeltaRange { n: usize, k: usize },
    #[error("{what} needs {size} items, above the cap of {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },
    #[error("image of the vertex set does not match the vertices of the image chain {0}")]
    VertexMismatch(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One coordinate of a point of `𝖸^n`: `mag·ζ^branch`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YCoord {
    pub mag: Rational,
    pub branch: RootExponent,
}

impl YCoord {
    /// Rejects negative magnitudes; a zero magnitude gets branch 0.
    pub fn new(mag: Rational, branch: RootExponent) -> Result<Self, ComplexError> {
        if mag.is_negative() {
            return Err(ComplexError::NegativeMagnitude(mag));
        }
        let branch = if mag.is_zero() { RootExponent::ZERO } else { branch };
        Ok(YCoord { mag, branch })
    }

    pub fn zero() -> Self {
        YCoord {
            mag: Rational::zero(),
            branch: RootExponent::ZERO,
        }
    }
}

/// A point of `𝖸^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YPoint {
    coords: Vec<YCoord>,
}

impl YPoint {
    /// Normalizes zero-magnitude coordinates to branch 0.
    ///
    /// # Panics
    /// On a negative magnitude; use [`YCoord::new`] to validate first.
    pub fn new(mut coords: Vec<YCoord>) -> Self {
        for c in &mut coords {
            assert!(!c.mag.is_negative(), "negative magnitude {}", c.mag);
            if c.mag.is_zero() {
                c.branch = RootExponent::ZERO;
            }
        }
        YPoint { coords }
    }

    /// A point on the branch-0 rays.
    pub fn from_ints(mags: &[i64]) -> Self {
        YPoint::new(
            mags.iter()
                .map(|&m| YCoord {
                    mag: int(m),
                    branch: RootExponent::ZERO,
                })
                .collect(),
        )
    }

    /// From `(magnitude, branch)` pairs, branches reduced mod `r`.
    pub fn from_pairs(pairs: &[(i64, i64)], r: u32) -> Result<Self, ComplexError> {
        let coords = pairs
            .iter()
            .map(|&(m, b)| YCoord::new(int(m), RootExponent::new(b, r)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(YPoint::new(coords))
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[YCoord] {
        &self.coords
    }

    pub fn magnitudes(&self) -> Vec<Rational> {
        self.coords.iter().map(|c| c.mag.clone()).collect()
    }

    pub fn check_branches(&self, r: u32) -> Result<(), ComplexError> {
        match self.coords.iter().find(|c| c.branch.value() >= r) {
            Some(c) => Err(ComplexError::BranchOutOfRange {
                branch: c.branch.value(),
                r,
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for YPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match c.branch.value() {
                _ if c.mag.is_zero() => write!(f, "0")?,
                0 => write!(f, "{}", c.mag)?,
                b => {
                    if !c.mag.is_one() {
                        write!(f, "{}", c.mag)?;
                    }
                    match b {
                        1 => write!(f, "z")?,
                        _ => write!(f, "z^{b}")?,
                    }
                }
            }
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct CoordJson {
    #[serde(with = "crate::rational::pair")]
    mag: Rational,
    branch: u32,
}

#[derive(Serialize, Deserialize)]
struct PointJson {
    coords: Vec<CoordJson>,
}

impl Serialize for YPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PointJson {
            coords: self
                .coords
                .iter()
                .map(|c| CoordJson {
                    mag: c.mag.clone(),
                    branch: c.branch.value(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for YPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PointJson::deserialize(d)?;
        let coords = j
            .coords
            .into_iter()
            .map(|c| YCoord::new(c.mag, RootExponent::raw(c.branch)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(YPoint::new(coords))
    }
}

/// `(I, a)` with `I ⊆ [n]` nonempty and `a: I → Z_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedSubset {
    pub set: Vec<usize>,
    pub decoration: BTreeMap<usize, RootExponent>,
}

impl DecoratedSubset {
    pub fn new(mut set: Vec<usize>, decoration: BTreeMap<usize, RootExponent>) -> Result<Self, ComplexError> {
        set.sort_unstable();
        if set.is_empty() {
            return Err(ComplexError::EmptySubset);
        }
        if let Some(w) = set.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::RepeatedElement(w[0]));
        }
        if !decoration.keys().eq(set.iter()) {
            return Err(ComplexError::DecorationDomain {
                got: decoration.keys().copied().collect(),
                expected: set,
            });
        }
        Ok(DecoratedSubset { set, decoration })
    }

    /// Every decorated subset of `[n]` over `Z_r`, ordered by size, then set, then decoration.
    pub fn enumerate(r: u32, n: usize) -> Vec<DecoratedSubset> {
        let mut out = Vec::new();
        for mask in 1u32..(1u32 << n) {
            let set: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
            for w in crate::group::exponent_words(r, set.len()) {
                out.push(DecoratedSubset {
                    decoration: set.iter().copied().zip(w).collect(),
                    set: set.clone(),
                });
            }
        }
        out.sort_by(|a, b| (a.set.len(), a).cmp(&(b.set.len(), b)));
        out
    }
}

impl fmt::Display for DecoratedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .decoration
            .iter()
            .map(|(i, e)| format!("{i}:{}", e.value()))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `δ^n_k = n + (n−1) + ⋯ + (n−k+1)`.
pub fn checked_delta(n: usize, k: usize) -> Result<Rational, ComplexError> {
    if k > n {
        return Err(ComplexError::DeltaRange { n, k });
    }
    let (n, k) = (n as i64, k as i64);
    Ok(int(k * n - k * (k - 1) / 2))
}

/// `δ^n_k`.
///
/// # Panics
/// If `k > n`.
pub fn delta(n: usize, k: usize) -> Rational {
    checked_delta(n, k).expect("k ≤ n")
}

/// The decorated subsets `(I_j, a|_{I_j})` whose hyperplanes cut out the face of `c`.
pub fn chain_hyperplanes(c: &Chain) -> Vec<DecoratedSubset> {
    c.sets()
        .iter()
        .map(|s| DecoratedSubset {
            set: s.clone(),
            decoration: s.iter().map(|&i| (i, c.decoration_at(i).expect("I_j ⊆ I_k"))).collect(),
        })
        .collect()
}

/// For a maximal chain `I_j = {i_1, …, i_j}`: `x_{i_j} = ζ^{−a(i_j)}·(n+1−j)`.
pub fn vertex_of_maximal_chain(c: &Chain) -> Result<YPoint, ComplexError> {
    let order = c.maximal_order()?;
    let n = c.n();
    let mut coords = vec![YCoord::zero(); n];
    for (j, &i) in order.iter().enumerate() {
        let a = c.decoration_at(i).expect("maximal chain is fully decorated");
        coords[i - 1] = YCoord {
            mag: int((n - j) as i64),
            branch: a.neg(c.r()),
        };
    }
    Ok(YPoint::new(coords))
}

/// Vertices of `F_c`: the vertices of all maximal refinements of `c`.
pub fn chain_to_face_vertices(c: &Chain) -> BTreeSet<YPoint> {
    c.maximal_refinements()
        .iter()
        .map(|m| vertex_of_maximal_chain(m).expect("refinement is maximal"))
        .collect()
}

/// All `r^n·n!` vertices of `Δ^r_n`, one per maximal chain (in chain order).
pub fn complex_vertices(r: u32, n: usize) -> Result<Vec<YPoint>, ComplexError> {
    Ok(enumerate_maximal_chains(r, n)?
        .iter()
        .map(|m| vertex_of_maximal_chain(m).expect("maximal"))
        .collect())
}

/// Whether nonnegative `mags` satisfy `Σ_{i∈I} mags_i ≤ δ^m_{|I|} + |I|·γ` for every `I`.
/// The bound only depends on `|I|`, so it suffices to test the largest `|I|` entries.
fn top_sums_bounded(mags: &[Rational], gamma: &Rational) -> bool {
    let m = mags.len();
    let mut sorted: Vec<&Rational> = mags.iter().collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut acc = Rational::zero();
    for (k, x) in sorted.into_iter().enumerate() {
        acc += x;
        if acc > delta(m, k + 1) + gamma * int(k as i64 + 1) {
            return false;
        }
    }
    true
}

/// `Σ_{i∈I} |x_i| ≤ δ^n_{|I|}` for all `I ⊆ [n]`.
pub fn point_in_complex(x: &YPoint) -> bool {
    top_sums_bounded(&x.magnitudes(), &Rational::zero())
}

/// Conditions C1–C3: `x ∈ Δ^r_n`; `x_i ∈ ℝ^{≥0}·ζ^{−a(i)}` on `I_k`; and
/// `Σ_{i∈I_j} |x_i| = δ^n_{|I_j|}` for every `j`.
pub fn face_membership(x: &YPoint, c: &Chain) -> bool {
    if x.len() != c.n() || !point_in_complex(x) {
        return false;
    }
    let r = c.r();
    let branches_ok = c.decoration().iter().all(|(&i, a)| {
        let xi = &x.coords()[i - 1];
        xi.mag.is_zero() || xi.branch == a.neg(r)
    });
    branches_ok
        && c.sets().iter().all(|s| {
            let sum: Rational = s.iter().map(|&i| x.coords()[i - 1].mag.clone()).sum();
            sum == delta(c.n(), s.len())
        })
}

/// `Π_m + γ`: `Σ_{i∈I} x_i ≤ δ^m_{|I|} + |I|·γ` for proper `I`, with equality at `I = [m]`.
pub fn shifted_permutohedron_contains(xs: &[Rational], gamma: &Rational) -> bool {
    let m = xs.len();
    let total: Rational = xs.iter().sum();
    total == delta(m, m) + gamma * int(m as i64) && top_sums_bounded(xs, gamma)
}

/// Conditions C1′–C3′: the coordinates off `I_k` lie in `Δ^r_{|[n]∖I_k|}`, branches as in
/// C2, and the magnitudes on each `I_j ∖ I_{j-1}` lie in `Π_{|I_j∖I_{j-1}|} + |[n]∖I_j|`.
pub fn face_membership_product_form(x: &YPoint, c: &Chain) -> bool {
    let n = c.n();
    if x.len() != n {
        return false;
    }
    let mag = |i: usize| x.coords()[i - 1].mag.clone();
    let rest: Vec<Rational> = c.complement().into_iter().map(mag).collect();
    if !top_sums_bounded(&rest, &Rational::zero()) {
        return false;
    }
    let r = c.r();
    let branches_ok = c.decoration().iter().all(|(&i, a)| {
        let xi = &x.coords()[i - 1];
        xi.mag.is_zero() || xi.branch == a.neg(r)
    });
    branches_ok
        && c.sets().iter().zip(c.gaps()).all(|(set, gap)| {
            let gamma = int((n - set.len()) as i64);
            let block: Vec<Rational> = gap.into_iter().map(mag).collect();
            shifted_permutohedron_contains(&block, &gamma)
        })
}

/// The chain cut out by a family of hyperplanes when the sets are totally ordered by
/// inclusion and every decoration agrees with that of the largest set; `None` when the
/// intersection with `Δ^r_n` is empty.
pub fn hyperplanes_to_chain(r: u32, n: usize, subsets: &[DecoratedSubset]) -> Result<Option<Chain>, ComplexError> {
    let refs: Vec<&DecoratedSubset> = subsets.iter().collect();
    hyperplanes_to_chain_by_ref(r, n, &refs)
}

/// [`hyperplanes_to_chain`] without cloning the family.
pub fn hyperplanes_to_chain_by_ref(r: u32, n: usize, subsets: &[&DecoratedSubset]) -> Result<Option<Chain>, ComplexError> {
    for (i, s) in subsets.iter().enumerate() {
        if let Some(&e) = s.set.iter().find(|&&e| e == 0 || e > n) {
            return Err(ComplexError::OutOfRange { element: e, n });
        }
        if subsets[..i].contains(s) {
            return Err(ComplexError::DuplicateSubset(s.to_string()));
        }
    }
    let mut sorted: Vec<&DecoratedSubset> = subsets.to_vec();
    sorted.sort_by_key(|s| s.set.len());
    for w in sorted.windows(2) {
        let (small, big) = (&w[0].set, &w[1].set);
        if small.len() == big.len() || !small.iter().all(|e| big.binary_search(e).is_ok()) {
            return Ok(None);
        }
    }
    let Some(largest) = sorted.last() else {
        return Ok(Some(Chain::empty(r, n)?));
    };
    let consistent = sorted
        .iter()
        .all(|s| s.decoration.iter().all(|(i, a)| largest.decoration.get(i) == Some(a)));
    if !consistent {
        return Ok(None);
    }
    let sets = sorted.iter().map(|s| s.set.clone()).collect();
    Ok(Some(Chain::new(r, n, sets, largest.decoration.clone())?))
}

/// Scans every vertex of `Δ^r_n` with exact cyclotomic evaluation and reports whether one
/// lies on all the given hyperplanes. Every nonempty Δ-face contains a vertex.
pub fn face_nonempty_oracle(r: u32, n: usize, subsets: &[DecoratedSubset], vertex_cap: u128) -> Result<bool, ComplexError> {
    let size = group_order(r, n);
    if size > vertex_cap {
        return Err(ComplexError::TooLarge {
            what: "vertex scan",
            size,
            cap: vertex_cap,
        });
    }
    for v in complex_vertices(r, n)? {
        let mut all = true;
        for s in subsets {
            if !on_hyperplane(&v, s, r)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Affine rank over ℚ of a set of points.
pub fn affine_rank(points: &[Vec<Rational>]) -> usize {
    let Some(base) = points.first() else {
        return 0;
    };
    let mut basis: Vec<(usize, Vec<Rational>)> = Vec::new();
    for p in &points[1..] {
        let mut v: Vec<Rational> = p.iter().zip(base).map(|(a, b)| a - b).collect();
        for (pivot, row) in &basis {
            if !v[*pivot].is_zero() {
                let f = &v[*pivot] / &row[*pivot];
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            basis.push((pivot, v));
            if basis.len() == base.len() {
                break;
            }
        }
    }
    basis.len()
}

/// Dimension of `F_c` measured cell by cell.
///
/// In each octant `𝖸^n_𝔠` the face is a face of the polytope
/// `{x ≥ 0, Σ_{i∈I} x_i ≤ δ^n_{|I|}}`, whose vertices are the truncations of the
/// permutation vectors to their largest `m` entries. The cell vertices are therefore the
/// truncations of the face's vertices that stay in the face, placed in every octant
/// compatible with their zero coordinates. The result is the largest affine rank.
pub fn face_dimension_bruteforce(c: &Chain) -> usize {
    let n = c.n();
    let r = c.r();
    let mut cell_points: BTreeSet<YPoint> = BTreeSet::new();
    for v in chain_to_face_vertices(c) {
        for m in 0..=n {
            // magnitudes are a permutation of 1..=n; keep those above n − m
            let cut = int((n - m) as i64);
            let t = YPoint::new(
                v.coords()
                    .iter()
                    .map(|x| if x.mag > cut { x.clone() } else { YCoord::zero() })
                    .collect(),
            );
            if face_membership(&t, c) {
                cell_points.insert(t);
            }
        }
    }
    let mut octants: BTreeMap<Vec<u32>, BTreeSet<Vec<Rational>>> = BTreeMap::new();
    for p in &cell_points {
        let zeros: Vec<usize> = (0..n).filter(|&i| p.coords()[i].mag.is_zero()).collect();
        let base: Vec<u32> = p.coords().iter().map(|x| x.branch.value()).collect();
        for w in crate::group::exponent_words(r, zeros.len()) {
            let mut key = base.clone();
            for (&i, e) in zeros.iter().zip(&w) {
                key[i] = e.value();
            }
            octants.entry(key).or_default().insert(p.magnitudes());
        }
    }
    octants
        .values()
        .map(|pts| affine_rank(&pts.iter().cloned().collect::<Vec<_>>()))
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FaceFactorKind {
    /// `Δ^r_m` on the coordinates off `I_k`.
    Complex { r: u32, m: usize },
    /// `Π_m + shift` on the magnitudes of one gap, rotated onto the rays `ζ^{−a(i)}`.
    Permutohedron { m: usize, shift: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceFactor {
    /// 0 for the `Δ^r` factor, otherwise the chain index `j` of the gap.
    pub level: usize,
    #[serde(flatten)]
    pub kind: FaceFactorKind,
    /// 1-based coordinates, ascending.
    pub coordinates: Vec<usize>,
    /// Branch `−a(i)` of each coordinate, for permutohedron factors.
    pub branches: Vec<u32>,
}

impl FaceFactor {
    pub fn size(&self) -> usize {
        match self.kind {
            FaceFactorKind::Complex { m, .. } | FaceFactorKind::Permutohedron { m, .. } => m,
        }
    }

    /// `m` for `Δ^r_m`, `m − 1` for `Π_m + γ`.
    pub fn dimension(&self) -> usize {
        match self.kind {
            FaceFactorKind::Complex { m, .. } => m,
            FaceFactorKind::Permutohedron { m, .. } => m - 1,
        }
    }
}

impl fmt::Display for FaceFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FaceFactorKind::Complex { r, m } => write!(f, "Delta^{r}_{m}"),
            FaceFactorKind::Permutohedron { m, shift } => write!(f, "Pi_{m}+{shift}"),
        }
    }
}

/// `F_c ≅ Δ^r_{|[n]∖I_k|} × ∏_j (Π_{|I_j∖I_{j-1}|} + |[n]∖I_j|)`, listed top-down:
/// the `Δ^r` factor, then `j = k, …, 1`.
pub fn face_product_decomposition(c: &Chain) -> Vec<FaceFactor> {
    let n = c.n();
    let r = c.r();
    let rest = c.complement();
    let mut out = vec![FaceFactor {
        level: 0,
        kind: FaceFactorKind::Complex { r, m: rest.len() },
        coordinates: rest,
        branches: Vec::new(),
    }];
    let gaps = c.gaps();
    for (j, gap) in gaps.into_iter().enumerate().rev() {
        let shift = n - c.sets()[j].len();
        out.push(FaceFactor {
            level: j + 1,
            kind: FaceFactorKind::Permutohedron { m: gap.len(), shift },
            branches: gap
                .iter()
                .map(|&i| c.decoration_at(i).expect("gap ⊆ I_k").neg(r).value())
                .collect(),
            coordinates: gap,
        });
    }
    out
}

/// A chain together with the vertex set of its Δ-face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaFace {
    chain: Chain,
    vertices: BTreeSet<YPoint>,
}

impl DeltaFace {
    pub fn new(chain: Chain) -> Self {
        let vertices = chain_to_face_vertices(&chain);
        DeltaFace { chain, vertices }
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn vertices(&self) -> &BTreeSet<YPoint> {
        &self.vertices
    }

    pub fn contains(&self, x: &YPoint) -> bool {
        face_membership(x, &self.chain)
    }

    pub fn dimension(&self) -> usize {
        self.chain.dimension()
    }
}

impl Serialize for DeltaFace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            chain: &'a Chain,
            vertices: &'a BTreeSet<YPoint>,
        }
        Json {
            chain: &self.chain,
            vertices: &self.vertices,
        }
        .serialize(s)
    }
}

/// Image of the face of `c` under `A`; fails if the vertex images disagree with the
/// vertices of the image chain.
pub fn act_on_face(c: &Chain, a: &GenPerm) -> Result<Chain, ComplexError> {
    let image = c.act(a)?;
    let moved = chain_to_face_vertices(c)
        .iter()
        .map(|v| a.act_on_tuple(v))
        .collect::<Result<BTreeSet<_>, _>>()?;
    if moved != chain_to_face_vertices(&image) {
        return Err(ComplexError::VertexMismatch(image.to_string()));
    }
    Ok(image)
}
