//! Boundary strata as pinwheel dual graphs.
//!
//! A stratum of length `k` has a central component and `r` spokes of `k` components
//! each; spoke `ℓ` ends in the leg `y^ℓ`. Everything is determined by the `y^0`-spoke:
//! component `C^0_j` (`j = 1` outermost) carries light points `z_i^e`, and the
//! rotation `σ` puts `z_i^{e+ℓ}` on `C^ℓ_j`. Orbits not on any spoke are central.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::chains::Chain;
use crate::cyclo::RootExponent;
use crate::group::{GenPerm, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("r must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("orbit {orbit} outside [1, {n}]")]
    OrbitOutOfRange { orbit: usize, n: usize },
    #[error("orbit {0} appears more than once on the spoke")]
    RepeatedOrbit(usize),
    #[error("spoke component {0} carries no light point")]
    EmptyComponent(usize),
    #[error("exponent {exp} of orbit {orbit} is not below r={r}")]
    ExponentOutOfRange { orbit: usize, exp: u32, r: u32 },
    #[error("k={k} does not match {got} spoke components")]
    LengthMismatch { k: usize, got: usize },
    #[error("edge {edge} outside [1, {k}]")]
    EdgeOutOfRange { edge: usize, k: usize },
    #[error("stratum of length {k} is not 0-dimensional for n={n}")]
    NotZeroDimensional { k: usize, n: usize },
    #[error("marked point z_{orbit}^{exp} not found")]
    MissingPoint { orbit: usize, exp: u32 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The light point `z_orbit^exp` on a component of the `y^0`-spoke.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpokeEntry {
    pub orbit: usize,
    pub exp: RootExponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PinwheelStratum {
    r: u32,
    n: usize,
    spoke: Vec<Vec<SpokeEntry>>,
}

/// Where a light point sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Central,
    /// Component `C^spoke_component`.
    Spoke { spoke: RootExponent, component: usize },
}

impl PinwheelStratum {
    pub fn new(r: u32, n: usize, mut spoke: Vec<Vec<SpokeEntry>>) -> Result<Self, StrataError> {
        for comp in &mut spoke {
            comp.sort_unstable();
        }
        let s = PinwheelStratum { r, n, spoke };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), StrataError> {
        if self.r < 2 {
            return Err(StrataError::OrderTooSmall(self.r));
        }
        let mut seen = vec![false; self.n + 1];
        for (j, comp) in self.spoke.iter().enumerate() {
            if comp.is_empty() {
                return Err(StrataError::EmptyComponent(j + 1));
            }
            for e in comp {
                if e.orbit == 0 || e.orbit > self.n {
                    return Err(StrataError::OrbitOutOfRange {
                        orbit: e.orbit,
                        n: self.n,
                    });
                }
                if std::mem::replace(&mut seen[e.orbit], true) {
                    return Err(StrataError::RepeatedOrbit(e.orbit));
                }
                if e.exp.value() >= self.r {
                    return Err(StrataError::ExponentOutOfRange {
                        orbit: e.orbit,
                        exp: e.exp.value(),
                        r: self.r,
                    });
                }
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

    /// Spoke length; also the codimension.
    pub fn k(&self) -> usize {
        self.spoke.len()
    }

    /// Components `C^0_1, …, C^0_k`, outermost first.
    pub fn spoke(&self) -> &[Vec<SpokeEntry>] {
        &self.spoke
    }

    pub fn central_orbits(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&i| !self.spoke.iter().flatten().any(|e| e.orbit == i))
            .collect()
    }

    pub fn dimension(&self) -> usize {
        self.n - self.k()
    }

    /// Component of `z_orbit^exp`: on `C^ℓ_j` when the orbit sits on `C^0_j` with
    /// exponent `e_0` and `ℓ = exp − e_0`; central otherwise.
    pub fn locate(&self, orbit: usize, exp: RootExponent) -> Result<Location, StrataError> {
        if orbit == 0 || orbit > self.n {
            return Err(StrataError::OrbitOutOfRange { orbit, n: self.n });
        }
        for (j, comp) in self.spoke.iter().enumerate() {
            if let Some(e) = comp.iter().find(|e| e.orbit == orbit) {
                return Ok(Location::Spoke {
                    spoke: exp.sub(e.exp, self.r),
                    component: j + 1,
                });
            }
        }
        Ok(Location::Central)
    }
}

impl fmt::Display for PinwheelStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (j, comp) in self.spoke.iter().enumerate() {
            if j > 0 {
                write!(f, " | ")?;
            }
            let parts: Vec<String> = comp.iter().map(|e| format!("z_{}^{}", e.orbit, e.exp.value())).collect();
            write!(f, "{}", parts.join(" "))?;
        }
        let central: Vec<String> = self.central_orbits().iter().map(usize::to_string).collect();
        write!(f, " || central {{{}}}]", central.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    orbit: usize,
    exp: u32,
}

#[derive(Serialize, Deserialize)]
struct StratumJson {
    r: u32,
    n: usize,
    k: usize,
    spoke: Vec<Vec<EntryJson>>,
}

impl Serialize for PinwheelStratum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StratumJson {
            r: self.r,
            n: self.n,
            k: self.k(),
            spoke: self
                .spoke
                .iter()
                .map(|comp| {
                    comp.iter()
                        .map(|e| EntryJson {
                            orbit: e.orbit,
                            exp: e.exp.value(),
                        })
                        .collect()
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PinwheelStratum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = StratumJson::deserialize(d)?;
        if j.k != j.spoke.len() {
            return Err(D::Error::custom(StrataError::LengthMismatch {
                k: j.k,
                got: j.spoke.len(),
            }));
        }
        let spoke = j
            .spoke
            .into_iter()
            .map(|comp| {
                comp.into_iter()
                    .map(|e| SpokeEntry {
                        orbit: e.orbit,
                        exp: RootExponent::raw(e.exp),
                    })
                    .collect()
            })
            .collect();
        PinwheelStratum::new(j.r, j.n, spoke).map_err(D::Error::custom)
    }
}

/// Component `C^0_j` carries `{z_i^{a(i)} : i ∈ I_j ∖ I_{j-1}}`.
pub fn chain_to_stratum(c: &Chain) -> PinwheelStratum {
    let spoke = c
        .gaps()
        .into_iter()
        .map(|gap| {
            gap.into_iter()
                .map(|i| SpokeEntry {
                    orbit: i,
                    exp: c.decoration_at(i).expect("gap ⊆ I_k"),
                })
                .collect()
        })
        .collect();
    PinwheelStratum {
        r: c.r(),
        n: c.n(),
        spoke,
    }
}

/// `I_j` indexes the orbits on the outermost `j` components; `a(i)` is the exponent of
/// the member of orbit `i` on the `y^0`-spoke.
pub fn stratum_to_chain(s: &PinwheelStratum) -> Chain {
    let mut sets = Vec::with_capacity(s.k());
    let mut cur: Vec<usize> = Vec::new();
    let mut decoration = std::collections::BTreeMap::new();
    for comp in &s.spoke {
        for e in comp {
            cur.push(e.orbit);
            decoration.insert(e.orbit, e.exp);
        }
        cur.sort_unstable();
        sets.push(cur.clone());
    }
    Chain::from_parts_unchecked(s.r, s.n, sets, decoration)
}

/// Contracts the given spoke edges on every spoke at once. Edge `j < k` joins `C_j` to
/// `C_{j+1}`; edge `k` joins `C_k` to the central component, whose orbits then become
/// central.
pub fn contract_spoke_edges(s: &PinwheelStratum, edges: &BTreeSet<usize>) -> Result<PinwheelStratum, StrataError> {
    let k = s.k();
    if let Some(&e) = edges.iter().find(|&&e| e == 0 || e > k) {
        return Err(StrataError::EdgeOutOfRange { edge: e, k });
    }
    let mut spoke: Vec<Vec<SpokeEntry>> = Vec::new();
    let mut open: Vec<SpokeEntry> = Vec::new();
    for (j, comp) in s.spoke.iter().enumerate() {
        open.extend_from_slice(comp);
        // edge j+1 joins this component to the next one inward
        if !edges.contains(&(j + 1)) {
            open.sort_unstable();
            spoke.push(std::mem::take(&mut open));
        }
    }
    // anything still open was merged into the center
    Ok(PinwheelStratum {
        r: s.r,
        n: s.n,
        spoke,
    })
}

/// Whether every spoke entry of `t` also appears on the spoke of `s`; necessary for
/// `t` to be a contraction of `s`.
fn entries_contained(s: &PinwheelStratum, t: &PinwheelStratum) -> bool {
    t.spoke
        .iter()
        .flatten()
        .all(|e| s.spoke.iter().any(|comp| comp.contains(e)))
}

/// `S_s ⊆ S_t`: some set of spoke edges of `s` contracts it to `t`.
pub fn stratum_includes(s: &PinwheelStratum, t: &PinwheelStratum) -> bool {
    if s.r != t.r || s.n != t.n || t.k() > s.k() || !entries_contained(s, t) {
        return false;
    }
    let k = s.k();
    let need = k - t.k();
    (0u32..1 << k)
        .filter(|m| m.count_ones() as usize == need)
        .any(|m| {
            let edges: BTreeSet<usize> = (0..k).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect();
            contract_spoke_edges(s, &edges).is_ok_and(|c| &c == t)
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StratumFactorKind {
    /// `L̄^r_m`, parameterizing the central component.
    Pinwheel { r: u32, m: usize },
    /// Losev–Manin space `L̄_m`, parameterizing one spoke component.
    LosevManin { m: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StratumFactor {
    /// 0 for the central factor, otherwise the spoke component `j`.
    pub level: usize,
    #[serde(flatten)]
    pub kind: StratumFactorKind,
}

impl StratumFactor {
    pub fn size(&self) -> usize {
        match self.kind {
            StratumFactorKind::Pinwheel { m, .. } | StratumFactorKind::LosevManin { m } => m,
        }
    }
}

impl fmt::Display for StratumFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            StratumFactorKind::Pinwheel { r, m } => write!(f, "L^{r}_{m}"),
            StratumFactorKind::LosevManin { m } => write!(f, "L_{m}"),
        }
    }
}

/// `S_c ≅ L̄^r_{|[n]∖I_k|} × ∏_{j=1}^k L̄_{|I_j∖I_{j-1}|}`, central factor first.
pub fn stratum_product_factors(c: &Chain) -> Vec<StratumFactor> {
    let mut out = vec![StratumFactor {
        level: 0,
        kind: StratumFactorKind::Pinwheel {
            r: c.r(),
            m: c.complement().len(),
        },
    }];
    out.extend(c.gaps().iter().enumerate().map(|(j, g)| StratumFactor {
        level: j + 1,
        kind: StratumFactorKind::LosevManin { m: g.len() },
    }));
    out
}

/// `S_0`: `z_j^0` on `C^0_{n+1−j}`.
pub fn base_stratum(r: u32, n: usize) -> Result<PinwheelStratum, StrataError> {
    let spoke = (1..=n)
        .rev()
        .map(|i| {
            vec![SpokeEntry {
                orbit: i,
                exp: RootExponent::ZERO,
            }]
        })
        .collect();
    PinwheelStratum::new(r, n, spoke)
}

/// Relabels the light points of a 0-dimensional stratum by `A`: the new point
/// `z̃_ℓ^0` is the old `z_{row}^{exp}` where column `ℓ` of `A` holds `ζ^{exp}` in row
/// `row`, and `z̃_ℓ^m` is the old `z_{row}^{exp+m}`. The new `y^0`-spoke member of orbit
/// `ℓ` is the `z̃_ℓ^m` that sits on spoke 0.
pub fn act_on_zero_dim_stratum(s: &PinwheelStratum, a: &GenPerm) -> Result<PinwheelStratum, StrataError> {
    let n = s.n;
    if s.k() != n {
        return Err(StrataError::NotZeroDimensional { k: s.k(), n });
    }
    if a.r() != s.r || a.n() != n {
        return Err(GroupError::ShapeMismatch {
            r1: s.r,
            n1: n,
            r2: a.r(),
            n2: a.n(),
        }
        .into());
    }
    let mut spoke = vec![Vec::new(); n];
    for l in 0..n {
        let row = a.row_of_col()[l] + 1;
        let base = a.exp_of_col()[l];
        let mut placed = false;
        for m in 0..s.r {
            let old = base.add(RootExponent::new(i64::from(m), s.r), s.r);
            if let Location::Spoke { spoke: sp, component } = s.locate(row, old)? {
                if sp == RootExponent::ZERO {
                    spoke[component - 1].push(SpokeEntry {
                        orbit: l + 1,
                        exp: RootExponent::new(i64::from(m), s.r),
                    });
                    placed = true;
                    break;
                }
            }
        }
        if !placed {
            return Err(StrataError::MissingPoint {
                orbit: row,
                exp: base.value(),
            });
        }
    }
    PinwheelStratum::new(s.r, n, spoke)
}
