//! Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero if any
//! criterion fails. Runs without the libtest harness.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pinwheel::chains::{enumerate_chains, Chain};
use pinwheel::complex::{
    affine_rank, chain_to_face_vertices, complex_vertices, face_membership, face_membership_product_form,
    face_product_decomposition, point_in_complex, DecoratedSubset, YCoord, YPoint,
};
use pinwheel::cosets::{chain_to_coset, coset_block_decomposition, coset_elements};
use pinwheel::cyclo::{on_hyperplane, RootExponent};
use pinwheel::group::{enumerate_group, GenPerm};
use pinwheel::rational::{frac, int};
use pinwheel::strata::{chain_to_stratum, stratum_product_factors};
use pinwheel::verify::{verify_equivariance, verify_nonemptiness, verify_products, verify_threeway, Report, SizeCaps};
use pinwheel::Rational;

/// `r ∈ {2,3,4}, n ≤ 3` and `r ∈ {2,3}, n = 4`.
fn envelope() -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = (2..=4).flat_map(|r| (0..=3).map(move |n| (r, n))).collect();
    out.extend([(2, 4), (3, 4)]);
    out
}

/// `r ∈ {2,3}, n ≤ 3`.
fn small() -> Vec<(u32, usize)> {
    (2..=3).flat_map(|r| (0..=3).map(move |n| (r, n))).collect()
}

fn group_size(r: u32, n: usize) -> usize {
    (r as usize).pow(n as u32) * (1..=n).product::<usize>()
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn first_failure(reports: &[Report]) -> Option<String> {
    reports.iter().find(|r| !r.passed()).map(ToString::to_string)
}

/// Distinct nonempty Δ-faces found by intersecting hyperplanes, without using chains:
/// the vertex set of a family is the set of vertices on all its hyperplanes, and its
/// dimension is the largest affine rank of its points inside one octant, where the points
/// are the vertices together with their truncations that stay on the hyperplanes.
fn hyperplane_census(r: u32, n: usize) -> BTreeMap<BTreeSet<YPoint>, (usize, Vec<DecoratedSubset>)> {
    let vertices = complex_vertices(r, n).unwrap();
    let subsets = DecoratedSubset::enumerate(r, n);
    let on_all = |x: &YPoint, family: &[&DecoratedSubset]| family.iter().all(|s| on_hyperplane(x, s, r).unwrap());
    let mut faces: BTreeMap<BTreeSet<YPoint>, (usize, Vec<DecoratedSubset>)> = BTreeMap::new();
    for size in 0..=n {
        for family in subsets.iter().combinations(size) {
            let verts: BTreeSet<YPoint> = vertices.iter().filter(|v| on_all(v, &family)).cloned().collect();
            if verts.is_empty() || faces.contains_key(&verts) {
                continue;
            }
            let mut points = BTreeSet::new();
            for v in &verts {
                for keep in 0..=n {
                    let cut = int((n - keep) as i64);
                    let t = YPoint::new(
                        v.coords()
                            .iter()
                            .map(|c| if c.mag > cut { c.clone() } else { YCoord::zero() })
                            .collect(),
                    );
                    if point_in_complex(&t) && on_all(&t, &family) {
                        points.insert(t);
                    }
                }
            }
            let mut octants: BTreeMap<Vec<u32>, Vec<Vec<Rational>>> = BTreeMap::new();
            for p in &points {
                let zeros: Vec<usize> = (0..n).filter(|&i| p.coords()[i].mag.is_zero()).collect();
                let fills: Vec<Vec<u32>> = if zeros.is_empty() {
                    vec![Vec::new()]
                } else {
                    zeros.iter().map(|_| 0..r).multi_cartesian_product().collect()
                };
                for fill in fills {
                    let mut key: Vec<u32> = p.coords().iter().map(|c| c.branch.value()).collect();
                    for (&i, b) in zeros.iter().zip(&fill) {
                        key[i] = *b;
                    }
                    octants.entry(key).or_default().push(p.magnitudes());
                }
            }
            let dim = octants.values().map(|pts| affine_rank(pts)).max().unwrap_or(0);
            faces.insert(verts, (dim, family.into_iter().cloned().collect()));
        }
    }
    faces
}

fn census_counts(faces: &BTreeMap<BTreeSet<YPoint>, (usize, Vec<DecoratedSubset>)>, n: usize) -> Vec<usize> {
    let mut counts = vec![0; n + 1];
    for (dim, _) in faces.values() {
        counts[*dim] += 1;
    }
    counts
}

fn criterion_1() -> Outcome {
    let faces = hyperplane_census(2, 2);
    let counts = census_counts(&faces, 2);
    // ζ = −1: branch 1 is the negative ray
    let decoded: BTreeSet<(i64, i64)> = complex_vertices(2, 2)
        .unwrap()
        .iter()
        .map(|v| {
            let s = |c: &YCoord| {
                let m = c.mag.to_integer().try_into().unwrap_or(i64::MAX);
                if c.branch.value() == 1 {
                    -m
                } else {
                    m
                }
            };
            (s(&v.coords()[0]), s(&v.coords()[1]))
        })
        .collect();
    let expected: BTreeSet<(i64, i64)> = [(2, 1), (1, 2)]
        .iter()
        .flat_map(|&(a, b)| [(a, b), (-a, b), (a, -b), (-a, -b)])
        .collect();
    let threeway = verify_threeway(2, 2, &SizeCaps::default()).unwrap();
    let ok = decoded == expected && counts == vec![8, 8, 1] && threeway.counts_by_dim == vec![8, 8, 1];
    let detail = format!(
        "vertices {decoded:?}; hyperplane census {counts:?}; chain census {:?}",
        threeway.counts_by_dim
    );
    if ok {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_2() -> Outcome {
    let faces = hyperplane_census(3, 2);
    let counts = census_counts(&faces, 2);
    let edges: Vec<&(usize, Vec<DecoratedSubset>)> = faces.values().filter(|(d, _)| *d == 1).collect();
    let by_vertices = |k: usize| faces.iter().filter(|(v, (d, _))| *d == 1 && v.len() == k).count();
    let segments_full = faces
        .iter()
        .filter(|(v, (d, fam))| *d == 1 && v.len() == 2 && fam.iter().any(|s| s.set.len() == 2))
        .count();
    let threeway = verify_threeway(3, 2, &SizeCaps::default()).unwrap();
    let ok = counts == vec![18, 15, 1]
        && edges.len() == 15
        && by_vertices(2) == 9
        && segments_full == 9
        && by_vertices(3) == 6
        && threeway.counts_by_dim == vec![18, 15, 1];
    let detail = format!(
        "census {counts:?}; segments {} (on full subsets {segments_full}); Y-faces {}; chain census {:?}",
        by_vertices(2),
        by_vertices(3),
        threeway.counts_by_dim
    );
    if ok {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn worked_chain() -> Chain {
    Chain::from_pairs(3, 4, vec![vec![3], vec![2, 3, 4]], &[(2, 1), (3, 0), (4, 2)]).unwrap()
}

fn criterion_3() -> Outcome {
    let h = chain_to_coset(&worked_chain());
    let mut printed = BTreeSet::new();
    for i in 0..3 {
        let swap_low = GenPerm::from_matrix(
            3,
            &[
                vec![Some(i), None, None, None],
                vec![None, None, None, Some(1)],
                vec![None, Some(2), None, None],
                vec![None, None, Some(0), None],
            ],
        )
        .unwrap();
        let swap_high = GenPerm::from_matrix(
            3,
            &[
                vec![Some(i), None, None, None],
                vec![None, Some(2), None, None],
                vec![None, None, None, Some(1)],
                vec![None, None, Some(0), None],
            ],
        )
        .unwrap();
        printed.insert(swap_low);
        printed.insert(swap_high);
    }
    let got: BTreeSet<GenPerm> = coset_elements(&h).into_iter().collect();
    let gens_ok = h.gens() == &BTreeSet::from([0, 2]);
    let detail = format!("gens {:?}; {} elements, {} printed", h.gens(), got.len(), printed.len());
    if gens_ok && got == printed {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_4() -> Outcome {
    let caps = SizeCaps::default();
    let reports: Vec<Report> = envelope().into_iter().map(|(r, n)| verify_threeway(r, n, &caps).unwrap()).collect();
    let total: u64 = reports.iter().map(Report::total).sum();
    let golden = reports
        .iter()
        .all(|rep| match (rep.r, rep.n) {
            (2, 2) => rep.counts_by_dim == vec![8, 8, 1],
            (3, 2) => rep.counts_by_dim == vec![18, 15, 1],
            (_, 0) => rep.counts_by_dim == vec![1],
            _ => true,
        });
    match first_failure(&reports) {
        None if golden => pass(format!("{} instances, {total} chains, zero violations", reports.len())),
        None => fail("golden counts differ"),
        Some(f) => fail(f),
    }
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    for (r, n) in envelope() {
        let expected = group_size(r, n);
        let chains = enumerate_chains(r, n).unwrap();
        let zero_chains = chains.iter().filter(|c| c.dimension() == 0).count();
        let vertices: BTreeSet<YPoint> = complex_vertices(r, n).unwrap().into_iter().collect();
        let singletons = chains
            .iter()
            .filter(|c| c.dimension() == 0)
            .map(|c| coset_elements(&chain_to_coset(c)))
            .filter(|e| e.len() == 1)
            .map(|e| e[0].clone())
            .collect::<BTreeSet<_>>()
            .len();
        let points = chains.iter().filter(|c| chain_to_stratum(c).k() == n).count();
        let group = enumerate_group(r, n).unwrap().len();
        if [zero_chains, vertices.len(), singletons, points, group].iter().any(|&x| x != expected) {
            bad.push(format!(
                "(r={r},n={n}) expected {expected}: chains {zero_chains}, vertices {}, cosets {singletons}, strata {points}, group {group}",
                vertices.len()
            ));
        }
    }
    if bad.is_empty() {
        pass(format!("{} instances", envelope().len()))
    } else {
        fail(bad.join("; "))
    }
}

fn criterion_6() -> Outcome {
    let caps = SizeCaps::default();
    let reports: Vec<Report> = small().into_iter().map(|(r, n)| verify_nonemptiness(r, n, &caps).unwrap()).collect();
    let families: u128 = small().into_iter().map(|(r, n)| pinwheel::verify::family_count(r, n)).sum();
    match first_failure(&reports) {
        None => pass(format!("{families} families over {} instances agree", reports.len())),
        Some(f) => fail(f),
    }
}

/// Magnitudes `p/q` with `q ≤ 6` in `[0, n]`, uniform branches.
fn uniform_point(rng: &mut ChaCha8Rng, r: u32, n: usize) -> YPoint {
    YPoint::new(
        (0..n)
            .map(|_| {
                let q = rng.gen_range(1..=6i64);
                let p = rng.gen_range(0..=q * n as i64);
                YCoord::new(frac(p, q), RootExponent::new(rng.gen_range(0..r as i64), r)).unwrap()
            })
            .collect(),
    )
}

/// A random convex combination of face vertices sharing one octant.
fn face_point(rng: &mut ChaCha8Rng, verts: &[YPoint]) -> YPoint {
    let v = &verts[rng.gen_range(0..verts.len())];
    let branches = |p: &YPoint| p.coords().iter().map(|c| c.branch).collect::<Vec<_>>();
    let octant: Vec<&YPoint> = verts.iter().filter(|w| branches(w) == branches(v)).collect();
    let weights: Vec<i64> = octant.iter().map(|_| rng.gen_range(0..=3)).collect();
    let total: i64 = weights.iter().sum();
    if total == 0 {
        return v.clone();
    }
    let n = v.len();
    YPoint::new(
        (0..n)
            .map(|i| {
                let mag: Rational = octant
                    .iter()
                    .zip(&weights)
                    .map(|(w, &k)| &w.coords()[i].mag * int(k))
                    .sum::<Rational>()
                    / int(total);
                YCoord::new(mag, v.coords()[i].branch).unwrap()
            })
            .collect(),
    )
}

/// Nudges one coordinate: a small magnitude change, a branch change, or a zeroing.
fn perturb(rng: &mut ChaCha8Rng, x: &YPoint, r: u32) -> YPoint {
    let mut coords = x.coords().to_vec();
    if coords.is_empty() {
        return x.clone();
    }
    let i = rng.gen_range(0..coords.len());
    match rng.gen_range(0..3) {
        0 => {
            let step = frac(if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=6));
            let m = &coords[i].mag + step;
            coords[i].mag = if m.is_negative() { Rational::zero() } else { m };
        }
        1 => coords[i].branch = RootExponent::new(rng.gen_range(0..r as i64), r),
        _ => coords[i].mag = Rational::zero(),
    }
    YPoint::new(coords)
}

fn criterion_7() -> Outcome {
    const PER_CHAIN: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_7);
    let mut checked = 0usize;
    let mut inside = 0usize;
    let mut bad = Vec::new();
    for (r, n) in small() {
        for c in enumerate_chains(r, n).unwrap() {
            let verts: Vec<YPoint> = chain_to_face_vertices(&c).into_iter().collect();
            for k in 0..PER_CHAIN {
                let x = match k % 4 {
                    0 => uniform_point(&mut rng, r, n),
                    1 => face_point(&mut rng, &verts),
                    _ => {
                        let p = face_point(&mut rng, &verts);
                        perturb(&mut rng, &p, r)
                    }
                };
                let direct = face_membership(&x, &c);
                if direct != face_membership_product_form(&x, &c) {
                    bad.push(format!("{c} at {x}"));
                }
                inside += usize::from(direct);
                checked += 1;
            }
        }
    }
    let detail = format!("{checked} points, {inside} inside their face, {} disagreements", bad.len());
    if bad.is_empty() {
        pass(detail)
    } else {
        fail(format!("{detail}; first {}", bad[0]))
    }
}

fn criterion_8() -> Outcome {
    let caps = SizeCaps::default();
    let reports: Vec<Report> = small().into_iter().map(|(r, n)| verify_equivariance(r, n, &caps).unwrap()).collect();
    let a = GenPerm::from_matrix(
        3,
        &[
            vec![None, Some(2), None, None],
            vec![None, None, None, Some(1)],
            vec![None, None, Some(2), None],
            vec![Some(0), None, None, None],
        ],
    )
    .unwrap();
    let moved = a.act_on_tuple(&YPoint::from_ints(&[1, 2, 3, 4])).unwrap();
    let expected = YPoint::from_pairs(&[(4, 0), (1, 2), (3, 2), (2, 1)], 3).unwrap();
    let worked = moved == expected;
    match first_failure(&reports) {
        None if worked => pass(format!("{} instances; (1,2,3,4)A = {moved}", reports.len())),
        None => fail(format!("(1,2,3,4)A = {moved}, expected {expected}")),
        Some(f) => fail(f),
    }
}

fn criterion_9() -> Outcome {
    let caps = SizeCaps::default();
    let reports: Vec<Report> = envelope().into_iter().map(|(r, n)| verify_products(r, n, &caps).unwrap()).collect();
    if let Some(f) = first_failure(&reports) {
        return fail(f);
    }
    let fact = |m: usize| (1..=m).product::<usize>();
    let mut sizes_checked = 0usize;
    for (r, n) in envelope() {
        for c in enumerate_chains(r, n).unwrap() {
            let m = (1..=n).filter(|i| !c.top().contains(i)).count();
            let mut expected = (r as usize).pow(m as u32) * fact(m);
            let mut prev = 0;
            for set in c.sets() {
                expected *= fact(set.len() - prev);
                prev = set.len();
            }
            let got = coset_elements(&chain_to_coset(&c)).len();
            if got != expected {
                return fail(format!("{c}: {got} elements, expected {expected}"));
            }
            sizes_checked += 1;
        }
    }
    // the shared worked chain: central 1, then gaps of sizes 1 and 2
    let c = worked_chain();
    let sizes = |mut v: Vec<(usize, usize)>| {
        v.sort();
        v.into_iter().map(|(_, s)| s).collect::<Vec<_>>()
    };
    let s = sizes(stratum_product_factors(&c).iter().map(|f| (f.level, f.size())).collect());
    let k = sizes(coset_block_decomposition(&c).iter().map(|f| (f.level, f.size)).collect());
    let f = sizes(face_product_decomposition(&c).iter().map(|f| (f.level, f.size())).collect());
    if s != [1, 1, 2] || k != s || f != s {
        return fail(format!("worked chain factors: strata {s:?}, cosets {k:?}, faces {f:?}"));
    }
    pass(format!(
        "{} instances, {sizes_checked} coset sizes; worked chain factors {s:?}",
        reports.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("octagon", criterion_1, Duration::from_secs(1)),
        ("tripod census", criterion_2, Duration::from_secs(1)),
        ("worked coset", criterion_3, Duration::from_secs(1)),
        ("three-way suite", criterion_4, Duration::from_secs(60)),
        ("vertex count law", criterion_5, Duration::MAX),
        ("nonempty faces", criterion_6, Duration::from_secs(120)),
        ("product-form membership", criterion_7, Duration::MAX),
        ("equivariance suite", criterion_8, Duration::from_secs(120)),
        ("product decompositions", criterion_9, Duration::MAX),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let ok = outcome.ok && in_time;
        failures += usize::from(!ok);
        let budget = if *limit == Duration::MAX {
            String::new()
        } else {
            format!(" of {}s", limit.as_secs())
        };
        println!(
            "criterion {} [{name}]: {} ({:.2}s{budget}) {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            outcome.detail
        );
        if outcome.ok && !in_time {
            println!("  over the time budget");
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
