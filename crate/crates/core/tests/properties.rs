use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use proptest::prelude::*;

use pinwheel::chains::Chain;
use pinwheel::complex::{
    act_on_face, delta, face_membership, face_membership_product_form, hyperplanes_to_chain, chain_hyperplanes,
    chain_to_face_vertices, DecoratedSubset, YCoord, YPoint,
};
use pinwheel::cosets::{chain_to_coset, coset_to_chain, is_coset_representative};
use pinwheel::cyclo::{hyperplane_eval, CycloNum, RootExponent};
use pinwheel::group::GenPerm;
use pinwheel::rational::{frac, int};
use pinwheel::strata::{chain_to_stratum, contract_spoke_edges, stratum_includes, stratum_to_chain};
use pinwheel::Rational;

fn exps(r: u32, len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..r, len)
}

fn mags(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((0i64..=12, 1i64..=4).prop_map(|(a, b)| frac(a, b)), len)
}

fn point(r: u32, n: usize) -> impl Strategy<Value = YPoint> {
    (mags(n), exps(r, n)).prop_map(move |(m, b)| {
        YPoint::new(
            m.into_iter()
                .zip(b)
                .map(|(mag, e)| YCoord::new(mag, RootExponent::new(i64::from(e), r)).unwrap())
                .collect(),
        )
    })
}

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn matrix(r: u32, n: usize) -> impl Strategy<Value = GenPerm> {
    (perm(n), exps(r, n))
        .prop_map(move |(p, e)| GenPerm::new(r, p, e.into_iter().map(i64::from).collect()).unwrap())
}

/// A chain: an ordering of `[n]`, a set of cut sizes, and a decoration.
fn chain(r: u32, n: usize) -> impl Strategy<Value = Chain> {
    (perm(n), prop::collection::btree_set(1..=n.max(1), 0..=n), exps(r, n)).prop_map(move |(order, cuts, dec)| {
        let cuts: Vec<usize> = cuts.into_iter().filter(|&c| c <= n).collect();
        let sets: Vec<Vec<usize>> = cuts.iter().map(|&c| order[..c].iter().map(|i| i + 1).collect()).collect();
        let top = cuts.last().copied().unwrap_or(0);
        let decoration: Vec<(usize, i64)> = order[..top].iter().map(|&i| (i + 1, i64::from(dec[i]))).collect();
        Chain::from_pairs(r, n, sets, &decoration).unwrap()
    })
}

fn shape() -> impl Strategy<Value = (u32, usize)> {
    (2u32..=5, 0usize..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cyclo_equality_is_structural(r in 2u32..=12, a in prop::collection::vec((-5i64..=5, 0usize..30), 0..6),
                                    b in prop::collection::vec((-5i64..=5, 0usize..30), 0..6)) {
        let sum = |terms: &[(i64, usize)]| {
            let mut acc = CycloNum::zero(r).unwrap();
            for &(c, p) in terms {
                acc.add_assign(&CycloNum::from_power(&int(c), p, r).unwrap()).unwrap();
            }
            acc
        };
        let (x, y) = (sum(&a), sum(&b));
        prop_assert_eq!(x.sub(&y).unwrap().is_zero(), x.coeffs() == y.coeffs());
        // exponents only matter mod r
        let shifted: Vec<(i64, usize)> = a.iter().map(|&(c, p)| (c, p + r as usize)).collect();
        prop_assert_eq!(sum(&shifted), x);
    }

    /// On points with `Σ_{i∈I} |x_i| ≤ δ`, the hyperplane value is `δ` exactly when the
    /// sum is tight and every nonzero coordinate lies on the ray `ζ^{−a(i)}`.
    #[test]
    fn hyperplane_value_reaches_delta_only_when_aligned(
        (r, n, m, branches, dec, keep, mask) in (2u32..=6, 1usize..=4).prop_flat_map(|(r, n)| {
            (Just(r), Just(n), mags(n), exps(r, n), exps(r, n), prop::collection::vec(any::<bool>(), n), 1u32..(1 << n))
        }),
        tight in any::<bool>(),
    ) {
        let set: Vec<usize> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let decoration: BTreeMap<usize, RootExponent> =
            set.iter().map(|&i| (i, RootExponent::new(i64::from(dec[i - 1]), r))).collect();
        let subset = DecoratedSubset::new(set.clone(), decoration.clone()).unwrap();
        let target = delta(n, set.len());
        let mut m = m;
        let sum: Rational = set.iter().map(|&i| m[i - 1].clone()).sum();
        if sum > target || (tight && !sum.is_zero()) {
            for &i in &set {
                m[i - 1] = &m[i - 1] * &target / &sum;
            }
        }
        // `keep[i]` puts coordinate i on its aligned ray, otherwise on the random one
        let x = YPoint::new(
            (0..n)
                .map(|i| {
                    let branch = match decoration.get(&(i + 1)) {
                        Some(a) if keep[i] => a.neg(r),
                        _ => RootExponent::new(i64::from(branches[i]), r),
                    };
                    YCoord::new(m[i].clone(), branch).unwrap()
                })
                .collect(),
        );
        let sum: Rational = set.iter().map(|&i| x.coords()[i - 1].mag.clone()).sum();
        prop_assert!(sum <= target);
        let aligned = set.iter().all(|&i| {
            let c = &x.coords()[i - 1];
            c.mag.is_zero() || c.branch == decoration[&i].neg(r)
        });
        let value = hyperplane_eval(&x, &subset, r).unwrap();
        prop_assert_eq!(value.as_rational() == Some(target.clone()), aligned && sum == target);
    }

    #[test]
    fn tuple_action_is_a_right_action(
        (x, a, b) in shape().prop_flat_map(|(r, n)| (point(r, n), matrix(r, n), matrix(r, n)))
    ) {
        let lhs = b.act_on_tuple(&a.act_on_tuple(&x).unwrap()).unwrap();
        prop_assert_eq!(lhs, a.multiply(&b).unwrap().act_on_tuple(&x).unwrap());
        prop_assert_eq!(a.inverse().act_on_tuple(&a.act_on_tuple(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn chain_action_is_a_right_action(c in shape().prop_flat_map(|(r, n)| (chain(r, n), matrix(r, n), matrix(r, n)))) {
        let (c, a, b) = c;
        let once = c.act(&a).unwrap();
        once.validate().unwrap();
        prop_assert_eq!(once.len(), c.len());
        prop_assert_eq!(once.act(&b).unwrap(), c.act(&a.multiply(&b).unwrap()).unwrap());
    }

    #[test]
    fn dictionaries_roundtrip(c in shape().prop_flat_map(|(r, n)| chain(r, n))) {
        let h = chain_to_coset(&c);
        prop_assert!(is_coset_representative(&c, h.rep()));
        prop_assert_eq!(h.dimension(), c.dimension());
        prop_assert_eq!(coset_to_chain(&h), c.clone());
        let s = chain_to_stratum(&c);
        prop_assert_eq!(s.k(), c.len());
        prop_assert_eq!(stratum_to_chain(&s), c.clone());
        prop_assert_eq!(hyperplanes_to_chain(c.r(), c.n(), &chain_hyperplanes(&c)).unwrap(), Some(c));
    }

    #[test]
    fn contraction_gives_coarsening(c in shape().prop_flat_map(|(r, n)| chain(r, n)), mask in any::<u8>()) {
        let s = chain_to_stratum(&c);
        let edges: BTreeSet<usize> = (1..=s.k()).filter(|e| mask >> (e - 1) & 1 == 1).collect();
        let t = contract_spoke_edges(&s, &edges).unwrap();
        prop_assert_eq!(t.k(), s.k() - edges.len());
        prop_assert!(stratum_includes(&s, &t));
        prop_assert!(c.refines(&stratum_to_chain(&t)));
    }

    #[test]
    fn inclusion_tests_agree(
        (c, d) in shape().prop_flat_map(|(r, n)| (chain(r, n), chain(r, n)))
    ) {
        prop_assert_eq!(stratum_includes(&chain_to_stratum(&c), &chain_to_stratum(&d)), c.refines(&d));
    }

    #[test]
    fn face_action_moves_vertices((c, a) in (2u32..=4, 0usize..=4).prop_flat_map(|(r, n)| (chain(r, n), matrix(r, n)))) {
        prop_assert!(act_on_face(&c, &a).is_ok());
    }

    #[test]
    fn membership_forms_agree_on_random_points(
        (c, x) in (2u32..=4, 1usize..=4).prop_flat_map(|(r, n)| (chain(r, n), point(r, n)))
    ) {
        prop_assert_eq!(face_membership(&x, &c), face_membership_product_form(&x, &c));
    }

    /// Midpoints of two face vertices in a common octant stay in the face.
    #[test]
    fn membership_forms_agree_near_faces(
        (c, i, j, t) in (2u32..=4, 1usize..=4).prop_flat_map(|(r, n)| (chain(r, n), any::<prop::sample::Index>(), any::<prop::sample::Index>(), 0i64..=8))
    ) {
        let verts: Vec<YPoint> = chain_to_face_vertices(&c).into_iter().collect();
        let (v, w) = (&verts[i.index(verts.len())], &verts[j.index(verts.len())]);
        let same_octant = v.coords().iter().zip(w.coords()).all(|(p, q)| p.branch == q.branch);
        let x = if same_octant {
            YPoint::new(
                v.coords()
                    .iter()
                    .zip(w.coords())
                    .map(|(p, q)| YCoord::new((&p.mag * int(t) + &q.mag * int(8 - t)) / int(8), p.branch).unwrap())
                    .collect(),
            )
        } else {
            v.clone()
        };
        prop_assert!(face_membership(&x, &c));
        prop_assert!(face_membership_product_form(&x, &c));
    }
}
