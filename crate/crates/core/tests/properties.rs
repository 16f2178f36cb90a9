use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scx_core::oracle;
use scx_core::payoff::{self, CoefficientFamily};
use scx_core::scheme::{self, incidences};
use scx_core::{
    shelling_order, uniform_matroid, Face, Game, SimplicialComplex, Subcomplex, ValueScheme,
};

fn complexes() -> impl Strategy<Value = Arc<SimplicialComplex>> {
    (1usize..=6).prop_flat_map(|n| {
        let ground = (1u32 << n) - 1;
        prop::collection::vec(1u32..=ground, 1..6).prop_map(move |bits| {
            let faces = bits.into_iter().map(Face::from_bits).collect();
            Arc::new(SimplicialComplex::from_faces(n, faces).unwrap())
        })
    })
}

fn random_scheme(complex: &Arc<SimplicialComplex>, seed: u64) -> ValueScheme {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<_> = incidences(complex)
        .into_iter()
        .map(|inc| (inc, rng.gen_range(-1.0..=1.0)))
        .collect();
    ValueScheme::new(complex.clone(), entries).unwrap()
}

fn random_family(complex: &Arc<SimplicialComplex>, seed: u64) -> CoefficientFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<_> = complex
        .nonempty_faces()
        .iter()
        .map(|&t| (t, rng.gen_range(-3.0..=3.0)))
        .collect();
    CoefficientFamily::generic(complex.clone(), entries).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn facets_form_an_antichain_and_faces_close_downward(c in complexes()) {
        for (i, a) in c.facets().iter().enumerate() {
            for b in &c.facets()[i + 1..] {
                prop_assert!(!a.is_subset_of(*b) && !b.is_subset_of(*a));
            }
        }
        let faces: BTreeSet<Face> = c.faces().iter().copied().collect();
        for &f in c.faces() {
            prop_assert!(f.subsets().all(|g| faces.contains(&g)));
            prop_assert!(c.facets().iter().any(|m| f.is_subset_of(*m)));
        }
        prop_assert_eq!(faces.len(), c.faces().len());
    }

    #[test]
    fn link_and_star_match_their_definitions(c in complexes(), pick in any::<prop::sample::Index>()) {
        let s = c.faces()[pick.index(c.faces().len())];
        let link: BTreeSet<Face> = c.link(s).unwrap().into_iter().collect();
        let star: BTreeSet<Face> = c.star(s).unwrap().into_iter().collect();
        let want_link: BTreeSet<Face> =
            c.faces().iter().copied().filter(|t| t.is_disjoint(s) && c.contains(t.union(s))).collect();
        let want_star: BTreeSet<Face> = c.faces().iter().copied().filter(|t| c.contains(t.union(s))).collect();
        prop_assert_eq!(&link, &want_link);
        prop_assert_eq!(&star, &want_star);
        for t in &star {
            prop_assert!(link.contains(&t.difference(s)));
        }
    }

    #[test]
    fn subcomplex_union_and_intersection_are_pointwise(
        c in complexes(),
        a in prop::collection::vec(any::<prop::sample::Index>(), 0..4),
        b in prop::collection::vec(any::<prop::sample::Index>(), 0..4),
    ) {
        let pick = |ix: &[prop::sample::Index]| -> Vec<Face> {
            ix.iter().map(|i| c.faces()[i.index(c.faces().len())]).collect()
        };
        let x = Subcomplex::new(c.clone(), pick(&a)).unwrap();
        let y = Subcomplex::new(c.clone(), pick(&b)).unwrap();
        let u = x.union(&y).unwrap();
        let i = x.intersect(&y).unwrap();
        for &f in c.faces() {
            prop_assert_eq!(u.contains(f), x.contains(f) || y.contains(f));
            prop_assert_eq!(i.contains(f), x.contains(f) && y.contains(f));
        }
        prop_assert_eq!(x.union(&x).unwrap(), x.clone());
        prop_assert_eq!(x.intersect(&Subcomplex::whole(c.clone())).unwrap(), x);
    }

    #[test]
    fn payoffs_and_values_are_linear(c in complexes(), seed in any::<u64>(), k in -4.0f64..4.0) {
        let v = Game::random(c.clone(), seed, -1.0, 1.0).unwrap();
        let w = Game::random(c.clone(), seed ^ 0x5eed, -1.0, 1.0).unwrap();
        let combo = v.scale(k).add(&w).unwrap();
        let a = random_family(&c, seed);
        let lhs = payoff::generic_payoff(&combo, &a).unwrap();
        let rhs = k * payoff::generic_payoff(&v, &a).unwrap() + payoff::generic_payoff(&w, &a).unwrap();
        prop_assert!(close(lhs, rhs), "{lhs} vs {rhs}");

        let s = random_scheme(&c, seed);
        for i in 1..=c.n() {
            let lhs = scheme::phi(&combo, &s, i).unwrap();
            let rhs = k * scheme::phi(&v, &s, i).unwrap() + scheme::phi(&w, &s, i).unwrap();
            prop_assert!(close(lhs, rhs), "phi_{i}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn group_total_is_payoff_of_induced_coefficients(c in complexes(), seed in any::<u64>()) {
        let s = random_scheme(&c, seed);
        let v = Game::random(c.clone(), seed.wrapping_add(7), -1.0, 1.0).unwrap();
        let total = scheme::group_value(&v, &s).unwrap().total();
        let via = payoff::generic_payoff(&v, &scheme::induced_coefficients(&s)).unwrap();
        prop_assert!(close(total, via), "{total} vs {via}");
    }

    #[test]
    fn d_matches_enumeration_and_is_one_on_facets(c in complexes()) {
        let d = payoff::d_counts(&c).unwrap();
        prop_assert_eq!(&d, &oracle::oracle_d_counts(&c).unwrap());
        for f in c.facets().iter().filter(|f| !f.is_empty()) {
            prop_assert_eq!(d.get(f).copied(), Some(1));
        }
        prop_assert!(d.keys().all(|t| c.contains(*t) && !t.is_empty()));
    }

    #[test]
    fn solved_schemes_round_trip(c in complexes(), seed in any::<u64>()) {
        let target = random_family(&c, seed);
        let solved = scheme::solve_scheme(&c, &target).unwrap();
        prop_assert!(solved.feasible(), "residual {}", solved.residual_norm);
        prop_assert!(scheme::check_efficiency(&solved.scheme, &target, 1e-8).unwrap().pass);
        prop_assert!(scheme::carrier_converse_check(&solved.scheme, &target, 1e-8).unwrap().pass);
    }

    #[test]
    fn two_facets_are_order_independent(c in complexes(), seed in any::<u64>()) {
        prop_assume!(c.num_facets() <= 2);
        let v = Game::random(c.clone(), seed, -1.0, 1.0).unwrap();
        let closed = payoff::simplicial_payoff(&v).unwrap();
        let mut order = c.facets().to_vec();
        prop_assert!(close(payoff::sequential_payoff(&v, &order).unwrap(), closed));
        order.reverse();
        prop_assert!(close(payoff::sequential_payoff(&v, &order).unwrap(), closed));
        prop_assert!(close(payoff::alternating_payoff(&v).unwrap(), closed));
    }

    #[test]
    fn rank_two_reduction_matches_closed_form(n in 2usize..=6, seed in any::<u64>()) {
        let c = Arc::new(uniform_matroid(2, n).unwrap());
        let shelling = shelling_order(&c).unwrap();
        let v = Game::random(c.clone(), seed, -1.0, 1.0).unwrap();
        let reduced = payoff::matroid_reduction_payoff(&v, &shelling).unwrap();
        let closed = payoff::simplicial_payoff(&v).unwrap();
        prop_assert!(close(reduced, closed), "{reduced} vs {closed}");
    }
}
