mod common;

use std::collections::BTreeSet;

use common::{any_surjection, map_from, set};
use multidescent::descent::{
    check_algebra_laws, check_multi_laws, comparison_functor, comparison_functor_multi, datum_domain, enumerate_over,
    enumerate_set_data, image_condition, multicat_descent_quotient, set_descent_inverse, slice_iso, DescentDatum,
};
use multidescent::finset::{compose, FinMap};
use multidescent::gallery::fixture;
use multidescent::multicat::find_isomorphism;
use multidescent::Elem;
use proptest::prelude::*;

fn surjection_and_slice() -> impl Strategy<Value = (FinMap, FinMap)> {
    any_surjection(4).prop_flat_map(|p| {
        let y = p.cod().clone();
        let m = y.len();
        (
            Just(p),
            (0usize..=4).prop_flat_map(move |n| {
                let y = y.clone();
                prop::collection::vec(0..m, n).prop_map(move |i| map_from(&set("w", n), &y, &i))
            }),
        )
    })
}

/// The three laws of a datum, read off the graphs.
fn lawful(p: &FinMap, d: &DescentDatum) -> bool {
    let g = |x: &Elem, w: &Elem| d.gamma.apply(&Elem::pair(x.clone(), w.clone())).cloned();
    let a = |w: &Elem| d.a.eval(w).unwrap().clone();
    for w in d.a.dom() {
        if g(&a(w), w).as_ref() != Some(w) {
            return false;
        }
        for x1 in p.dom() {
            if p.eval(x1).unwrap() != p.eval(&a(w)).unwrap() {
                continue;
            }
            let w1 = g(x1, w).unwrap();
            if a(&w1) != *x1 {
                return false;
            }
            for x2 in p.fiber(p.eval(x1).unwrap()) {
                if g(x2, &w1) != g(x2, w) {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #[test]
    fn comparison_data_are_lawful((p, f) in surjection_and_slice()) {
        let d = comparison_functor(&p, &f).unwrap();
        prop_assert!(check_algebra_laws(&p, &d).passed());
        prop_assert!(lawful(&p, &d));
        prop_assert!(image_condition(&p, &f, &d, None).unwrap());
    }

    #[test]
    fn descent_round_trip((p, f) in surjection_and_slice()) {
        let d = comparison_functor(&p, &f).unwrap();
        let back = set_descent_inverse(&p, &d).unwrap();
        prop_assert!(back.iso.is_bijective());
        prop_assert!(slice_iso(&back.f, &f).is_some());
    }

    #[test]
    fn law_checker_agrees_with_the_graph_reading(
        (p, sizes, picks) in any_surjection(3).prop_flat_map(|p| {
            let n = p.dom().len();
            (Just(p), prop::collection::vec(0usize..=2, n), prop::collection::vec(0usize..4, 64))
        })
    ) {
        let mut graph = Vec::new();
        for (x, &k) in p.dom().iter().zip(&sizes) {
            for i in 0..k {
                graph.push((Elem::pair(x.clone(), Elem::atom(format!("v{i}"))), x.clone()));
            }
        }
        let a = FinMap::new(graph.iter().map(|e| e.0.clone()).collect(), p.dom().clone(), graph).unwrap();
        let u = datum_domain(&p, &a).unwrap();
        let mut gamma = Vec::new();
        for (z, pick) in u.apex.iter().zip(picks.iter().cycle()) {
            let fiber = a.fiber(u.leg1.eval(z).unwrap());
            prop_assume!(!fiber.is_empty());
            gamma.push((z.clone(), fiber[pick % fiber.len()].clone()));
        }
        let gamma = FinMap::new(u.apex.clone(), a.dom().clone(), gamma).unwrap();
        let d = DescentDatum { a, gamma };
        prop_assert_eq!(check_algebra_laws(&p, &d).passed(), lawful(&p, &d));
    }
}

/// Data along `p` correspond to sets over `cod p`. On fixed carriers each set
/// with fiber sizes `n_y` appears once per choice of identifications between
/// the fibers over `p⁻¹(y)`, that is `Π (n_y!)^(|p⁻¹ y| - 1)` times.
#[test]
fn lawful_data_are_counted_by_slices_of_the_base() {
    let p = map_from(&set("x", 3), &set("y", 2), &[0, 0, 1]);
    for max_fiber in 0..=2 {
        for max_total in 0..=5 {
            let data = enumerate_set_data(&p, max_fiber, max_total).unwrap();
            let factorial = |n: usize| (1..=n).product::<usize>();
            let shapes_in_range: Vec<(usize, usize)> = (0..=max_fiber)
                .flat_map(|n0| (0..=max_fiber).map(move |n1| (n0, n1)))
                .filter(|(n0, n1)| 2 * n0 + n1 <= max_total)
                .collect();
            let expected: usize = shapes_in_range.iter().map(|&(n0, _)| factorial(n0)).sum();
            assert_eq!(data.len(), expected, "fiber {max_fiber}, total {max_total}");
            let mut shapes = BTreeSet::new();
            for d in &data {
                assert!(lawful(&p, d));
                let back = set_descent_inverse(&p, d).unwrap();
                shapes.insert(p.cod().iter().map(|y| back.f.fiber(y).len()).collect::<Vec<_>>());
            }
            assert_eq!(shapes.len(), shapes_in_range.len());
        }
    }
}

#[test]
fn two_point_cover_of_a_point() {
    let p = map_from(&set("x", 2), &set("y", 1), &[0, 0]);
    let f = FinMap::identity(&set("y", 1));
    let d = comparison_functor(&p, &f).unwrap();
    assert_eq!(d.a.dom().len(), 2);
    assert_eq!(d.gamma.dom().len(), 4);
    assert!(d.a.is_bijective());
    assert_eq!(compose(&d.a, &d.gamma).unwrap().dom().len(), 4);
}

fn multicat_round_trip(name: &str, max: usize) -> usize {
    let p = fixture(name).unwrap().as_functor().unwrap().clone();
    let slices = enumerate_over(&p.tgt, max).unwrap();
    assert!(!slices.is_empty());
    for f in &slices {
        let d = comparison_functor_multi(&p, f).unwrap();
        assert!(check_multi_laws(&p, &d).passed());
        let r = multicat_descent_quotient(&p, &d).unwrap();
        assert!(r.checks.passed(), "{name}: {:?}", r.checks.failures().collect::<Vec<_>>());
        let iso = find_isomorphism(&r.w, &f.src).expect("reconstructed source is isomorphic");
        assert_eq!(compose(&f.p0, &iso.p0).unwrap(), r.f.p0);
        assert_eq!(compose(&f.p1, &iso.p1).unwrap(), r.f.p1);
    }
    slices.len()
}

#[test]
fn discrete_collapse_round_trips() {
    assert!(multicat_round_trip("discrete-collapse", 2) > 1);
}

#[test]
fn weighted_collapse_round_trips() {
    assert!(multicat_round_trip("weighted-groupoid-collapse", 1) > 1);
    assert!(multicat_round_trip("weighted-discrete-collapse", 1) > 1);
}
