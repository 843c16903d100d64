use std::collections::BTreeMap;

use multidescent::finset::{FinMap, FinSetObj};
use multidescent::gallery::{
    check_weight, fixture, fixture_library, slice_to_weighted, weighted_to_slice, SmallCategory,
};
use multidescent::monad::Monoid;
use multidescent::multicat::{find_isomorphism, TFunctor, TMulticategory};
use multidescent::sketch::{
    check_model, model_from_multicat, model_morphism_from_functor, multicat_sketch, strict_object, PMorphism,
};
use multidescent::Elem;
use proptest::prelude::*;

fn a(s: &str) -> Elem {
    Elem::atom(s)
}

fn multicat(name: &str) -> TMulticategory {
    fixture(name).unwrap().as_multicat().unwrap().clone()
}

fn chain3() -> SmallCategory {
    SmallCategory::from_table(
        &["0", "1", "2"],
        &[("01", "0", "1"), ("12", "1", "2"), ("02", "0", "2")],
        &[("12", "01", "02")],
    )
    .unwrap()
}

#[test]
fn self_weighted_z2_is_z2_with_the_identity_weight() {
    let (c, w) = weighted_to_slice(&multicat("weighted-z2")).unwrap();
    let z2 = SmallCategory::of_monoid(&Monoid::cyclic(2)).unwrap();
    assert_eq!(c, z2);
    assert_eq!(w, FinMap::identity(&c.morphisms));
}

#[test]
fn trivial_weights_give_the_underlying_category() {
    let c = chain3();
    let trivial = Monoid::trivial();
    let w = FinMap::constant(&c.morphisms, &FinSetObj::atoms(["0"]), &a("0")).unwrap();
    let mc = slice_to_weighted(&c, &trivial, &w).unwrap();
    assert!(mc.is_valid());
    let (back, w2) = weighted_to_slice(&mc).unwrap();
    assert_eq!((back, w2), (c.clone(), w));

    let plain = c.to_identity_multicat().unwrap();
    let (m1, m2) = (model_from_multicat(&mc).unwrap(), model_from_multicat(&plain).unwrap());
    let sketch = multicat_sketch();
    assert!(check_model(&sketch, &m1).passed() && check_model(&sketch, &m2).passed());
    for v in &sketch.vertices {
        assert_eq!(m1.set(v).unwrap().len(), m2.set(v).unwrap().len(), "{v}");
    }
    for ((g, f), _) in c.comp.graph().map(|(p, h)| (p.as_pair().unwrap(), h)) {
        let lhs = mc.compose(g, &Elem::pair(a("0"), f.clone())).unwrap();
        assert_eq!(lhs, plain.compose(g, f).unwrap());
    }
}

#[test]
fn crossing_morphisms_carry_weight_one() {
    let mc = multicat("weighted-z2-groupoid");
    let (c, w) = weighted_to_slice(&mc).unwrap();
    assert!(check_weight(&c, &Monoid::cyclic(2), &w).passed());
    assert_eq!(w.eval(&a("i")).unwrap(), &a("1"));
    assert_eq!(w.eval(&a("j")).unwrap(), &a("1"));
    assert_eq!(w.eval(&a("id_x")).unwrap(), &a("0"));
    assert_eq!(c.compose(&a("j"), &a("i")).unwrap(), a("id_x"));
}

fn strict_morphism(f: &TFunctor) -> PMorphism {
    PMorphism {
        src: strict_object(&f.src).unwrap(),
        tgt: strict_object(&f.tgt).unwrap(),
        maps: model_morphism_from_functor(f).unwrap(),
    }
}

#[test]
fn surjective_morphisms_of_strict_objects_land_in_coherent_objects() {
    for fx in fixture_library() {
        if !fx.as_multicat().map_or_else(|| fx.as_functor().unwrap().src.monad(), |m| m.monad()).has_finite_carriers() {
            continue;
        }
        let f = match (fx.as_functor(), fx.as_multicat()) {
            (Some(f), _) => f.clone(),
            (None, Some(mc)) => TFunctor::identity(mc),
            _ => unreachable!(),
        };
        let m = strict_morphism(&f);
        assert!(m.check().passed(), "{}", fx.name);
        assert!(m.epi_implies_coherent().unwrap(), "{}", fx.name);
    }
    let collapse = fixture("weighted-discrete-collapse").unwrap().as_functor().unwrap().clone();
    assert!(strict_morphism(&collapse).is_pointwise_surjective());
}

#[test]
fn weighted_fixtures_round_trip() {
    for fx in fixture_library() {
        let Some(mc) = fx.as_multicat() else { continue };
        if !fx.name.starts_with("weighted-") {
            continue;
        }
        let (c, w) = weighted_to_slice(mc).unwrap();
        assert!(c.is_valid(), "{}", fx.name);
        let monoid = match mc.monad().selector() {
            multidescent::monad::MonadSelector::Monoid(m) => m,
            _ => unreachable!(),
        };
        assert_eq!(&slice_to_weighted(&c, &monoid, &w).unwrap(), mc, "{}", fx.name);
    }
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn small_multicats() -> Vec<TMulticategory> {
    fixture_library()
        .iter()
        .filter_map(|f| f.as_multicat().cloned())
        .filter(|mc| mc.monad().has_finite_carriers() && mc.x1().len() <= 4)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weights_on_a_free_category_round_trip(ws in prop::collection::vec(0usize..3, 3)) {
        let c = SmallCategory::from_table(&["a", "b", "c", "d"], &[("u", "a", "b"), ("v", "c", "d"), ("w", "a", "d")], &[])
            .unwrap();
        let z3 = Monoid::cyclic(3);
        let mut weights: Vec<(Elem, Elem)> = c.morphisms.iter().map(|m| (m.clone(), a("0"))).collect();
        for (name, n) in ["u", "v", "w"].iter().zip(&ws) {
            weights.iter_mut().find(|(m, _)| *m == a(name)).unwrap().1 = a(&n.to_string());
        }
        let w = FinMap::new(c.morphisms.clone(), FinSetObj::try_new(z3.elements.clone()).unwrap(), weights).unwrap();
        let mc = slice_to_weighted(&c, &z3, &w).unwrap();
        prop_assert!(mc.is_valid());
        let (c2, w2) = weighted_to_slice(&mc).unwrap();
        prop_assert_eq!(c2, c);
        prop_assert_eq!(w2, w);
    }

    #[test]
    fn relabelled_boundary_component_rebuilds_the_multicategory(
        (i, pi) in (0..small_multicats().len()).prop_flat_map(|i| {
            let mc = &small_multicats()[i];
            let n = strict_object(mc).unwrap().model.set("x0'").unwrap().len();
            (Just(i), permutation(n))
        })
    ) {
        let mc = &small_multicats()[i];
        let o = strict_object(mc).unwrap();
        let x0p = o.model.set("x0'").unwrap().clone();
        let b = FinMap::from_indices(x0p.clone(), FinSetObj::numbered("t", x0p.len()), pi).unwrap();
        let moved = o.transport(&BTreeMap::from([("x0'".to_string(), b)])).unwrap();
        prop_assert!(moved.is_valid());
        prop_assert!(moved.coherence().passed());
        let hat = moved.hat().unwrap();
        prop_assert!(hat.is_valid());
        prop_assert!(find_isomorphism(&hat, mc).is_some());
        prop_assert!(moved.hat_comparison().unwrap().is_iso());
    }
}
