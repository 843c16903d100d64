//! Exhaustive check, over small strict sources, that pointwise surjective
//! morphisms of pseudo-equalizer objects land in coherent objects.
//!
//! Targets are taken with `ι^T = id`; every object is isomorphic to one of
//! this form, and the remaining components are enumerated as bijections
//! compatible with the morphism. Each admissible target is also checked
//! after relabelling its primed sets, which moves `ι^T` off the identity.

use std::collections::BTreeMap;

use super::pseudo::{apply_depth, t_power};
use super::{
    iota_components, model_from_multicat, model_morphism_from_functor, strict_object, PMorphism, PseudoEqObject,
};
use crate::elem::Elem;
use crate::error::Result;
use crate::finset::{all_maps, bijections_extending, compose, for_each_choice, FinMap, FinSetObj};
use crate::monad::MonadSpec;
use crate::multicat::{enumerate_multicategories, induce_quotient, TFunctor};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoherenceSearch {
    /// Valid source multicategories visited.
    pub sources: usize,
    /// Morphisms that passed the morphism check.
    pub morphisms_checked: usize,
    /// Of those, the pointwise surjective ones.
    pub surjective: usize,
    pub counterexamples: Vec<String>,
}

/// Sources range over multicategories with `|x0| <= max0`, `|x1| <= max1`.
pub fn coherence_search(monad: &MonadSpec, max0: usize, max1: usize) -> Result<CoherenceSearch> {
    let mut out = CoherenceSearch::default();
    for n0 in 0..=max0 {
        for n1 in 0..=max1 {
            let (x0, x1) = (FinSetObj::numbered("a", n0), FinSetObj::numbered("f", n1));
            for x in enumerate_multicategories(monad, &x0, &x1, 1) {
                out.sources += 1;
                let src = strict_object(&x)?;
                for k0 in 0..=n0 {
                    let y0 = FinSetObj::numbered("b", k0);
                    for f0 in all_maps(&x0, &y0).into_iter().filter(FinMap::is_surjective) {
                        for k1 in 0..=n1 {
                            let y1 = FinSetObj::numbered("g", k1);
                            for f1 in all_maps(&x1, &y1).into_iter().filter(FinMap::is_surjective) {
                                visit(&src, &x, &f0, &f1, &mut out)?;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn visit(
    src: &PseudoEqObject,
    x: &crate::multicat::TMulticategory,
    f0: &FinMap,
    f1: &FinMap,
    out: &mut CoherenceSearch,
) -> Result<()> {
    let t = &src.monad;
    // Underlying data forced by naturality; failure means no morphism or no surjective one.
    let Ok(w) = induce_quotient(x, f0, f1) else { return Ok(()) };
    let Ok(functor) = TFunctor::new(x.clone(), w.clone(), f0.clone(), f1.clone()) else { return Ok(()) };
    let Ok(maps) = model_morphism_from_functor(&functor) else { return Ok(()) };
    let base = model_from_multicat(&w)?;

    let free: Vec<_> = iota_components().iter().filter(|c| !c.name.starts_with('T')).collect();
    let mut options = Vec::new();
    for c in &free {
        let (g, gb) = (&maps[c.dom], &maps[c.base]);
        let fixed: Vec<(Elem, Elem)> =
            g.dom().iter().map(|y| Ok((g.eval(y)?.clone(), apply_depth(t, gb, c.depth, y)?))).collect::<Result<_>>()?;
        let cod = t_power(t, base.set(c.base)?, c.depth)?;
        options.push(bijections_extending(base.set(c.dom)?, &cod, &fixed)?);
    }
    let mut err = None;
    for_each_choice(&options, |choice| {
        if err.is_some() {
            return;
        }
        let kappa: BTreeMap<String, FinMap> =
            free.iter().zip(choice).map(|(c, m)| (c.name.to_string(), m.clone())).collect();
        if let Err(e) = check_target(src, &base, &kappa, &maps, out) {
            err = Some(e);
        }
    });
    err.map_or(Ok(()), Err)
}

fn check_target(
    src: &PseudoEqObject,
    base: &super::SketchModel,
    kappa: &BTreeMap<String, FinMap>,
    maps: &BTreeMap<String, FinMap>,
    out: &mut CoherenceSearch,
) -> Result<()> {
    let t = &src.monad;
    let mut model = base.clone();
    for i in 0..2 {
        let (k0, k1) = (&kappa[&format!("m{i}_0")], &kappa[&format!("m{i}_1")]);
        let m = format!("x{i}''.m{i}");
        model.maps.insert(m.clone(), compose(&k1.inverse()?, &compose(base.map(&m)?, k0)?)?);
        let (k0, k1) = (&kappa[&format!("e{i}_0")], &kappa[&format!("e{i}_1")]);
        let e = format!("x{i}.e{i}");
        model.maps.insert(e.clone(), compose(&k1.inverse()?, &compose(base.map(&e)?, k0)?)?);
    }
    let mut iota = kappa.clone();
    for c in iota_components().iter().filter(|c| c.name.starts_with('T')) {
        iota.insert(c.name.to_string(), FinMap::identity(model.set(c.dom)?));
    }
    let tgt = PseudoEqObject { monad: t.clone(), model, iota };
    if !tgt.is_valid() {
        return Ok(());
    }
    let g = PMorphism { src: src.clone(), tgt: tgt.clone(), maps: maps.clone() };
    if !g.check().passed() {
        return Ok(());
    }
    let shifted = relabel_primed(&tgt)?;
    let mut shifted_maps = maps.clone();
    for (v, b) in &shifted.1 {
        shifted_maps.insert(v.clone(), compose(b, &maps[v])?);
    }
    let moved = PMorphism { src: src.clone(), tgt: shifted.0, maps: shifted_maps };
    for morphism in [g, moved] {
        out.morphisms_checked += 1;
        if morphism.is_pointwise_surjective() {
            out.surjective += 1;
        }
        if !morphism.epi_implies_coherent()? {
            out.counterexamples.push(format!(
                "{} -> target with\n{}",
                describe_maps(&morphism.maps),
                morphism.tgt.coherence().report
            ));
        }
    }
    Ok(())
}

/// Cyclic shift on every primed vertex.
fn relabel_primed(o: &PseudoEqObject) -> Result<(PseudoEqObject, BTreeMap<String, FinMap>)> {
    let mut along = BTreeMap::new();
    for v in ["x0'", "x1'", "x2'", "x0''", "x1''"] {
        let s = o.model.set(v)?;
        let n = s.len();
        let shift = FinMap::from_indices(s.clone(), s.clone(), (0..n).map(|i| (i + 1) % n).collect())?;
        along.insert(v.to_string(), shift);
    }
    Ok((o.transport(&along)?, along))
}

fn describe_maps(maps: &BTreeMap<String, FinMap>) -> String {
    ["x0", "x1"]
        .iter()
        .map(|v| {
            let g: Vec<String> = maps[*v].graph().map(|(a, b)| format!("{a}->{b}")).collect();
            format!("{v}: {}", g.join(" "))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::{monoid_action_monad, Monoid};

    #[test]
    fn small_z2_search_has_no_counterexample() {
        let t = monoid_action_monad(Monoid::cyclic(2)).unwrap();
        let s = coherence_search(&t, 1, 1).unwrap();
        assert!(s.sources > 0 && s.surjective > 0);
        assert!(s.counterexamples.is_empty(), "{:?}", s.counterexamples);
    }
}
