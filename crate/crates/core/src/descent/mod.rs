//! Descent data along maps of finite sets and along functors of
//! multicategories.
//!
//! For `p: x -> y` a descent datum is `(a: v -> x, γ: u -> v)` where `u` is
//! the chosen pullback of `p ∘ a` along `p`. Elements of `u` are pairs
//! `(x', w)` with `p(x') = p(a(w))`.

mod classify;
mod multi;
mod oracle;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::finset::{
    chosen_pullback, coequalizer, compose, for_each_choice, pair_into, transport_map, FinMap, FinSetObj, PullbackSquare,
};
use crate::report::Report;

pub use classify::{
    classify, is_epi_among, kernel_pair_comparison, levelwise_criterion, t_criterion, ClassificationReport,
};
pub use multi::{
    check_multi_laws, comparison_functor_multi, enumerate_over, multi_datum_domain, multi_datum_iso,
    multicat_descent_quotient, MultiDatum, Reconstruction,
};
pub use oracle::{brute_force_oracle, OracleFailure, OracleReport, OracleStatus};

/// The three descent classes of a map of finite sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentClasses {
    pub almost: bool,
    pub plain: bool,
    pub effective: bool,
}

/// In finite sets all three classes are the surjections.
pub fn descent_classes(f: &FinMap) -> DescentClasses {
    let s = f.is_surjective();
    DescentClasses { almost: s, plain: s, effective: s }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentDatum {
    pub a: FinMap,
    pub gamma: FinMap,
}

/// The square defining `u = p*(p ∘ a)`; its counit is `ε_{p∘a}`.
pub fn datum_domain(p: &FinMap, a: &FinMap) -> Result<PullbackSquare> {
    chosen_pullback(&compose(p, a)?, p)
}

/// `K^p(f)`: the pullback `p*f` with `γ(x'', (x', w)) = (x'', w)`.
pub fn comparison_functor(p: &FinMap, f: &FinMap) -> Result<DescentDatum> {
    let sq = chosen_pullback(f, p)?;
    let a = sq.leg1.clone();
    let u = datum_domain(p, &a)?;
    let gamma = FinMap::from_fn(u.apex.clone(), sq.apex.clone(), |z| {
        let (x2, inner) = split(z)?;
        let (_, w) = split(inner)?;
        Ok(Elem::pair(x2.clone(), w.clone()))
    })?;
    Ok(DescentDatum { a, gamma })
}

pub(crate) fn split(z: &Elem) -> Result<(&Elem, &Elem)> {
    z.as_pair().ok_or_else(|| Error::Invalid(format!("{z} is not a pair")))
}

/// Slice, unit and multiplication laws, pointwise.
pub fn check_algebra_laws(p: &FinMap, d: &DescentDatum) -> Report {
    let mut r = Report::new("descent datum");
    let v = d.a.dom();
    let u = match datum_domain(p, &d.a) {
        Ok(u) => u,
        Err(e) => {
            r.fail("a lands in dom p", None, e.to_string());
            return r;
        }
    };
    if d.gamma.dom() != &u.apex || d.gamma.cod() != v {
        r.fail("γ: p*(p∘a) -> v", None, "γ is mistyped");
        return r;
    }
    let slice = compose(&d.a, &d.gamma).map(|ag| ag.first_difference(&u.leg1));
    match slice {
        Ok(w) => r.record("slice a ∘ γ = p*(p∘a)", w),
        Err(e) => r.fail("slice a ∘ γ = p*(p∘a)", None, e.to_string()),
    }
    let unit = pair_into(&u, &d.a, &FinMap::identity(v))
        .and_then(|au| compose(&d.gamma, &au))
        .map(|g| g.first_difference(&FinMap::identity(v)));
    match unit {
        Ok(w) => r.record("unit γ ∘ (a, id) = id", w),
        Err(e) => r.fail("unit γ ∘ (a, id) = id", None, e.to_string()),
    }
    if !r.passed() {
        r.fail("multiplication γ ∘ p*ε = γ ∘ p*γ", None, "skipped: slice law fails");
        return r;
    }
    let mult = (|| -> Result<Option<Elem>> {
        let pa = compose(p, &d.a)?;
        let f = compose(&pa, &u.leg2)?;
        let via_eps = transport_map(p, &u.leg2, &f, &pa)?;
        let via_gamma = transport_map(p, &d.gamma, &f, &pa)?;
        Ok(compose(&d.gamma, &via_eps)?.first_difference(&compose(&d.gamma, &via_gamma)?))
    })();
    match mult {
        Ok(w) => r.record("multiplication γ ∘ p*ε = γ ∘ p*γ", w),
        Err(e) => r.fail("multiplication γ ∘ p*ε = γ ∘ p*γ", None, e.to_string()),
    }
    r
}

/// A reconstructed slice object together with the comparison maps.
#[derive(Clone, Debug, PartialEq)]
pub struct SetReconstruction {
    /// `f: w -> y`.
    pub f: FinMap,
    /// The quotient `v -> w`.
    pub quotient: FinMap,
    /// `(a, quotient): v -> p*f`, a bijection.
    pub iso: FinMap,
}

/// Quasi-inverse of `K^p`: quotients `v` by `γ(z) ~ ε(z)`.
pub fn set_descent_inverse(p: &FinMap, d: &DescentDatum) -> Result<SetReconstruction> {
    if !p.is_surjective() {
        return Err(Error::Invalid("descent inverse needs a surjective p".into()));
    }
    let laws = check_algebra_laws(p, d);
    if let Some(c) = laws.failures().next() {
        return Err(Error::NotAlgebraic {
            law: c.name.clone(),
            witness: c.witness.clone().unwrap_or_else(|| Elem::atom("?")),
        });
    }
    reconstruct(p, d)
}

/// The quotient construction without preconditions; the iso check is the
/// only guard.
pub(crate) fn reconstruct(p: &FinMap, d: &DescentDatum) -> Result<SetReconstruction> {
    let u = datum_domain(p, &d.a)?;
    let (w, q) = coequalizer(&d.gamma, &u.leg2)?;
    let mut table = BTreeMap::new();
    for v in d.a.dom() {
        table.insert(q.eval(v)?.clone(), p.eval(d.a.eval(v)?)?.clone());
    }
    let f = FinMap::new(w, p.cod().clone(), table)?;
    let iso = pair_into(&chosen_pullback(&f, p)?, &d.a, &q)?;
    if !iso.is_bijective() {
        let w = iso.dom().iter().find(|x| iso.fiber(iso.eval(x).unwrap()).len() > 1).cloned();
        return Err(Error::Invalid(format!(
            "the quotient does not pull back to the datum{}",
            w.map(|w| format!(" (at {w})")).unwrap_or_default()
        )));
    }
    Ok(SetReconstruction { f, quotient: q, iso })
}

/// All bijections `h: dom a -> dom b` with `b ∘ h = a`.
pub fn bijections_over(a: &FinMap, b: &FinMap) -> Vec<FinMap> {
    if a.cod() != b.cod() || a.dom().len() != b.dom().len() {
        return Vec::new();
    }
    let mut per_point = Vec::new();
    for y in a.cod() {
        let (fa, fb) = (a.fiber(y), b.fiber(y));
        if fa.len() != fb.len() {
            return Vec::new();
        }
        let perms = permutations(fb.len());
        per_point.push(
            perms
                .into_iter()
                .map(|perm| fa.iter().zip(perm).map(|(x, j)| ((*x).clone(), fb[j].clone())).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        );
    }
    let mut out = Vec::new();
    for_each_choice(&per_point, |choice| {
        let pairs = choice.iter().flatten().cloned();
        if let Ok(h) = FinMap::new(a.dom().clone(), b.dom().clone(), pairs) {
            out.push(h);
        }
    });
    out
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for i in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(i, n - 1);
            out.push(p);
        }
    }
    out
}

/// An isomorphism over `x` between slice objects, if one exists.
pub fn slice_iso(f: &FinMap, g: &FinMap) -> Option<FinMap> {
    bijections_over(f, g).into_iter().next()
}

/// `p*_h: u1 -> u2`, `(x', w) ↦ (x', h w)`.
fn pulled_back_map(p: &FinMap, h: &FinMap, a1: &FinMap, a2: &FinMap) -> Result<FinMap> {
    let u1 = datum_domain(p, a1)?;
    let u2 = datum_domain(p, a2)?;
    pair_into(&u2, &u1.leg1, &compose(h, &u1.leg2)?)
}

/// Whether `h` is a morphism of descent data `d1 -> d2`.
pub fn is_datum_morphism(p: &FinMap, d1: &DescentDatum, d2: &DescentDatum, h: &FinMap) -> bool {
    let Ok(ah) = compose(&d2.a, h) else { return false };
    if ah.first_difference(&d1.a).is_some() {
        return false;
    }
    let Ok(ph) = pulled_back_map(p, h, &d1.a, &d2.a) else { return false };
    match (compose(h, &d1.gamma), compose(&d2.gamma, &ph)) {
        (Ok(l), Ok(r)) => l.first_difference(&r).is_none(),
        _ => false,
    }
}

/// An isomorphism of descent data, if one exists.
pub fn datum_iso(p: &FinMap, d1: &DescentDatum, d2: &DescentDatum) -> Option<FinMap> {
    bijections_over(&d1.a, &d2.a).into_iter().find(|h| is_datum_morphism(p, d1, d2, h))
}

/// `ε_f ∘ γ = ε_f ∘ ε_{p∘a}`, read through an iso `h: v -> p*f` over `x`.
///
/// Without `iso`, holds when some iso over `x` satisfies it.
pub fn image_condition(p: &FinMap, f: &FinMap, d: &DescentDatum, iso: Option<&FinMap>) -> Result<bool> {
    let sq = chosen_pullback(f, p)?;
    let candidates = match iso {
        Some(h) => vec![h.clone()],
        None => bijections_over(&d.a, &sq.leg1),
    };
    if candidates.is_empty() {
        return Err(Error::NotInImage(format!("no iso over x between v and p*f for f = {}", describe(f))));
    }
    let u = datum_domain(p, &d.a)?;
    let eps = &sq.leg2;
    for h in &candidates {
        let lhs = compose(eps, &compose(h, &d.gamma)?)?;
        let rhs = compose(eps, &compose(h, &u.leg2)?)?;
        if lhs.first_difference(&rhs).is_none() {
            return Ok(true);
        }
    }
    Ok(false)
}

fn describe(f: &FinMap) -> String {
    let g: Vec<String> = f.graph().map(|(a, b)| format!("{a}->{b}")).collect();
    format!("{{{}}}", g.join(", "))
}

/// Every datum over `x` with fibers of `a` at most `max_fiber` and
/// `|v| <= max_total` that passes the laws.
///
/// Carriers are the canonical `{(x, i)}`, so isomorphic data on the same
/// carrier are all listed; `γ` is enumerated with the unit entries fixed.
pub fn enumerate_set_data(p: &FinMap, max_fiber: usize, max_total: usize) -> Result<Vec<DescentDatum>> {
    let x = p.dom();
    let mut out = Vec::new();
    let sizes: Vec<Vec<usize>> = x.iter().map(|_| (0..=max_fiber).collect()).collect();
    let mut assignments = Vec::new();
    for_each_choice(&sizes, |s| {
        if s.iter().sum::<usize>() <= max_total {
            assignments.push(s.to_vec());
        }
    });
    for sizes in assignments {
        let (v, a) = fibered_carrier(x, &sizes)?;
        let u = datum_domain(p, &a)?;
        let options: Vec<Vec<Elem>> = u
            .apex
            .iter()
            .map(|z| {
                let (x2, w) = split(z)?;
                if a.eval(w)? == x2 {
                    Ok(vec![w.clone()])
                } else {
                    Ok(a.fiber(x2).into_iter().cloned().collect())
                }
            })
            .collect::<Result<_>>()?;
        let mut err = None;
        for_each_choice(&options, |choice| {
            if err.is_some() {
                return;
            }
            match FinMap::from_indices(
                u.apex.clone(),
                v.clone(),
                choice.iter().map(|c| v.index_of(c).unwrap()).collect(),
            ) {
                Ok(gamma) => {
                    let d = DescentDatum { a: a.clone(), gamma };
                    if check_algebra_laws(p, &d).passed() {
                        out.push(d);
                    }
                }
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(out)
}

/// `{(x, i) : i < sizes[x]}` with its projection.
pub(crate) fn fibered_carrier(x: &FinSetObj, sizes: &[usize]) -> Result<(FinSetObj, FinMap)> {
    let mut pairs = Vec::new();
    for (xi, n) in x.iter().zip(sizes) {
        for i in 0..*n {
            pairs.push((Elem::pair(xi.clone(), Elem::atom(i.to_string())), xi.clone()));
        }
    }
    let v = FinSetObj::try_new(pairs.iter().map(|(e, _)| e.clone()))?;
    let a = FinMap::new(v.clone(), x.clone(), pairs)?;
    Ok((v, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surj(n: usize, k: usize, idx: Vec<usize>) -> FinMap {
        FinMap::from_indices(FinSetObj::numbered("x", n), FinSetObj::numbered("y", k), idx).unwrap()
    }

    #[test]
    fn classes_agree_with_surjectivity() {
        let p = surj(2, 1, vec![0, 0]);
        assert_eq!(descent_classes(&p), DescentClasses { almost: true, plain: true, effective: true });
        let i = surj(1, 2, vec![0]);
        assert!(!descent_classes(&i).almost);
    }

    #[test]
    fn two_point_fiber() {
        let p = surj(2, 1, vec![0, 0]);
        let f = FinMap::identity(p.cod());
        let d = comparison_functor(&p, &f).unwrap();
        assert_eq!(d.a.dom().len(), 2);
        assert_eq!(d.gamma.dom().len(), 4);
        assert!(check_algebra_laws(&p, &d).passed());
        let back = set_descent_inverse(&p, &d).unwrap();
        assert!(slice_iso(&back.f, &f).is_some());
    }

    #[test]
    fn deck_twist_leaves_the_image() {
        let p = surj(2, 1, vec![0, 0]);
        let f = FinMap::from_indices(FinSetObj::numbered("w", 2), p.cod().clone(), vec![0, 0]).unwrap();
        let d = comparison_functor(&p, &f).unwrap();
        let sigma = |w: &Elem| if *w == Elem::atom("w0") { Elem::atom("w1") } else { Elem::atom("w0") };
        let twisted = FinMap::from_fn(d.gamma.dom().clone(), d.gamma.cod().clone(), |z| {
            let (x2, inner) = split(z)?;
            let (x1, w) = split(inner)?;
            Ok(Elem::pair(x2.clone(), if x1 == x2 { w.clone() } else { sigma(w) }))
        })
        .unwrap();
        let d2 = DescentDatum { a: d.a.clone(), gamma: twisted };
        assert!(check_algebra_laws(&p, &d2).passed());
        let id = FinMap::identity(d.a.dom());
        assert!(image_condition(&p, &f, &d, Some(&id)).unwrap());
        assert!(!image_condition(&p, &f, &d2, Some(&id)).unwrap());
        assert!(image_condition(&p, &f, &d2, None).unwrap());
        assert!(datum_iso(&p, &d2, &d).is_some());
    }

    #[test]
    fn non_invertible_transition_breaks_multiplication() {
        let p = surj(2, 1, vec![0, 0]);
        let (v, a) = fibered_carrier(p.dom(), &[2, 2]).unwrap();
        let u = datum_domain(&p, &a).unwrap();
        let gamma = FinMap::from_fn(u.apex.clone(), v, |z| {
            let (x2, w) = split(z)?;
            Ok(if a.eval(w)? == x2 { w.clone() } else { a.fiber(x2)[0].clone() })
        })
        .unwrap();
        let d = DescentDatum { a, gamma };
        let r = check_algebra_laws(&p, &d);
        assert!(r.failed("multiplication γ ∘ p*ε = γ ∘ p*γ"), "{r}");
        assert!(!r.failed("unit γ ∘ (a, id) = id"));
        assert!(set_descent_inverse(&p, &d).is_err());
    }

    #[test]
    fn enumerated_data_reconstruct() {
        let p = surj(3, 2, vec![0, 0, 1]);
        let data = enumerate_set_data(&p, 2, 4).unwrap();
        assert!(!data.is_empty());
        for d in &data {
            let back = set_descent_inverse(&p, d).unwrap();
            assert!(datum_iso(&p, d, &comparison_functor(&p, &back.f).unwrap()).is_some());
        }
    }
}
