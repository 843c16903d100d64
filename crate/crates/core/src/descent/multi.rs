use std::collections::BTreeMap;

use super::{bijections_over, check_algebra_laws, fibered_carrier, reconstruct, DescentDatum};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::finset::{chosen_pullback, compose, for_each_choice, pair_into, FinMap, FinSetObj};
use crate::monad::MonadSpec;
use crate::multicat::{induce_quotient, pullback, TFunctor, TGraph, TMulticategory};
use crate::report::Report;

/// A descent datum along a functor `p`: `a: V -> A` and `γ: U -> V` where
/// `U` is the levelwise pullback of `p ∘ a` along `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiDatum {
    pub a: TFunctor,
    pub gamma: TFunctor,
}

/// `U = p*(p ∘ a)` with its projections to `A` and to `V`.
pub fn multi_datum_domain(p: &TFunctor, a: &TFunctor) -> Result<(TMulticategory, TFunctor, TFunctor)> {
    pullback(p, &a.then(p)?)
}

/// `K^p(f)` for a functor `f` into the target of `p`.
pub fn comparison_functor_multi(p: &TFunctor, f: &TFunctor) -> Result<MultiDatum> {
    let (v, a, _) = pullback(p, f)?;
    let (u, _, _) = multi_datum_domain(p, &a)?;
    let rule = |z: &Elem| -> Result<Elem> {
        let (x2, inner) = super::split(z)?;
        let (_, w) = super::split(inner)?;
        Ok(Elem::pair(x2.clone(), w.clone()))
    };
    let gamma = TFunctor::new(
        u.clone(),
        v.clone(),
        FinMap::from_fn(u.x0().clone(), v.x0().clone(), rule)?,
        FinMap::from_fn(u.x1().clone(), v.x1().clone(), rule)?,
    )?;
    Ok(MultiDatum { a, gamma })
}

impl MultiDatum {
    /// The set-level datum at level 0 or 1.
    pub fn level(&self, i: usize) -> DescentDatum {
        match i {
            0 => DescentDatum { a: self.a.p0.clone(), gamma: self.gamma.p0.clone() },
            _ => DescentDatum { a: self.a.p1.clone(), gamma: self.gamma.p1.clone() },
        }
    }
}

fn level_of(p: &TFunctor, i: usize) -> &FinMap {
    if i == 0 {
        &p.p0
    } else {
        &p.p1
    }
}

/// Functoriality of `a` and `γ`, the domain of `γ`, and the set laws at
/// levels 0 and 1.
pub fn check_multi_laws(p: &TFunctor, d: &MultiDatum) -> Report {
    let mut r = Report::new("levelwise descent datum");
    let mut a_report = d.a.validate();
    a_report.subject = "a".into();
    r.extend(a_report);
    let mut g_report = d.gamma.validate();
    g_report.subject = "γ".into();
    r.extend(g_report);
    match multi_datum_domain(p, &d.a) {
        Ok((u, _, _)) if u == d.gamma.src && d.gamma.tgt == d.a.src => r.pass("γ: p*(p∘a) -> V"),
        Ok(_) => r.fail("γ: p*(p∘a) -> V", None, "γ has the wrong source or target"),
        Err(e) => r.fail("γ: p*(p∘a) -> V", None, e.to_string()),
    }
    for i in 0..2 {
        let mut lr = check_algebra_laws(level_of(p, i), &d.level(i));
        lr.subject = format!("level {i}");
        r.extend(lr);
    }
    r
}

/// Output of the levelwise quotient construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub w: TMulticategory,
    /// `f: w -> B`.
    pub f: TFunctor,
    /// The quotient `h: V -> w`.
    pub h: TFunctor,
    /// Validity of `w`, `f`, `h`, the four pullback squares and `h ∘ γ = h ∘ ε`.
    pub checks: Report,
}

/// Rebuilds `f` from a datum: `w0`, `w1` by the set construction, structure
/// maps by factoring through the quotients.
pub fn multicat_descent_quotient(p: &TFunctor, d: &MultiDatum) -> Result<Reconstruction> {
    let laws = check_multi_laws(p, d);
    if let Some(c) = laws.failures().next() {
        return Err(Error::NotAlgebraic {
            law: c.name.clone(),
            witness: c.witness.clone().unwrap_or_else(|| Elem::atom("?")),
        });
    }
    let r0 = reconstruct(&p.p0, &d.level(0))?;
    let r1 = reconstruct(&p.p1, &d.level(1))?;
    let v = &d.a.src;
    let w = induce_quotient(v, &r0.quotient, &r1.quotient)?;
    let mut checks = Report::new("reconstruction");
    let mut wr = w.validate();
    wr.subject = "w".into();
    checks.extend(wr);
    let f = TFunctor::new(w.clone(), p.tgt.clone(), r0.f.clone(), r1.f.clone())?;
    let h = TFunctor::new(v.clone(), w.clone(), r0.quotient.clone(), r1.quotient.clone())?;
    let mut fr = f.validate();
    fr.subject = "f".into();
    checks.extend(fr);
    let mut hr = h.validate();
    hr.subject = "h".into();
    checks.extend(hr);
    if checks.passed() {
        pullback_squares(p, d, &f, &h, &mut checks)?;
        let (_, _, eps) = multi_datum_domain(p, &d.a)?;
        for (i, (hg, he)) in [
            (compose(&h.p0, &d.gamma.p0)?, compose(&h.p0, &eps.p0)?),
            (compose(&h.p1, &d.gamma.p1)?, compose(&h.p1, &eps.p1)?),
        ]
        .into_iter()
        .enumerate()
        {
            checks.record(format!("h ∘ γ = h ∘ ε at level {i}"), hg.first_difference(&he));
        }
    }
    Ok(Reconstruction { w, f, h, checks })
}

fn pullback_squares(p: &TFunctor, d: &MultiDatum, f: &TFunctor, h: &TFunctor, r: &mut Report) -> Result<()> {
    let (pl, fl, al, hl) = (p.levels()?, f.levels()?, d.a.levels()?, h.levels()?);
    let levels = [
        (&p.p0, &f.p0, &d.a.p0, &h.p0),
        (&p.p1, &f.p1, &d.a.p1, &h.p1),
        (&pl.p2, &fl.p2, &al.p2, &hl.p2),
        (&pl.p3, &fl.p3, &al.p3, &hl.p3),
    ];
    for (i, (pi, fi, ai, hi)) in levels.into_iter().enumerate() {
        let name = format!("level {i} square is a pullback");
        match pair_into(&chosen_pullback(fi, pi)?, ai, hi) {
            Ok(m) if m.is_bijective() => r.pass(name),
            Ok(m) => {
                let w = m.dom().iter().find(|x| m.fiber(m.eval(x).unwrap()).len() > 1).cloned();
                r.fail(name, w, "comparison into the pullback is not a bijection")
            }
            Err(e) => r.fail(name, None, e.to_string()),
        }
    }
    Ok(())
}

/// A levelwise isomorphism of data over `A`, if one exists.
pub fn multi_datum_iso(p: &TFunctor, d1: &MultiDatum, d2: &MultiDatum) -> Option<(FinMap, FinMap)> {
    let h0s: Vec<FinMap> = bijections_over(&d1.a.p0, &d2.a.p0)
        .into_iter()
        .filter(|h| super::is_datum_morphism(&p.p0, &d1.level(0), &d2.level(0), h))
        .collect();
    if h0s.is_empty() {
        return None;
    }
    let h1s: Vec<FinMap> = bijections_over(&d1.a.p1, &d2.a.p1)
        .into_iter()
        .filter(|h| super::is_datum_morphism(&p.p1, &d1.level(1), &d2.level(1), h))
        .collect();
    for h0 in &h0s {
        for h1 in &h1s {
            let Ok(func) = TFunctor::new(d1.a.src.clone(), d2.a.src.clone(), h0.clone(), h1.clone()) else {
                continue;
            };
            if func.is_valid() {
                return Some((h0.clone(), h1.clone()));
            }
        }
    }
    None
}

/// Functors `a: V -> A` with `|V0|, |V1| <= max`, one per isomorphism class
/// over `A`.
///
/// Carriers are `{(x, i)}` over `A`, and the structure of `V` is chosen
/// fiberwise so that the projection is a functor.
pub fn enumerate_over(base: &TMulticategory, max: usize) -> Result<Vec<TFunctor>> {
    let t = base.monad().clone();
    let mut out: Vec<TFunctor> = Vec::new();
    for s0 in size_vectors(base.x0().len(), max) {
        let (v0, a0) = fibered_carrier(base.x0(), &s0)?;
        for s1 in size_vectors(base.x1().len(), max) {
            let (v1, a1) = fibered_carrier(base.x1(), &s1)?;
            let mut d0_opts = Vec::new();
            let mut d1_opts = Vec::new();
            for m in &v1 {
                let bm = a1.eval(m)?;
                d0_opts.push(a0.fiber(base.d0().eval(bm)?).into_iter().cloned().collect::<Vec<_>>());
                d1_opts.push(lifts(&t, &a0, base.d1().eval(bm)?)?);
            }
            let mut graphs = Vec::new();
            for_each_choice(&d0_opts, |d0| {
                for_each_choice(&d1_opts, |d1| graphs.push((d0.to_vec(), d1.to_vec())));
            });
            for (d0, d1) in graphs {
                let d0 = FinMap::new(v1.clone(), v0.clone(), v1.iter().cloned().zip(d0))?;
                let d1 = FinMap::tabulate(v1.clone(), |m| Ok(d1[v1.index_of(m).unwrap()].clone()))?;
                let Ok(graph) = TGraph::new(t.clone(), d0.clone(), d1.clone()) else { continue };
                let s0_opts: Vec<Vec<Elem>> = v0
                    .iter()
                    .map(|x| {
                        let target = base.s0().eval(a0.eval(x)?)?;
                        Ok(a1
                            .fiber(target)
                            .into_iter()
                            .filter(|m| d0.eval(m).is_ok_and(|y| y == x) && d1.eval(m).is_ok_and(|b| *b == t.unit(x)))
                            .cloned()
                            .collect())
                    })
                    .collect::<Result<_>>()?;
                if s0_opts.iter().any(Vec::is_empty) {
                    continue;
                }
                let sq = graph.composable_pairs()?;
                let a2 = |pair: &Elem| -> Result<Elem> {
                    let (g, fs) = super::split(pair)?;
                    Ok(Elem::pair(a1.eval(g)?.clone(), t.apply_map(&a1, fs)?))
                };
                let mut comp_opts = Vec::new();
                for pair in &sq.apex {
                    let (g, fs) = super::split(pair)?;
                    let target = base.comp().eval(&a2(pair)?)?;
                    let want_d0 = d0.eval(g)?;
                    let want_d1 = t.mult(&t.apply(fs, |m| Ok(d1.eval(m)?.clone()))?)?;
                    comp_opts.push(
                        a1.fiber(target)
                            .into_iter()
                            .filter(|m| {
                                d0.eval(m).is_ok_and(|y| y == want_d0) && d1.eval(m).is_ok_and(|b| *b == want_d1)
                            })
                            .cloned()
                            .collect::<Vec<_>>(),
                    );
                }
                if comp_opts.iter().any(Vec::is_empty) {
                    continue;
                }
                let mut candidates = Vec::new();
                for_each_choice(&s0_opts, |s0| {
                    candidates.extend(unit_forced(&t, &v0, &v1, &d0, &d1, s0, &sq.apex, &comp_opts))
                });
                for (s0, comp) in candidates {
                    let s0 = FinMap::new(v0.clone(), v1.clone(), v0.iter().cloned().zip(s0))?;
                    let comp = FinMap::new(sq.apex.clone(), v1.clone(), sq.apex.iter().cloned().zip(comp))?;
                    let v = TMulticategory::new(graph.clone(), s0, comp)?;
                    if !v.is_valid() {
                        continue;
                    }
                    let a = TFunctor::new(v, base.clone(), a0.clone(), a1.clone())?;
                    if !out.iter().any(|b| iso_over(b, &a)) {
                        out.push(a);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Compositions compatible with the identities `s0`: the unit laws fix
/// `comp` on pairs with an identity on either side.
#[allow(clippy::too_many_arguments)]
fn unit_forced(
    t: &MonadSpec,
    v0: &FinSetObj,
    v1: &FinSetObj,
    d0: &FinMap,
    d1: &FinMap,
    s0: &[Elem],
    pairs: &FinSetObj,
    comp_opts: &[Vec<Elem>],
) -> Vec<(Vec<Elem>, Vec<Elem>)> {
    let ident = |x: &Elem| v0.index_of(x).map(|i| s0[i].clone());
    let mut forced: BTreeMap<Elem, Elem> = BTreeMap::new();
    for f in v1.iter() {
        let left = d0.eval(f).ok().and_then(ident).map(|i| Elem::pair(i, t.unit(f)));
        let right = d1
            .eval(f)
            .ok()
            .and_then(|b| t.apply(b, |x| ident(x).ok_or_else(|| Error::Invalid("no identity".into()))).ok())
            .map(|fs| Elem::pair(f.clone(), fs));
        for key in [left, right].into_iter().flatten() {
            if forced.insert(key.clone(), f.clone()).is_some_and(|prev| prev != *f) {
                return Vec::new();
            }
        }
    }
    let opts: Vec<Vec<Elem>> = pairs
        .iter()
        .zip(comp_opts)
        .map(|(pair, opts)| match forced.get(pair) {
            Some(f) if opts.contains(f) => vec![f.clone()],
            Some(_) => Vec::new(),
            None => opts.clone(),
        })
        .collect();
    let mut out = Vec::new();
    for_each_choice(&opts, |comp| out.push((s0.to_vec(), comp.to_vec())));
    out
}

fn size_vectors(n: usize, max: usize) -> Vec<Vec<usize>> {
    let opts: Vec<Vec<usize>> = (0..n).map(|_| (0..=max).collect()).collect();
    let mut out = Vec::new();
    for_each_choice(&opts, |s| {
        if s.iter().sum::<usize>() <= max {
            out.push(s.to_vec());
        }
    });
    out
}

/// Elements of `T(dom a)` sent to `target` by `T(a)`.
fn lifts(t: &MonadSpec, a: &FinMap, target: &Elem) -> Result<Vec<Elem>> {
    let (shape, positions) = t.split(target)?;
    let opts: Vec<Vec<Elem>> = positions.iter().map(|x| a.fiber(x).into_iter().cloned().collect()).collect();
    let mut out = Vec::new();
    for_each_choice(&opts, |c| out.push(t.assemble(&shape, c.to_vec())));
    Ok(out)
}

/// Whether two functors into the same base are isomorphic over it.
fn iso_over(a: &TFunctor, b: &TFunctor) -> bool {
    if a.src.x0().len() != b.src.x0().len() || a.src.x1().len() != b.src.x1().len() {
        return false;
    }
    let h0s = bijections_over(&a.p0, &b.p0);
    let h1s = bijections_over(&a.p1, &b.p1);
    h0s.iter().any(|h0| h1s.iter().any(|h1| a.src.relabel(h0, h1).is_ok_and(|r| r == b.src)))
}
