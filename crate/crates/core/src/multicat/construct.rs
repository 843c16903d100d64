use std::collections::BTreeMap;

use super::{split_pair, TFunctor, TGraph, TMulticategory};
use crate::elem::Elem;
use crate::error::{Error, IllDefined, Result};
use crate::finset::{all_maps, chosen_pullback, compose, FinMap, FinSetObj};
use crate::monad::MonadSpec;

/// `D(S)`: objects `S`, only identities.
pub fn discrete(monad: &MonadSpec, objects: &FinSetObj) -> Result<TMulticategory> {
    let id = FinMap::identity(objects);
    let d1 = FinMap::tabulate(objects.clone(), |a| Ok(monad.unit(a)))?;
    let graph = TGraph::new(monad.clone(), id.clone(), d1)?;
    TMulticategory::from_rule(graph, id, |g, _| Ok(g.clone()))
}

/// The terminal multicategory: one object, `x1 = T(1)`, composition `m`.
pub fn terminal(monad: &MonadSpec) -> Result<TMulticategory> {
    let one = FinSetObj::atoms(["*"]);
    let x1 = monad.materialize(&one)?;
    let d0 = FinMap::constant(&x1, &one, &Elem::atom("*"))?;
    let d1 = FinMap::tabulate(x1.clone(), |t| Ok(t.clone()))?;
    let s0 = monad.unit_map(&one)?;
    TMulticategory::from_rule(TGraph::new(monad.clone(), d0, d1)?, s0, |_, fs| monad.mult(fs))
}

/// Levelwise pullback of `f: A -> C` and `g: B -> C`, with its projections.
///
/// Objects and morphisms of the apex are pairs `(a, b)` with `a` from `A`.
pub fn pullback(f: &TFunctor, g: &TFunctor) -> Result<(TMulticategory, TFunctor, TFunctor)> {
    if f.tgt != g.tgt {
        return Err(Error::BoundaryMismatch {
            context: "pullback of multicategories".into(),
            left: "target of the first functor".into(),
            right: "target of the second functor".into(),
        });
    }
    let t = f.src.monad().clone();
    let (a, b) = (&f.src, &g.src);
    let x0 = chosen_pullback(&g.p0, &f.p0)?.apex;
    let x1 = chosen_pullback(&g.p1, &f.p1)?.apex;
    let d0 = FinMap::from_fn(x1.clone(), x0.clone(), |m| {
        let (u, v) = split_pair(m)?;
        Ok(Elem::pair(a.d0().eval(u)?.clone(), b.d0().eval(v)?.clone()))
    })?;
    let d1 = FinMap::tabulate(x1.clone(), |m| {
        let (u, v) = split_pair(m)?;
        t.zip(a.d1().eval(u)?, b.d1().eval(v)?)?
            .ok_or_else(|| Error::Invalid(format!("boundaries of {m} have different shapes")))
    })?;
    let s0 = FinMap::from_fn(x0.clone(), x1.clone(), |o| {
        let (u, v) = split_pair(o)?;
        Ok(Elem::pair(a.s0().eval(u)?.clone(), b.s0().eval(v)?.clone()))
    })?;
    let graph = TGraph::new(t.clone(), d0, d1)?;
    let apex = TMulticategory::from_rule(graph, s0, |m, fs| {
        let (u, v) = split_pair(m)?;
        let (us, vs) = t.unzip(fs)?;
        Ok(Elem::pair(a.compose(u, &us)?, b.compose(v, &vs)?))
    })?;
    let proj = |side: usize, tgt: &TMulticategory| -> Result<TFunctor> {
        let pick = |x: &Elem| -> Result<Elem> {
            let (u, v) = split_pair(x)?;
            Ok(if side == 0 { u.clone() } else { v.clone() })
        };
        TFunctor::new(
            apex.clone(),
            tgt.clone(),
            FinMap::from_fn(apex.x0().clone(), tgt.x0().clone(), pick)?,
            FinMap::from_fn(apex.x1().clone(), tgt.x1().clone(), pick)?,
        )
    };
    let pa = proj(0, a)?;
    let pb = proj(1, b)?;
    Ok((apex, pa, pb))
}

impl TMulticategory {
    /// Transports the structure along bijections `b0: x0 -> y0`, `b1: x1 -> y1`.
    pub fn relabel(&self, b0: &FinMap, b1: &FinMap) -> Result<TMulticategory> {
        if !b0.is_bijective() || !b1.is_bijective() || b0.dom() != self.x0() || b1.dom() != self.x1() {
            return Err(Error::Invalid("relabeling needs bijections out of x0 and x1".into()));
        }
        let t = self.monad();
        let (i0, i1) = (b0.inverse()?, b1.inverse()?);
        let d0 = compose(b0, &compose(self.d0(), &i1)?)?;
        let d1 = FinMap::tabulate(b1.cod().clone(), |f| t.apply_map(b0, self.d1().eval(i1.eval(f)?)?))?;
        let s0 = compose(b1, &compose(self.s0(), &i0)?)?;
        let graph = TGraph::new(t.clone(), d0, d1)?;
        TMulticategory::from_rule(graph, s0, |g, fs| {
            let c = self.compose(i1.eval(g)?, &t.apply_map(&i1, fs)?)?;
            Ok(b1.eval(&c)?.clone())
        })
    }
}

/// Every functor `src -> tgt` (checked against all four equations).
pub fn enumerate_functors(src: &TMulticategory, tgt: &TMulticategory) -> Vec<TFunctor> {
    let t = src.monad();
    let mut out = Vec::new();
    for p0 in all_maps(src.x0(), tgt.x0()) {
        let mut options: Vec<Vec<Elem>> = Vec::with_capacity(src.x1().len());
        for f in src.x1() {
            let (Ok(a), Ok(bd)) = (src.d0().eval(f), src.d1().eval(f)) else {
                return out;
            };
            let want0 = p0.eval(a).expect("p0 is total").clone();
            let Ok(want1) = t.apply_map(&p0, bd) else { continue };
            options.push(
                tgt.x1()
                    .iter()
                    .filter(|g| tgt.d0().apply(g) == Some(&want0) && tgt.d1().apply(g) == Some(&want1))
                    .cloned()
                    .collect(),
            );
        }
        if options.len() != src.x1().len() {
            continue;
        }
        crate::finset::for_each_choice(&options, |choice| {
            let p1 =
                FinMap::new(src.x1().clone(), tgt.x1().clone(), src.x1().iter().cloned().zip(choice.iter().cloned()))
                    .expect("choices are typed");
            if let Ok(f) = TFunctor::new(src.clone(), tgt.clone(), p0.clone(), p1) {
                if f.is_valid() {
                    out.push(f);
                }
            }
        });
    }
    out
}

/// A levelwise bijective functor `a -> b`, if one exists.
pub fn find_isomorphism(a: &TMulticategory, b: &TMulticategory) -> Option<TFunctor> {
    if a.x0().len() != b.x0().len() || a.x1().len() != b.x1().len() || a.monad() != b.monad() {
        return None;
    }
    enumerate_functors(a, b).into_iter().find(|f| f.p0.is_bijective() && f.p1.is_bijective())
}

/// Every valid multicategory on the given carriers.
///
/// Boundaries are drawn from elements of `T(x0)` with arity at most `bound`.
pub fn enumerate_multicategories(
    monad: &MonadSpec,
    x0: &FinSetObj,
    x1: &FinSetObj,
    bound: usize,
) -> Vec<TMulticategory> {
    let mut out = Vec::new();
    let boundaries = monad.elements(x0, bound);
    let d1_choices: Vec<Vec<Elem>> = x1.iter().map(|_| boundaries.clone()).collect();
    for d0 in all_maps(x1, x0) {
        let mut d1s = Vec::new();
        crate::finset::for_each_choice(&d1_choices, |c| d1s.push(c.to_vec()));
        if x1.is_empty() {
            d1s = vec![Vec::new()];
        }
        for d1v in d1s {
            let Ok(d1) = FinMap::tabulate(x1.clone(), |f| Ok(d1v[x1.index_of(f).unwrap()].clone())) else {
                continue;
            };
            let Ok(graph) = TGraph::new(monad.clone(), d0.clone(), d1) else { continue };
            enumerate_on_graph(&graph, &mut out);
        }
    }
    out
}

fn enumerate_on_graph(graph: &TGraph, out: &mut Vec<TMulticategory>) {
    let t = &graph.monad;
    let s0_options: Vec<Vec<Elem>> = graph
        .x0
        .iter()
        .map(|a| {
            graph
                .x1
                .iter()
                .filter(|f| graph.d0.apply(f) == Some(a) && graph.d1.apply(f) == Some(&t.unit(a)))
                .cloned()
                .collect()
        })
        .collect();
    let Ok(x2) = graph.composable_pairs() else { return };
    let x2 = x2.apex;
    let mut s0s = Vec::new();
    crate::finset::for_each_choice(&s0_options, |c| s0s.push(c.to_vec()));
    if graph.x0.is_empty() {
        s0s = vec![Vec::new()];
    }
    for s0v in s0s {
        let s0 = FinMap::new(graph.x0.clone(), graph.x1.clone(), graph.x0.iter().cloned().zip(s0v)).unwrap();
        // composites are typed by the span laws, and pinned on unit pairs
        let mut options: Vec<Vec<Elem>> = Vec::with_capacity(x2.len());
        let mut forced: BTreeMap<Elem, Elem> = BTreeMap::new();
        let mut clash = false;
        for f in graph.x1.iter() {
            let left = Elem::pair(s0.eval(graph.d0.eval(f).unwrap()).unwrap().clone(), t.unit(f));
            let right = match t.apply_map(&s0, graph.d1.eval(f).unwrap()) {
                Ok(ids) => Elem::pair(f.clone(), ids),
                Err(_) => continue,
            };
            for p in [left, right] {
                if let Some(old) = forced.insert(p, f.clone()) {
                    clash |= old != *f;
                }
            }
        }
        if clash {
            continue;
        }
        for p in x2.iter() {
            let (g, fs) = p.as_pair().unwrap();
            if let Some(f) = forced.get(p) {
                options.push(vec![f.clone()]);
                continue;
            }
            let cod = graph.d0.eval(g).unwrap();
            let Ok(dom) = t.apply_map(&graph.d1, fs).and_then(|tt| t.mult(&tt)) else {
                options.push(Vec::new());
                continue;
            };
            options.push(
                graph
                    .x1
                    .iter()
                    .filter(|h| graph.d0.apply(h) == Some(cod) && graph.d1.apply(h) == Some(&dom))
                    .cloned()
                    .collect(),
            );
        }
        let mut run = |choice: &[Elem]| {
            let comp = FinMap::new(x2.clone(), graph.x1.clone(), x2.iter().cloned().zip(choice.iter().cloned()))
                .expect("choices are typed");
            if let Ok(mc) = TMulticategory::new(graph.clone(), s0.clone(), comp) {
                if mc.is_valid() {
                    out.push(mc);
                }
            }
        };
        if x2.is_empty() {
            run(&[]);
        } else {
            crate::finset::for_each_choice(&options, &mut run);
        }
    }
}

/// Structure induced on the quotient `w` of `v` along surjections
/// `h0: v0 -> w0`, `h1: v1 -> w1`.
///
/// Every structure map of `w` is defined through representatives; if two
/// representatives disagree the error names both.
pub fn induce_quotient(v: &TMulticategory, h0: &FinMap, h1: &FinMap) -> Result<TMulticategory> {
    let t = v.monad();
    if h0.dom() != v.x0() || h1.dom() != v.x1() {
        return Err(Error::BoundaryMismatch {
            context: "quotient".into(),
            left: format!("{} and {}", h0.dom().describe(), h1.dom().describe()),
            right: format!("{} and {}", v.x0().describe(), v.x1().describe()),
        });
    }
    let (w0, w1) = (h0.cod().clone(), h1.cod().clone());
    let d0 = descend("d0", v.x1(), &w1, |f| Ok(h1.eval(f)?.clone()), |f| Ok(h0.eval(v.d0().eval(f)?)?.clone()))?;
    let d1 = descend("d1", v.x1(), &w1, |f| Ok(h1.eval(f)?.clone()), |f| t.apply_map(h0, v.d1().eval(f)?))?;
    let s0 = descend("s0", v.x0(), &w0, |a| Ok(h0.eval(a)?.clone()), |a| Ok(h1.eval(v.s0().eval(a)?)?.clone()))?;
    let d0 = FinMap::new(w1.clone(), w0.clone(), d0)?;
    let d1 = FinMap::tabulate(w1.clone(), |f| Ok(d1[f].clone()))?;
    let s0 = FinMap::new(w0.clone(), w1.clone(), s0)?;
    let graph = TGraph::new(t.clone(), d0, d1)?;
    let w2 = graph.composable_pairs()?.apex;
    let h2 = |p: &Elem| -> Result<Elem> {
        let (g, fs) = split_pair(p)?;
        Ok(Elem::pair(h1.eval(g)?.clone(), t.apply_map(h1, fs)?))
    };
    let comp = descend("comp", v.x2(), &w2, h2, |p| Ok(h1.eval(v.comp().eval(p)?)?.clone()))?;
    let comp = FinMap::new(w2, w1, comp)?;
    TMulticategory::new(graph, s0, comp)
}

fn descend(
    name: &str,
    source: &FinSetObj,
    quotient: &FinSetObj,
    mut class: impl FnMut(&Elem) -> Result<Elem>,
    mut value: impl FnMut(&Elem) -> Result<Elem>,
) -> Result<BTreeMap<Elem, Elem>> {
    let mut chosen: BTreeMap<Elem, (Elem, Elem)> = BTreeMap::new();
    for x in source {
        let c = class(x)?;
        let y = value(x)?;
        match chosen.get(&c) {
            Some((rep, old)) if *old != y => {
                return Err(Error::IllDefined(Box::new(IllDefined {
                    map: name.to_string(),
                    first: rep.clone(),
                    second: x.clone(),
                    first_image: old.clone(),
                    second_image: y,
                })))
            }
            Some(_) => {}
            None => {
                chosen.insert(c, (x.clone(), y));
            }
        }
    }
    if let Some(missing) = quotient.iter().find(|q| !chosen.contains_key(q)) {
        return Err(Error::Invalid(format!("{missing} has no preimage, so {name} cannot be induced")));
    }
    Ok(chosen.into_iter().map(|(c, (_, y))| (c, y)).collect())
}
