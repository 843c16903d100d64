//! T-multicategories internal to finite sets.
//!
//! A multicategory is the span `x0 <-d0- x1 -d1-> T(x0)` together with
//! identities `s0: x0 -> x1` and composition `comp: x2 -> x1`, where
//!
//! * `x2` holds the composable pairs `(g, F)`, `F ∈ T(x1)` with `T(d0)(F) = d1(g)`;
//! * `x3` holds the composable triples `((h, G), Ĝ)`, `Ĝ ∈ T(x2)` with
//!   `T(d0)(Ĝ) = G`.
//!
//! Construction only checks typing; the category laws are reported by
//! [`TMulticategory::validate`], so ill-behaved structures can be built and
//! inspected.

mod construct;
mod functor;

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSetObj, PullbackSquare};
use crate::monad::{t_pullback, MonadSpec};
use crate::report::Report;

pub use construct::{
    discrete, enumerate_functors, enumerate_multicategories, find_isomorphism, induce_quotient, pullback, terminal,
};
pub use functor::{LevelMaps, SurjectivityProfile, TFunctor};

/// The span part of a multicategory.
#[derive(Clone, Debug, PartialEq)]
pub struct TGraph {
    pub monad: MonadSpec,
    pub x0: FinSetObj,
    pub x1: FinSetObj,
    pub d0: FinMap,
    /// Into the finite set of `T(x0)` elements that occur.
    pub d1: FinMap,
}

impl TGraph {
    pub fn new(monad: MonadSpec, d0: FinMap, d1: FinMap) -> Result<Self> {
        let x0 = d0.cod().clone();
        let x1 = d0.dom().clone();
        if d1.dom() != &x1 {
            return Err(Error::BoundaryMismatch {
                context: "T-graph".into(),
                left: format!("dom d0 = {}", x1.describe()),
                right: format!("dom d1 = {}", d1.dom().describe()),
            });
        }
        for (f, t) in d1.graph() {
            if !monad.is_member(t, &x0) {
                return Err(Error::NotAMember { elem: t.clone(), set: format!("T({}) as d1({f})", x0.describe()) });
            }
        }
        let d1 = FinMap::tabulate(x1.clone(), |f| Ok(d1.eval(f)?.clone()))?;
        Ok(TGraph { monad, x0, x1, d0, d1 })
    }

    /// The pullback of `T(d0)` along `d1`.
    pub fn composable_pairs(&self) -> Result<PullbackSquare> {
        t_pullback(&self.monad, &self.d1, &self.d0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TMulticategory {
    graph: TGraph,
    s0: FinMap,
    comp: FinMap,
    x2: PullbackSquare,
    x3: PullbackSquare,
}

impl TMulticategory {
    /// Assembles a multicategory; `comp` must be defined on exactly the
    /// composable pairs.
    pub fn new(graph: TGraph, s0: FinMap, comp: FinMap) -> Result<Self> {
        let x2 = graph.composable_pairs()?;
        Self::assemble(graph, s0, comp, x2)
    }

    /// Like [`TMulticategory::new`], with composition given as a rule on `(g, F)`.
    pub fn from_rule(graph: TGraph, s0: FinMap, mut comp: impl FnMut(&Elem, &Elem) -> Result<Elem>) -> Result<Self> {
        let x2 = graph.composable_pairs()?;
        let comp = FinMap::from_fn(x2.apex.clone(), graph.x1.clone(), |p| {
            let (g, f) = p.as_pair().expect("composable pairs are pairs");
            comp(g, f)
        })?;
        Self::assemble(graph, s0, comp, x2)
    }

    fn assemble(graph: TGraph, s0: FinMap, comp: FinMap, x2: PullbackSquare) -> Result<Self> {
        if s0.dom() != &graph.x0 || s0.cod() != &graph.x1 {
            return Err(Error::BoundaryMismatch {
                context: "identities s0".into(),
                left: format!("{} -> {}", s0.dom().describe(), s0.cod().describe()),
                right: format!("{} -> {}", graph.x0.describe(), graph.x1.describe()),
            });
        }
        if comp.dom() != &x2.apex || comp.cod() != &graph.x1 {
            return Err(Error::BoundaryMismatch {
                context: "composition".into(),
                left: format!("{} -> {}", comp.dom().describe(), comp.cod().describe()),
                right: format!("{} -> {}", x2.apex.describe(), graph.x1.describe()),
            });
        }
        let x3 = t_pullback(&graph.monad, &x2.leg2, &x2.leg1)?;
        Ok(TMulticategory { graph, s0, comp, x2, x3 })
    }

    pub fn with_s0(&self, s0: FinMap) -> Result<Self> {
        Self::assemble(self.graph.clone(), s0, self.comp.clone(), self.x2.clone())
    }

    pub fn with_comp(&self, comp: FinMap) -> Result<Self> {
        Self::assemble(self.graph.clone(), self.s0.clone(), comp, self.x2.clone())
    }

    pub fn graph(&self) -> &TGraph {
        &self.graph
    }

    pub fn monad(&self) -> &MonadSpec {
        &self.graph.monad
    }

    pub fn x0(&self) -> &FinSetObj {
        &self.graph.x0
    }

    pub fn x1(&self) -> &FinSetObj {
        &self.graph.x1
    }

    pub fn x2(&self) -> &FinSetObj {
        &self.x2.apex
    }

    pub fn x3(&self) -> &FinSetObj {
        &self.x3.apex
    }

    pub fn x2_square(&self) -> &PullbackSquare {
        &self.x2
    }

    pub fn x3_square(&self) -> &PullbackSquare {
        &self.x3
    }

    pub fn d0(&self) -> &FinMap {
        &self.graph.d0
    }

    pub fn d1(&self) -> &FinMap {
        &self.graph.d1
    }

    pub fn s0(&self) -> &FinMap {
        &self.s0
    }

    pub fn comp(&self) -> &FinMap {
        &self.comp
    }

    /// `(g, F) ↦ g`.
    pub fn d0_on_pairs(&self) -> &FinMap {
        &self.x2.leg1
    }

    /// `(g, F) ↦ F`, into the occurring elements of `T(x1)`.
    pub fn d2_on_pairs(&self) -> &FinMap {
        &self.x2.leg2
    }

    /// `((h, G), Ĝ) ↦ (h, G)`.
    pub fn d0_on_triples(&self) -> &FinMap {
        &self.x3.leg1
    }

    /// `((h, G), Ĝ) ↦ Ĝ`.
    pub fn d3_on_triples(&self) -> &FinMap {
        &self.x3.leg2
    }

    pub fn compose(&self, g: &Elem, fs: &Elem) -> Result<Elem> {
        Ok(self.comp.eval(&Elem::pair(g.clone(), fs.clone()))?.clone())
    }

    /// `((h, G), Ĝ) ↦ (h, T(comp)(Ĝ))`.
    pub fn d1_on_triples(&self, t: &Elem) -> Result<Elem> {
        let (hg, big) = split_pair(t)?;
        let (h, _) = split_pair(hg)?;
        Ok(Elem::pair(h.clone(), self.monad().apply_map(&self.comp, big)?))
    }

    /// `((h, G), Ĝ) ↦ (comp(h, G), m(T(d2)(Ĝ)))`.
    pub fn d2_on_triples(&self, t: &Elem) -> Result<Elem> {
        let (hg, big) = split_pair(t)?;
        let (h, g) = split_pair(hg)?;
        let t_ = self.monad();
        let flat = t_.mult(&t_.apply_map(&self.x2.leg2, big)?)?;
        Ok(Elem::pair(self.compose(h, g)?, flat))
    }

    /// `f ↦ (s0(d0 f), e(f))`.
    pub fn s1_left(&self, f: &Elem) -> Result<Elem> {
        let a = self.graph.d0.eval(f)?;
        Ok(Elem::pair(self.s0.eval(a)?.clone(), self.monad().unit(f)))
    }

    /// `f ↦ (f, T(s0)(d1 f))`.
    pub fn s1_right(&self, f: &Elem) -> Result<Elem> {
        let ids = self.monad().apply_map(&self.s0, self.graph.d1.eval(f)?)?;
        Ok(Elem::pair(f.clone(), ids))
    }

    /// Checks every law on every element, with a witness per failed law.
    pub fn validate(&self) -> Report {
        let t = self.monad();
        let g = &self.graph;
        let mut r = Report::new("multicategory");

        r.record("d0 ∘ s0 = id", first(g.x0.iter(), |a| Ok(g.d0.eval(self.s0.eval(a)?)? == a)));
        r.record("d1 ∘ s0 = e", first(g.x0.iter(), |a| Ok(*g.d1.eval(self.s0.eval(a)?)? == t.unit(a))));
        r.record(
            "d0 ∘ comp = d0 ∘ d0",
            first(self.x2().iter(), |p| Ok(g.d0.eval(self.comp.eval(p)?)? == g.d0.eval(self.x2.leg1.eval(p)?)?)),
        );
        r.record(
            "d1 ∘ comp = m ∘ T(d1) ∘ d2",
            first(self.x2().iter(), |p| {
                let lhs = g.d1.eval(self.comp.eval(p)?)?;
                let rhs = t.mult(&t.apply_map(&g.d1, self.x2.leg2.eval(p)?)?)?;
                Ok(*lhs == rhs)
            }),
        );
        r.record(
            "left unit comp(s0(d0 f), e(f)) = f",
            first(g.x1.iter(), |f| Ok(self.comp.eval(&self.s1_left(f)?)? == f)),
        );
        r.record(
            "right unit comp(f, T(s0)(d1 f)) = f",
            first(g.x1.iter(), |f| Ok(self.comp.eval(&self.s1_right(f)?)? == f)),
        );
        r.record(
            "associativity",
            first(self.x3().iter(), |tr| {
                let lhs = self.comp.eval(&self.d1_on_triples(tr)?)?;
                let rhs = self.comp.eval(&self.d2_on_triples(tr)?)?;
                Ok(lhs == rhs)
            }),
        );
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }
}

pub(crate) fn split_pair(x: &Elem) -> Result<(&Elem, &Elem)> {
    x.as_pair().ok_or_else(|| Error::Invalid(format!("{x} is not a pair")))
}

/// First element on which the predicate fails or errors.
pub(crate) fn first<'a>(
    items: impl IntoIterator<Item = &'a Elem>,
    mut holds: impl FnMut(&Elem) -> Result<bool>,
) -> Option<Elem> {
    items.into_iter().find(|x| !matches!(holds(x), Ok(true))).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::{free_monoid_monad, identity_monad};

    fn z2_category() -> TMulticategory {
        let t = identity_monad();
        let x0 = FinSetObj::atoms(["*"]);
        let x1 = FinSetObj::atoms(["0", "1"]);
        let d0 = FinMap::constant(&x1, &x0, &"*".into()).unwrap();
        let graph = TGraph::new(t, d0.clone(), d0).unwrap();
        let s0 = FinMap::constant(&x0, &x1, &"0".into()).unwrap();
        TMulticategory::from_rule(graph, s0, |g, f| {
            let sum = (g.as_atom() == Some("1")) ^ (f.as_atom() == Some("1"));
            Ok(Elem::atom(if sum { "1" } else { "0" }))
        })
        .unwrap()
    }

    #[test]
    fn z2_levels() {
        let mc = z2_category();
        assert_eq!(mc.x2().len(), 4);
        assert_eq!(mc.x3().len(), 8);
        assert!(mc.validate().passed(), "{}", mc.validate());
    }

    #[test]
    fn swapped_composition_is_caught() {
        let mc = z2_category();
        let idx: Vec<usize> = mc.comp().indices().map(|i| 1 - i).collect();
        let bad = FinMap::from_indices(mc.x2().clone(), mc.x1().clone(), idx).unwrap();
        let report = mc.with_comp(bad).unwrap().validate();
        assert!(report.failed("left unit comp(s0(d0 f), e(f)) = f"));
        let w = report.failures().next().unwrap().witness.clone();
        assert!(w.is_some());
    }

    #[test]
    fn discrete_under_free_monoid() {
        let t = free_monoid_monad();
        let s = FinSetObj::atoms(["a"]);
        let d1 = FinMap::tabulate(s.clone(), |x| Ok(t.unit(x))).unwrap();
        let graph = TGraph::new(t, FinMap::identity(&s), d1).unwrap();
        let mc = TMulticategory::from_rule(graph, FinMap::identity(&s), |g, _| Ok(g.clone())).unwrap();
        assert_eq!(mc.x2().len(), 1);
        assert_eq!(mc.x3().len(), 1);
        assert!(mc.is_valid());
    }

    #[test]
    fn empty_multicategory() {
        let t = identity_monad();
        let e = FinSetObj::empty();
        let id = FinMap::identity(&e);
        let mc = TMulticategory::new(TGraph::new(t, id.clone(), id.clone()).unwrap(), id.clone(), id).unwrap();
        assert!(mc.x2().is_empty() && mc.x3().is_empty());
        assert!(mc.is_valid());
    }

    #[test]
    fn d1_must_land_in_t_x0() {
        let t = free_monoid_monad();
        let s = FinSetObj::atoms(["a"]);
        let bad = FinMap::constant(&s, &FinSetObj::atoms(["a"]), &"a".into()).unwrap();
        assert!(TGraph::new(t, FinMap::identity(&s), bad).is_err());
    }
}
