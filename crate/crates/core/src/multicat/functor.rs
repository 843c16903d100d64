use serde::{Deserialize, Serialize};

use super::{first, split_pair, TMulticategory};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::finset::{compose, FinMap};
use crate::report::Report;

/// A functor of multicategories over the same monad, given by `p0` and `p1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TFunctor {
    pub src: TMulticategory,
    pub tgt: TMulticategory,
    pub p0: FinMap,
    pub p1: FinMap,
}

/// The induced maps on composable pairs and triples.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelMaps {
    pub p2: FinMap,
    pub p3: FinMap,
}

/// Surjectivity of `p0 .. p3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectivityProfile {
    pub p0: bool,
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
}

impl SurjectivityProfile {
    pub fn all(&self) -> bool {
        self.p0 && self.p1 && self.p2 && self.p3
    }
}

impl TFunctor {
    pub fn new(src: TMulticategory, tgt: TMulticategory, p0: FinMap, p1: FinMap) -> Result<Self> {
        if src.monad() != tgt.monad() {
            return Err(Error::BoundaryMismatch {
                context: "functor".into(),
                left: format!("source monad {}", src.monad().name()),
                right: format!("target monad {}", tgt.monad().name()),
            });
        }
        for (name, map, dom, cod) in [("p0", &p0, src.x0(), tgt.x0()), ("p1", &p1, src.x1(), tgt.x1())] {
            if map.dom() != dom || map.cod() != cod {
                return Err(Error::BoundaryMismatch {
                    context: format!("functor component {name}"),
                    left: format!("{} -> {}", map.dom().describe(), map.cod().describe()),
                    right: format!("{} -> {}", dom.describe(), cod.describe()),
                });
            }
        }
        Ok(TFunctor { src, tgt, p0, p1 })
    }

    pub fn identity(mc: &TMulticategory) -> Self {
        TFunctor { src: mc.clone(), tgt: mc.clone(), p0: FinMap::identity(mc.x0()), p1: FinMap::identity(mc.x1()) }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TFunctor) -> Result<TFunctor> {
        TFunctor::new(self.src.clone(), next.tgt.clone(), compose(&next.p0, &self.p0)?, compose(&next.p1, &self.p1)?)
    }

    /// `(g, F) ↦ (p1 g, T(p1) F)`.
    pub fn p2_at(&self, pair: &Elem) -> Result<Elem> {
        let (g, fs) = split_pair(pair)?;
        let t = self.src.monad();
        Ok(Elem::pair(self.p1.eval(g)?.clone(), t.apply_map(&self.p1, fs)?))
    }

    /// `((h, G), Ĝ) ↦ (p2(h, G), T(p2) Ĝ)`.
    pub fn p3_at(&self, triple: &Elem) -> Result<Elem> {
        let (hg, big) = split_pair(triple)?;
        let t = self.src.monad();
        Ok(Elem::pair(self.p2_at(hg)?, t.apply(big, |p| self.p2_at(p))?))
    }

    /// The four functor equations, checked pointwise.
    pub fn validate(&self) -> Report {
        let (s, t) = (&self.src, &self.tgt);
        let monad = s.monad();
        let mut r = Report::new("functor");
        r.record(
            "d0 ∘ p1 = p0 ∘ d0",
            first(s.x1().iter(), |f| Ok(t.d0().eval(self.p1.eval(f)?)? == self.p0.eval(s.d0().eval(f)?)?)),
        );
        r.record(
            "d1 ∘ p1 = T(p0) ∘ d1",
            first(
                s.x1().iter(),
                |f| Ok(*t.d1().eval(self.p1.eval(f)?)? == monad.apply_map(&self.p0, s.d1().eval(f)?)?),
            ),
        );
        r.record(
            "p1 ∘ s0 = s0 ∘ p0",
            first(s.x0().iter(), |a| Ok(self.p1.eval(s.s0().eval(a)?)? == t.s0().eval(self.p0.eval(a)?)?)),
        );
        r.record(
            "p1 ∘ comp = comp ∘ p2",
            first(s.x2().iter(), |pair| Ok(self.p1.eval(s.comp().eval(pair)?)? == t.comp().eval(&self.p2_at(pair)?)?)),
        );
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    pub fn levels(&self) -> Result<LevelMaps> {
        let p2 = FinMap::from_fn(self.src.x2().clone(), self.tgt.x2().clone(), |p| self.p2_at(p))?;
        let p3 = FinMap::from_fn(self.src.x3().clone(), self.tgt.x3().clone(), |p| self.p3_at(p))?;
        Ok(LevelMaps { p2, p3 })
    }

    pub fn profile(&self) -> Result<SurjectivityProfile> {
        let levels = self.levels()?;
        Ok(SurjectivityProfile {
            p0: self.p0.is_surjective(),
            p1: self.p1.is_surjective(),
            p2: levels.p2.is_surjective(),
            p3: levels.p3.is_surjective(),
        })
    }

    /// Whether `p1` surjective implies `p0` surjective for this functor.
    pub fn graph_morphism_cancellation(&self) -> bool {
        !self.p1.is_surjective() || self.p0.is_surjective()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSetObj;
    use crate::monad::free_monoid_monad;
    use crate::multicat::discrete;

    #[test]
    fn collapse_of_discrete_multicategories() {
        let t = free_monoid_monad();
        let ab = discrete(&t, &FinSetObj::atoms(["a", "b"])).unwrap();
        let c = discrete(&t, &FinSetObj::atoms(["c"])).unwrap();
        let k = FinMap::constant(ab.x0(), c.x0(), &"c".into()).unwrap();
        let f = TFunctor::new(ab.clone(), c, k.clone(), k).unwrap();
        assert!(f.is_valid());
        let levels = f.levels().unwrap();
        assert_eq!(levels.p2.dom().len(), 2);
        assert_eq!(levels.p2.cod().len(), 1);
        assert!(f.profile().unwrap().all());

        let id = TFunctor::identity(&ab);
        let composite = id.then(&f).unwrap();
        assert_eq!(composite.levels().unwrap(), levels);
    }

    #[test]
    fn altered_p1_is_caught() {
        let t = free_monoid_monad();
        let ab = discrete(&t, &FinSetObj::atoms(["a", "b"])).unwrap();
        let swap = FinMap::new(
            ab.x1().clone(),
            ab.x1().clone(),
            [(Elem::atom("a"), Elem::atom("b")), (Elem::atom("b"), Elem::atom("b"))],
        )
        .unwrap();
        let f = TFunctor::new(ab.clone(), ab.clone(), FinMap::identity(ab.x0()), swap).unwrap();
        let r = f.validate();
        assert!(r.failed("d0 ∘ p1 = p0 ∘ d0"));
        assert_eq!(r.failures().next().unwrap().witness, Some(Elem::atom("a")));
    }
}
