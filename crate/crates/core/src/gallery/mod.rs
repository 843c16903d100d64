//! Worked examples: small categories, categories weighted in a monoid as
//! multicategories over `M × -`, and the fixture library.

mod fixtures;

use crate::descent::classify;
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::finset::{chosen_pullback, FinMap, FinSetObj};
use crate::monad::{identity_monad, MonadSelector, MonadSpec, Monoid};
use crate::multicat::{split_pair, TFunctor, TGraph, TMulticategory};
use crate::report::Report;

pub use fixtures::{fixture, fixture_library, Fixture, FixtureItem};

/// A finite category. `comp` is defined on pairs `(g, f)` with
/// `dom g = cod f`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmallCategory {
    pub objects: FinSetObj,
    pub morphisms: FinSetObj,
    pub dom: FinMap,
    pub cod: FinMap,
    pub id: FinMap,
    pub comp: FinMap,
}

impl SmallCategory {
    /// Pairs `(g, f)` with `dom g = cod f`.
    pub fn composable_pairs(dom: &FinMap, cod: &FinMap) -> Result<FinSetObj> {
        Ok(chosen_pullback(cod, dom)?.apex)
    }

    pub fn new(
        objects: FinSetObj,
        morphisms: FinSetObj,
        dom: FinMap,
        cod: FinMap,
        id: FinMap,
        comp: FinMap,
    ) -> Result<Self> {
        let pairs = Self::composable_pairs(&dom, &cod)?;
        let typed = dom.dom() == &morphisms
            && cod.dom() == &morphisms
            && dom.cod() == &objects
            && cod.cod() == &objects
            && id.dom() == &objects
            && id.cod() == &morphisms
            && comp.dom() == &pairs
            && comp.cod() == &morphisms;
        if !typed {
            return Err(Error::BoundaryMismatch {
                context: "small category".into(),
                left: "structure maps".into(),
                right: "objects, morphisms and composable pairs".into(),
            });
        }
        Ok(SmallCategory { objects, morphisms, dom, cod, id, comp })
    }

    /// Builds a category from named arrows and their non-identity
    /// composites; identities are `id_<object>`.
    pub fn from_table(
        objects: &[&str],
        arrows: &[(&str, &str, &str)],
        composites: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let id_name = |x: &str| format!("id_{x}");
        let obj = FinSetObj::atoms(objects.iter().copied());
        let mut sig: Vec<(String, String, String)> =
            objects.iter().map(|x| (id_name(x), x.to_string(), x.to_string())).collect();
        sig.extend(arrows.iter().map(|(n, d, c)| (n.to_string(), d.to_string(), c.to_string())));
        let mors = FinSetObj::atoms(sig.iter().map(|(n, _, _)| n.as_str()));
        let dom = FinMap::new(mors.clone(), obj.clone(), sig.iter().map(|(n, d, _)| (Elem::atom(n), Elem::atom(d))))?;
        let cod = FinMap::new(mors.clone(), obj.clone(), sig.iter().map(|(n, _, c)| (Elem::atom(n), Elem::atom(c))))?;
        let id =
            FinMap::new(obj.clone(), mors.clone(), objects.iter().map(|x| (Elem::atom(*x), Elem::atom(id_name(x)))))?;
        let pairs = Self::composable_pairs(&dom, &cod)?;
        let comp = FinMap::from_fn(pairs.clone(), mors.clone(), |pair| {
            let (g, f) = split_pair(pair)?;
            if id.fiber(g).len() == 1 {
                return Ok(f.clone());
            }
            if id.fiber(f).len() == 1 {
                return Ok(g.clone());
            }
            composites
                .iter()
                .find(|(gg, ff, _)| Elem::atom(*gg) == *g && Elem::atom(*ff) == *f)
                .map(|(_, _, h)| Elem::atom(*h))
                .ok_or_else(|| Error::Invalid(format!("no composite given for {g} ∘ {f}")))
        })?;
        SmallCategory::new(obj, mors, dom, cod, id, comp)
    }

    pub fn compose(&self, g: &Elem, f: &Elem) -> Result<Elem> {
        Ok(self.comp.eval(&Elem::pair(g.clone(), f.clone()))?.clone())
    }

    pub fn pairs(&self) -> &FinSetObj {
        self.comp.dom()
    }

    /// Triples `(h, g, f)` encoded as `((h, g), f)`.
    pub fn triples(&self) -> Vec<Elem> {
        let mut out = Vec::new();
        for hg in self.pairs() {
            let (_, g) = split_pair(hg).expect("pairs");
            for f in self.morphisms.iter() {
                if self.dom.eval(g).ok() == self.cod.eval(f).ok() {
                    out.push(Elem::pair(hg.clone(), f.clone()));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Report {
        let mut r = Report::new("category");
        let first = |items: &[Elem], ok: &dyn Fn(&Elem) -> Result<bool>| {
            items.iter().find(|x| !matches!(ok(x), Ok(true))).cloned()
        };
        let objs: Vec<Elem> = self.objects.iter().cloned().collect();
        let pairs: Vec<Elem> = self.pairs().iter().cloned().collect();
        r.record(
            "identities are endomorphisms",
            first(&objs, &|x| {
                let i = self.id.eval(x)?;
                Ok(self.dom.eval(i)? == x && self.cod.eval(i)? == x)
            }),
        );
        r.record(
            "dom(g ∘ f) = dom f, cod(g ∘ f) = cod g",
            first(&pairs, &|p| {
                let (g, f) = split_pair(p)?;
                let h = self.comp.eval(p)?;
                Ok(self.dom.eval(h)? == self.dom.eval(f)? && self.cod.eval(h)? == self.cod.eval(g)?)
            }),
        );
        let mors: Vec<Elem> = self.morphisms.iter().cloned().collect();
        r.record(
            "unit laws",
            first(&mors, &|f| {
                let left = self.compose(self.id.eval(self.cod.eval(f)?)?, f)?;
                let right = self.compose(f, self.id.eval(self.dom.eval(f)?)?)?;
                Ok(left == *f && right == *f)
            }),
        );
        r.record(
            "associativity",
            first(&self.triples(), &|t| {
                let (hg, f) = split_pair(t)?;
                let (h, g) = split_pair(hg)?;
                Ok(self.compose(&self.compose(h, g)?, f)? == self.compose(h, &self.compose(g, f)?)?)
            }),
        );
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// The multicategory over the identity monad with the same data.
    pub fn to_identity_multicat(&self) -> Result<TMulticategory> {
        let graph = TGraph::new(identity_monad(), self.cod.clone(), self.dom.clone())?;
        TMulticategory::from_rule(graph, self.id.clone(), |g, f| self.compose(g, f))
    }

    /// The one-object category of a monoid.
    pub fn of_monoid(m: &Monoid) -> Result<Self> {
        let obj = FinSetObj::atoms(["*"]);
        let mors = FinSetObj::try_new(m.elements.iter().cloned())?;
        let star = Elem::atom("*");
        let dom = FinMap::constant(&mors, &obj, &star)?;
        let id = FinMap::constant(&obj, &mors, &m.unit)?;
        let pairs = Self::composable_pairs(&dom, &dom)?;
        let comp = FinMap::from_fn(pairs, mors.clone(), |p| {
            let (g, f) = split_pair(p)?;
            m.op(g, f)
        })?;
        SmallCategory::new(obj, mors, dom.clone(), dom, id, comp)
    }
}

/// A functor `w: C -> M` into the one-object category of a monoid, given on
/// morphisms.
pub fn check_weight(c: &SmallCategory, monoid: &Monoid, w: &FinMap) -> Report {
    let mut r = Report::new("weight functor");
    if w.dom() != &c.morphisms || !w.cod().iter().all(|m| monoid.contains(m)) {
        r.fail("weights are monoid elements on morphisms", None, "");
        return r;
    }
    r.record(
        "w(id) = 1",
        c.objects.iter().find(|x| c.id.eval(x).and_then(|i| w.eval(i)).ok() != Some(&monoid.unit)).cloned(),
    );
    r.record(
        "w(g ∘ f) = w(g) · w(f)",
        c.pairs()
            .iter()
            .find(|p| {
                let ok = (|| -> Result<bool> {
                    let (g, f) = split_pair(p)?;
                    Ok(*w.eval(c.comp.eval(p)?)? == monoid.op(w.eval(g)?, w.eval(f)?)?)
                })();
                !matches!(ok, Ok(true))
            })
            .cloned(),
    );
    r
}

fn monoid_of(t: &MonadSpec) -> Result<Monoid> {
    match t.selector() {
        MonadSelector::Monoid(m) => Ok(m),
        _ => Err(Error::Invalid(format!("{} is not a monoid action monad", t.name()))),
    }
}

/// Category with weights read off `d1`; `g ∘ f` has weight `n · m` for
/// `f: x -m-> y`, `g: y -n-> z`.
pub fn weighted_to_slice(mc: &TMulticategory) -> Result<(SmallCategory, FinMap)> {
    let t = mc.monad();
    let monoid = monoid_of(t)?;
    let mut weights = Vec::new();
    let mut doms = Vec::new();
    for f in mc.x1() {
        let (m, x) = split_pair(mc.d1().eval(f)?)?;
        weights.push((f.clone(), m.clone()));
        doms.push((f.clone(), x.clone()));
    }
    let dom = FinMap::new(mc.x1().clone(), mc.x0().clone(), doms)?;
    let cod = mc.d0().clone();
    let pairs = SmallCategory::composable_pairs(&dom, &cod)?;
    let w = FinMap::tabulate(mc.x1().clone(), |f| Ok(weights.iter().find(|(g, _)| g == f).unwrap().1.clone()))?;
    let w = w.with_codomain(FinSetObj::try_new(monoid.elements.iter().cloned())?)?;
    let comp = FinMap::from_fn(pairs, mc.x1().clone(), |p| {
        let (g, f) = split_pair(p)?;
        mc.compose(g, &Elem::pair(w.eval(g)?.clone(), f.clone()))
    })?;
    let c = SmallCategory::new(mc.x0().clone(), mc.x1().clone(), dom, cod, mc.s0().clone(), comp)?;
    Ok((c, w))
}

/// Inverse of [`weighted_to_slice`].
pub fn slice_to_weighted(c: &SmallCategory, monoid: &Monoid, w: &FinMap) -> Result<TMulticategory> {
    let r = check_weight(c, monoid, w);
    if let Some(fail) = r.failures().next() {
        return Err(Error::NotCommuting {
            context: format!("weight functor: {}", fail.name),
            witness: fail.witness.clone().unwrap_or_else(|| Elem::atom("?")),
        });
    }
    let t = crate::monad::monoid_action_monad(monoid.clone())?;
    let d1 = FinMap::tabulate(c.morphisms.clone(), |f| Ok(Elem::pair(w.eval(f)?.clone(), c.dom.eval(f)?.clone())))?;
    let graph = TGraph::new(t, c.cod.clone(), d1)?;
    TMulticategory::from_rule(graph, c.id.clone(), |g, fs| {
        let (_, f) = split_pair(fs)?;
        c.compose(g, f)
    })
}

/// Surjectivity of a functor of categories on morphisms, composable pairs
/// and composable triples.
pub fn category_profile(src: &SmallCategory, tgt: &SmallCategory, p1: &FinMap) -> Result<[bool; 3]> {
    let on_pairs = |x: &Elem| -> Result<Elem> {
        let (g, f) = split_pair(x)?;
        Ok(Elem::pair(p1.eval(g)?.clone(), p1.eval(f)?.clone()))
    };
    let hit_pairs: std::collections::BTreeSet<Elem> = src.pairs().iter().map(on_pairs).collect::<Result<_>>()?;
    let hit_triples: std::collections::BTreeSet<Elem> = src
        .triples()
        .iter()
        .map(|t| {
            let (hg, f) = split_pair(t)?;
            Ok(Elem::pair(on_pairs(hg)?, p1.eval(f)?.clone()))
        })
        .collect::<Result<_>>()?;
    Ok([
        p1.is_surjective(),
        tgt.pairs().iter().all(|q| hit_pairs.contains(q)),
        tgt.triples().iter().all(|q| hit_triples.contains(q)),
    ])
}

/// Compares the levelwise criterion for a functor over `M × -` with the
/// surjectivity of the corresponding functor of categories at levels 1 to 3.
pub fn descent_transport(f: &TFunctor) -> Result<Report> {
    let mut r = Report::new("descent transport");
    let (cs, _) = weighted_to_slice(&f.src)?;
    let (ct, _) = weighted_to_slice(&f.tgt)?;
    let profile = f.profile()?;
    let cat = category_profile(&cs, &ct, &f.p1)?;
    let criterion = classify(f, 1)?.levelwise_criterion;
    let flag = |r: &mut Report, name: String, ok: bool| if ok { r.pass(name) } else { r.fail(name, None, "") };
    flag(&mut r, "p1 surjective iff surjective on morphisms".into(), profile.p1 == cat[0]);
    flag(&mut r, "p2 surjective iff surjective on composable pairs".into(), profile.p2 == cat[1]);
    flag(&mut r, "p3 surjective iff surjective on composable triples".into(), profile.p3 == cat[2]);
    flag(
        &mut r,
        format!("verdicts agree (multicategory {criterion}, category {})", cat.iter().all(|b| *b)),
        criterion == cat.iter().all(|b| *b),
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_is_a_category() {
        let c = SmallCategory::from_table(
            &["0", "1", "2"],
            &[("u", "0", "1"), ("v", "1", "2"), ("vu", "0", "2")],
            &[("v", "u", "vu")],
        )
        .unwrap();
        assert!(c.is_valid(), "{}", c.validate());
        assert_eq!(c.pairs().len(), 10);
        assert_eq!(c.triples().len(), 15);
        assert!(c.to_identity_multicat().unwrap().is_valid());
    }

    #[test]
    fn monoid_round_trip() {
        let m = Monoid::cyclic(2);
        let c = SmallCategory::of_monoid(&m).unwrap();
        let w = FinMap::identity(&c.morphisms);
        let mc = slice_to_weighted(&c, &m, &w).unwrap();
        assert!(mc.is_valid());
        let (c2, w2) = weighted_to_slice(&mc).unwrap();
        assert_eq!(c2, c);
        assert_eq!(w2, w);
    }

    #[test]
    fn non_functorial_weight_is_refused() {
        let m = Monoid::cyclic(2);
        let c = SmallCategory::of_monoid(&m).unwrap();
        let w = FinMap::constant(&c.morphisms, &c.morphisms, &"1".into()).unwrap();
        assert!(matches!(slice_to_weighted(&c, &m, &w), Err(Error::NotCommuting { .. })));
    }
}
