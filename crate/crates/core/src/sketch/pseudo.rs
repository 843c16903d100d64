//! Pseudo-equalizer objects: a sketch model `y` together with isomorphisms
//! `ι` comparing its primed part with `T` applied to its unprimed part.
//!
//! Components point from the model side to the `T` side, e.g.
//! `ι^T_0: y0' -> T(y0)` and `ι^{m_0}_0: y0'' -> TT(y0)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_model, model_from_multicat, multicat_sketch, Sketch, SketchModel};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::finset::{compose, FinMap, FinSetObj};
use crate::monad::MonadSpec;
use crate::multicat::{TGraph, TMulticategory};
use crate::report::Report;

/// One member of the `ι` family: a bijection `dom -> T^depth(base)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IotaComponent {
    pub name: &'static str,
    pub dom: &'static str,
    pub base: &'static str,
    pub depth: usize,
}

const fn comp(name: &'static str, dom: &'static str, base: &'static str, depth: usize) -> IotaComponent {
    IotaComponent { name, dom, base, depth }
}

const COMPONENTS: [IotaComponent; 13] = [
    comp("T0", "x0'", "x0", 1),
    comp("T1", "x1'", "x1", 1),
    comp("T2", "x2'", "x2", 1),
    comp("T3", "x0''", "x0'", 1),
    comp("T4", "x1''", "x1'", 1),
    comp("m0_0", "x0''", "x0", 2),
    comp("m0_1", "x0'", "x0", 1),
    comp("m1_0", "x1''", "x1", 2),
    comp("m1_1", "x1'", "x1", 1),
    comp("e0_0", "x0", "x0", 0),
    comp("e0_1", "x0'", "x0", 1),
    comp("e1_0", "x1", "x1", 0),
    comp("e1_1", "x1'", "x1", 1),
];

pub fn iota_components() -> &'static [IotaComponent] {
    &COMPONENTS
}

/// Naturality squares over the `T` part: `ι_tgt ∘ edge' = T(base edge) ∘ ι_src`.
const T_SQUARES: [(&str, &str, &str, &str); 7] = [
    ("x0'.s0'", "T0", "T1", "x0.s0"),
    ("x1'.d0'", "T1", "T0", "x1.d0"),
    ("x1'.d1'", "T1", "T3", "x1.d1"),
    ("x2'.d0'", "T2", "T1", "x2.d0"),
    ("x2'.d1'", "T2", "T1", "x2.d1"),
    ("x2'.d2'", "T2", "T4", "x2.d2"),
    ("x1''.d0''", "T4", "T3", "x1'.d0'"),
];

pub(super) fn t_power(t: &MonadSpec, set: &FinSetObj, depth: usize) -> Result<FinSetObj> {
    (0..depth).try_fold(set.clone(), |s, _| t.materialize(&s))
}

pub(super) fn apply_depth(t: &MonadSpec, f: &FinMap, depth: usize, x: &Elem) -> Result<Elem> {
    if depth == 0 {
        return Ok(f.eval(x)?.clone());
    }
    t.apply(x, |y| apply_depth(t, f, depth - 1, y))
}

fn t_lift(t: &MonadSpec, f: &FinMap, depth: usize) -> Result<FinMap> {
    let dom = t_power(t, f.dom(), depth)?;
    let cod = t_power(t, f.cod(), depth)?;
    FinMap::from_fn(dom, cod, |x| apply_depth(t, f, depth, x))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudoEqObject {
    pub monad: MonadSpec,
    pub model: SketchModel,
    pub iota: BTreeMap<String, FinMap>,
}

/// Outcome of the three coherence conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceReport {
    pub report: Report,
}

impl CoherenceReport {
    /// Whether condition `(i)`, `(ii)` or `(iii)` holds (`which` is 1, 2 or 3).
    pub fn condition(&self, which: usize) -> bool {
        let tag = match which {
            1 => "(i) ",
            2 => "(ii) ",
            _ => "(iii) ",
        };
        self.report.checks.iter().filter(|c| c.name.starts_with(tag)).all(|c| c.passed)
    }

    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// `(x, id)` for a multicategory `x`.
pub fn strict_object(mc: &TMulticategory) -> Result<PseudoEqObject> {
    let model = model_from_multicat(mc)?;
    let mut iota = BTreeMap::new();
    for c in iota_components() {
        iota.insert(c.name.to_string(), FinMap::identity(model.set(c.dom)?));
    }
    Ok(PseudoEqObject { monad: mc.monad().clone(), model, iota })
}

impl PseudoEqObject {
    pub fn component(&self, name: &str) -> Result<&FinMap> {
        self.iota.get(name).ok_or_else(|| Error::Invalid(format!("missing ι component {name}")))
    }

    /// Model laws, bijectivity and typing of every component, and all
    /// naturality squares.
    pub fn check(&self, sketch: &Sketch) -> Report {
        let mut r = Report::new("pseudo-equalizer object");
        r.extend(check_model(sketch, &self.model));
        if !r.passed() {
            return r;
        }
        let t = &self.monad;
        for c in iota_components() {
            let name = format!("ι {} is a bijection {} -> T^{}({})", c.name, c.dom, c.depth, c.base);
            let ok = match (self.component(c.name), self.model.set(c.dom), self.model.set(c.base)) {
                (Ok(m), Ok(dom), Ok(base)) => {
                    m.dom() == dom && t_power(t, base, c.depth).is_ok_and(|cod| *m.cod() == cod) && m.is_bijective()
                }
                _ => false,
            };
            if ok {
                r.pass(name);
            } else {
                r.fail(name, None, "");
            }
        }
        if !r.passed() {
            return r;
        }
        for (edge, src, tgt, base) in T_SQUARES {
            let res = (|| -> Result<Option<Elem>> {
                let (e, is, it, b) =
                    (self.model.map(edge)?, self.component(src)?, self.component(tgt)?, self.model.map(base)?);
                for y in e.dom() {
                    if it.eval(e.eval(y)?)? != &t.apply_map(b, is.eval(y)?)? {
                        return Ok(Some(y.clone()));
                    }
                }
                Ok(None)
            })();
            record(&mut r, format!("ι_{tgt} ∘ {edge} = T({base}) ∘ ι_{src}"), res);
        }
        for i in 0..2 {
            let res = (|| -> Result<Option<Elem>> {
                let (i0, i1) = (self.component(&format!("m{i}_0"))?, self.component(&format!("m{i}_1"))?);
                let m = self.model.map(&format!("x{i}''.m{i}"))?;
                for y in m.dom() {
                    if t.mult(i0.eval(y)?)? != *i1.eval(m.eval(y)?)? {
                        return Ok(Some(y.clone()));
                    }
                }
                Ok(None)
            })();
            record(&mut r, format!("m ∘ ι^m{i}_0 = ι^m{i}_1 ∘ m{i}"), res);
            let res = (|| -> Result<Option<Elem>> {
                let (i0, i1) = (self.component(&format!("e{i}_0"))?, self.component(&format!("e{i}_1"))?);
                let e = self.model.map(&format!("x{i}.e{i}"))?;
                for y in e.dom() {
                    if t.unit(i0.eval(y)?) != *i1.eval(e.eval(y)?)? {
                        return Ok(Some(y.clone()));
                    }
                }
                Ok(None)
            })();
            record(&mut r, format!("e ∘ ι^e{i}_0 = ι^e{i}_1 ∘ e{i}"), res);
        }
        r
    }

    pub fn is_valid(&self) -> bool {
        self.check(&multicat_sketch()).passed()
    }

    /// Conditions (i) to (iii), pointwise.
    pub fn coherence(&self) -> CoherenceReport {
        let mut r = Report::new("coherence");
        let t = &self.monad;
        for i in 0..2usize {
            let ti = self.component(&format!("T{i}")).ok();
            for other in [format!("m{i}_1"), format!("e{i}_1")] {
                let name = format!("(i) ι^{other} = ι^T{i}");
                match (self.component(&other), ti) {
                    (Ok(a), Some(b)) => r.record(name, a.first_difference(b)),
                    _ => r.fail(name, None, "missing component"),
                }
            }
            let res = (|| -> Result<Option<Elem>> {
                let (ti, t3i, m0) = (
                    self.component(&format!("T{i}"))?,
                    self.component(&format!("T{}", 3 + i))?,
                    self.component(&format!("m{i}_0"))?,
                );
                for y in m0.dom() {
                    if t.apply_map(ti, t3i.eval(y)?)? != *m0.eval(y)? {
                        return Ok(Some(y.clone()));
                    }
                }
                Ok(None)
            })();
            record(&mut r, format!("(ii) T(ι^T{i}) ∘ ι^T{} = ι^m{i}_0", 3 + i), res);
            let name = format!("(iii) ι^e{i}_0 = id");
            match self.component(&format!("e{i}_0")) {
                Ok(e) => r.record(name, e.first_difference(&FinMap::identity(e.dom()))),
                Err(_) => r.fail(name, None, "missing component"),
            }
        }
        CoherenceReport { report: r }
    }

    /// Transports the object along a bijection at every vertex (missing
    /// vertices keep the identity).
    pub fn transport(&self, along: &BTreeMap<String, FinMap>) -> Result<PseudoEqObject> {
        let sketch = multicat_sketch();
        let t = &self.monad;
        let mut b = BTreeMap::new();
        for v in &sketch.vertices {
            let m = match along.get(*v) {
                Some(m) if m.is_bijective() && m.dom() == self.model.set(v)? => m.clone(),
                Some(_) => return Err(Error::Invalid(format!("transport at {v} is not a bijection out of it"))),
                None => FinMap::identity(self.model.set(v)?),
            };
            b.insert(v.to_string(), m);
        }
        let mut model = SketchModel::default();
        for v in &sketch.vertices {
            model.sets.insert(v.to_string(), b[*v].cod().clone());
        }
        for e in &sketch.edges {
            let conj = compose(&b[e.tgt], &compose(self.model.map(e.name)?, &b[e.src].inverse()?)?)?;
            model.maps.insert(e.name.to_string(), conj);
        }
        let mut iota = BTreeMap::new();
        for c in iota_components() {
            let lifted = t_lift(t, &b[c.base], c.depth)?;
            let m = compose(&lifted, &compose(self.component(c.name)?, &b[c.dom].inverse()?)?)?;
            iota.insert(c.name.to_string(), m);
        }
        Ok(PseudoEqObject { monad: t.clone(), model, iota })
    }

    /// The multicategory rebuilt from a coherent object.
    ///
    /// Objects and morphisms are kept, the boundary becomes `ι^T_0 ∘ d1`,
    /// and composition is transported along `y2 ≅ x̂2`, `e ↦ (d0 e, ι^T_1(d2 e))`.
    pub fn hat(&self) -> Result<TMulticategory> {
        let coh = self.coherence();
        if !coh.passed() {
            return Err(Error::Incoherent(coh.report.to_string()));
        }
        let m = &self.model;
        let d1 = FinMap::tabulate(m.set("x1")?.clone(), |f| {
            Ok(self.component("T0")?.eval(m.map("x1.d1")?.eval(f)?)?.clone())
        })?;
        let graph = TGraph::new(self.monad.clone(), m.map("x1.d0")?.clone(), d1)?;
        let x2 = graph.composable_pairs()?.apex;
        let to_pairs = self.pairs_map(&x2)?;
        if !to_pairs.is_bijective() {
            return Err(Error::Invalid("y2 is not in bijection with the composable pairs".into()));
        }
        let comp = compose(m.map("x2.d1")?, &to_pairs.inverse()?)?;
        TMulticategory::new(graph, m.map("x0.s0")?.clone(), comp)
    }

    fn pairs_map(&self, x2: &FinSetObj) -> Result<FinMap> {
        let m = &self.model;
        let (d0, d2, t1) = (m.map("x2.d0")?, m.map("x2.d2")?, self.component("T1")?);
        FinMap::from_fn(m.set("x2")?.clone(), x2.clone(), |e| {
            Ok(Elem::pair(d0.eval(e)?.clone(), t1.eval(d2.eval(e)?)?.clone()))
        })
    }

    /// The comparison `(y, ι) -> (ŷ, id)` for a coherent object.
    pub fn hat_comparison(&self) -> Result<PMorphism> {
        let hat = self.hat()?;
        let tgt = strict_object(&hat)?;
        let t = &self.monad;
        let m = &self.model;
        let to_pairs = self.pairs_map(hat.x2())?;
        let t_pairs = t.lift_finmap(&to_pairs)?;
        let t2 = compose(&t_pairs, self.component("T2")?)?;
        let to_triples = FinMap::from_fn(m.set("x3")?.clone(), hat.x3().clone(), |x| {
            let p = to_pairs.eval(m.map("x3.d0")?.eval(x)?)?.clone();
            Ok(Elem::pair(p, t2.eval(m.map("x3.d3")?.eval(x)?)?.clone()))
        })?;
        let mut maps = BTreeMap::new();
        maps.insert("x0".to_string(), FinMap::identity(m.set("x0")?));
        maps.insert("x1".to_string(), FinMap::identity(m.set("x1")?));
        maps.insert("x2".to_string(), to_pairs);
        maps.insert("x3".to_string(), to_triples);
        maps.insert("x0'".to_string(), self.component("T0")?.clone());
        maps.insert("x1'".to_string(), self.component("T1")?.clone());
        maps.insert("x2'".to_string(), t2);
        maps.insert("x0''".to_string(), self.component("m0_0")?.clone());
        maps.insert("x1''".to_string(), self.component("m1_0")?.clone());
        Ok(PMorphism { src: self.clone(), tgt, maps })
    }
}

fn record(r: &mut Report, name: String, res: Result<Option<Elem>>) {
    match res {
        Ok(w) => r.record(name, w),
        Err(e) => r.fail(name, None, e.to_string()),
    }
}

/// A morphism of pseudo-equalizer objects, one map per sketch vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct PMorphism {
    pub src: PseudoEqObject,
    pub tgt: PseudoEqObject,
    pub maps: BTreeMap<String, FinMap>,
}

impl PMorphism {
    pub fn map(&self, vertex: &str) -> Result<&FinMap> {
        self.maps.get(vertex).ok_or_else(|| Error::Invalid(format!("morphism has no component at {vertex}")))
    }

    /// Naturality on every edge and `κ_c ∘ g = T^k(g) ∘ ι_c` on every component.
    pub fn check(&self) -> Report {
        let sketch = multicat_sketch();
        let t = &self.src.monad;
        let mut r = Report::new("pseudo-equalizer morphism");
        for v in &sketch.vertices {
            let ok = match (self.map(v), self.src.model.set(v), self.tgt.model.set(v)) {
                (Ok(g), Ok(a), Ok(b)) => g.dom() == a && g.cod() == b,
                _ => false,
            };
            if !ok {
                r.fail(format!("component at {v}"), None, "missing or mistyped");
            }
        }
        if !r.passed() {
            return r;
        }
        for e in &sketch.edges {
            let res = (|| -> Result<Option<Elem>> {
                let lhs = compose(self.map(e.tgt)?, self.src.model.map(e.name)?)?;
                let rhs = compose(self.tgt.model.map(e.name)?, self.map(e.src)?)?;
                Ok(lhs.first_difference(&rhs))
            })();
            record(&mut r, format!("natural on {}", e.name), res);
        }
        for c in iota_components() {
            let res = (|| -> Result<Option<Elem>> {
                let (g, gb) = (self.map(c.dom)?, self.map(c.base)?);
                let (iota, kappa) = (self.src.component(c.name)?, self.tgt.component(c.name)?);
                for y in g.dom() {
                    let lhs = kappa.eval(g.eval(y)?)?;
                    let rhs = apply_depth(t, gb, c.depth, iota.eval(y)?)?;
                    if *lhs != rhs {
                        return Ok(Some(y.clone()));
                    }
                }
                Ok(None)
            })();
            record(&mut r, format!("compatible with ι {}", c.name), res);
        }
        r
    }

    pub fn is_pointwise_surjective(&self) -> bool {
        self.maps.values().all(FinMap::is_surjective)
    }

    pub fn is_iso(&self) -> bool {
        self.maps.values().all(FinMap::is_bijective) && self.check().passed()
    }

    /// Whether "pointwise surjective implies coherent codomain" holds here.
    pub fn epi_implies_coherent(&self) -> Result<bool> {
        let r = self.check();
        if !r.passed() {
            return Err(Error::Invalid(format!("not a morphism of pseudo-equalizer objects:\n{r}")));
        }
        Ok(!self.is_pointwise_surjective() || self.tgt.coherence().passed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::{monoid_action_monad, Monoid};
    use crate::multicat::{find_isomorphism, terminal};

    fn z2_object() -> PseudoEqObject {
        let t = monoid_action_monad(Monoid::cyclic(2)).unwrap();
        strict_object(&terminal(&t).unwrap()).unwrap()
    }

    #[test]
    fn strict_objects_are_valid_and_coherent() {
        let o = z2_object();
        let r = o.check(&multicat_sketch());
        assert!(r.passed(), "{r}");
        assert!(o.coherence().passed());
    }

    #[test]
    fn hat_of_strict_is_identity() {
        let t = monoid_action_monad(Monoid::cyclic(2)).unwrap();
        let mc = terminal(&t).unwrap();
        let o = strict_object(&mc).unwrap();
        assert_eq!(o.hat().unwrap(), mc);
        assert!(o.hat_comparison().unwrap().is_iso());
    }

    #[test]
    fn involution_on_unit_component_breaks_iii() {
        let mut o = z2_object();
        let x1 = o.model.set("x1").unwrap().clone();
        let swap = FinMap::from_indices(x1.clone(), x1.clone(), vec![1, 0]).unwrap();
        o.iota.insert("e1_0".into(), swap);
        let c = o.coherence();
        assert!(!c.condition(3) && c.condition(1) && c.condition(2));
        assert!(o.hat().is_err());
    }

    #[test]
    fn transported_object_rebuilds() {
        let o = z2_object();
        let x0p = o.model.set("x0'").unwrap().clone();
        let relabel = FinSetObj::atoms(["p", "q"]);
        let b = FinMap::from_indices(x0p, relabel, vec![1, 0]).unwrap();
        let moved = o.transport(&BTreeMap::from([("x0'".to_string(), b)])).unwrap();
        assert!(moved.is_valid());
        assert!(moved.coherence().passed());
        assert_ne!(moved.component("T0").unwrap(), o.component("T0").unwrap());
        let hat = moved.hat().unwrap();
        assert!(hat.is_valid());
        assert!(find_isomorphism(&hat, &o.hat().unwrap()).is_some());
        assert!(moved.hat_comparison().unwrap().is_iso());
    }
}
