//! The finite-limit sketch of multicategories and its models in finite sets.
//!
//! Vertices are `x0 x1 x2 x3 x0' x1' x2' x0'' x1''`; edges are named
//! `"<source>.<label>"`, e.g. `"x2.d1"` is the composition `x2 -> x1` and
//! `"x1'.d1'"` the primed boundary `x1' -> x0''`. Paths are written in
//! application order.

mod pseudo;
mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::finset::{chosen_pullback, compose, pair_into, FinMap, FinSetObj};
use crate::multicat::{TFunctor, TMulticategory};
use crate::report::Report;

pub use pseudo::{iota_components, strict_object, CoherenceReport, IotaComponent, PMorphism, PseudoEqObject};
pub use search::{coherence_search, CoherenceSearch};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: &'static str,
    pub src: &'static str,
    pub tgt: &'static str,
}

/// Two parallel paths that a model must identify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    /// Position in the relation list, 1-based.
    pub family: usize,
    pub src: &'static str,
    pub tgt: &'static str,
    pub lhs: Vec<&'static str>,
    pub rhs: Vec<&'static str>,
    /// Set on instances that repeat another one or are not literally in the list.
    pub note: Option<&'static str>,
}

impl Relation {
    pub fn name(&self) -> String {
        let show = |p: &[&str]| {
            if p.is_empty() {
                "id".to_string()
            } else {
                p.iter().rev().copied().collect::<Vec<_>>().join(" ∘ ")
            }
        };
        format!("[{}] {} = {} : {} -> {}", self.family, show(&self.lhs), show(&self.rhs), self.src, self.tgt)
    }
}

/// A designated pullback square
/// `apex -left.0-> p -left.1-> corner` and `apex -right.0-> q -right.1-> corner`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub apex: &'static str,
    pub left: [&'static str; 2],
    pub right: [&'static str; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sketch {
    pub vertices: Vec<&'static str>,
    pub edges: Vec<Edge>,
    pub relations: Vec<Relation>,
    pub cones: Vec<Cone>,
}

impl Sketch {
    pub fn edge(&self, name: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.name == name)
    }

    /// Endpoints of a path, or an error naming the first mismatch.
    pub fn path_endpoints(&self, src: &str, path: &[&str]) -> Result<String> {
        let mut at = src.to_string();
        for name in path {
            let e = self.edge(name).ok_or_else(|| Error::Invalid(format!("unknown edge {name}")))?;
            if e.src != at {
                return Err(Error::BoundaryMismatch {
                    context: format!("path through {name}"),
                    left: at,
                    right: e.src.into(),
                });
            }
            at = e.tgt.to_string();
        }
        Ok(at)
    }

    /// Every relation and cone is a well-formed pair of paths.
    pub fn check_well_formed(&self) -> Result<()> {
        for r in &self.relations {
            for p in [&r.lhs, &r.rhs] {
                let end = self.path_endpoints(r.src, p)?;
                if end != r.tgt {
                    return Err(Error::BoundaryMismatch { context: r.name(), left: end, right: r.tgt.into() });
                }
            }
        }
        for c in &self.cones {
            let a = self.path_endpoints(c.apex, &c.left)?;
            let b = self.path_endpoints(c.apex, &c.right)?;
            if a != b {
                return Err(Error::BoundaryMismatch { context: format!("cone at {}", c.apex), left: a, right: b });
            }
        }
        Ok(())
    }
}

fn edge(name: &'static str, src: &'static str, tgt: &'static str) -> Edge {
    Edge { name, src, tgt }
}

fn rel(family: usize, src: &'static str, tgt: &'static str, lhs: &[&'static str], rhs: &[&'static str]) -> Relation {
    Relation { family, src, tgt, lhs: lhs.to_vec(), rhs: rhs.to_vec(), note: None }
}

/// The sketch whose models are multicategory-like diagrams.
pub fn multicat_sketch() -> Sketch {
    let vertices = vec!["x0", "x1", "x2", "x3", "x0'", "x1'", "x2'", "x0''", "x1''"];
    let edges = vec![
        edge("x0.s0", "x0", "x1"),
        edge("x0.e0", "x0", "x0'"),
        edge("x1.d0", "x1", "x0"),
        edge("x1.d1", "x1", "x0'"),
        edge("x1.e1", "x1", "x1'"),
        edge("x1.s0", "x1", "x2"),
        edge("x1.s1", "x1", "x2"),
        edge("x2.d0", "x2", "x1"),
        edge("x2.d1", "x2", "x1"),
        edge("x2.d2", "x2", "x1'"),
        edge("x3.d0", "x3", "x2"),
        edge("x3.d1", "x3", "x2"),
        edge("x3.d2", "x3", "x2"),
        edge("x3.d3", "x3", "x2'"),
        edge("x0'.s0'", "x0'", "x1'"),
        edge("x1'.d0'", "x1'", "x0'"),
        edge("x1'.d1'", "x1'", "x0''"),
        edge("x2'.d0'", "x2'", "x1'"),
        edge("x2'.d1'", "x2'", "x1'"),
        edge("x2'.d2'", "x2'", "x1''"),
        edge("x0''.m0", "x0''", "x0'"),
        edge("x1''.m1", "x1''", "x1'"),
        edge("x1''.d0''", "x1''", "x0''"),
    ];
    let mut relations = vec![
        rel(1, "x0", "x2", &["x0.s0", "x1.s1"], &["x0.s0", "x1.s0"]),
        rel(2, "x0", "x0'", &["x0.s0", "x1.d1"], &["x0.e0"]),
        rel(2, "x1", "x1'", &["x1.s1", "x2.d2"], &["x1.e1"]),
        rel(3, "x0", "x0", &["x0.s0", "x1.d0"], &[]),
        rel(3, "x1", "x1", &["x1.s0", "x2.d1"], &[]),
        rel(3, "x1", "x1", &["x1.s1", "x2.d1"], &[]),
        rel(4, "x1", "x1'", &["x1.s0", "x2.d2"], &["x1.d1", "x0'.s0'"]),
        rel(5, "x1", "x1", &["x1.s1", "x2.d0"], &["x1.d0", "x0.s0"]),
        rel(6, "x0'", "x0'", &["x0'.s0'", "x1'.d0'"], &[]),
        rel(7, "x2", "x0'", &["x2.d1", "x1.d1"], &["x2.d2", "x1'.d1'", "x0''.m0"]),
        rel(7, "x3", "x1'", &["x3.d2", "x2.d2"], &["x3.d3", "x2'.d2'", "x1''.m1"]),
        rel(8, "x2", "x0'", &["x2.d0", "x1.d1"], &["x2.d2", "x1'.d0'"]),
        rel(8, "x3", "x1'", &["x3.d0", "x2.d2"], &["x3.d3", "x2'.d0'"]),
        rel(9, "x2", "x0'", &["x2.d2", "x1'.d0'"], &["x2.d0", "x1.d1"]),
        rel(9, "x3", "x1'", &["x3.d3", "x2'.d0'"], &["x3.d0", "x2.d2"]),
        rel(9, "x3", "x1'", &["x3.d3", "x2'.d1'"], &["x3.d1", "x2.d2"]),
        rel(10, "x2", "x0", &["x2.d1", "x1.d0"], &["x2.d0", "x1.d0"]),
        rel(11, "x3", "x1", &["x3.d1", "x2.d0"], &["x3.d0", "x2.d0"]),
        rel(11, "x3", "x1", &["x3.d2", "x2.d0"], &["x3.d0", "x2.d1"]),
        rel(11, "x3", "x1", &["x3.d2", "x2.d1"], &["x3.d1", "x2.d1"]),
        rel(12, "x2'", "x0''", &["x2'.d0'", "x1'.d1'"], &["x2'.d2'", "x1''.d0''"]),
        rel(13, "x2'", "x0'", &["x2'.d1'", "x1'.d0'"], &["x2'.d0'", "x1'.d0'"]),
        rel(3, "x1", "x1", &["x1.s0", "x2.d0"], &[]),
    ];
    relations[8 + 5].note = Some("same equation as the first instance of family 8");
    relations[8 + 6].note = Some("same equation as the second instance of family 8");
    relations[22].note = Some("not in the list; needed so that s0 on x1 is the pair (id, s0' ∘ d1)");
    let cones = vec![
        Cone { apex: "x2", left: ["x2.d0", "x1.d1"], right: ["x2.d2", "x1'.d0'"] },
        Cone { apex: "x3", left: ["x3.d0", "x2.d2"], right: ["x3.d3", "x2'.d0'"] },
        Cone { apex: "x2'", left: ["x2'.d0'", "x1'.d1'"], right: ["x2'.d2'", "x1''.d0''"] },
    ];
    Sketch { vertices, edges, relations, cones }
}

/// Sets for vertices and maps for edges.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct SketchModel {
    pub sets: BTreeMap<String, FinSetObj>,
    pub maps: BTreeMap<String, FinMap>,
}

impl SketchModel {
    pub fn set(&self, vertex: &str) -> Result<&FinSetObj> {
        self.sets.get(vertex).ok_or_else(|| Error::Invalid(format!("model has no set for {vertex}")))
    }

    pub fn map(&self, edge: &str) -> Result<&FinMap> {
        self.maps.get(edge).ok_or_else(|| Error::Invalid(format!("model has no map for {edge}")))
    }

    /// The composite along a path starting at `src`.
    pub fn path(&self, src: &str, path: &[&str]) -> Result<FinMap> {
        let mut acc = FinMap::identity(self.set(src)?);
        for e in path {
            acc = compose(self.map(e)?, &acc)?;
        }
        Ok(acc)
    }

    /// The model with every set empty.
    pub fn empty(sketch: &Sketch) -> Self {
        let e = FinSetObj::empty();
        SketchModel {
            sets: sketch.vertices.iter().map(|v| (v.to_string(), e.clone())).collect(),
            maps: sketch.edges.iter().map(|ed| (ed.name.to_string(), FinMap::identity(&e))).collect(),
        }
    }
}

/// Relations as map equalities and cones as pullbacks, with witnesses.
pub fn check_model(sketch: &Sketch, model: &SketchModel) -> Report {
    let mut r = Report::new("sketch model");
    for e in &sketch.edges {
        let typed = match (model.map(e.name), model.set(e.src), model.set(e.tgt)) {
            (Ok(m), Ok(s), Ok(t)) => m.dom() == s && m.cod() == t,
            _ => false,
        };
        if typed {
            r.pass(format!("edge {}", e.name));
        } else {
            r.fail(format!("edge {}", e.name), None, format!("not a map {} -> {}", e.src, e.tgt));
        }
    }
    if !r.passed() {
        return r;
    }
    for rel in &sketch.relations {
        match (model.path(rel.src, &rel.lhs), model.path(rel.src, &rel.rhs)) {
            (Ok(a), Ok(b)) => r.record(rel.name(), a.first_difference(&b)),
            _ => r.fail(rel.name(), None, "paths could not be composed"),
        }
    }
    for c in &sketch.cones {
        let name = format!("cone at {}", c.apex);
        match cone_failure(model, c) {
            Ok(None) => r.pass(name),
            Ok(Some(w)) => r.fail(name, Some(w), "comparison to the chosen pullback is not bijective"),
            Err(e) => r.fail(name, None, e.to_string()),
        }
    }
    r
}

fn cone_failure(model: &SketchModel, c: &Cone) -> Result<Option<Elem>> {
    let (a0, a1) = (model.map(c.left[0])?, model.map(c.left[1])?);
    let (b0, b1) = (model.map(c.right[0])?, model.map(c.right[1])?);
    let square = chosen_pullback(b1, a1)?;
    let cmp = match pair_into(&square, a0, b0) {
        Ok(m) => m,
        Err(Error::NotCommuting { witness, .. }) => return Ok(Some(witness)),
        Err(e) => return Err(e),
    };
    if cmp.is_bijective() {
        return Ok(None);
    }
    if !cmp.is_injective() {
        let mut seen = BTreeMap::new();
        for (x, y) in cmp.graph() {
            if seen.insert(y.clone(), x.clone()).is_some() {
                return Ok(Some(x.clone()));
            }
        }
    }
    Ok(square.apex.iter().find(|p| cmp.fiber(p).is_empty()).cloned())
}

/// The model of a multicategory over a monad with finite carriers.
pub fn model_from_multicat(mc: &TMulticategory) -> Result<SketchModel> {
    let t = mc.monad();
    if !t.has_finite_carriers() {
        return Err(Error::NotFinite(t.name()));
    }
    let (x0, x1, x2, x3) = (mc.x0().clone(), mc.x1().clone(), mc.x2().clone(), mc.x3().clone());
    let (tx0, tx1, tx2) = (t.materialize(&x0)?, t.materialize(&x1)?, t.materialize(&x2)?);
    let (ttx0, ttx1) = (t.materialize(&tx0)?, t.materialize(&tx1)?);
    let widen = |m: &FinMap, cod: &FinSetObj| m.with_codomain(cod.clone());
    let d0_2 = mc.d0_on_pairs().clone();
    let d2_2 = widen(mc.d2_on_pairs(), &tx1)?;
    let mut maps = BTreeMap::new();
    let mut put = |name: &str, m: FinMap| {
        maps.insert(name.to_string(), m);
    };
    put("x0.s0", mc.s0().clone());
    put("x0.e0", t.unit_map(&x0)?);
    put("x1.d0", mc.d0().clone());
    put("x1.d1", widen(mc.d1(), &tx0)?);
    put("x1.e1", t.unit_map(&x1)?);
    put("x1.s0", FinMap::from_fn(x1.clone(), x2.clone(), |f| mc.s1_right(f))?);
    put("x1.s1", FinMap::from_fn(x1.clone(), x2.clone(), |f| mc.s1_left(f))?);
    put("x2.d0", d0_2.clone());
    put("x2.d1", mc.comp().clone());
    put("x2.d2", d2_2.clone());
    put("x3.d0", mc.d0_on_triples().clone());
    put("x3.d1", FinMap::from_fn(x3.clone(), x2.clone(), |p| mc.d1_on_triples(p))?);
    put("x3.d2", FinMap::from_fn(x3.clone(), x2.clone(), |p| mc.d2_on_triples(p))?);
    put("x3.d3", widen(mc.d3_on_triples(), &tx2)?);
    put("x0'.s0'", t.lift_finmap(mc.s0())?);
    put("x1'.d0'", t.lift_finmap(mc.d0())?);
    put("x1'.d1'", FinMap::from_fn(tx1.clone(), ttx0.clone(), |s| t.apply_map(mc.d1(), s))?);
    put("x2'.d0'", t.lift_finmap(&d0_2)?);
    put("x2'.d1'", t.lift_finmap(mc.comp())?);
    put("x2'.d2'", FinMap::from_fn(tx2.clone(), ttx1.clone(), |s| t.apply_map(&d2_2, s))?);
    put("x0''.m0", t.mult_map(&x0)?);
    put("x1''.m1", t.mult_map(&x1)?);
    put("x1''.d0''", FinMap::from_fn(ttx1.clone(), ttx0.clone(), |s| t.apply_map2(mc.d0(), s))?);
    let sets = [
        ("x0", x0),
        ("x1", x1),
        ("x2", x2),
        ("x3", x3),
        ("x0'", tx0),
        ("x1'", tx1),
        ("x2'", tx2),
        ("x0''", ttx0),
        ("x1''", ttx1),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    Ok(SketchModel { sets, maps })
}

/// The vertex maps of the model morphism induced by a functor.
pub fn model_morphism_from_functor(f: &TFunctor) -> Result<BTreeMap<String, FinMap>> {
    let t = f.src.monad();
    let levels = f.levels()?;
    let lift = |m: &FinMap| t.lift_finmap(m);
    let mut out = BTreeMap::new();
    out.insert("x0".to_string(), f.p0.clone());
    out.insert("x1".to_string(), f.p1.clone());
    out.insert("x2".to_string(), levels.p2.clone());
    out.insert("x3".to_string(), levels.p3.clone());
    out.insert("x0'".to_string(), lift(&f.p0)?);
    out.insert("x1'".to_string(), lift(&f.p1)?);
    out.insert("x2'".to_string(), lift(&levels.p2)?);
    out.insert("x0''".to_string(), lift(&lift(&f.p0)?)?);
    out.insert("x1''".to_string(), lift(&lift(&f.p1)?)?);
    Ok(out)
}

/// Vertexwise pullback of two model morphisms `a -> c <- b`, with every
/// edge acting componentwise on pairs `(x, y)`, `x` from `a`.
pub fn pullback_models(
    a: &SketchModel,
    fa: &BTreeMap<String, FinMap>,
    b: &SketchModel,
    fb: &BTreeMap<String, FinMap>,
    sketch: &Sketch,
) -> Result<SketchModel> {
    let mut sets = BTreeMap::new();
    for v in &sketch.vertices {
        let (f, g) = (&fa[*v], &fb[*v]);
        sets.insert(v.to_string(), chosen_pullback(g, f)?.apex);
    }
    let mut maps = BTreeMap::new();
    for e in &sketch.edges {
        let (ma, mb) = (a.map(e.name)?, b.map(e.name)?);
        let m = FinMap::from_fn(sets[e.src].clone(), sets[e.tgt].clone(), |p| {
            let (x, y) = p.as_pair().ok_or_else(|| Error::Invalid(format!("{p} is not a pair")))?;
            Ok(Elem::pair(ma.eval(x)?.clone(), mb.eval(y)?.clone()))
        })?;
        maps.insert(e.name.to_string(), m);
    }
    Ok(SketchModel { sets, maps })
}

/// The pullback of two functors between multicategories, computed on
/// models, is again a model and is isomorphic to the model of the pullback
/// multicategory through the canonical comparison maps.
pub fn check_pullback_of_strict(f: &TFunctor, g: &TFunctor) -> Result<Report> {
    let sketch = multicat_sketch();
    let (ma, mb) = (model_from_multicat(&f.src)?, model_from_multicat(&g.src)?);
    let pb = pullback_models(&ma, &model_morphism_from_functor(f)?, &mb, &model_morphism_from_functor(g)?, &sketch)?;
    let mut r = Report::new("pullback of strict objects");
    r.extend(check_model(&sketch, &pb));
    let (apex, pa, pb_) = crate::multicat::pullback(f, g)?;
    let strict = model_from_multicat(&apex)?;
    let (qa, qb) = (model_morphism_from_functor(&pa)?, model_morphism_from_functor(&pb_)?);
    let mut cmp = BTreeMap::new();
    for v in &sketch.vertices {
        let m = FinMap::from_fn(strict.set(v)?.clone(), pb.set(v)?.clone(), |x| {
            Ok(Elem::pair(qa[*v].eval(x)?.clone(), qb[*v].eval(x)?.clone()))
        })?;
        if m.is_bijective() {
            r.pass(format!("comparison at {v}"));
        } else {
            r.fail(format!("comparison at {v}"), None, "not bijective");
        }
        cmp.insert(v.to_string(), m);
    }
    for e in &sketch.edges {
        let lhs = compose(pb.map(e.name)?, &cmp[e.src])?;
        let rhs = compose(&cmp[e.tgt], strict.map(e.name)?)?;
        r.record(format!("comparison commutes with {}", e.name), lhs.first_difference(&rhs));
    }
    Ok(r)
}
