//! The versioned JSON exchange format.
//!
//! Every document is an object with `"schemaVersion": 1`, a `"kind"` and an
//! optional `"name"` and `"description"`. Maps inside multicategories,
//! functors and data are written as graphs `[[x, fx], ...]`; their domains
//! and codomains are implied by the surrounding structure. Stand-alone maps
//! in sketch models carry `dom` and `cod` explicitly.
//!
//! Output is pretty-printed with sorted sets and graphs in domain order, so
//! equal values always serialize to equal bytes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::descent::{multi_datum_domain, ClassificationReport, MultiDatum, OracleReport, OracleStatus};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSetObj};
use crate::monad::{MonadSelector, MonadSpec};
use crate::multicat::{SurjectivityProfile, TFunctor, TGraph, TMulticategory};
use crate::report::Check;
use crate::sketch::{PseudoEqObject, SketchModel};

pub const SCHEMA_VERSION: u32 = 1;

type Graph = Vec<(Elem, Elem)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MulticatSpec {
    pub monad: MonadSelector,
    pub x0: FinSetObj,
    pub x1: FinSetObj,
    pub d0: Graph,
    pub d1: Graph,
    pub s0: Graph,
    pub comp: Graph,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctorSpec {
    pub src: MulticatSpec,
    pub tgt: MulticatSpec,
    pub p0: Graph,
    pub p1: Graph,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelGraphs {
    pub p0: Graph,
    pub p1: Graph,
}

/// A descent datum along a functor supplied separately: the domain `v`, the
/// functor `a` out of it and the action `gamma` on the chosen pullback.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatumSpec {
    pub v: MulticatSpec,
    pub a: LevelGraphs,
    pub gamma: LevelGraphs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    Multicategory(MulticatSpec),
    Functor(FunctorSpec),
    Datum(DatumSpec),
    Model(SketchModel),
    Pseudo(PseudoEqObject),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Document {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(flatten)]
    pub body: Body,
}

impl Document {
    pub fn new(body: Body) -> Self {
        Document { schema_version: SCHEMA_VERSION, name: None, description: None, body }
    }

    pub fn named(mut self, name: impl Into<String>, description: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self.description = Some(description.into());
        self
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::Multicategory(_) => "multicategory",
            Body::Functor(_) => "functor",
            Body::Datum(_) => "datum",
            Body::Model(_) => "model",
            Body::Pseudo(_) => "pseudo",
        }
    }

    pub fn multicategory(&self) -> Result<TMulticategory> {
        match &self.body {
            Body::Multicategory(m) => m.build(),
            _ => Err(Error::Invalid(format!("expected a multicategory, found a {}", self.kind()))),
        }
    }

    pub fn functor(&self) -> Result<TFunctor> {
        match &self.body {
            Body::Functor(f) => f.build(),
            _ => Err(Error::Invalid(format!("expected a functor, found a {}", self.kind()))),
        }
    }

    pub fn datum(&self, p: &TFunctor) -> Result<MultiDatum> {
        match &self.body {
            Body::Datum(d) => d.build(p),
            _ => Err(Error::Invalid(format!("expected a datum, found a {}", self.kind()))),
        }
    }
}

fn position(e: serde_json::Error) -> Error {
    let full = e.to_string();
    let message = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m).to_string();
    Error::Parse { line: e.line(), column: e.column(), message }
}

/// Parses a document; syntax and schema errors carry their position.
pub fn parse(text: &str) -> Result<Document> {
    let doc: Document = serde_json::from_str(text).map_err(position)?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("unsupported schemaVersion {} (expected {SCHEMA_VERSION})", doc.schema_version),
        });
    }
    Ok(doc)
}

/// Pretty JSON with a trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("document values serialize");
    s.push('\n');
    s
}

fn graph(m: &FinMap) -> Graph {
    m.graph().map(|(x, y)| (x.clone(), y.clone())).collect()
}

fn build_map(what: &str, dom: &FinSetObj, cod: &FinSetObj, g: &Graph) -> Result<FinMap> {
    FinMap::new(dom.clone(), cod.clone(), g.iter().cloned()).map_err(|e| Error::Invalid(format!("{what}: {e}")))
}

impl MulticatSpec {
    pub fn of(mc: &TMulticategory) -> Self {
        MulticatSpec {
            monad: mc.monad().selector(),
            x0: mc.x0().clone(),
            x1: mc.x1().clone(),
            d0: graph(mc.d0()),
            d1: graph(mc.d1()),
            s0: graph(mc.s0()),
            comp: graph(mc.comp()),
        }
    }

    /// Rebuilds the multicategory. Typing is checked; the laws are not.
    pub fn build(&self) -> Result<TMulticategory> {
        let monad = MonadSpec::from_selector(self.monad.clone())?;
        let d0 = build_map("d0", &self.x1, &self.x0, &self.d0)?;
        let image: BTreeSet<Elem> = self.d1.iter().map(|(_, t)| t.clone()).collect();
        let d1 = build_map("d1", &self.x1, &FinSetObj::try_new(image)?, &self.d1)?;
        let graph = TGraph::new(monad, d0, d1)?;
        let x2 = graph.composable_pairs()?.apex;
        let s0 = build_map("s0", &self.x0, &self.x1, &self.s0)?;
        let comp = build_map("comp", &x2, &self.x1, &self.comp)?;
        TMulticategory::new(graph, s0, comp)
    }
}

impl FunctorSpec {
    pub fn of(f: &TFunctor) -> Self {
        FunctorSpec { src: MulticatSpec::of(&f.src), tgt: MulticatSpec::of(&f.tgt), p0: graph(&f.p0), p1: graph(&f.p1) }
    }

    pub fn build(&self) -> Result<TFunctor> {
        let src = self.src.build()?;
        let tgt = self.tgt.build()?;
        let p0 = build_map("p0", src.x0(), tgt.x0(), &self.p0)?;
        let p1 = build_map("p1", src.x1(), tgt.x1(), &self.p1)?;
        TFunctor::new(src, tgt, p0, p1)
    }
}

impl DatumSpec {
    pub fn of(d: &MultiDatum) -> Self {
        DatumSpec {
            v: MulticatSpec::of(&d.a.src),
            a: LevelGraphs { p0: graph(&d.a.p0), p1: graph(&d.a.p1) },
            gamma: LevelGraphs { p0: graph(&d.gamma.p0), p1: graph(&d.gamma.p1) },
        }
    }

    /// Resolves the datum along `p`, whose source is the codomain of `a`.
    pub fn build(&self, p: &TFunctor) -> Result<MultiDatum> {
        let v = self.v.build()?;
        let x = &p.src;
        let a = TFunctor::new(
            v.clone(),
            x.clone(),
            build_map("a.p0", v.x0(), x.x0(), &self.a.p0)?,
            build_map("a.p1", v.x1(), x.x1(), &self.a.p1)?,
        )?;
        let (u, _, _) = multi_datum_domain(p, &a)?;
        let gamma = TFunctor::new(
            u.clone(),
            v.clone(),
            build_map("gamma.p0", u.x0(), v.x0(), &self.gamma.p0)?,
            build_map("gamma.p1", u.x1(), v.x1(), &self.gamma.p1)?,
        )?;
        Ok(MultiDatum { a, gamma })
    }
}

pub fn multicategory_document(mc: &TMulticategory) -> Document {
    Document::new(Body::Multicategory(MulticatSpec::of(mc)))
}

pub fn functor_document(f: &TFunctor) -> Document {
    Document::new(Body::Functor(FunctorSpec::of(f)))
}

pub fn datum_document(d: &MultiDatum) -> Document {
    Document::new(Body::Datum(DatumSpec::of(d)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureJson {
    pub kind: String,
    pub detail: String,
    pub datum: Option<DatumSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleJson {
    pub bound: usize,
    pub failures: Vec<FailureJson>,
    pub status: OracleStatus,
    pub data_checked: usize,
    pub slices_checked: usize,
}

impl OracleJson {
    pub fn of(r: &OracleReport) -> Self {
        OracleJson {
            bound: r.bound,
            failures: r
                .failures
                .iter()
                .map(|f| FailureJson {
                    kind: f.kind.clone(),
                    detail: f.detail.clone(),
                    datum: f.datum.as_ref().map(DatumSpec::of),
                })
                .collect(),
            status: r.status,
            data_checked: r.data_checked,
            slices_checked: r.slices_checked,
        }
    }
}

/// The report printed by `classify` and `oracle`. `thm45` is the T-level
/// criterion and `thm53` the levelwise one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DescentReport {
    pub schema_version: u32,
    pub functor: String,
    pub profile: SurjectivityProfile,
    pub thm45: bool,
    pub thm53: bool,
    pub epi: bool,
    pub regular_epi: bool,
    pub kernel_pairs: bool,
    #[serde(rename = "tP1")]
    pub t_p1: bool,
    #[serde(rename = "tP2")]
    pub t_p2: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
}

impl DescentReport {
    pub fn new(functor: impl Into<String>, c: &ClassificationReport, oracle: Option<&OracleReport>) -> Self {
        DescentReport {
            schema_version: SCHEMA_VERSION,
            functor: functor.into(),
            profile: c.profile,
            thm45: c.t_criterion,
            thm53: c.levelwise_criterion,
            epi: c.epi,
            regular_epi: c.regular_epi,
            kernel_pairs: c.kernel_pairs,
            t_p1: c.t_p1,
            t_p2: c.t_p2,
            checks: c.report.checks.clone(),
            oracle: oracle.map(OracleJson::of),
        }
    }
}

/// `{"w": ..., "f": ..., "h": ...}` as written by `quotient`.
pub fn quotient_json(w: &TMulticategory, f: &TFunctor, h: &TFunctor) -> BTreeMap<&'static str, Document> {
    BTreeMap::from([("w", multicategory_document(w)), ("f", functor_document(f)), ("h", functor_document(h))])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{fixture_library, FixtureItem};

    #[test]
    fn fixtures_round_trip() {
        for f in fixture_library() {
            let doc = match &f.item {
                FixtureItem::Multicategory(m) => multicategory_document(m),
                FixtureItem::Functor(p) => functor_document(p),
            };
            let text = to_string(&doc);
            let back = parse(&text).unwrap();
            assert_eq!(to_string(&back), text, "{}", f.name);
            match &f.item {
                FixtureItem::Multicategory(m) => assert_eq!(&back.multicategory().unwrap(), &**m, "{}", f.name),
                FixtureItem::Functor(p) => assert_eq!(&back.functor().unwrap(), &**p, "{}", f.name),
            }
        }
    }

    #[test]
    fn syntax_errors_have_positions() {
        match parse("{\n  \"schemaVersion\": 1,\n  \"kind\": \n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_version_is_refused() {
        let text =
            to_string(&multicategory_document(&crate::multicat::terminal(&crate::monad::identity_monad()).unwrap()));
        let bumped = text.replace("\"schemaVersion\": 1", "\"schemaVersion\": 2");
        assert!(matches!(parse(&bumped), Err(Error::Parse { .. })));
    }
}
