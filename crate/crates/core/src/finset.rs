//! Finite sets and total functions with chosen limits.
//!
//! Sets keep their elements sorted, maps store the index of each image in
//! the codomain, and the chosen pullback of `f: w -> y` along `p: x -> y` is
//! the sorted set of pairs `(a, b)` with `p(a) = f(b)`. Everything built on
//! top of this module inherits that canonical order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::elem::Elem;
use crate::error::{Error, Result};

/// A finite set with canonically sorted, duplicate-free elements.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FinSetObj {
    elements: Arc<Vec<Elem>>,
}

impl FinSetObj {
    /// Builds a set, rejecting duplicates.
    pub fn try_new(elements: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let mut v: Vec<Elem> = elements.into_iter().collect();
        v.sort();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Duplicate(w[0].clone()));
        }
        Ok(FinSetObj { elements: Arc::new(v) })
    }

    pub fn empty() -> Self {
        FinSetObj::default()
    }

    /// Atoms named by the given strings.
    pub fn atoms<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Self {
        names.into_iter().map(|s| Elem::atom(s.as_ref())).collect()
    }

    /// The set `{prefix0, prefix1, ...}` with `n` elements.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        (0..n).map(|i| Elem::atom(format!("{prefix}{i}"))).collect()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, x: &Elem) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.index_of(x).is_some()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Elem> {
        self.elements.iter()
    }

    pub fn get(&self, i: usize) -> &Elem {
        &self.elements[i]
    }

    pub fn is_subset(&self, other: &FinSetObj) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// Short human description used in error messages.
    pub fn describe(&self) -> String {
        if self.len() <= 6 {
            format!("{self}")
        } else {
            format!("{{{} elements: {}, ..}}", self.len(), self.elements[0])
        }
    }
}

impl FromIterator<Elem> for FinSetObj {
    /// Collects, sorts and deduplicates.
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut v: Vec<Elem> = iter.into_iter().collect();
        v.sort();
        v.dedup();
        FinSetObj { elements: Arc::new(v) }
    }
}

impl<'a> IntoIterator for &'a FinSetObj {
    type Item = &'a Elem;
    type IntoIter = std::slice::Iter<'a, Elem>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

impl fmt::Display for FinSetObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for FinSetObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FinSetObj {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.as_slice().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinSetObj {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Elem>::deserialize(deserializer)?;
        FinSetObj::try_new(v).map_err(serde::de::Error::custom)
    }
}

/// A total function between finite sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinMap {
    dom: FinSetObj,
    cod: FinSetObj,
    // image of dom[i] is cod[idx[i]]
    idx: Arc<Vec<u32>>,
}

impl FinMap {
    /// Builds a map from its graph; every domain element needs exactly one image.
    pub fn new(dom: FinSetObj, cod: FinSetObj, graph: impl IntoIterator<Item = (Elem, Elem)>) -> Result<Self> {
        let mut slots: Vec<Option<u32>> = vec![None; dom.len()];
        for (x, y) in graph {
            let i = dom.index_of(&x).ok_or_else(|| Error::NotAMember { elem: x.clone(), set: dom.describe() })?;
            let j = cod.index_of(&y).ok_or_else(|| Error::NotAMember { elem: y.clone(), set: cod.describe() })?;
            if slots[i].replace(j as u32).is_some_and(|old| old != j as u32) {
                return Err(Error::Invalid(format!("two images given for {x}")));
            }
        }
        let idx = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::NotTotal(dom.get(i).clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap { dom, cod, idx: Arc::new(idx) })
    }

    /// Tabulates a rule on every domain element.
    pub fn from_fn(dom: FinSetObj, cod: FinSetObj, mut rule: impl FnMut(&Elem) -> Result<Elem>) -> Result<Self> {
        let idx = dom
            .iter()
            .map(|x| {
                let y = rule(x)?;
                cod.index_of(&y).map(|j| j as u32).ok_or_else(|| Error::NotAMember { elem: y, set: cod.describe() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinMap { dom, cod, idx: Arc::new(idx) })
    }

    /// Tabulates a rule whose codomain is taken to be its image.
    pub fn tabulate(dom: FinSetObj, mut rule: impl FnMut(&Elem) -> Result<Elem>) -> Result<Self> {
        let images = dom.iter().map(&mut rule).collect::<Result<Vec<_>>>()?;
        let cod: FinSetObj = images.iter().cloned().collect();
        FinMap::new(dom.clone(), cod, dom.iter().cloned().zip(images))
    }

    /// Builds a map from codomain indices aligned with the domain order.
    pub fn from_indices(dom: FinSetObj, cod: FinSetObj, idx: Vec<usize>) -> Result<Self> {
        if idx.len() != dom.len() {
            return Err(Error::Invalid(format!("index table has {} entries for a domain of {}", idx.len(), dom.len())));
        }
        if let Some(&bad) = idx.iter().find(|&&j| j >= cod.len()) {
            return Err(Error::Invalid(format!("codomain index {bad} out of range")));
        }
        Ok(FinMap { dom, cod, idx: Arc::new(idx.into_iter().map(|j| j as u32).collect()) })
    }

    pub fn identity(set: &FinSetObj) -> Self {
        FinMap { dom: set.clone(), cod: set.clone(), idx: Arc::new((0..set.len() as u32).collect()) }
    }

    /// The constant map onto `y`, which must lie in `cod`.
    pub fn constant(dom: &FinSetObj, cod: &FinSetObj, y: &Elem) -> Result<Self> {
        FinMap::from_fn(dom.clone(), cod.clone(), |_| Ok(y.clone()))
    }

    pub fn dom(&self) -> &FinSetObj {
        &self.dom
    }

    pub fn cod(&self) -> &FinSetObj {
        &self.cod
    }

    pub fn apply(&self, x: &Elem) -> Option<&Elem> {
        self.dom.index_of(x).map(|i| self.at(i))
    }

    /// Like [`FinMap::apply`] but reporting non-membership as an error.
    pub fn eval(&self, x: &Elem) -> Result<&Elem> {
        self.apply(x).ok_or_else(|| Error::NotAMember { elem: x.clone(), set: self.dom.describe() })
    }

    /// Image of the `i`-th domain element.
    pub fn at(&self, i: usize) -> &Elem {
        self.cod.get(self.idx[i] as usize)
    }

    pub fn index_at(&self, i: usize) -> usize {
        self.idx[i] as usize
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.idx.iter().map(|&j| j as usize)
    }

    pub fn graph(&self) -> impl Iterator<Item = (&Elem, &Elem)> + '_ {
        self.dom.iter().enumerate().map(move |(i, x)| (x, self.at(i)))
    }

    /// Same graph, larger or smaller codomain.
    pub fn with_codomain(&self, cod: FinSetObj) -> Result<Self> {
        FinMap::from_fn(self.dom.clone(), cod, |x| Ok(self.eval(x)?.clone()))
    }

    /// Restriction to a subset of the domain.
    pub fn restrict(&self, dom: &FinSetObj) -> Result<Self> {
        FinMap::from_fn(dom.clone(), self.cod.clone(), |x| Ok(self.eval(x)?.clone()))
    }

    /// The image as a subset of the codomain.
    pub fn image(&self) -> FinSetObj {
        self.graph().map(|(_, y)| y.clone()).collect()
    }

    pub fn fiber(&self, y: &Elem) -> Vec<&Elem> {
        self.graph().filter(|(_, fy)| *fy == y).map(|(x, _)| x).collect()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for j in self.indices() {
            hit[j] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for j in self.indices() {
            if std::mem::replace(&mut hit[j], true) {
                return false;
            }
        }
        true
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_bijective() {
            return Err(Error::Invalid(format!(
                "map {} -> {} is not a bijection",
                self.dom.describe(),
                self.cod.describe()
            )));
        }
        let mut idx = vec![0usize; self.cod.len()];
        for (i, j) in self.indices().enumerate() {
            idx[j] = i;
        }
        FinMap::from_indices(self.cod.clone(), self.dom.clone(), idx)
    }

    /// First domain element where two parallel maps differ.
    pub fn first_difference(&self, other: &FinMap) -> Option<Elem> {
        if self.dom != other.dom {
            return self.dom.iter().next().cloned();
        }
        (0..self.dom.len()).find(|&i| self.at(i) != other.at(i)).map(|i| self.dom.get(i).clone())
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinMap {{")?;
        for (i, (x, y)) in self.graph().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {x} ↦ {y}")?;
        }
        write!(f, " }}")
    }
}

#[derive(Serialize, Deserialize)]
struct FinMapRepr {
    dom: FinSetObj,
    cod: FinSetObj,
    graph: Vec<(Elem, Elem)>,
}

impl Serialize for FinMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FinMapRepr {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            graph: self.graph().map(|(x, y)| (x.clone(), y.clone())).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = FinMapRepr::deserialize(deserializer)?;
        FinMap::new(r.dom, r.cod, r.graph).map_err(serde::de::Error::custom)
    }
}

/// `g ∘ f`.
pub fn compose(g: &FinMap, f: &FinMap) -> Result<FinMap> {
    if f.cod != g.dom {
        return Err(Error::BoundaryMismatch {
            context: "compose".into(),
            left: format!("cod f = {}", f.cod.describe()),
            right: format!("dom g = {}", g.dom.describe()),
        });
    }
    let idx = f.indices().map(|j| g.index_at(j)).collect();
    FinMap::from_indices(f.dom.clone(), g.cod.clone(), idx)
}

/// The chosen pullback of `f` along `p`.
///
/// ```text
///   apex --leg2 = ε_f--> w
///    |                   |
///  leg1 = p*f            f
///    v                   v
///    x  ------ p ------> y
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackSquare {
    pub apex: FinSetObj,
    pub leg1: FinMap,
    pub leg2: FinMap,
    pub f: FinMap,
    pub p: FinMap,
}

impl PullbackSquare {
    /// Projection onto the domain of `p` (`p*f`).
    pub fn pulled_back(&self) -> &FinMap {
        &self.leg1
    }

    /// Projection onto the domain of `f` (`ε_f`).
    pub fn counit(&self) -> &FinMap {
        &self.leg2
    }
}

/// Apex elements are `(a, b)` with `a ∈ dom p`, `b ∈ dom f`, `p(a) = f(b)`.
pub fn chosen_pullback(f: &FinMap, p: &FinMap) -> Result<PullbackSquare> {
    if f.cod != p.cod {
        return Err(Error::BoundaryMismatch {
            context: "chosen pullback".into(),
            left: format!("cod f = {}", f.cod.describe()),
            right: format!("cod p = {}", p.cod.describe()),
        });
    }
    let mut by_image: Vec<Vec<usize>> = vec![Vec::new(); f.cod.len()];
    for (i, j) in f.indices().enumerate() {
        by_image[j].push(i);
    }
    let mut pairs = Vec::new();
    for (a_i, j) in p.indices().enumerate() {
        for &b_i in &by_image[j] {
            pairs.push((a_i, b_i));
        }
    }
    // p.dom and f.dom are sorted, so the pairs come out in lexicographic order
    let apex = FinSetObj {
        elements: Arc::new(
            pairs.iter().map(|&(a, b)| Elem::pair(p.dom.get(a).clone(), f.dom.get(b).clone())).collect(),
        ),
    };
    let leg1 = FinMap::from_indices(apex.clone(), p.dom.clone(), pairs.iter().map(|&(a, _)| a).collect())?;
    let leg2 = FinMap::from_indices(apex.clone(), f.dom.clone(), pairs.iter().map(|&(_, b)| b).collect())?;
    Ok(PullbackSquare { apex, leg1, leg2, f: f.clone(), p: p.clone() })
}

/// The mediating map `(u, v)` into the apex, for `u` into `dom p` and `v`
/// into `dom f` with `p ∘ u = f ∘ v`.
pub fn pair_into(square: &PullbackSquare, u: &FinMap, v: &FinMap) -> Result<FinMap> {
    if u.dom != v.dom {
        return Err(Error::BoundaryMismatch {
            context: "pair into pullback".into(),
            left: format!("dom u = {}", u.dom.describe()),
            right: format!("dom v = {}", v.dom.describe()),
        });
    }
    if u.cod != square.p.dom || v.cod != square.f.dom {
        return Err(Error::BoundaryMismatch {
            context: "pair into pullback".into(),
            left: format!("cod u = {}, cod v = {}", u.cod.describe(), v.cod.describe()),
            right: format!("dom p = {}, dom f = {}", square.p.dom.describe(), square.f.dom.describe()),
        });
    }
    FinMap::from_fn(u.dom.clone(), square.apex.clone(), |x| {
        let a = u.eval(x)?;
        let b = v.eval(x)?;
        if square.p.eval(a)? != square.f.eval(b)? {
            return Err(Error::NotCommuting { context: "outer square p∘u = f∘v".into(), witness: x.clone() });
        }
        Ok(Elem::pair(a.clone(), b.clone()))
    })
}

/// `p*_h : p*f -> p*g` for a slice morphism `h: f -> g` (`f = g ∘ h`).
///
/// Returns the map between the apexes of `chosen_pullback(f, p)` and
/// `chosen_pullback(g, p)`.
pub fn transport_map(p: &FinMap, h: &FinMap, f: &FinMap, g: &FinMap) -> Result<FinMap> {
    let gh = compose(g, h)?;
    if let Some(w) = gh.first_difference(f) {
        return Err(Error::NotCommuting { context: "slice condition f = g ∘ h".into(), witness: w });
    }
    let src = chosen_pullback(f, p)?;
    let tgt = chosen_pullback(g, p)?;
    pair_into(&tgt, &src.leg1, &compose(h, &src.leg2)?)
}

/// The two projections of the chosen pullback of `f` along itself.
pub fn kernel_pair(f: &FinMap) -> Result<(FinMap, FinMap)> {
    let sq = chosen_pullback(f, f)?;
    Ok((sq.leg1, sq.leg2))
}

/// Quotient of `dom f` by "same image", with its canonical surjection.
///
/// Classes are represented by the sorted list of their members.
pub fn coequalizer_of_kernel_pair(f: &FinMap) -> (FinSetObj, FinMap) {
    let mut classes: BTreeMap<usize, Vec<Elem>> = BTreeMap::new();
    for (i, j) in f.indices().enumerate() {
        classes.entry(j).or_default().push(f.dom.get(i).clone());
    }
    let class_of: BTreeMap<usize, Elem> = classes.into_iter().map(|(j, members)| (j, Elem::List(members))).collect();
    let quotient: FinSetObj = class_of.values().cloned().collect();
    let surj = FinMap::from_fn(f.dom.clone(), quotient.clone(), |x| {
        Ok(class_of[&f.dom.index_of(x).map(|i| f.index_at(i)).unwrap()].clone())
    })
    .expect("classes cover the domain");
    (quotient, surj)
}

/// The injection from `coequalizer_of_kernel_pair(f)` into `cod f`.
pub fn induced_injection(f: &FinMap, quotient: &FinSetObj) -> Result<FinMap> {
    FinMap::from_fn(quotient.clone(), f.cod.clone(), |class| {
        let first =
            class.as_list().and_then(|m| m.first()).ok_or_else(|| Error::Invalid(format!("{class} is not a class")))?;
        Ok(f.eval(first)?.clone())
    })
}

/// Coequalizer of a parallel pair `f, g: a ⇉ b` in finite sets.
///
/// Classes are the connected components of the relation `f(x) ~ g(x)`,
/// represented by sorted member lists.
pub fn coequalizer(f: &FinMap, g: &FinMap) -> Result<(FinSetObj, FinMap)> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::BoundaryMismatch {
            context: "coequalizer".into(),
            left: format!("{} -> {}", f.dom.describe(), f.cod.describe()),
            right: format!("{} -> {}", g.dom.describe(), g.cod.describe()),
        });
    }
    let n = f.cod.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (a, b) in f.indices().zip(g.indices()) {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut members: BTreeMap<usize, Vec<Elem>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        members.entry(r).or_default().push(f.cod.get(i).clone());
    }
    let class_of: BTreeMap<usize, Elem> = members.into_iter().map(|(r, m)| (r, Elem::List(m))).collect();
    let quotient: FinSetObj = class_of.values().cloned().collect();
    let idx = (0..n)
        .map(|i| {
            let r = find(&mut parent, i);
            quotient.index_of(&class_of[&r]).unwrap()
        })
        .collect();
    let surj = FinMap::from_indices(f.cod.clone(), quotient.clone(), idx)?;
    Ok((quotient, surj))
}

/// All maps `dom -> cod`, in lexicographic order of their index tables.
pub fn all_maps(dom: &FinSetObj, cod: &FinSetObj) -> Vec<FinMap> {
    let n = dom.len();
    let k = cod.len();
    if n > 0 && k == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        out.push(FinMap::from_indices(dom.clone(), cod.clone(), idx.clone()).unwrap());
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// All bijections `dom -> cod` that agree with the given partial assignment.
pub fn bijections_extending(dom: &FinSetObj, cod: &FinSetObj, fixed: &[(Elem, Elem)]) -> Result<Vec<FinMap>> {
    if dom.len() != cod.len() {
        return Ok(Vec::new());
    }
    let n = dom.len();
    let mut forced: Vec<Option<usize>> = vec![None; n];
    for (x, y) in fixed {
        let i = dom.index_of(x).ok_or_else(|| Error::NotAMember { elem: x.clone(), set: dom.describe() })?;
        let j = cod.index_of(y).ok_or_else(|| Error::NotAMember { elem: y.clone(), set: cod.describe() })?;
        match forced[i] {
            Some(old) if old != j => return Ok(Vec::new()),
            _ => forced[i] = Some(j),
        }
    }
    let mut used = vec![false; n];
    for j in forced.iter().flatten() {
        if std::mem::replace(&mut used[*j], true) {
            return Ok(Vec::new());
        }
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn go(
        i: usize,
        forced: &[Option<usize>],
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == forced.len() {
            out.push(current.clone());
            return;
        }
        if let Some(j) = forced[i] {
            current[i] = j;
            go(i + 1, forced, used, current, out);
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                current[i] = j;
                go(i + 1, forced, used, current, out);
                used[j] = false;
            }
        }
    }
    let mut tables = Vec::new();
    go(0, &forced, &mut used, &mut current, &mut tables);
    for t in tables {
        out.push(FinMap::from_indices(dom.clone(), cod.clone(), t)?);
    }
    Ok(out)
}

/// Cartesian product of candidate lists; the callback sees each choice.
pub fn for_each_choice<T: Clone>(options: &[Vec<T>], mut visit: impl FnMut(&[T])) {
    if options.iter().any(|o| o.is_empty()) {
        return;
    }
    let mut pos = vec![0usize; options.len()];
    let mut current: Vec<T> = options.iter().map(|o| o[0].clone()).collect();
    loop {
        visit(&current);
        let mut k = options.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < options[k].len() {
                current[k] = options[k][pos[k]].clone();
                break;
            }
            pos[k] = 0;
            current[k] = options[k][0].clone();
        }
    }
}
