//! Cartesian monads on finite sets.
//!
//! Every registered monad is *polynomial*: an element of `T(X)` is a shape
//! together with a tuple of positions in `X`. Functorial action, fibers of
//! `T(u)` and the pairing `T(A ×_C B) ≅ T(A) ×_{T(C)} T(B)` are all derived
//! from that decomposition, so a new monad only has to say how to split and
//! assemble its elements and how its unit and multiplication act.

mod instances;
mod laws;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::finset::{chosen_pullback, FinMap, FinSetObj, PullbackSquare};

pub use instances::{FreeMonoid, Identity, Monoid, MonoidAction};
pub use laws::{
    check_cartesian, check_kernel_pair_preservation, check_monad_laws, check_surjectivity_creation, nested_elements,
    t_surjective_bounded,
};

/// The data a monad has to supply.
pub trait Monad: fmt::Debug + Send + Sync {
    fn name(&self) -> String;

    fn selector(&self) -> MonadSelector;

    /// Splits `t ∈ T(X)` into its shape and positions.
    fn split(&self, t: &Elem) -> Result<(Elem, Vec<Elem>)>;

    /// Inverse of [`Monad::split`]; the position count must match the shape's arity.
    fn assemble(&self, shape: &Elem, positions: Vec<Elem>) -> Elem;

    fn unit(&self, x: &Elem) -> Elem;

    /// `m: TT(X) -> T(X)`.
    fn mult(&self, tt: &Elem) -> Result<Elem>;

    /// Shapes with their arities. Monads with infinitely many shapes return
    /// those of arity at most `bound`; the others ignore the bound.
    fn shapes(&self, bound: usize) -> Vec<(Elem, usize)>;

    /// Whether `T(X)` is finite for finite `X`.
    fn has_finite_carriers(&self) -> bool;
}

/// Serializable name of a registered monad.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonadSelector {
    Identity,
    FreeMonoid,
    Monoid(Monoid),
}

impl Serialize for MonadSelector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            MonadSelector::Identity => serializer.serialize_str("identity"),
            MonadSelector::FreeMonoid => serializer.serialize_str("freemonoid"),
            MonadSelector::Monoid(m) => {
                let mut map = serializer.serialize_map(Some(1))?;
                map.serialize_entry("monoid", m)?;
                map.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SelectorRepr {
    Name(String),
    Monoid { monoid: Monoid },
}

impl<'de> Deserialize<'de> for MonadSelector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match SelectorRepr::deserialize(deserializer)? {
            SelectorRepr::Name(n) if n == "identity" => Ok(MonadSelector::Identity),
            SelectorRepr::Name(n) if n == "freemonoid" => Ok(MonadSelector::FreeMonoid),
            SelectorRepr::Name(n) => Err(serde::de::Error::custom(format!("unknown monad {n:?}"))),
            SelectorRepr::Monoid { monoid } => Ok(MonadSelector::Monoid(monoid)),
        }
    }
}

/// A shareable handle on a monad.
#[derive(Clone)]
pub struct MonadSpec(Arc<dyn Monad>);

impl fmt::Debug for MonadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.name())
    }
}

impl PartialEq for MonadSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.selector() == other.0.selector()
    }
}

impl Eq for MonadSpec {}

impl Serialize for MonadSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.selector().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MonadSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let sel = MonadSelector::deserialize(deserializer)?;
        MonadSpec::from_selector(sel).map_err(serde::de::Error::custom)
    }
}

pub fn identity_monad() -> MonadSpec {
    MonadSpec::new(Identity)
}

pub fn free_monoid_monad() -> MonadSpec {
    MonadSpec::new(FreeMonoid)
}

/// `M × −` for a validated monoid.
pub fn monoid_action_monad(monoid: Monoid) -> Result<MonadSpec> {
    monoid.validate()?;
    Ok(MonadSpec::new(MonoidAction::new(monoid)))
}

impl MonadSpec {
    pub fn new(monad: impl Monad + 'static) -> Self {
        MonadSpec(Arc::new(monad))
    }

    pub fn from_selector(sel: MonadSelector) -> Result<Self> {
        match sel {
            MonadSelector::Identity => Ok(identity_monad()),
            MonadSelector::FreeMonoid => Ok(free_monoid_monad()),
            MonadSelector::Monoid(m) => monoid_action_monad(m),
        }
    }

    pub fn name(&self) -> String {
        self.0.name()
    }

    pub fn selector(&self) -> MonadSelector {
        self.0.selector()
    }

    pub fn inner(&self) -> &dyn Monad {
        self.0.as_ref()
    }

    pub fn has_finite_carriers(&self) -> bool {
        self.0.has_finite_carriers()
    }

    pub fn split(&self, t: &Elem) -> Result<(Elem, Vec<Elem>)> {
        self.0.split(t)
    }

    pub fn assemble(&self, shape: &Elem, positions: Vec<Elem>) -> Elem {
        self.0.assemble(shape, positions)
    }

    pub fn unit(&self, x: &Elem) -> Elem {
        self.0.unit(x)
    }

    pub fn mult(&self, tt: &Elem) -> Result<Elem> {
        self.0.mult(tt)
    }

    pub fn shapes(&self, bound: usize) -> Vec<(Elem, usize)> {
        self.0.shapes(bound)
    }

    /// `T(rule)(t)`.
    pub fn apply(&self, t: &Elem, mut rule: impl FnMut(&Elem) -> Result<Elem>) -> Result<Elem> {
        let (shape, pos) = self.split(t)?;
        let mapped = pos.iter().map(&mut rule).collect::<Result<Vec<_>>>()?;
        Ok(self.assemble(&shape, mapped))
    }

    /// `T(f)(t)` for a finite map.
    pub fn apply_map(&self, f: &FinMap, t: &Elem) -> Result<Elem> {
        self.apply(t, |x| Ok(f.eval(x)?.clone()))
    }

    /// `TT(f)(tt)`.
    pub fn apply_map2(&self, f: &FinMap, tt: &Elem) -> Result<Elem> {
        self.apply(tt, |t| self.apply_map(f, t))
    }

    /// Whether `t` is an element of `T(base)`.
    pub fn is_member(&self, t: &Elem, base: &FinSetObj) -> bool {
        match self.split(t) {
            Ok((_, pos)) => pos.iter().all(|x| base.contains(x)),
            Err(_) => false,
        }
    }

    /// Whether `tt` is an element of `TT(base)`.
    pub fn is_member2(&self, tt: &Elem, base: &FinSetObj) -> bool {
        match self.split(tt) {
            Ok((_, pos)) => pos.iter().all(|t| self.is_member(t, base)),
            Err(_) => false,
        }
    }

    /// Pairs `s ∈ T(A)` and `t ∈ T(B)` of the same shape into `T(A × B)`.
    pub fn zip(&self, s: &Elem, t: &Elem) -> Result<Option<Elem>> {
        let (sh1, p1) = self.split(s)?;
        let (sh2, p2) = self.split(t)?;
        if sh1 != sh2 {
            return Ok(None);
        }
        let pairs = p1.into_iter().zip(p2).map(|(a, b)| Elem::pair(a, b)).collect();
        Ok(Some(self.assemble(&sh1, pairs)))
    }

    /// `T(π₁)` and `T(π₂)` on an element of `T(A × B)`.
    pub fn unzip(&self, t: &Elem) -> Result<(Elem, Elem)> {
        let first = self.apply(t, |x| {
            x.as_pair().map(|(a, _)| a.clone()).ok_or_else(|| Error::Invalid(format!("{x} is not a pair")))
        })?;
        let second = self.apply(t, |x| {
            x.as_pair().map(|(_, b)| b.clone()).ok_or_else(|| Error::Invalid(format!("{x} is not a pair")))
        })?;
        Ok((first, second))
    }

    /// All elements of `T(base)` whose shapes are within `bound`.
    pub fn elements(&self, base: &FinSetObj, bound: usize) -> Vec<Elem> {
        let mut out = Vec::new();
        for (shape, arity) in self.shapes(bound) {
            for tuple in tuples(base.elements(), arity) {
                out.push(self.assemble(&shape, tuple));
            }
        }
        out.sort();
        out
    }

    /// `T(base)` as a finite set, for monads with finite carriers.
    pub fn materialize(&self, base: &FinSetObj) -> Result<FinSetObj> {
        if !self.has_finite_carriers() {
            return Err(Error::NotFinite(self.name()));
        }
        Ok(self.elements(base, 0).into_iter().collect())
    }

    /// `T(f): T(dom f) -> T(cod f)` as a finite map.
    pub fn lift_finmap(&self, f: &FinMap) -> Result<FinMap> {
        let dom = self.materialize(f.dom())?;
        let cod = self.materialize(f.cod())?;
        FinMap::from_fn(dom, cod, |t| self.apply_map(f, t))
    }

    /// `e_X: X -> T(X)` as a finite map.
    pub fn unit_map(&self, base: &FinSetObj) -> Result<FinMap> {
        FinMap::from_fn(base.clone(), self.materialize(base)?, |x| Ok(self.unit(x)))
    }

    /// `m_X: TT(X) -> T(X)` as a finite map.
    pub fn mult_map(&self, base: &FinSetObj) -> Result<FinMap> {
        let tx = self.materialize(base)?;
        let ttx = self.materialize(&tx)?;
        FinMap::from_fn(ttx, tx, |tt| self.mult(tt))
    }

    pub fn lift_obj(&self, base: &FinSetObj) -> Carrier {
        Carrier::Finite(base.clone()).lift(self)
    }

    pub fn lift_map(&self, f: &FinMap) -> CarrierMap {
        let monad = self.clone();
        let f2 = f.clone();
        CarrierMap {
            dom: self.lift_obj(f.dom()),
            cod: self.lift_obj(f.cod()),
            rule: Arc::new(move |t| monad.apply_map(&f2, t)),
        }
    }

    pub fn unit_carrier_map(&self, base: &FinSetObj) -> CarrierMap {
        let monad = self.clone();
        CarrierMap {
            dom: Carrier::Finite(base.clone()),
            cod: self.lift_obj(base),
            rule: Arc::new(move |x| Ok(monad.unit(x))),
        }
    }

    pub fn mult_carrier_map(&self, base: &FinSetObj) -> CarrierMap {
        let monad = self.clone();
        CarrierMap {
            dom: self.lift_obj(base).lift(self),
            cod: self.lift_obj(base),
            rule: Arc::new(move |tt| monad.mult(tt)),
        }
    }
}

/// Every tuple of length `k` over `items`, lexicographically.
pub(crate) fn tuples(items: &[Elem], k: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * items.len());
        for prefix in &out {
            for x in items {
                let mut t = prefix.clone();
                t.push(x.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// A possibly infinite set of elements, either finite or `T`-lifted.
#[derive(Clone, Debug, PartialEq)]
pub enum Carrier {
    Finite(FinSetObj),
    /// Finite lists over an inner carrier; enumerated by length.
    ListsOver(Box<Carrier>),
}

impl Carrier {
    /// `T` applied to this carrier.
    pub fn lift(self, monad: &MonadSpec) -> Carrier {
        match (monad.selector(), self) {
            (MonadSelector::Identity, c) => c,
            (MonadSelector::FreeMonoid, c) => Carrier::ListsOver(Box::new(c)),
            (_, Carrier::Finite(base)) => match monad.materialize(&base) {
                Ok(s) => Carrier::Finite(s),
                Err(_) => Carrier::ListsOver(Box::new(Carrier::Finite(base))),
            },
            (_, c) => c,
        }
    }

    pub fn contains(&self, x: &Elem) -> bool {
        match self {
            Carrier::Finite(s) => s.contains(x),
            Carrier::ListsOver(inner) => x.as_list().is_some_and(|items| items.iter().all(|i| inner.contains(i))),
        }
    }

    /// Elements whose lists have length at most `max_len`, by length.
    pub fn enumerate(&self, max_len: usize) -> Vec<Elem> {
        match self {
            Carrier::Finite(s) => s.elements().to_vec(),
            Carrier::ListsOver(inner) => {
                let base = inner.enumerate(max_len);
                (0..=max_len).flat_map(|n| tuples(&base, n).into_iter().map(Elem::List)).collect()
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Carrier::Finite(_))
    }
}

/// A computable map between carriers, checked lazily on use.
#[derive(Clone)]
pub struct CarrierMap {
    pub dom: Carrier,
    pub cod: Carrier,
    rule: Rule,
}

type Rule = Arc<dyn Fn(&Elem) -> Result<Elem> + Send + Sync>;

impl fmt::Debug for CarrierMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CarrierMap({:?} -> {:?})", self.dom, self.cod)
    }
}

impl CarrierMap {
    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        if !self.dom.contains(x) {
            return Err(Error::NotAMember { elem: x.clone(), set: format!("{:?}", self.dom) });
        }
        let y = (self.rule)(x)?;
        if !self.cod.contains(&y) {
            return Err(Error::NotAMember { elem: y, set: format!("{:?}", self.cod) });
        }
        Ok(y)
    }
}

/// `{s ∈ T(dom u) : T(u)(s) = t}`, canonically ordered.
pub fn t_fiber(monad: &MonadSpec, u: &FinMap, t: &Elem) -> Result<FinSetObj> {
    let (shape, pos) = monad.split(t)?;
    let mut options = Vec::with_capacity(pos.len());
    for y in &pos {
        if !u.cod().contains(y) {
            return Err(Error::Malformed { monad: monad.name(), elem: t.clone() });
        }
        options.push(u.fiber(y).into_iter().cloned().collect::<Vec<_>>());
    }
    let mut out = Vec::new();
    crate::finset::for_each_choice(&options, |choice| {
        out.push(monad.assemble(&shape, choice.to_vec()));
    });
    if pos.is_empty() {
        out = vec![monad.assemble(&shape, Vec::new())];
    }
    Ok(out.into_iter().collect())
}

/// The pullback of `T(u)` along `f: a -> T(cod u)`.
///
/// The apex is `{(a, s) : s ∈ t_fiber(u, f(a))}`. The returned square has
/// `p = f`, `leg1` the projection to `dom f`, and as its other side the
/// restriction of `T(u)` to the finitely many `s` that occur.
pub fn t_pullback(monad: &MonadSpec, f: &FinMap, u: &FinMap) -> Result<PullbackSquare> {
    let mut occurring = Vec::new();
    for t in f.cod() {
        if !monad.is_member(t, u.cod()) {
            return Err(Error::BoundaryMismatch {
                context: "T-pullback".into(),
                left: format!("value {t} of f"),
                right: format!("T({})", u.cod().describe()),
            });
        }
    }
    for (_, t) in f.graph() {
        occurring.extend(t_fiber(monad, u, t)?.iter().cloned());
    }
    let tab: FinSetObj = occurring.into_iter().collect();
    let tu = FinMap::from_fn(tab, f.cod().clone(), |s| monad.apply_map(u, s))?;
    chosen_pullback(&tu, f)
}
