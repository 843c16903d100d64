use serde::{Deserialize, Serialize};

use super::{Monad, MonadSelector};
use crate::elem::Elem;
use crate::error::{Error, Result};

fn star() -> Elem {
    Elem::atom("*")
}

/// `T = id`, `e = m = id`.
#[derive(Debug, Clone, Copy)]
pub struct Identity;

impl Monad for Identity {
    fn name(&self) -> String {
        "identity".into()
    }

    fn selector(&self) -> MonadSelector {
        MonadSelector::Identity
    }

    fn split(&self, t: &Elem) -> Result<(Elem, Vec<Elem>)> {
        Ok((star(), vec![t.clone()]))
    }

    fn assemble(&self, _shape: &Elem, mut positions: Vec<Elem>) -> Elem {
        positions.pop().expect("identity shape has arity one")
    }

    fn unit(&self, x: &Elem) -> Elem {
        x.clone()
    }

    fn mult(&self, tt: &Elem) -> Result<Elem> {
        Ok(tt.clone())
    }

    fn shapes(&self, _bound: usize) -> Vec<(Elem, usize)> {
        vec![(star(), 1)]
    }

    fn has_finite_carriers(&self) -> bool {
        true
    }
}

/// A finite monoid given by its multiplication table.
///
/// `table[i][j]` is `elements[i] · elements[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monoid {
    pub elements: Vec<Elem>,
    pub unit: Elem,
    pub table: Vec<Vec<Elem>>,
}

impl Monoid {
    /// `Z/n` with elements `"0" .. "n-1"` under addition.
    pub fn cyclic(n: usize) -> Self {
        let elements: Vec<Elem> = (0..n).map(|i| Elem::atom(i.to_string())).collect();
        let table = (0..n).map(|i| (0..n).map(|j| elements[(i + j) % n].clone()).collect()).collect();
        Monoid { unit: elements[0].clone(), elements, table }
    }

    pub fn trivial() -> Self {
        Monoid::cyclic(1)
    }

    fn index(&self, x: &Elem) -> Option<usize> {
        self.elements.iter().position(|e| e == x)
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.index(x).is_some()
    }

    pub fn op(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        match (self.index(a), self.index(b)) {
            (Some(i), Some(j)) => Ok(self.table[i][j].clone()),
            _ => Err(Error::InvalidMonoid(format!("{a} or {b} is not a monoid element"))),
        }
    }

    /// Checks the table shape, closure, two-sided unit and associativity.
    pub fn validate(&self) -> Result<()> {
        let n = self.elements.len();
        if n == 0 {
            return Err(Error::InvalidMonoid("no elements".into()));
        }
        for (i, a) in self.elements.iter().enumerate() {
            if self.elements[..i].contains(a) {
                return Err(Error::InvalidMonoid(format!("duplicate element {a}")));
            }
        }
        if self.table.len() != n || self.table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMonoid(format!("table is not {n}×{n}")));
        }
        for row in &self.table {
            for x in row {
                if !self.contains(x) {
                    return Err(Error::InvalidMonoid(format!("table entry {x} is not an element")));
                }
            }
        }
        if !self.contains(&self.unit) {
            return Err(Error::InvalidMonoid(format!("unit {} is not an element", self.unit)));
        }
        for a in &self.elements {
            if self.op(&self.unit, a)? != *a || self.op(a, &self.unit)? != *a {
                return Err(Error::InvalidMonoid(format!("unit law fails at {a}")));
            }
        }
        for a in &self.elements {
            for b in &self.elements {
                for c in &self.elements {
                    let left = self.op(&self.op(a, b)?, c)?;
                    let right = self.op(a, &self.op(b, c)?)?;
                    if left != right {
                        return Err(Error::InvalidMonoid(format!(
                            "associativity fails at ({a}, {b}, {c}): ({a}·{b})·{c} = {left}, {a}·({b}·{c}) = {right}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `T(X) = M × X`, `e(x) = (1, x)`, `m(a, (b, x)) = (a·b, x)`.
#[derive(Debug, Clone)]
pub struct MonoidAction {
    monoid: Monoid,
}

impl MonoidAction {
    /// The monoid must already be validated.
    pub fn new(monoid: Monoid) -> Self {
        MonoidAction { monoid }
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }
}

impl Monad for MonoidAction {
    fn name(&self) -> String {
        let names: Vec<String> = self.monoid.elements.iter().map(|e| e.to_string()).collect();
        format!("monoid({})", names.join(","))
    }

    fn selector(&self) -> MonadSelector {
        MonadSelector::Monoid(self.monoid.clone())
    }

    fn split(&self, t: &Elem) -> Result<(Elem, Vec<Elem>)> {
        match t.as_pair() {
            Some((m, x)) if self.monoid.contains(m) => Ok((m.clone(), vec![x.clone()])),
            _ => Err(Error::Malformed { monad: self.name(), elem: t.clone() }),
        }
    }

    fn assemble(&self, shape: &Elem, mut positions: Vec<Elem>) -> Elem {
        Elem::pair(shape.clone(), positions.pop().expect("weighted shape has arity one"))
    }

    fn unit(&self, x: &Elem) -> Elem {
        Elem::pair(self.monoid.unit.clone(), x.clone())
    }

    fn mult(&self, tt: &Elem) -> Result<Elem> {
        let (a, inner) = self.split(tt)?;
        let (b, x) = self.split(&inner[0])?;
        Ok(Elem::pair(self.monoid.op(&a, &b)?, x[0].clone()))
    }

    fn shapes(&self, _bound: usize) -> Vec<(Elem, usize)> {
        self.monoid.elements.iter().map(|m| (m.clone(), 1)).collect()
    }

    fn has_finite_carriers(&self) -> bool {
        true
    }
}

/// Finite lists, `e(x) = [x]`, `m` = concatenation.
#[derive(Debug, Clone, Copy)]
pub struct FreeMonoid;

impl Monad for FreeMonoid {
    fn name(&self) -> String {
        "freemonoid".into()
    }

    fn selector(&self) -> MonadSelector {
        MonadSelector::FreeMonoid
    }

    fn split(&self, t: &Elem) -> Result<(Elem, Vec<Elem>)> {
        match t.as_list() {
            Some(items) => Ok((Elem::atom(items.len().to_string()), items.to_vec())),
            None => Err(Error::Malformed { monad: self.name(), elem: t.clone() }),
        }
    }

    fn assemble(&self, _shape: &Elem, positions: Vec<Elem>) -> Elem {
        Elem::List(positions)
    }

    fn unit(&self, x: &Elem) -> Elem {
        Elem::list([x.clone()])
    }

    fn mult(&self, tt: &Elem) -> Result<Elem> {
        let outer = tt.as_list().ok_or_else(|| Error::Malformed { monad: self.name(), elem: tt.clone() })?;
        let mut flat = Vec::new();
        for inner in outer {
            let items = inner.as_list().ok_or_else(|| Error::Malformed { monad: self.name(), elem: tt.clone() })?;
            flat.extend(items.iter().cloned());
        }
        Ok(Elem::List(flat))
    }

    fn shapes(&self, bound: usize) -> Vec<(Elem, usize)> {
        (0..=bound).map(|n| (Elem::atom(n.to_string()), n)).collect()
    }

    fn has_finite_carriers(&self) -> bool {
        false
    }
}
