//! Bounded checks of the monad laws and of cartesian-ness.
//!
//! An element of `T^k(X)` is *within bound `L`* when every shape occurring in
//! it has arity at most `L` and it has at most `L` leaves in `X`. Both
//! sides of every square checked here preserve that bound, so the bounded
//! comparisons are exact rather than approximate.

use std::collections::{BTreeMap, BTreeSet};

use super::MonadSpec;
use crate::elem::Elem;
use crate::error::Result;
use crate::finset::{all_maps, chosen_pullback, FinMap, FinSetObj};
use crate::report::Report;

/// Elements of `T^depth(base)` within bound, sorted.
pub fn nested_elements(monad: &MonadSpec, base: &FinSetObj, depth: usize, bound: usize) -> Vec<Elem> {
    let mut out: Vec<Elem> = nested(monad, base, depth, bound).into_iter().map(|(e, _)| e).collect();
    out.sort();
    out
}

fn nested(monad: &MonadSpec, base: &FinSetObj, depth: usize, budget: usize) -> Vec<(Elem, usize)> {
    if depth == 0 {
        if budget == 0 {
            return Vec::new();
        }
        return base.iter().map(|x| (x.clone(), 1)).collect();
    }
    let children = nested(monad, base, depth - 1, budget);
    let mut out = Vec::new();
    for (shape, arity) in monad.shapes(budget) {
        let mut current = Vec::with_capacity(arity);
        fill(monad, &shape, arity, &children, budget, &mut current, 0, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn fill(
    monad: &MonadSpec,
    shape: &Elem,
    arity: usize,
    children: &[(Elem, usize)],
    budget: usize,
    current: &mut Vec<Elem>,
    used: usize,
    out: &mut Vec<(Elem, usize)>,
) {
    if current.len() == arity {
        out.push((monad.assemble(shape, current.clone()), used));
        return;
    }
    for (c, leaves) in children {
        if used + leaves <= budget {
            current.push(c.clone());
            fill(monad, shape, arity, children, budget, current, used + leaves, out);
            current.pop();
        }
    }
}

/// `T^depth(f)(t)`.
pub(crate) fn apply_depth(monad: &MonadSpec, f: &FinMap, depth: usize, t: &Elem) -> Result<Elem> {
    if depth == 0 {
        return Ok(f.eval(t)?.clone());
    }
    monad.apply(t, |s| apply_depth(monad, f, depth - 1, s))
}

/// Whether every element of `T^depth(cod f)` within bound has a preimage.
pub fn t_surjective_bounded(monad: &MonadSpec, f: &FinMap, depth: usize, bound: usize) -> bool {
    let image: BTreeSet<Elem> = nested_elements(monad, f.dom(), depth, bound)
        .iter()
        .filter_map(|t| apply_depth(monad, f, depth, t).ok())
        .collect();
    nested_elements(monad, f.cod(), depth, bound).iter().all(|t| image.contains(t))
}

fn first_failure<'a>(
    items: impl IntoIterator<Item = &'a Elem>,
    mut holds: impl FnMut(&Elem) -> Result<bool>,
) -> Option<Elem> {
    items.into_iter().find(|x| !matches!(holds(x), Ok(true))).cloned()
}

fn sets(size_bound: usize, prefix: &str) -> Vec<FinSetObj> {
    (0..=size_bound).map(|n| FinSetObj::numbered(prefix, n)).collect()
}

fn maps_between(size_bound: usize) -> Vec<FinMap> {
    let mut out = Vec::new();
    for a in sets(size_bound, "a") {
        for b in sets(size_bound, "b") {
            out.extend(all_maps(&a, &b));
        }
    }
    out
}

fn bounds_note(size_bound: usize, bound: usize) -> String {
    format!("sets up to {size_bound} elements, elements within bound {bound}")
}

/// Unit, associativity and naturality laws on bounded elements.
pub fn check_monad_laws(monad: &MonadSpec, size_bound: usize, bound: usize) -> Report {
    let mut report = Report::new(format!("monad laws for {} ({})", monad.name(), bounds_note(size_bound, bound)));
    let mut left = None;
    let mut right = None;
    let mut assoc = None;
    for x in sets(size_bound, "x") {
        let t1 = nested_elements(monad, &x, 1, bound);
        left = left.or_else(|| first_failure(&t1, |t| Ok(monad.mult(&monad.unit(t))? == *t)));
        right =
            right.or_else(|| first_failure(&t1, |t| Ok(monad.mult(&monad.apply(t, |y| Ok(monad.unit(y)))?)? == *t)));
        let t3 = nested_elements(monad, &x, 3, bound);
        assoc = assoc.or_else(|| {
            first_failure(&t3, |ttt| {
                let inner_first = monad.mult(&monad.apply(ttt, |tt| monad.mult(tt))?)?;
                let outer_first = monad.mult(&monad.mult(ttt)?)?;
                Ok(inner_first == outer_first)
            })
        });
    }
    report.record("left unit m ∘ e_T = id", left);
    report.record("right unit m ∘ T(e) = id", right);
    report.record("associativity m ∘ T(m) = m ∘ m_T", assoc);

    let mut nat_e = None;
    let mut nat_m = None;
    for f in maps_between(size_bound) {
        if nat_e.is_none() {
            nat_e = first_failure(f.dom().elements(), |x| {
                Ok(monad.apply_map(&f, &monad.unit(x))? == monad.unit(f.eval(x)?))
            });
        }
        if nat_m.is_none() {
            let t2 = nested_elements(monad, f.dom(), 2, bound);
            nat_m = first_failure(&t2, |tt| {
                Ok(monad.mult(&monad.apply_map2(&f, tt)?)? == monad.apply_map(&f, &monad.mult(tt)?)?)
            });
        }
    }
    report.record("naturality of e", nat_e);
    report.record("naturality of m", nat_m);
    report
}

/// Compares `T(A ×_C B)` with `T(A) ×_{T(C)} T(B)` on bounded elements.
///
/// Returns a witness when the comparison fails to be a bijection.
fn pullback_preserved(monad: &MonadSpec, f: &FinMap, g: &FinMap, bound: usize) -> Option<Elem> {
    let square = chosen_pullback(f, g).ok()?;
    // apex pairs are (b, a) with g(b) = f(a)
    let tp = nested_elements(monad, &square.apex, 1, bound);
    let mut images = BTreeSet::new();
    for t in &tp {
        let pair = monad.unzip(t).ok()?;
        if !images.insert(pair) {
            return Some(t.clone());
        }
    }
    let mut by_image: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
    for s in nested_elements(monad, f.dom(), 1, bound) {
        let img = monad.apply_map(f, &s).ok()?;
        by_image.entry(img).or_default().push(s);
    }
    for t in nested_elements(monad, g.dom(), 1, bound) {
        let img = monad.apply_map(g, &t).ok()?;
        for s in by_image.get(&img).into_iter().flatten() {
            if !images.contains(&(t.clone(), s.clone())) {
                return Some(Elem::pair(t.clone(), s.clone()));
            }
        }
    }
    let matching: usize = nested_elements(monad, g.dom(), 1, bound)
        .iter()
        .map(|t| monad.apply_map(g, t).map(|img| by_image.get(&img).map_or(0, Vec::len)).unwrap_or(0))
        .sum();
    if matching != images.len() {
        return Some(Elem::atom(format!("{} vs {}", images.len(), matching)));
    }
    None
}

/// `T` preserves pullbacks, and the naturality squares of `e` and `m` are
/// pullbacks, on all maps between sets up to `size_bound` elements.
pub fn check_cartesian(monad: &MonadSpec, size_bound: usize, bound: usize) -> Report {
    let mut report = Report::new(format!("cartesian {} ({})", monad.name(), bounds_note(size_bound, bound)));
    let mut preserve = None;
    'outer: for c in sets(size_bound, "c") {
        for a in sets(size_bound, "a") {
            let fs = all_maps(&a, &c);
            for b in sets(size_bound, "b") {
                for g in all_maps(&b, &c) {
                    for f in &fs {
                        if let Some(w) = pullback_preserved(monad, f, &g, bound) {
                            preserve = Some(w);
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    report.record("T preserves pullbacks", preserve);

    let mut e_square = None;
    let mut m_square = None;
    for f in maps_between(size_bound) {
        if e_square.is_none() {
            e_square = unit_square_failure(monad, &f, bound);
        }
        if m_square.is_none() {
            m_square = mult_square_failure(monad, &f, bound);
        }
    }
    report.record("naturality square of e is a pullback", e_square);
    report.record("naturality square of m is a pullback", m_square);
    report
}

// pairs (y, t) with e(y) = T(f)(t) must be exactly {(f x, e x)}
fn unit_square_failure(monad: &MonadSpec, f: &FinMap, bound: usize) -> Option<Elem> {
    let units: BTreeMap<Elem, Elem> = f.dom().iter().map(|x| (monad.unit(x), x.clone())).collect();
    if units.len() != f.dom().len() {
        return f.dom().iter().next().cloned();
    }
    let by_unit: BTreeMap<Elem, Elem> = f.cod().iter().map(|y| (monad.unit(y), y.clone())).collect();
    for t in nested_elements(monad, f.dom(), 1, bound.max(1)) {
        let img = monad.apply_map(f, &t).ok()?;
        if let Some(y) = by_unit.get(&img) {
            match units.get(&t) {
                Some(x) if f.eval(x).ok()? == y => {}
                _ => return Some(Elem::pair(y.clone(), t)),
            }
        }
    }
    None
}

// pairs (tt, t) with m(tt) = T(f)(t) must be exactly {(TT(f) w, m w)}
fn mult_square_failure(monad: &MonadSpec, f: &FinMap, bound: usize) -> Option<Elem> {
    let mut images = BTreeSet::new();
    for w in nested_elements(monad, f.dom(), 2, bound) {
        let pair = (monad.apply_map2(f, &w).ok()?, monad.mult(&w).ok()?);
        if !images.insert(pair) {
            return Some(w);
        }
    }
    let mut by_image: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
    for t in nested_elements(monad, f.dom(), 1, bound) {
        by_image.entry(monad.apply_map(f, &t).ok()?).or_default().push(t);
    }
    let mut matching = 0;
    for tt in nested_elements(monad, f.cod(), 2, bound) {
        let flat = monad.mult(&tt).ok()?;
        for t in by_image.get(&flat).into_iter().flatten() {
            matching += 1;
            if !images.contains(&(tt.clone(), t.clone())) {
                return Some(Elem::pair(tt, t.clone()));
            }
        }
    }
    if matching != images.len() {
        return Some(Elem::atom(format!("{} vs {}", images.len(), matching)));
    }
    None
}

/// `T` sends kernel pairs to kernel pairs on bounded elements.
pub fn check_kernel_pair_preservation(monad: &MonadSpec, size_bound: usize, bound: usize) -> Report {
    let mut report = Report::new(format!("kernel pairs under {} ({})", monad.name(), bounds_note(size_bound, bound)));
    let failure = maps_between(size_bound).iter().find_map(|f| pullback_preserved(monad, f, f, bound));
    report.record("T(kernel pair of f) is the kernel pair of T(f)", failure);
    report
}

/// For every map `f`, `T(f)` and `TT(f)` are surjective on bounded elements
/// exactly when `f` is.
pub fn check_surjectivity_creation(monad: &MonadSpec, size_bound: usize, bound: usize) -> Report {
    let mut report = Report::new(format!("surjectivity under {} ({})", monad.name(), bounds_note(size_bound, bound)));
    let mut creates = None;
    let mut preserves = None;
    for f in maps_between(size_bound) {
        let s = f.is_surjective();
        for depth in 1..=2 {
            let ts = t_surjective_bounded(monad, &f, depth, bound.max(1));
            let witness = || Elem::list(f.graph().map(|(x, y)| Elem::pair(x.clone(), y.clone())));
            if ts && !s && creates.is_none() {
                creates = Some(witness());
            }
            if s && !ts && preserves.is_none() {
                preserves = Some(witness());
            }
        }
    }
    report.record("T^k(f) surjective implies f surjective", creates);
    report.record("f surjective implies T^k(f) surjective", preserves);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::{free_monoid_monad, identity_monad, monoid_action_monad, Monoid};

    #[test]
    fn nested_counts() {
        let t = free_monoid_monad();
        let x = FinSetObj::numbered("x", 2);
        // lists of length <= 2 over two letters
        assert_eq!(nested_elements(&t, &x, 1, 2).len(), 7);
        let id = identity_monad();
        assert_eq!(nested_elements(&id, &x, 3, 0).len(), 0);
        assert_eq!(nested_elements(&id, &x, 3, 1).len(), 2);
        let z2 = monoid_action_monad(Monoid::cyclic(2)).unwrap();
        assert_eq!(nested_elements(&z2, &x, 2, 1).len(), 8);
    }

    #[test]
    fn depth_two_budget_counts_leaves() {
        let t = free_monoid_monad();
        let x = FinSetObj::numbered("x", 1);
        let tt = nested_elements(&t, &x, 2, 1);
        // [], [[]], [[x0]]
        assert_eq!(tt.len(), 3);
    }

    #[test]
    fn registered_monads_pass_small_bounds() {
        for t in [identity_monad(), monoid_action_monad(Monoid::cyclic(2)).unwrap(), free_monoid_monad()] {
            assert!(check_monad_laws(&t, 2, 2).passed());
            assert!(check_cartesian(&t, 2, 2).passed(), "{}", check_cartesian(&t, 2, 2));
            assert!(check_kernel_pair_preservation(&t, 2, 2).passed());
            assert!(check_surjectivity_creation(&t, 2, 2).passed());
        }
    }
}
