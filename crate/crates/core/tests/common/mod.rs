#![allow(dead_code)]

use multidescent::finset::{FinMap, FinSetObj};
use proptest::prelude::*;

pub fn set(prefix: &str, n: usize) -> FinSetObj {
    FinSetObj::numbered(prefix, n)
}

pub fn map_from(dom: &FinSetObj, cod: &FinSetObj, idx: &[usize]) -> FinMap {
    FinMap::from_indices(dom.clone(), cod.clone(), idx.to_vec()).unwrap()
}

/// A map between numbered sets with `|dom| <= max` and `1 <= |cod| <= max`.
pub fn any_map(max: usize) -> impl Strategy<Value = FinMap> {
    (0..=max, 1..=max).prop_flat_map(|(n, m)| {
        prop::collection::vec(0..m, n).prop_map(move |idx| map_from(&set("a", n), &set("b", m), &idx))
    })
}

/// A surjection `{x..} -> {y..}` with `|dom| <= max`.
pub fn any_surjection(max: usize) -> impl Strategy<Value = FinMap> {
    (1..=max).prop_flat_map(move |m| {
        (m..=max.max(m)).prop_flat_map(move |n| {
            prop::collection::vec(0..m, n - m).prop_map(move |extra| {
                let idx: Vec<usize> = (0..m).chain(extra).collect();
                map_from(&set("x", n), &set("y", m), &idx)
            })
        })
    })
}

/// A map into `cod` whose fibers have at most `max_fiber` elements.
pub fn slice_over(cod: &FinSetObj, sizes: &[usize]) -> FinMap {
    let mut pairs = Vec::new();
    for (y, &k) in cod.iter().zip(sizes) {
        for i in 0..k {
            pairs.push((multidescent::Elem::pair(y.clone(), multidescent::Elem::atom(format!("w{i}"))), y.clone()));
        }
    }
    let dom: FinSetObj = pairs.iter().map(|p| p.0.clone()).collect();
    FinMap::new(dom, cod.clone(), pairs).unwrap()
}
