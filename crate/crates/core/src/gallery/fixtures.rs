use super::{slice_to_weighted, SmallCategory};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSetObj};
use crate::monad::{free_monoid_monad, Monoid};
use crate::multicat::{discrete, TFunctor, TGraph, TMulticategory};

#[derive(Clone, Debug, PartialEq)]
pub enum FixtureItem {
    Multicategory(Box<TMulticategory>),
    Functor(Box<TFunctor>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub item: FixtureItem,
}

impl Fixture {
    fn multicat(name: &str, description: &str, mc: TMulticategory) -> Self {
        Fixture { name: name.into(), description: description.into(), item: FixtureItem::Multicategory(Box::new(mc)) }
    }

    fn functor(name: &str, description: &str, f: TFunctor) -> Self {
        Fixture { name: name.into(), description: description.into(), item: FixtureItem::Functor(Box::new(f)) }
    }

    pub fn as_multicat(&self) -> Option<&TMulticategory> {
        match &self.item {
            FixtureItem::Multicategory(m) => Some(m),
            FixtureItem::Functor(_) => None,
        }
    }

    pub fn as_functor(&self) -> Option<&TFunctor> {
        match &self.item {
            FixtureItem::Functor(f) => Some(f),
            FixtureItem::Multicategory(_) => None,
        }
    }
}

fn chain(n: usize) -> Result<SmallCategory> {
    let objects: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            arrows.push((format!("{i}{j}"), i.to_string(), j.to_string()));
        }
    }
    let mut composites = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                composites.push((format!("{j}{k}"), format!("{i}{j}"), format!("{i}{k}")));
            }
        }
    }
    let o: Vec<&str> = objects.iter().map(String::as_str).collect();
    let a: Vec<(&str, &str, &str)> = arrows.iter().map(|(x, y, z)| (x.as_str(), y.as_str(), z.as_str())).collect();
    let c: Vec<(&str, &str, &str)> = composites.iter().map(|(x, y, z)| (x.as_str(), y.as_str(), z.as_str())).collect();
    SmallCategory::from_table(&o, &a, &c)
}

fn groupoid() -> Result<SmallCategory> {
    SmallCategory::from_table(
        &["x", "y"],
        &[("i", "x", "y"), ("j", "y", "x")],
        &[("j", "i", "id_x"), ("i", "j", "id_y")],
    )
}

fn three_arrows() -> Result<SmallCategory> {
    SmallCategory::from_table(
        &["a0", "a1", "b0", "b1", "c0", "c1"],
        &[("u", "a0", "a1"), ("v", "b0", "b1"), ("w", "c0", "c1")],
        &[],
    )
}

fn map(dom: &FinSetObj, cod: &FinSetObj, pairs: &[(&str, &str)]) -> Result<FinMap> {
    FinMap::new(dom.clone(), cod.clone(), pairs.iter().map(|(a, b)| (Elem::atom(*a), Elem::atom(*b))))
}

fn weighted(c: &SmallCategory, m: &Monoid, weights: &[(&str, &str)]) -> Result<TMulticategory> {
    let cod = FinSetObj::try_new(m.elements.iter().cloned())?;
    let w = FinMap::tabulate(c.morphisms.clone(), |f| {
        Ok(weights
            .iter()
            .find(|(g, _)| Elem::atom(*g) == *f)
            .map(|(_, n)| Elem::atom(*n))
            .unwrap_or_else(|| m.unit.clone()))
    })?
    .with_codomain(cod)?;
    slice_to_weighted(c, m, &w)
}

fn self_weighted(m: &Monoid) -> Result<TMulticategory> {
    let c = SmallCategory::of_monoid(m)?;
    slice_to_weighted(&c, m, &FinMap::identity(&c.morphisms))
}

fn functor(src: &TMulticategory, tgt: &TMulticategory, p0: &[(&str, &str)], p1: &[(&str, &str)]) -> Result<TFunctor> {
    TFunctor::new(src.clone(), tgt.clone(), map(src.x0(), tgt.x0(), p0)?, map(src.x1(), tgt.x1(), p1)?)
}

/// Objects `a, b`; morphisms `c: () -> a`, `f: (a) -> b`, their composite
/// `fc: () -> b`, and identities.
fn pointed() -> Result<TMulticategory> {
    let t = free_monoid_monad();
    let x0 = FinSetObj::atoms(["a", "b"]);
    let x1 = FinSetObj::atoms(["1a", "1b", "c", "f", "fc"]);
    let list = |xs: &[&str]| Elem::List(xs.iter().map(|x| Elem::atom(*x)).collect());
    let d0 = map(&x1, &x0, &[("1a", "a"), ("1b", "b"), ("c", "a"), ("f", "b"), ("fc", "b")])?;
    let d1 = FinMap::new(
        x1.clone(),
        FinSetObj::try_new([list(&[]), list(&["a"]), list(&["b"])])?,
        [("1a", list(&["a"])), ("1b", list(&["b"])), ("c", list(&[])), ("f", list(&["a"])), ("fc", list(&[]))]
            .into_iter()
            .map(|(k, v)| (Elem::atom(k), v)),
    )?;
    let s0 = map(&x0, &x1, &[("a", "1a"), ("b", "1b")])?;
    let graph = TGraph::new(t, d0, d1)?;
    TMulticategory::from_rule(graph, s0, |g, fs| {
        let args = fs.as_list().ok_or_else(|| Error::Invalid(format!("{fs} is not a list")))?;
        let name = |e: &Elem| e.to_string();
        Ok(match (name(g).as_str(), args.first().map(name).as_deref()) {
            ("1a" | "1b", Some(h)) => Elem::atom(h),
            ("f", Some("1a")) => Elem::atom("f"),
            ("f", Some("c")) => Elem::atom("fc"),
            (other, None) => Elem::atom(other),
            (other, Some(h)) => return Err(Error::Invalid(format!("no composite {other}({h})"))),
        })
    })
}

fn build() -> Result<Vec<Fixture>> {
    let fm = free_monoid_monad();
    let mut out = Vec::new();
    let names = [vec![], vec!["a"], vec!["a", "b"], vec!["a", "b", "c"]];
    for (i, s) in names.iter().enumerate() {
        out.push(Fixture::multicat(
            &format!("discrete-{i}"),
            &format!("discrete multicategory on {i} objects under the free monoid monad"),
            discrete(&fm, &FinSetObj::atoms(s.iter().copied()))?,
        ));
    }
    out.push(Fixture::multicat(
        "freemonoid-pointed",
        "objects a, b with a nullary c: () -> a, a unary f: (a) -> b and f(c)",
        pointed()?,
    ));

    let terminal = SmallCategory::from_table(&["*"], &[], &[])?;
    let arrow = chain(1)?;
    let z2_cat = SmallCategory::of_monoid(&Monoid::cyclic(2))?;
    let chain2 = chain(2)?;
    let chain3 = chain(3)?;
    let arrows3 = three_arrows()?;
    let grp = groupoid()?;
    for (name, description, c) in [
        ("category-terminal", "terminal category", &terminal),
        ("category-arrow", "the arrow 0 -> 1", &arrow),
        ("category-z2", "Z/2 as a one-object category", &z2_cat),
        ("category-chain2", "the chain 0 -> 1 -> 2", &chain2),
        ("category-chain3", "the chain 0 -> 1 -> 2 -> 3", &chain3),
        ("category-three-arrows", "three disjoint arrows", &arrows3),
        ("category-groupoid", "two objects and an inverse pair of isomorphisms", &grp),
    ] {
        out.push(Fixture::multicat(name, description, c.to_identity_multicat()?));
    }
    let id_mc = |c: &SmallCategory| c.to_identity_multicat();
    out.push(Fixture::functor(
        "arrows-onto-chain2",
        "three disjoint arrows onto the chain 0 -> 1 -> 2; surjective on morphisms, not on composable pairs",
        functor(
            &id_mc(&arrows3)?,
            &id_mc(&chain2)?,
            &[("a0", "0"), ("a1", "1"), ("b0", "1"), ("b1", "2"), ("c0", "0"), ("c1", "2")],
            &[
                ("id_a0", "id_0"),
                ("id_a1", "id_1"),
                ("id_b0", "id_1"),
                ("id_b1", "id_2"),
                ("id_c0", "id_0"),
                ("id_c1", "id_2"),
                ("u", "01"),
                ("v", "12"),
                ("w", "02"),
            ],
        )?,
    ));
    out.push(Fixture::functor(
        "chain2-onto-z2",
        "the chain 0 -> 1 -> 2 onto Z/2 with both generators odd; surjective on morphisms and pairs, not on triples",
        functor(
            &id_mc(&chain2)?,
            &id_mc(&z2_cat)?,
            &[("0", "*"), ("1", "*"), ("2", "*")],
            &[("id_0", "0"), ("id_1", "0"), ("id_2", "0"), ("01", "1"), ("12", "1"), ("02", "0")],
        )?,
    ));
    out.push(Fixture::functor(
        "groupoid-collapse",
        "the two-object groupoid onto the terminal category",
        functor(
            &id_mc(&grp)?,
            &id_mc(&terminal)?,
            &[("x", "*"), ("y", "*")],
            &[("id_x", "id_*"), ("id_y", "id_*"), ("i", "id_*"), ("j", "id_*")],
        )?,
    ));

    let z2 = Monoid::cyclic(2);
    let z3 = Monoid::cyclic(3);
    let z2_self = self_weighted(&z2)?;
    let z3_self = self_weighted(&z3)?;
    let grp_w = weighted(&grp, &z2, &[("i", "1"), ("j", "1")])?;
    let arrow_w = weighted(&arrow, &z2, &[("01", "1")])?;
    let z2_two = weighted(&SmallCategory::from_table(&["p", "q"], &[], &[])?, &z2, &[])?;
    out.push(Fixture::multicat("weighted-z2", "Z/2 weighted by itself", z2_self.clone()));
    out.push(Fixture::multicat("weighted-z3", "Z/3 weighted by itself", z3_self));
    out.push(Fixture::multicat(
        "weighted-z2-groupoid",
        "the two-object groupoid with both isomorphisms of weight 1 in Z/2",
        grp_w.clone(),
    ));
    out.push(Fixture::multicat("weighted-z2-arrow", "the arrow with weight 1 in Z/2", arrow_w.clone()));
    out.push(Fixture::multicat("weighted-z2-discrete2", "two objects, identities only, over Z/2", z2_two.clone()));
    out.push(Fixture::functor(
        "weighted-groupoid-collapse",
        "the weighted groupoid onto Z/2 weighted by itself",
        functor(&grp_w, &z2_self, &[("x", "*"), ("y", "*")], &[("id_x", "0"), ("id_y", "0"), ("i", "1"), ("j", "1")])?,
    ));
    out.push(Fixture::functor(
        "weighted-arrow-into-z2",
        "the weighted arrow into Z/2 weighted by itself; surjective on morphisms, not on pairs",
        functor(&arrow_w, &z2_self, &[("0", "*"), ("1", "*")], &[("id_0", "0"), ("id_1", "0"), ("01", "1")])?,
    ));
    out.push(Fixture::functor(
        "weighted-discrete-collapse",
        "two objects with identities onto a single object, over Z/2",
        functor(
            &z2_two,
            &weighted(&SmallCategory::from_table(&["r"], &[], &[])?, &z2, &[])?,
            &[("p", "r"), ("q", "r")],
            &[("id_p", "id_r"), ("id_q", "id_r")],
        )?,
    ));

    let d1 = discrete(&fm, &FinSetObj::atoms(["a"]))?;
    let d2 = discrete(&fm, &FinSetObj::atoms(["a", "b"]))?;
    let dc = discrete(&fm, &FinSetObj::atoms(["c"]))?;
    out.push(Fixture::functor(
        "discrete-collapse",
        "D({a, b}) onto D({c})",
        functor(&d2, &dc, &[("a", "c"), ("b", "c")], &[("a", "c"), ("b", "c")])?,
    ));
    out.push(Fixture::functor(
        "discrete-inclusion",
        "D({a}) into D({a, b})",
        functor(&d1, &d2, &[("a", "a")], &[("a", "a")])?,
    ));
    Ok(out)
}

/// Every named fixture, in a fixed order.
pub fn fixture_library() -> Vec<Fixture> {
    build().expect("fixtures are well typed")
}

pub fn fixture(name: &str) -> Option<Fixture> {
    fixture_library().into_iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_validates() {
        for f in fixture_library() {
            match &f.item {
                FixtureItem::Multicategory(m) => assert!(m.is_valid(), "{}: {}", f.name, m.validate()),
                FixtureItem::Functor(p) => {
                    assert!(p.src.is_valid() && p.tgt.is_valid(), "{}", f.name);
                    assert!(p.is_valid(), "{}: {}", f.name, p.validate());
                }
            }
        }
    }

    #[test]
    fn profiles_of_deficient_functors() {
        let p = |n: &str| fixture(n).unwrap().as_functor().unwrap().profile().unwrap();
        assert!(p("discrete-collapse").all());
        let a = p("arrows-onto-chain2");
        assert!(a.p1 && !a.p2 && !a.p3);
        let c = p("chain2-onto-z2");
        assert!(c.p1 && c.p2 && !c.p3);
        assert!(p("weighted-groupoid-collapse").all());
    }
}
