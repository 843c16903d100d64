//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use multidescent::descent::{
    brute_force_oracle, check_algebra_laws, classify, comparison_functor, datum_domain, datum_iso, set_descent_inverse,
    DescentDatum, OracleStatus,
};
use multidescent::finset::{all_maps, chosen_pullback, compose, for_each_choice, pair_into, FinMap, FinSetObj};
use multidescent::gallery::{
    category_profile, check_weight, descent_transport, fixture_library, slice_to_weighted, weighted_to_slice,
    FixtureItem,
};
use multidescent::monad::{
    check_cartesian, check_kernel_pair_preservation, check_monad_laws, check_surjectivity_creation, free_monoid_monad,
    identity_monad, monoid_action_monad, t_surjective_bounded, MonadSelector, MonadSpec, Monoid,
};
use multidescent::multicat::{enumerate_functors, find_isomorphism, TFunctor, TMulticategory};
use multidescent::sketch::{check_model, coherence_search, model_from_multicat, multicat_sketch, strict_object};
use multidescent::Elem;

type Verdict = (bool, String);

fn set(n: usize) -> FinSetObj {
    FinSetObj::numbered("e", n)
}

fn z2() -> MonadSpec {
    monoid_action_monad(Monoid::cyclic(2)).unwrap()
}

fn registered() -> Vec<MonadSpec> {
    vec![identity_monad(), z2(), free_monoid_monad()]
}

/// Every multicategory in the fixture library, including functor endpoints,
/// without repeats.
fn fixture_multicats() -> Vec<(String, TMulticategory)> {
    let mut out: Vec<(String, TMulticategory)> = Vec::new();
    let mut push = |name: String, m: &TMulticategory| {
        if !out.iter().any(|(_, n)| n == m) {
            out.push((name, m.clone()));
        }
    };
    for f in fixture_library() {
        match &f.item {
            FixtureItem::Multicategory(m) => push(f.name.clone(), m),
            FixtureItem::Functor(p) => {
                push(format!("{} source", f.name), &p.src);
                push(format!("{} target", f.name), &p.tgt);
            }
        }
    }
    out
}

fn fixture_functors() -> Vec<(String, TFunctor)> {
    fixture_library()
        .into_iter()
        .filter_map(|f| match f.item {
            FixtureItem::Functor(p) => Some((f.name, *p)),
            FixtureItem::Multicategory(_) => None,
        })
        .collect()
}

/// Chosen pullbacks against the set-builder pullback, through the generic
/// cone: the legs must commute, be jointly injective (uniqueness) and hit
/// every compatible pair (existence), and `pair_into` must mediate.
fn ac1() -> Verdict {
    let mut squares = 0usize;
    for c in 0..=4 {
        for a in 0..=4 {
            for b in 0..=4 {
                for f in all_maps(&set(a), &set(c)) {
                    for p in all_maps(&set(b), &set(c)) {
                        squares += 1;
                        let sq = chosen_pullback(&f, &p).unwrap();
                        let generic: Vec<(Elem, Elem)> = p
                            .dom()
                            .iter()
                            .flat_map(|x| f.dom().iter().map(move |w| (x.clone(), w.clone())))
                            .filter(|(x, w)| p.eval(x).unwrap() == f.eval(w).unwrap())
                            .collect();
                        let legs: BTreeSet<(Elem, Elem)> = sq
                            .apex
                            .iter()
                            .map(|z| (sq.leg1.eval(z).unwrap().clone(), sq.leg2.eval(z).unwrap().clone()))
                            .collect();
                        if legs.len() != sq.apex.len() || legs != generic.iter().cloned().collect() {
                            return (false, format!("apex differs from the pullback of {f:?} and {p:?}"));
                        }
                        let w: FinSetObj = (0..generic.len()).map(|i| Elem::atom(format!("w{i}"))).collect();
                        let u = FinMap::new(
                            w.clone(),
                            p.dom().clone(),
                            w.iter().cloned().zip(generic.iter().map(|g| g.0.clone())),
                        )
                        .unwrap();
                        let v = FinMap::new(
                            w.clone(),
                            f.dom().clone(),
                            w.iter().cloned().zip(generic.iter().map(|g| g.1.clone())),
                        )
                        .unwrap();
                        let m = pair_into(&sq, &u, &v).unwrap();
                        if compose(&sq.leg1, &m).unwrap() != u || compose(&sq.leg2, &m).unwrap() != v {
                            return (false, format!("pair_into does not mediate for {f:?} and {p:?}"));
                        }
                    }
                }
            }
        }
    }
    (true, format!("{squares} squares on sets of size <= 4"))
}

/// Independent count of `T(n)` within the bound.
fn oracle_t_size(sel: &MonadSelector, n: usize, bound: usize) -> usize {
    match sel {
        MonadSelector::Identity => n,
        MonadSelector::Monoid(m) => m.elements.len() * n,
        MonadSelector::FreeMonoid => (0..=bound).map(|k| n.pow(k as u32)).sum(),
    }
}

fn ac2() -> Verdict {
    for t in registered() {
        for (what, r) in [
            ("laws", check_monad_laws(&t, 3, 3)),
            ("cartesian", check_cartesian(&t, 3, 3)),
            ("kernel pairs", check_kernel_pair_preservation(&t, 3, 3)),
        ] {
            if !r.passed() {
                return (false, format!("{} {what}: {}", t.name(), r.failures().next().unwrap().name));
            }
        }
        for n in 0..=3 {
            if t.elements(&set(n), 3).len() != oracle_t_size(&t.selector(), n, 3) {
                return (false, format!("{} has the wrong number of elements over {n}", t.name()));
            }
        }
    }
    (true, "identity, Z/2 action and free monoid at (3, 3)".into())
}

fn mutants(m: &FinMap) -> Vec<FinMap> {
    let mut out = Vec::new();
    for (i, x) in m.dom().iter().enumerate() {
        for y in m.cod().iter() {
            if y != m.at(i) {
                out.push(
                    FinMap::new(
                        m.dom().clone(),
                        m.cod().clone(),
                        m.graph().map(|(a, b)| (a.clone(), if a == x { y.clone() } else { b.clone() })),
                    )
                    .unwrap(),
                );
            }
        }
    }
    out
}

fn ac3() -> Verdict {
    let (mut total, mut caught, mut survivors) = (0usize, 0usize, Vec::new());
    for (name, mc) in fixture_multicats() {
        if !mc.is_valid() {
            return (false, format!("{name} does not validate"));
        }
        if mc.x2().len() > 20 {
            continue;
        }
        let comp = mutants(mc.comp()).into_iter().map(|c| mc.with_comp(c).unwrap());
        let s0 = mutants(mc.s0()).into_iter().map(|s| mc.with_s0(s).unwrap());
        for m in comp.chain(s0) {
            total += 1;
            if m.is_valid() {
                let diff = m.comp().first_difference(mc.comp()).or_else(|| m.s0().first_difference(mc.s0()));
                survivors.push(format!("{name} at {}", diff.unwrap()));
            } else {
                caught += 1;
            }
        }
    }
    let detail = format!("{caught}/{total} single-entry mutants detected");
    if survivors.is_empty() {
        (true, detail)
    } else {
        (false, format!("{detail}; valid mutants: {}", survivors.join(", ")))
    }
}

/// Whether both sides of a relation agree, evaluated pointwise.
fn relation_holds(model: &multidescent::sketch::SketchModel, src: &str, lhs: &[&str], rhs: &[&str]) -> bool {
    let run = |path: &[&str], x: &Elem| -> Option<Elem> {
        let mut at = x.clone();
        for e in path {
            at = model.maps.get(*e)?.apply(&at)?.clone();
        }
        Some(at)
    };
    model.sets[src].iter().all(|x| run(lhs, x).is_some() && run(lhs, x) == run(rhs, x))
}

fn ac4() -> Verdict {
    let sketch = multicat_sketch();
    let mut families_broken = BTreeSet::new();
    let mut models = 0;
    let mut mutants_checked = 0;
    for (name, mc) in fixture_multicats() {
        if !mc.monad().has_finite_carriers() {
            continue;
        }
        let model = model_from_multicat(&mc).unwrap();
        let r = check_model(&sketch, &model);
        if !r.passed() {
            return (false, format!("{name}: {}", r.failures().next().unwrap().name));
        }
        models += 1;
        if model.sets.values().map(FinSetObj::len).sum::<usize>() > 60 {
            continue;
        }
        for (edge, m) in &model.maps {
            for bad in mutants(m) {
                let mut mutant = model.clone();
                mutant.maps.insert(edge.clone(), bad);
                let report = check_model(&sketch, &mutant);
                mutants_checked += 1;
                for rel in &sketch.relations {
                    let broken = !relation_holds(&mutant, rel.src, &rel.lhs, &rel.rhs);
                    if broken != report.failed(&rel.name()) {
                        return (
                            false,
                            format!(
                                "{name}, {edge} mutated: checker and pointwise evaluation disagree on {}",
                                rel.name()
                            ),
                        );
                    }
                    if broken {
                        families_broken.insert(rel.family);
                    }
                }
            }
        }
    }
    let all: BTreeSet<usize> = sketch.relations.iter().map(|r| r.family).collect();
    let missing: Vec<_> = all.difference(&families_broken).collect();
    if !missing.is_empty() {
        return (false, format!("no mutant breaks families {missing:?}"));
    }
    (
        true,
        format!(
            "{models} fixture models; {mutants_checked} edge mutants break all {} relation families and are named",
            all.len()
        ),
    )
}

fn ac5() -> Verdict {
    let r = coherence_search(&z2(), 2, 2).unwrap();
    let ok = r.counterexamples.is_empty() && r.surjective > 0;
    (
        ok,
        format!(
            "{} sources, {} pointwise surjective morphisms, {} counterexamples",
            r.sources,
            r.surjective,
            r.counterexamples.len()
        ),
    )
}

fn shift(s: &FinSetObj) -> FinMap {
    let n = s.len();
    FinMap::from_indices(s.clone(), s.clone(), (0..n).map(|i| (i + 1) % n).collect()).unwrap()
}

fn ac6() -> Verdict {
    let vertices = multicat_sketch().vertices;
    let mut n = 0;
    for (name, mc) in fixture_multicats() {
        if !mc.monad().has_finite_carriers() {
            continue;
        }
        let strict = strict_object(&mc).unwrap();
        if strict.hat().unwrap() != mc {
            return (false, format!("{name}: hat of the strict object differs"));
        }
        let along: BTreeMap<String, FinMap> =
            vertices.iter().map(|v| (v.to_string(), shift(strict.model.set(v).unwrap()))).collect();
        let moved = strict.transport(&along).unwrap();
        let hat = match moved.hat() {
            Ok(h) => h,
            Err(e) => return (false, format!("{name}: relabelled object: {e}")),
        };
        let cmp = moved.hat_comparison().unwrap();
        if !hat.is_valid() || find_isomorphism(&hat, &mc).is_none() || !cmp.check().passed() || !cmp.is_iso() {
            return (false, format!("{name}: relabelled object does not rebuild an isomorphic multicategory"));
        }
        n += 1;
    }
    (true, format!("{n} finite-carrier fixtures, strict and relabelled"))
}

fn fiber_sizes(f: &FinMap) -> Vec<usize> {
    f.cod().iter().map(|y| f.fiber(y).len()).collect()
}

/// The unit, slice and associativity laws, element by element.
fn oracle_laws(p: &FinMap, a: &FinMap, gamma: &BTreeMap<(Elem, Elem), Elem>) -> bool {
    let g = |x: &Elem, w: &Elem| gamma[&(x.clone(), w.clone())].clone();
    a.dom().iter().all(|w| {
        let base = p.eval(a.eval(w).unwrap()).unwrap();
        let over: Vec<&Elem> = p.fiber(base);
        g(a.eval(w).unwrap(), w) == *w
            && over.iter().all(|x| a.eval(&g(x, w)).unwrap() == *x)
            && over.iter().all(|x1| over.iter().all(|x2| g(x2, &g(x1, w)) == g(x2, w)))
    })
}

fn ac7() -> Verdict {
    let (mut slices, mut data) = (0usize, 0usize);
    for nx in 0..=3 {
        for ny in 0..=nx {
            for p in all_maps(&set(nx), &FinSetObj::numbered("y", ny)).into_iter().filter(FinMap::is_surjective) {
                let y = p.cod().clone();
                for fibers in (0..ny).map(|_| 0..=2usize).fold(vec![vec![]], |acc, r| {
                    acc.into_iter()
                        .flat_map(|v: Vec<usize>| r.clone().map(move |k| [v.clone(), vec![k]].concat()))
                        .collect()
                }) {
                    let w: Vec<(Elem, Elem)> = y
                        .iter()
                        .zip(&fibers)
                        .flat_map(|(b, &k)| {
                            (0..k).map(move |i| (Elem::pair(b.clone(), Elem::atom(format!("{i}"))), b.clone()))
                        })
                        .collect();
                    let f = FinMap::new(w.iter().map(|x| x.0.clone()).collect(), y.clone(), w).unwrap();
                    let rec = set_descent_inverse(&p, &comparison_functor(&p, &f).unwrap()).unwrap();
                    if fiber_sizes(&rec.f) != fiber_sizes(&f) {
                        return (false, format!("K^p of {f:?} along {p:?} rebuilds a different slice"));
                    }
                    slices += 1;
                }
                // Every datum with fibers of size <= 2 over the domain.
                let x = p.dom().clone();
                for sizes in (0..nx).map(|_| 0..=2usize).fold(vec![vec![]], |acc, r| {
                    acc.into_iter()
                        .flat_map(|v: Vec<usize>| r.clone().map(move |k| [v.clone(), vec![k]].concat()))
                        .collect()
                }) {
                    let graph: Vec<(Elem, Elem)> = x
                        .iter()
                        .zip(&sizes)
                        .flat_map(|(b, &k)| {
                            (0..k).map(move |i| (Elem::pair(b.clone(), Elem::atom(format!("{i}"))), b.clone()))
                        })
                        .collect();
                    let a = FinMap::new(graph.iter().map(|g| g.0.clone()).collect(), x.clone(), graph).unwrap();
                    let u = datum_domain(&p, &a).unwrap().apex;
                    let keys: Vec<(Elem, Elem)> =
                        u.iter().map(|z| z.as_pair().map(|(l, r)| (l.clone(), r.clone())).unwrap()).collect();
                    let options: Vec<Vec<Elem>> = keys
                        .iter()
                        .map(|(x1, w)| {
                            if a.eval(w).unwrap() == x1 {
                                vec![w.clone()]
                            } else {
                                a.fiber(x1).into_iter().cloned().collect()
                            }
                        })
                        .collect();
                    let mut failure = None;
                    for_each_choice(&options, |choice| {
                        if failure.is_some() {
                            return;
                        }
                        let table: BTreeMap<(Elem, Elem), Elem> =
                            keys.iter().cloned().zip(choice.iter().cloned()).collect();
                        let gamma =
                            FinMap::new(u.clone(), a.dom().clone(), u.iter().cloned().zip(choice.iter().cloned()))
                                .unwrap();
                        let d = DescentDatum { a: a.clone(), gamma };
                        let lawful = oracle_laws(&p, &a, &table);
                        if lawful != check_algebra_laws(&p, &d).passed() {
                            failure = Some(format!("law checker disagrees on a datum over {a:?}"));
                            return;
                        }
                        if !lawful {
                            return;
                        }
                        data += 1;
                        let Ok(rec) = set_descent_inverse(&p, &d) else {
                            failure = Some(format!("lawful datum over {a:?} not reconstructed"));
                            return;
                        };
                        let k = comparison_functor(&p, &rec.f).unwrap();
                        let sizes_agree = x.iter().all(|b| a.fiber(b).len() == rec.f.fiber(p.eval(b).unwrap()).len());
                        if !sizes_agree || datum_iso(&p, &k, &d).is_none() {
                            failure = Some(format!("datum over {a:?} reconstructs to a non-isomorphic datum"));
                        }
                    });
                    if let Some(msg) = failure {
                        return (false, msg);
                    }
                }
            }
        }
    }
    (true, format!("{slices} slices round-trip; {data} lawful data reconstructed"))
}

fn ac8() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, p) in fixture_functors() {
        let profile = p.profile().unwrap();
        let c = classify(&p, 3).unwrap();
        if profile.p1 && profile.p2 && profile.p3 {
            let o = brute_force_oracle(&p, 2, 0).unwrap();
            let good = o.status == OracleStatus::Clean && c.levelwise_criterion && c.t_criterion;
            ok &= good;
            lines.push(format!("{name}: {:?}", o.status));
        } else {
            let good = !c.levelwise_criterion && !c.t_criterion;
            ok &= good;
            lines.push(format!("{name}: criteria {}", if good { "false" } else { "TRUE" }));
        }
    }
    (ok, lines.join("; "))
}

/// `T(f)` surjective, deciding membership in `T(cod)` by construction.
fn oracle_t_surjective(t: &MonadSpec, f: &FinMap, bound: usize) -> bool {
    let image: BTreeSet<Elem> = t.elements(f.dom(), bound).iter().map(|u| t.apply_map(f, u).unwrap()).collect();
    let cod = f.cod().elements().to_vec();
    let targets: Vec<Elem> = match t.selector() {
        MonadSelector::Identity => cod,
        MonadSelector::Monoid(m) => {
            m.elements.iter().flat_map(|g| cod.iter().map(move |y| Elem::pair(g.clone(), y.clone()))).collect()
        }
        MonadSelector::FreeMonoid => {
            let mut lists: Vec<Vec<Elem>> = vec![vec![]];
            let mut frontier = lists.clone();
            for _ in 0..bound {
                frontier = frontier
                    .iter()
                    .flat_map(|l| cod.iter().map(move |y| [l.clone(), vec![y.clone()]].concat()))
                    .collect();
                lists.extend(frontier.iter().cloned());
            }
            lists.into_iter().map(Elem::List).collect()
        }
    };
    targets.iter().all(|y| image.contains(y))
}

fn ac9() -> Verdict {
    let mut maps = 0;
    for t in registered() {
        if !check_surjectivity_creation(&t, 3, 3).passed() {
            return (false, format!("{}: surjectivity creation check fails", t.name()));
        }
        for a in 0..=3 {
            for b in 0..=3 {
                for f in all_maps(&set(a), &FinSetObj::numbered("y", b)) {
                    maps += 1;
                    let oracle = oracle_t_surjective(&t, &f, 3);
                    if oracle != f.is_surjective() || oracle != t_surjective_bounded(&t, &f, 1, 3) {
                        return (false, format!("{}: T({f:?}) surjectivity", t.name()));
                    }
                }
            }
        }
    }
    let mut functors: Vec<TFunctor> = fixture_functors().into_iter().map(|(_, p)| p).collect();
    let small: Vec<TMulticategory> =
        fixture_multicats().into_iter().map(|(_, m)| m).filter(|m| m.x1().len() <= 6).collect();
    for s in &small {
        for t in &small {
            if s.monad() == t.monad() {
                functors.extend(enumerate_functors(s, t));
            }
        }
    }
    for f in &functors {
        let implication = !f.p1.is_surjective() || f.p0.is_surjective();
        if !implication || f.graph_morphism_cancellation() != implication {
            return (
                false,
                format!("surjectivity on morphisms without surjectivity on objects: {:?} -> {:?}", f.p0, f.p1),
            );
        }
    }
    (true, format!("{maps} maps under 3 monads; {} functors", functors.len()))
}

/// Composable pairs and triples of the target hit by the source, by hand.
fn oracle_category_profile(
    p: &TFunctor,
    src: &multidescent::gallery::SmallCategory,
    tgt: &multidescent::gallery::SmallCategory,
) -> [bool; 3] {
    let m = |x: &Elem| p.p1.eval(x).unwrap().clone();
    let pairs: BTreeSet<Elem> = src
        .pairs()
        .iter()
        .map(|e| {
            let (g, f) = e.as_pair().unwrap();
            Elem::pair(m(g), m(f))
        })
        .collect();
    let triples: BTreeSet<Elem> = src
        .triples()
        .iter()
        .map(|e| {
            let (hg, f) = e.as_pair().unwrap();
            let (h, g) = hg.as_pair().unwrap();
            Elem::pair(Elem::pair(m(h), m(g)), m(f))
        })
        .collect();
    [
        p.p1.is_surjective(),
        tgt.pairs().iter().all(|e| pairs.contains(e)),
        tgt.triples().iter().all(|e| triples.contains(e)),
    ]
}

fn ac10() -> Verdict {
    let weighted: Vec<(String, TMulticategory)> = fixture_multicats()
        .into_iter()
        .filter(|(_, m)| matches!(m.monad().selector(), MonadSelector::Monoid(_)))
        .collect();
    let mut weights = 0;
    for (name, mc) in &weighted {
        let MonadSelector::Monoid(monoid) = mc.monad().selector() else { unreachable!() };
        let (c, w) = weighted_to_slice(mc).unwrap();
        if slice_to_weighted(&c, &monoid, &w).unwrap() != *mc {
            return (false, format!("{name}: weighted -> slice -> weighted changes the structure"));
        }
        for w2 in all_maps(&c.morphisms, w.cod()) {
            if !check_weight(&c, &monoid, &w2).passed() {
                continue;
            }
            weights += 1;
            let back = weighted_to_slice(&slice_to_weighted(&c, &monoid, &w2).unwrap()).unwrap();
            if back != (c.clone(), w2.clone()) {
                return (false, format!("{name}: slice -> weighted -> slice changes the weight {w2:?}"));
            }
        }
    }
    let small: Vec<&TMulticategory> = weighted.iter().map(|(_, m)| m).filter(|m| m.x0().len() <= 2).collect();
    let mut checked = 0;
    for s in &small {
        for t in &small {
            if s.monad() != t.monad() {
                continue;
            }
            for f in enumerate_functors(s, t) {
                checked += 1;
                let r = descent_transport(&f).unwrap();
                let (cs, _) = weighted_to_slice(s).unwrap();
                let (ct, _) = weighted_to_slice(t).unwrap();
                let profile = f.profile().unwrap();
                let oracle = oracle_category_profile(&f, &cs, &ct);
                if !r.passed()
                    || category_profile(&cs, &ct, &f.p1).unwrap() != oracle
                    || oracle != [profile.p1, profile.p2, profile.p3]
                {
                    return (false, format!("verdicts differ for {:?} -> {:?}", f.p0, f.p1));
                }
            }
        }
    }
    (
        true,
        format!(
            "{} weighted fixtures and {weights} functorial weights round-trip; {checked} functors transport",
            weighted.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 pullback kernel", ac1),
        ("AC2 monad laws", ac2),
        ("AC3 multicategory laws and mutation coverage", ac3),
        ("AC4 sketch fidelity", ac4),
        ("AC5 coherence of surjective images", ac5),
        ("AC6 hat round-trip", ac6),
        ("AC7 set descent equivalence", ac7),
        ("AC8 effective descent criteria against the oracle", ac8),
        ("AC9 surjectivity lemmas", ac9),
        ("AC10 weighted categories and slices", ac10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let (ok, detail) = run();
        println!("{} {name}: {detail} ({:.1}s)", if ok { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
        failed += usize::from(!ok);
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
