use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::multi::{comparison_functor_multi, enumerate_over, multi_datum_domain, multi_datum_iso};
use super::{check_algebra_laws, multicat_descent_quotient, split, transport_map, DescentDatum, MultiDatum};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::finset::{for_each_choice, FinMap};
use crate::multicat::{enumerate_functors, TFunctor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleStatus {
    Clean,
    Inconclusive,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleFailure {
    /// `reconstruction`, `faithfulness` or `fullness`.
    pub kind: String,
    pub detail: String,
    pub datum: Option<MultiDatum>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub bound: usize,
    pub status: OracleStatus,
    pub failures: Vec<OracleFailure>,
    pub data_checked: usize,
    pub slices_checked: usize,
    /// Whether the levelwise criterion held, which is what licenses `Clean`.
    pub criterion: bool,
}

/// Enumerates descent data along `p` with `|V0|, |V1| <= bound` and tries
/// to rebuild each, then spot-checks `K^p` on slice objects over the target
/// of the same size.
///
/// `jobs = 0` uses rayon's default pool. Results come back in enumeration
/// order whatever the pool size.
pub fn brute_force_oracle(p: &TFunctor, bound: usize, jobs: usize) -> Result<OracleReport> {
    let criterion = super::classify(p, bound.max(2))?.levelwise_criterion;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if jobs > 0 {
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build().map_err(|e| Error::Invalid(e.to_string()))?;
    let (data, slices) = pool.install(|| -> Result<_> {
        let over_src = enumerate_over(&p.src, bound)?;
        let data: Vec<Result<(usize, Vec<OracleFailure>)>> =
            over_src.par_iter().map(|a| check_data_over(p, a)).collect();
        let over_tgt = enumerate_over(&p.tgt, bound)?;
        let slices: Vec<Result<Vec<OracleFailure>>> = over_tgt.par_iter().map(|g| check_slice(p, g)).collect();
        Ok((data, slices))
    })?;
    let mut failures = Vec::new();
    let mut data_checked = 0;
    for r in data {
        let (n, f) = r?;
        data_checked += n;
        failures.extend(f);
    }
    let slices_checked = slices.len();
    for r in slices {
        failures.extend(r?);
    }
    let status = if !failures.is_empty() {
        OracleStatus::Counterexample
    } else if criterion && bound > 0 {
        OracleStatus::Clean
    } else {
        OracleStatus::Inconclusive
    };
    Ok(OracleReport { bound, status, failures, data_checked, slices_checked, criterion })
}

/// Set-level `γ` for one level, unit entries fixed, laws enforced.
fn level_gammas(p: &FinMap, a: &FinMap, pulled: &FinMap) -> Result<Vec<FinMap>> {
    let u = pulled.dom();
    let options: Vec<Vec<Elem>> = u
        .iter()
        .map(|z| {
            let (x2, w) = split(z)?;
            if a.eval(w)? == x2 {
                Ok(vec![w.clone()])
            } else {
                Ok(a.fiber(x2).into_iter().cloned().collect())
            }
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for_each_choice(&options, |c| {
        if let Ok(g) = FinMap::new(u.clone(), a.dom().clone(), u.iter().cloned().zip(c.iter().cloned())) {
            let d = DescentDatum { a: a.clone(), gamma: g };
            if check_algebra_laws(p, &d).passed() {
                out.push(d.gamma);
            }
        }
    });
    Ok(out)
}

fn check_data_over(p: &TFunctor, a: &TFunctor) -> Result<(usize, Vec<OracleFailure>)> {
    let (u, pulled, _) = multi_datum_domain(p, a)?;
    let g0s = level_gammas(&p.p0, &a.p0, &pulled.p0)?;
    let g1s = level_gammas(&p.p1, &a.p1, &pulled.p1)?;
    let mut checked = 0;
    let mut failures = Vec::new();
    for g0 in &g0s {
        for g1 in &g1s {
            let gamma = TFunctor::new(u.clone(), a.src.clone(), g0.clone(), g1.clone())?;
            if !gamma.is_valid() {
                continue;
            }
            checked += 1;
            let d = MultiDatum { a: a.clone(), gamma };
            let outcome = match multicat_descent_quotient(p, &d) {
                Ok(rec) if rec.checks.passed() => match comparison_functor_multi(p, &rec.f) {
                    Ok(k) if multi_datum_iso(p, &d, &k).is_some() => None,
                    Ok(_) => Some("rebuilt functor pulls back to a different datum".to_string()),
                    Err(e) => Some(e.to_string()),
                },
                Ok(rec) => Some(rec.checks.failures().map(|c| c.name.clone()).collect::<Vec<_>>().join("; ")),
                Err(e) => Some(e.to_string()),
            };
            if let Some(detail) = outcome {
                failures.push(OracleFailure { kind: "reconstruction".into(), detail, datum: Some(d) });
            }
        }
    }
    Ok((checked, failures))
}

/// `p*_h` at levels 0 and 1 for an endomorphism `h` of `g` over the target.
fn pulled_back_pair(p: &TFunctor, g: &TFunctor, h: &TFunctor) -> Result<(FinMap, FinMap)> {
    Ok((transport_map(&p.p0, &h.p0, &g.p0, &g.p0)?, transport_map(&p.p1, &h.p1, &g.p1, &g.p1)?))
}

/// Faithfulness and fullness of `K^p` on the endomorphisms of `g`.
fn check_slice(p: &TFunctor, g: &TFunctor) -> Result<Vec<OracleFailure>> {
    let mut failures = Vec::new();
    let endos: Vec<TFunctor> = enumerate_functors(&g.src, &g.src)
        .into_iter()
        .filter(|h| h.then(g).is_ok_and(|hg| hg.p0 == g.p0 && hg.p1 == g.p1))
        .collect();
    let images: Vec<(FinMap, FinMap)> = endos.iter().map(|h| pulled_back_pair(p, g, h)).collect::<Result<_>>()?;
    let k = comparison_functor_multi(p, g)?;
    let collision = (0..endos.len()).find(|&i| images[i + 1..].contains(&images[i]));
    if collision.is_some() {
        failures.push(OracleFailure {
            kind: "faithfulness".into(),
            detail: format!(
                "two endomorphisms of a slice object with {} objects and {} morphisms pull back to the same map",
                g.src.x0().len(),
                g.src.x1().len()
            ),
            datum: Some(k.clone()),
        });
    }
    let v = &k.a.src;
    let missed = enumerate_functors(v, v).into_iter().any(|m| {
        let over = m.then(&k.a).is_ok_and(|ma| ma.p0 == k.a.p0 && ma.p1 == k.a.p1);
        let is_morphism = over
            && (0..2).all(|i| {
                let (pi, mi) = if i == 0 { (&p.p0, &m.p0) } else { (&p.p1, &m.p1) };
                super::is_datum_morphism(pi, &k.level(i), &k.level(i), mi)
            });
        is_morphism && !images.iter().any(|(a, b)| *a == m.p0 && *b == m.p1)
    });
    if missed {
        failures.push(OracleFailure {
            kind: "fullness".into(),
            detail: "a morphism of descent data is not the pullback of a slice morphism".into(),
            datum: Some(k),
        });
    }
    Ok(failures)
}
