use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::finset::{coequalizer_of_kernel_pair, induced_injection};
use crate::monad::{check_kernel_pair_preservation, t_surjective_bounded};
use crate::multicat::{enumerate_functors, induce_quotient, SurjectivityProfile, TFunctor, TMulticategory};
use crate::report::Report;

/// Surjectivity data of a functor and the two sufficient criteria for
/// effective descent.
///
/// `t_criterion`: `T(p1)` effective, `T(p2)` descent, `p3` almost descent.
/// `levelwise_criterion`: `p1` effective, `p2` descent, `p3` almost descent,
/// with `T` preserving kernel pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub profile: SurjectivityProfile,
    pub t_p1: bool,
    pub t_p2: bool,
    pub kernel_pairs: bool,
    /// `p1` surjective, so `p` is an epimorphism of multicategories.
    pub epi: bool,
    /// `p1` and `p2` surjective, so `p` is a pullback-stable regular epimorphism.
    pub regular_epi: bool,
    pub t_criterion: bool,
    pub levelwise_criterion: bool,
    pub report: Report,
}

/// `bound` limits the elements of `T(-)` inspected for non-finite monads.
pub fn classify(f: &TFunctor, bound: usize) -> Result<ClassificationReport> {
    let t = f.src.monad();
    let profile = f.profile()?;
    let levels = f.levels()?;
    let t_p1 = t_surjective_bounded(t, &f.p1, 1, bound);
    let t_p2 = t_surjective_bounded(t, &levels.p2, 1, bound);
    let kernel_pairs = check_kernel_pair_preservation(t, 2, bound.min(2)).passed();
    let mut report = Report::new(format!("classification over {}", t.name()));
    let flag = |r: &mut Report, name: &str, ok: bool| {
        if ok {
            r.pass(name)
        } else {
            r.fail(name, None, "")
        }
    };
    flag(&mut report, "p0 surjective", profile.p0);
    flag(&mut report, "p1 surjective (effective descent)", profile.p1);
    flag(&mut report, "p2 surjective (descent)", profile.p2);
    flag(&mut report, "p3 surjective (almost descent)", profile.p3);
    flag(&mut report, "T(p1) surjective (effective descent)", t_p1);
    flag(&mut report, "T(p2) surjective (descent)", t_p2);
    flag(&mut report, "T(p1) surjective iff p1 surjective", t_p1 == profile.p1);
    flag(&mut report, "T(p2) surjective iff p2 surjective", t_p2 == profile.p2);
    flag(&mut report, "p1 surjective implies p0 surjective", f.graph_morphism_cancellation());
    flag(&mut report, "T preserves kernel pairs", kernel_pairs);
    let epi = profile.p1;
    let regular_epi = profile.p1 && profile.p2;
    Ok(ClassificationReport {
        profile,
        t_p1,
        t_p2,
        kernel_pairs,
        epi,
        regular_epi,
        t_criterion: t_p1 && t_p2 && profile.p3,
        levelwise_criterion: profile.p1 && profile.p2 && profile.p3 && kernel_pairs,
        report,
    })
}

pub fn t_criterion(f: &TFunctor, bound: usize) -> Result<bool> {
    Ok(classify(f, bound)?.t_criterion)
}

pub fn levelwise_criterion(f: &TFunctor, bound: usize) -> Result<bool> {
    Ok(classify(f, bound)?.levelwise_criterion)
}

/// Two distinct functors out of the target that agree after `f`, if any
/// of the given multicategories admits them.
pub fn is_epi_among(f: &TFunctor, targets: &[TMulticategory]) -> Option<(TFunctor, TFunctor)> {
    for c in targets {
        let fs = enumerate_functors(&f.tgt, c);
        for (i, q) in fs.iter().enumerate() {
            for r in &fs[i + 1..] {
                let (Ok(qp), Ok(rp)) = (f.then(q), f.then(r)) else { continue };
                if qp.p0 == rp.p0 && qp.p1 == rp.p1 {
                    return Some((q.clone(), r.clone()));
                }
            }
        }
    }
    None
}

/// The comparison from the levelwise coequalizer of the kernel pair of `f`
/// to its target.
pub fn kernel_pair_comparison(f: &TFunctor) -> Result<Report> {
    let mut r = Report::new("coequalizer of the kernel pair");
    let (w0, q0) = coequalizer_of_kernel_pair(&f.p0);
    let (w1, q1) = coequalizer_of_kernel_pair(&f.p1);
    let w = match induce_quotient(&f.src, &q0, &q1) {
        Ok(w) => w,
        Err(e) => {
            r.fail("structure descends to the quotient", None, e.to_string());
            return Ok(r);
        }
    };
    r.pass("structure descends to the quotient");
    let mut wr = w.validate();
    wr.subject = "quotient".into();
    r.extend(wr);
    let c = TFunctor::new(w, f.tgt.clone(), induced_injection(&f.p0, &w0)?, induced_injection(&f.p1, &w1)?)?;
    let mut cr = c.validate();
    cr.subject = "comparison".into();
    r.extend(cr);
    for (i, m) in [&c.p0, &c.p1].into_iter().enumerate() {
        if m.is_bijective() {
            r.pass(format!("comparison bijective at level {i}"));
        } else {
            let w = m.cod().iter().find(|y| m.fiber(y).is_empty()).cloned();
            r.fail(format!("comparison bijective at level {i}"), w, "");
        }
    }
    Ok(r)
}
