//! Ampleness and Seshadri constants.
//!
//! On a bare Hirzebruch surface the Mori cone is spanned by `Z` and `F`, so
//! positivity against those two curves plus `L² > 0` is exact. After blow-ups
//! only the tracked curves are checked; untracked negative curves may exist,
//! which certificates record as an explicit assumption.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BaseKind, CurveTag, DivisorClass};
use crate::rational::{qi, serde_q, Frac, Q};
use crate::surface::SurfacePresentation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositivityVerdict {
    ExactAmple,
    TrackedPositive,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackedCheck {
    pub curve: CurveTag,
    #[serde(with = "serde_q")]
    pub degree: Q,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityReport {
    #[serde(with = "serde_q")]
    pub self_intersection: Q,
    pub self_positive: bool,
    pub tracked_checks: Vec<TrackedCheck>,
    pub verdict: PositivityVerdict,
}

impl PositivityReport {
    pub fn passes(&self) -> bool {
        self.verdict != PositivityVerdict::Fail
    }

    /// First failing check, for diagnostics.
    pub fn first_failure(&self) -> Option<String> {
        if !self.self_positive {
            return Some(format!(
                "L^2 = {} is not positive",
                Frac(&self.self_intersection)
            ));
        }
        self.tracked_checks
            .iter()
            .find(|c| !c.pass)
            .map(|c| format!("L.{} = {} is not positive", c.curve, Frac(&c.degree)))
    }
}

/// `aZ + bF` is ample on `F(n)` iff `a > 0` and `b > n·a`.
pub fn is_ample_hirzebruch(n: u32, a: &Q, b: &Q) -> bool {
    a.is_positive() && *b > qi(n as i64) * a
}

/// Seshadri constant of an ample `aZ + bF` along `Z`: `L - λZ` stays ample
/// exactly for `λ < a`.
pub fn seshadri_at_z(n: u32, a: &Q, b: &Q) -> Result<Q> {
    if !is_ample_hirzebruch(n, a, b) {
        return Err(Error::Domain(format!(
            "{}Z + {}F is not ample on F({n})",
            Frac(a),
            Frac(b)
        )));
    }
    Ok(a.clone())
}

/// `L² > 0` and `L·C > 0` for every tracked curve `C` of `p`.
pub fn tracked_positivity(p: &SurfacePresentation, l: &DivisorClass) -> Result<PositivityReport> {
    let self_intersection = l.intersect(l)?;
    let self_positive = self_intersection.is_positive();
    let tracked_checks = p
        .tracked()
        .iter()
        .map(|c| {
            let degree = l.intersect(c.class())?;
            Ok(TrackedCheck {
                curve: c.tag(),
                pass: degree.is_positive(),
                degree,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all = self_positive && tracked_checks.iter().all(|c| c.pass);
    let exact = p.steps().is_empty() && matches!(p.base(), BaseKind::Hirzebruch(_));
    let verdict = match (all, exact) {
        (false, _) => PositivityVerdict::Fail,
        (true, true) => PositivityVerdict::ExactAmple,
        (true, false) => PositivityVerdict::TrackedPositive,
    };
    Ok(PositivityReport {
        self_intersection,
        self_positive,
        tracked_checks,
        verdict,
    })
}

/// Strict `0 < λ < σ`: the base hypothesis under which a small enough
/// blow-up perturbation keeps `λ` below the perturbed Seshadri constant.
pub fn seshadri_interval_after_blowup(lambda: &Q, sigma: &Q) -> bool {
    lambda.is_positive() && lambda < sigma
}

/// `L - λZ` against the tracked curves: a necessary condition for
/// `λ < Sesh(S, L, Z)` that can be checked on any presentation.
pub fn tracked_seshadri_check(
    p: &SurfacePresentation,
    l: &DivisorClass,
    lambda: &Q,
) -> Result<PositivityReport> {
    let z = p
        .z_section()
        .ok_or_else(|| Error::Domain("presentation has no section Z".into()))?;
    let shifted = l.try_sub(&z.class().scale(lambda))?;
    tracked_positivity(p, &shifted)
}

/// Coordinates `(a, b)` of a class on a bare Hirzebruch presentation.
pub fn hirzebruch_coords(p: &SurfacePresentation, l: &DivisorClass) -> Result<(u32, Q, Q)> {
    match (p.base(), p.steps().len()) {
        (BaseKind::Hirzebruch(n), 0) if l.lattice().as_ref() == p.lattice().as_ref() => {
            Ok((n, l.coeffs()[0].clone(), l.coeffs()[1].clone()))
        }
        _ => Err(Error::Usage(
            "expected a class on a bare Hirzebruch surface".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn tag_degree(report: &PositivityReport, tag: CurveTag) -> Option<&Q> {
        report
            .tracked_checks
            .iter()
            .find(|c| c.curve == tag)
            .map(|c| &c.degree)
    }

    #[test]
    fn ample_cone_of_hirzebruch() {
        assert!(is_ample_hirzebruch(2, &qi(1), &qi(3)));
        assert!(!is_ample_hirzebruch(2, &qi(1), &qi(2)));
        assert!(is_ample_hirzebruch(0, &qi(1), &qi(1)));
        assert!(!is_ample_hirzebruch(0, &qi(0), &qi(1)));
        assert!(!is_ample_hirzebruch(1, &qi(-1), &qi(-5)));
    }

    #[test]
    fn seshadri_along_z() {
        assert_eq!(seshadri_at_z(1, &qi(1), &qi(2)).unwrap(), qi(1));
        assert_eq!(seshadri_at_z(3, &qi(2), &qi(7)).unwrap(), qi(2));
        assert!(matches!(
            seshadri_at_z(1, &qi(1), &qi(1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn exact_on_bare_hirzebruch() {
        let p = SurfacePresentation::hirzebruch(1);
        let l = DivisorClass::from_ints(p.lattice(), &[1, 2]).unwrap();
        let r = tracked_positivity(&p, &l).unwrap();
        assert_eq!(r.verdict, PositivityVerdict::ExactAmple);
        let nef = DivisorClass::from_ints(p.lattice(), &[1, 1]).unwrap();
        assert_eq!(
            tracked_positivity(&p, &nef).unwrap().verdict,
            PositivityVerdict::Fail
        );
    }

    #[test]
    fn perturbed_class_after_one_blowup() {
        let p: SurfacePresentation = "F(1); blowup generic".parse().unwrap();
        let l = DivisorClass::new(p.lattice(), vec![qi(1), qi(2), q(-1, 4)]).unwrap();
        let r = tracked_positivity(&p, &l).unwrap();
        assert_eq!(r.verdict, PositivityVerdict::TrackedPositive);
        assert_eq!(r.self_intersection, qi(3) - q(1, 16));
        assert_eq!(tag_degree(&r, CurveTag::Exceptional(0)), Some(&q(1, 4)));

        let big = DivisorClass::new(p.lattice(), vec![qi(1), qi(2), qi(-2)]).unwrap();
        let r = tracked_positivity(&p, &big).unwrap();
        assert_eq!(r.verdict, PositivityVerdict::Fail);
        assert_eq!(r.self_intersection, qi(-1));
        assert!(r.first_failure().unwrap().contains("L^2"));
    }

    #[test]
    fn strict_interval() {
        assert!(seshadri_interval_after_blowup(&q(9, 10), &qi(1)));
        assert!(!seshadri_interval_after_blowup(&qi(1), &qi(1)));
        assert!(!seshadri_interval_after_blowup(&q(1, 2), &q(1, 2)));
        assert!(!seshadri_interval_after_blowup(&qi(0), &qi(1)));
    }

    #[test]
    fn seshadri_check_matches_exact_constant() {
        let p = SurfacePresentation::hirzebruch(2);
        let l = DivisorClass::from_ints(p.lattice(), &[3, 7]).unwrap();
        for (lambda, ok) in [
            (q(1, 2), true),
            (q(29, 10), true),
            (qi(3), false),
            (qi(4), false),
        ] {
            let r = tracked_seshadri_check(&p, &l, &lambda).unwrap();
            assert_eq!(r.passes(), ok, "lambda = {lambda}");
        }
    }
}
