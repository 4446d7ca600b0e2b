//! Donaldson–Futaki invariants of slope test configurations.
//!
//! For a curve `Z` on a polarised surface `(S, L)` the deformation to the
//! normal cone of `Z` with parameter `λ` has invariant
//!
//! ```text
//! DF(λ) = (2/3)·ν(L)·(λ³Z² − 3λ²L·Z) + λ²(2 − 2g(Z)) + 2λ L·Z
//! ```
//!
//! [`df_slope`] evaluates this cubic; [`TestConfigModel`] recomputes it from
//! threefold intersection numbers on the total space so the two routes can
//! be checked against each other.

mod oracle;
pub mod poly;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::DivisorClass;
use crate::rational::{q, qi, two_pow_neg, Frac, Q};
use crate::surface::SurfacePresentation;

pub use oracle::{df_total_space_oracle, TestConfigModel, ThreefoldClass};
use poly::{component_samples, isolate_roots, Poly};

/// Default number of dyadic samples `λ_j = σ(1 − 2^{-j})`.
pub const DEFAULT_LAMBDA_DEPTH: u32 = 32;

/// Slope `ν(L) = (−K·L)/L²`.
pub fn slope(p: &SurfacePresentation, l: &DivisorClass) -> Result<Q> {
    let l_sq = l.intersect(l)?;
    if l_sq.is_zero() {
        return Err(Error::Domain("slope is undefined when L^2 = 0".into()));
    }
    Ok(-p.canonical().intersect(l)? / l_sq)
}

/// The data that determines the cubic of a slope test configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeInput {
    pub l_dot_z: Q,
    pub z_sq: Q,
    pub genus: u32,
    pub nu: Q,
    /// Upper end of the admissible `λ` range.
    pub sesh: Q,
}

impl SlopeInput {
    pub fn new(l_dot_z: Q, z_sq: Q, genus: u32, nu: Q, sesh: Q) -> Result<Self> {
        if !sesh.is_positive() {
            return Err(Error::Domain(format!(
                "Seshadri bound {} must be positive",
                Frac(&sesh)
            )));
        }
        Ok(SlopeInput {
            l_dot_z,
            z_sq,
            genus,
            nu,
            sesh,
        })
    }

    /// Slope data for the tracked section `Z` of `p`, with `sesh` supplied by
    /// the caller (it is only exactly known on bare Hirzebruch surfaces).
    pub fn from_presentation(p: &SurfacePresentation, l: &DivisorClass, sesh: Q) -> Result<Self> {
        let z = p
            .z_section()
            .ok_or_else(|| Error::Domain("presentation has no section Z".into()))?;
        Self::new(
            l.intersect(z.class())?,
            z.class().square(),
            z.genus(),
            slope(p, l)?,
            sesh,
        )
    }

    /// `L = aZ + bF` on `F(n)` centred at `Z`, with `Sesh = a`.
    pub fn hirzebruch(n: u32, a: &Q, b: &Q) -> Result<Self> {
        let sesh = crate::positivity::seshadri_at_z(n, a, b)?;
        let p = SurfacePresentation::hirzebruch(n);
        let l = DivisorClass::new(p.lattice(), vec![a.clone(), b.clone()])?;
        Self::from_presentation(&p, &l, sesh)
    }

    /// `DF(λ)` as a polynomial in `λ`.
    pub fn cubic(&self) -> Poly {
        let two_thirds = q(2, 3);
        Poly::new(vec![
            Q::zero(),
            qi(2) * &self.l_dot_z,
            qi(-2) * &self.nu * &self.l_dot_z + qi(2 - 2 * self.genus as i64),
            two_thirds * &self.nu * &self.z_sq,
        ])
    }

    fn check_lambda(&self, lambda: &Q) -> Result<()> {
        if !lambda.is_positive() || *lambda > self.sesh {
            return Err(Error::Domain(format!(
                "lambda = {} lies outside (0, {}]",
                Frac(lambda),
                Frac(&self.sesh)
            )));
        }
        Ok(())
    }
}

/// The closed-form cubic, without the domain check.
pub fn df_formula(input: &SlopeInput, lambda: &Q) -> Q {
    let l2 = lambda * lambda;
    let l3 = &l2 * lambda;
    q(2, 3) * &input.nu * (&l3 * &input.z_sq - qi(3) * &l2 * &input.l_dot_z)
        + &l2 * qi(2 - 2 * input.genus as i64)
        + qi(2) * lambda * &input.l_dot_z
}

/// `DF` of the slope test configuration at `λ ∈ (0, sesh]`. The endpoint is
/// accepted as a formal value.
pub fn df_slope(input: &SlopeInput, lambda: &Q) -> Result<Q> {
    input.check_lambda(lambda)?;
    Ok(df_formula(input, lambda))
}

/// Closed form of `DF` on `F(n)` for `L = aZ + bF` at `λ = Sesh = a`:
/// `(2a²n/3)·(a + na − 2b)/(2b − na)`.
pub fn hirzebruch_endpoint_df(n: u32, a: &Q, b: &Q) -> Result<Q> {
    if !crate::positivity::is_ample_hirzebruch(n, a, b) {
        return Err(Error::Domain(format!(
            "{}Z + {}F is not ample on F({n})",
            Frac(a),
            Frac(b)
        )));
    }
    let n = qi(n as i64);
    let num = q(2, 3) * a * a * &n * (a + &n * a - qi(2) * b);
    Ok(num / (qi(2) * b - &n * a))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SlopeOutcome {
    /// `0 < λ < sesh` with `DF(λ) < 0`.
    Destabilizing {
        #[serde(with = "crate::rational::serde_q")]
        lambda: Q,
        #[serde(with = "crate::rational::serde_q")]
        df: Q,
    },
    /// `DF ≥ 0` on all of `(0, sesh)`: this particular `(L, Z)` does not
    /// destabilise. Says nothing about other curves or configurations.
    NonNegativeOnInterval,
}

impl SlopeOutcome {
    pub fn lambda(&self) -> Option<&Q> {
        match self {
            SlopeOutcome::Destabilizing { lambda, .. } => Some(lambda),
            SlopeOutcome::NonNegativeOnInterval => None,
        }
    }
}

fn dyadic_samples(sesh: &Q, depth: u32) -> impl Iterator<Item = Q> + '_ {
    (1..=depth).map(move |j| sesh * (qi(1) - two_pow_neg(j)))
}

/// Rational points bracketing each real critical point of the cubic inside
/// `(0, sesh)`, to width `sesh·2^{-depth}`.
fn critical_brackets(input: &SlopeInput, depth: u32) -> Vec<Q> {
    let zero = Q::zero();
    let width = &input.sesh * two_pow_neg(depth);
    let mut out = Vec::new();
    for (l, h) in isolate_roots(&input.cubic().derivative(), &zero, &input.sesh, &width) {
        for x in [l.clone(), (&l + &h) / qi(2), h] {
            if x.is_positive() && x < input.sesh && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Look for `λ ∈ (0, sesh)` with `DF(λ) < 0`: dyadic samples approaching
/// `sesh` first, then brackets of the critical points, then one point in
/// every sign component of the cubic on the open interval. The last stage
/// is exhaustive, so a `NonNegativeOnInterval` answer is a proof.
pub fn find_destabilizing_lambda(input: &SlopeInput, depth: u32) -> SlopeOutcome {
    if !input.sesh.is_positive() {
        return SlopeOutcome::NonNegativeOnInterval;
    }
    let found = |lambda: Q| {
        let df = df_formula(input, &lambda);
        df.is_negative()
            .then_some(SlopeOutcome::Destabilizing { lambda, df })
    };
    if let Some(hit) = dyadic_samples(&input.sesh, depth).find_map(found) {
        return hit;
    }
    if let Some(hit) = critical_brackets(input, depth).into_iter().find_map(found) {
        return hit;
    }
    component_samples(&input.cubic(), &Q::zero(), &input.sesh)
        .into_iter()
        .find_map(found)
        .unwrap_or(SlopeOutcome::NonNegativeOnInterval)
}

/// Smallest `DF` over the dyadic samples and critical brackets, with the
/// `λ` achieving it (ties go to the smaller `λ`).
pub fn minimize_on_candidates(input: &SlopeInput, depth: u32) -> Option<(Q, Q)> {
    let mut candidates: Vec<Q> = dyadic_samples(&input.sesh, depth).collect();
    candidates.extend(critical_brackets(input, depth));
    candidates.sort();
    candidates.dedup();
    candidates
        .into_iter()
        .map(|lambda| {
            let df = df_formula(input, &lambda);
            (lambda, df)
        })
        .min_by(|(l1, d1), (l2, d2)| d1.cmp(d2).then(l1.cmp(l2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f1() -> SlopeInput {
        SlopeInput::hirzebruch(1, &qi(1), &qi(2)).unwrap()
    }

    #[test]
    fn slope_examples() {
        let p = SurfacePresentation::hirzebruch(1);
        let l = DivisorClass::from_ints(p.lattice(), &[1, 2]).unwrap();
        assert_eq!(slope(&p, &l).unwrap(), q(5, 3));
        let p2 = SurfacePresentation::plane();
        let h = DivisorClass::from_ints(p2.lattice(), &[1]).unwrap();
        assert_eq!(slope(&p2, &h).unwrap(), qi(3));
        let f = DivisorClass::from_ints(p.lattice(), &[0, 1]).unwrap();
        assert!(matches!(slope(&p, &f), Err(Error::Domain(_))));
    }

    #[test]
    fn slope_closed_form_on_hirzebruch() {
        for n in 0..5u32 {
            for (a, b) in [
                (1, n as i64 + 1),
                (2, 2 * n as i64 + 3),
                (3, 5 * n as i64 + 1),
            ] {
                let p = SurfacePresentation::hirzebruch(n);
                let l = DivisorClass::from_ints(p.lattice(), &[a, b]).unwrap();
                let (a, b, n) = (qi(a), qi(b), qi(n as i64));
                let expected = ((qi(2) - &n) * &a + qi(2) * &b) / (qi(2) * &a * &b - &a * &a * &n);
                assert_eq!(slope(&p, &l).unwrap(), expected);
            }
        }
    }

    #[test]
    fn df_examples() {
        let inp = f1();
        assert_eq!(inp.nu, q(5, 3));
        assert_eq!(inp.l_dot_z, qi(1));
        assert_eq!(inp.z_sq, qi(-1));
        assert_eq!(df_slope(&inp, &q(1, 2)).unwrap(), q(19, 36));
        assert_eq!(df_slope(&inp, &q(9, 10)).unwrap(), q(-9, 100));
        let quad = SlopeInput::hirzebruch(0, &qi(1), &qi(1)).unwrap();
        assert_eq!(quad.nu, qi(2));
        assert_eq!(df_slope(&quad, &q(1, 2)).unwrap(), q(1, 2));
    }

    #[test]
    fn df_domain() {
        let inp = f1();
        assert!(df_slope(&inp, &qi(0)).is_err());
        assert!(df_slope(&inp, &q(-1, 2)).is_err());
        assert!(df_slope(&inp, &q(11, 10)).is_err());
        assert_eq!(df_slope(&inp, &qi(1)).unwrap(), q(-4, 9));
    }

    #[test]
    fn cubic_agrees_with_formula() {
        let inp = f1();
        let c = inp.cubic();
        for k in 1..10 {
            let x = q(k, 10);
            assert_eq!(c.eval(&x), df_formula(&inp, &x));
        }
    }

    #[test]
    fn endpoint_examples() {
        assert_eq!(hirzebruch_endpoint_df(1, &qi(1), &qi(2)).unwrap(), q(-4, 9));
        assert_eq!(hirzebruch_endpoint_df(2, &qi(1), &qi(3)).unwrap(), qi(-1));
        assert_eq!(hirzebruch_endpoint_df(0, &qi(3), &qi(5)).unwrap(), qi(0));
        assert!(hirzebruch_endpoint_df(1, &qi(1), &qi(1)).is_err());
    }

    #[test]
    fn search_on_f1() {
        match find_destabilizing_lambda(&f1(), DEFAULT_LAMBDA_DEPTH) {
            SlopeOutcome::Destabilizing { lambda, df } => {
                // DF(3/4) = 9/32 > 0, DF(7/8) < 0
                assert_eq!(lambda, q(7, 8));
                assert!(df.is_negative());
                assert_eq!(df, df_slope(&f1(), &lambda).unwrap());
            }
            other => panic!("{other:?}"),
        }
        assert!(df_slope(&f1(), &q(15, 16)).unwrap().is_negative());
    }

    #[test]
    fn search_on_quadric_fails() {
        for (a, b) in [(1, 1), (2, 7), (5, 1)] {
            let inp = SlopeInput::hirzebruch(0, &qi(a), &qi(b)).unwrap();
            assert_eq!(
                find_destabilizing_lambda(&inp, DEFAULT_LAMBDA_DEPTH),
                SlopeOutcome::NonNegativeOnInterval
            );
        }
    }

    #[test]
    fn degenerate_input_is_positive() {
        let inp = SlopeInput::new(qi(0), qi(0), 0, qi(1), qi(1)).unwrap();
        assert_eq!(df_slope(&inp, &q(1, 2)).unwrap(), q(1, 2));
        assert_eq!(
            find_destabilizing_lambda(&inp, 8),
            SlopeOutcome::NonNegativeOnInterval
        );
    }

    #[test]
    fn interior_dip_found_by_later_stages() {
        // DF = 2λ(λ - 1/4)(λ - 1/3)·k dips below zero only on (1/4, 1/3), which
        // no dyadic sample 1 - 2^{-j} hits.
        // cubic: 2λ³ - (7/6)λ² + (1/6)λ  -> l_dot_z = 1/12, genus 0,
        // c2 = -2ν/12 + 2 = -7/6  => ν = 19,  c3 = (2/3)·19·z_sq = 2 => z_sq = 3/19
        let inp = SlopeInput::new(q(1, 12), q(3, 19), 0, qi(19), qi(1)).unwrap();
        assert_eq!(
            inp.cubic(),
            Poly::new(vec![qi(0), q(1, 6), q(-7, 6), qi(2)])
        );
        match find_destabilizing_lambda(&inp, 6) {
            SlopeOutcome::Destabilizing { lambda, df } => {
                assert!(lambda > q(1, 4) && lambda < q(1, 3));
                assert!(df.is_negative());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn minimum_over_candidates() {
        let (lambda, df) = minimize_on_candidates(&f1(), 8).unwrap();
        assert!(df.is_negative());
        assert!(lambda < qi(1));
        let quad = SlopeInput::hirzebruch(0, &qi(1), &qi(3)).unwrap();
        let (_, df) = minimize_on_candidates(&quad, 8).unwrap();
        assert!(df.is_positive());
    }
}
