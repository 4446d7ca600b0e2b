//! The constructive destabiliser: normalise, destabilise the Hirzebruch base
//! with a slope test configuration of `Z`, then follow the blow-ups one at a
//! time with a small perturbation `L ↦ π*L − εE` that keeps `DF < 0`.

mod certificate;
mod verify;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::futaki::{df_slope, find_destabilizing_lambda, SlopeInput, SlopeOutcome};
use crate::lattice::{CurveTag, DivisorClass};
use crate::positivity::{tracked_positivity, tracked_seshadri_check};
use crate::rational::{fmt_q, qi, two_pow_neg, Frac, Q};
use crate::surface::SurfacePresentation;

pub use certificate::{
    tool_version, write_atomic, Certificate, CurveRecord, ASSUME_SMALL_EPSILON,
    ASSUME_TRACKED_AMPLENESS, KNOWN_ASSUMPTIONS, SCHEMA_VERSION,
};
pub use verify::{verify, CheckResult, VerifyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DestabilizeOptions {
    pub lambda_depth: u32,
    pub epsilon_depth: u32,
}

impl Default for DestabilizeOptions {
    fn default() -> Self {
        DestabilizeOptions {
            lambda_depth: crate::futaki::DEFAULT_LAMBDA_DEPTH,
            epsilon_depth: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Destabilized(Box<Certificate>),
    MinimalPolystable { reason: String },
}

impl Verdict {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Destabilized(c) => Some(c),
            Verdict::MinimalPolystable { .. } => None,
        }
    }
}

/// Seed polarization `Z + (m+1)F` on `F(m)`.
fn seed(base: &SurfacePresentation, m: u32) -> Result<DivisorClass> {
    DivisorClass::from_ints(base.lattice(), &[1, m as i64 + 1])
}

/// Data shared by the lift and by the verifier: `L` at every stage.
pub(crate) fn stage_polarization(
    normalized: &SurfacePresentation,
    base: &[Q],
    epsilons: &[Q],
) -> Result<(SurfacePresentation, DivisorClass)> {
    let stage = normalized.truncated(epsilons.len())?;
    let mut coeffs = base.to_vec();
    coeffs.extend(epsilons.iter().map(|e| -e));
    let l = DivisorClass::new(stage.lattice(), coeffs)?;
    Ok((stage, l))
}

/// Smallest sufficient conditions for `ε` at step `i` (0-based): every
/// tracked check passes for `L` and `L − λZ`, `DF` stays negative, and `ε`
/// lies inside a budget that keeps `ν` decreasing in each `ε_j`.
fn accept_epsilon(
    stage: &SurfacePresentation,
    l: &DivisorClass,
    lambda: &Q,
    sesh: &Q,
    eps: &Q,
    step: usize,
    a0: &Q,
    c0: &Q,
) -> Result<bool> {
    let budget = eps * eps <= a0 * two_pow_neg(step as u32 + 1) && qi(2) * eps * c0 <= a0 / qi(2);
    if !budget
        || !tracked_positivity(stage, l)?.passes()
        || !tracked_seshadri_check(stage, l, lambda)?.passes()
    {
        return Ok(false);
    }
    let input = SlopeInput::from_presentation(stage, l, sesh.clone())?;
    Ok(df_slope(&input, lambda)?.is_negative())
}

/// Run the destabiliser. Bare `P2` and `F(0)` are polystable and reported
/// as such; everything else yields a certificate.
pub fn destabilize(p: &SurfacePresentation, options: DestabilizeOptions) -> Result<Verdict> {
    if p.is_minimal_polystable() {
        return Ok(Verdict::MinimalPolystable {
            reason: format!(
                "{p} is minimal with reductive automorphism group and carries a cscK metric in every Kähler class, so it is K-polystable"
            ),
        });
    }
    let norm = p.normalize();
    let np = &norm.presentation;
    let m = np
        .hirzebruch_index()
        .ok_or_else(|| Error::Invariant("normal form is not over a Hirzebruch base".into()))?;
    let base = np.truncated(0)?;
    let l0 = seed(&base, m)?;
    let (a, b) = (l0.coeffs()[0].clone(), l0.coeffs()[1].clone());
    let input = SlopeInput::hirzebruch(m, &a, &b)?;
    let sesh = input.sesh.clone();
    let lambda = match find_destabilizing_lambda(&input, options.lambda_depth) {
        SlopeOutcome::Destabilizing { lambda, .. } => lambda,
        SlopeOutcome::NonNegativeOnInterval => {
            return Err(Error::Invariant(format!(
                "no destabilizing lambda for {} on F({m})",
                l0
            )))
        }
    };

    let a0 = l0.square();
    let c0 = -base.canonical().intersect(&l0)?;
    let mut epsilons: Vec<Q> = Vec::new();
    for step in 0..np.steps().len() {
        let mut found = None;
        for t in 1..=options.epsilon_depth {
            let eps = two_pow_neg(t);
            let mut trial = epsilons.clone();
            trial.push(eps.clone());
            let (stage, l) = stage_polarization(np, l0.coeffs(), &trial)?;
            if accept_epsilon(&stage, &l, &lambda, &sesh, &eps, step, &a0, &c0)? {
                found = Some(eps);
                break;
            }
        }
        match found {
            Some(eps) => epsilons.push(eps),
            None => {
                return Err(Error::Exhausted(format!(
                    "no epsilon = 2^-t with t <= {} works at step {} of {} (lambda = {})",
                    options.epsilon_depth,
                    step + 1,
                    np,
                    Frac(&lambda)
                )))
            }
        }
    }

    let (stage, l) = stage_polarization(np, l0.coeffs(), &epsilons)?;
    let positivity = tracked_positivity(&stage, &l)?;
    let final_input = SlopeInput::from_presentation(&stage, &l, sesh.clone())?;
    let df_value = df_slope(&final_input, &lambda)?;
    let z = np
        .z_section()
        .ok_or_else(|| Error::Invariant("normal form has no section Z".into()))?;
    let assumptions = if np.steps().is_empty() {
        Vec::new()
    } else {
        KNOWN_ASSUMPTIONS.iter().map(|s| s.to_string()).collect()
    };
    let cert = Certificate {
        schema_version: SCHEMA_VERSION,
        tool_version: tool_version(),
        presentation: p.to_string(),
        normalized_presentation: np.to_string(),
        polarization_in_presentation: norm.transition.apply_inverse(l.coeffs()),
        polarization: l.into_coeffs(),
        curve: CurveRecord {
            tag: CurveTag::ZSection,
            class: z.class().coeffs().to_vec(),
        },
        seshadri_bound: sesh,
        lambda,
        df_value,
        epsilon_chain: epsilons,
        positivity,
        assumptions,
    };
    debug_assert!(
        cert.df_value.is_negative(),
        "df = {}",
        fmt_q(&cert.df_value)
    );
    Ok(Verdict::Destabilized(Box::new(cert)))
}
