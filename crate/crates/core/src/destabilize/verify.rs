//! Independent replay of a certificate. Every number is recomputed from the
//! presentation string; the stored values are only compared against.

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::futaki::{df_slope, df_total_space_oracle, SlopeInput, TestConfigModel};
use crate::lattice::CurveTag;
use crate::positivity::{
    is_ample_hirzebruch, seshadri_at_z, tracked_positivity, tracked_seshadri_check,
};
use crate::rational::Frac;
use crate::surface::SurfacePresentation;

use super::{stage_polarization, Certificate, KNOWN_ASSUMPTIONS, SCHEMA_VERSION};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub accepted: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    /// Name and detail of the check that rejected the certificate.
    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn rejected(name: &str, detail: String) -> Self {
        VerifyReport {
            accepted: false,
            checks: vec![CheckResult {
                name: name.into(),
                pass: false,
                detail,
            }],
        }
    }
}

struct Replay {
    checks: Vec<CheckResult>,
}

/// `Err(())` stops the replay; the failing check is already recorded.
type Step<T> = std::result::Result<T, ()>;

impl Replay {
    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> Step<()> {
        self.checks.push(CheckResult {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
        if pass {
            Ok(())
        } else {
            Err(())
        }
    }

    fn lift<T>(&mut self, name: &str, r: Result<T>) -> Step<T> {
        r.or_else(|e| self.check(name, false, e.to_string()).and(Err(())))
    }
}

/// Replay `cert` from scratch; rejects at the first failing check.
pub fn verify(cert: &Certificate) -> VerifyReport {
    let mut r = Replay { checks: Vec::new() };
    let accepted = replay(cert, &mut r).is_ok();
    VerifyReport {
        accepted,
        checks: r.checks,
    }
}

fn replay(c: &Certificate, r: &mut Replay) -> Step<()> {
    r.check(
        "parse",
        c.schema_version == SCHEMA_VERSION,
        format!("schema_version {}", c.schema_version),
    )?;
    let p: SurfacePresentation = r.lift("parse", c.presentation.parse())?;
    r.check("parse", true, format!("`{p}`"))?;

    let norm = p.normalize();
    let np = &norm.presentation;
    r.check(
        "normalize-replay",
        !norm.minimal_polystable && np.to_string() == c.normalized_presentation,
        format!(
            "normal form `{np}`, certificate says `{}`",
            c.normalized_presentation
        ),
    )?;
    let m = r.lift(
        "normalize-replay",
        np.hirzebruch_index()
            .ok_or_else(|| Error::Invariant("normal form has no Hirzebruch base".into())),
    )?;

    let rank = np.picard_rank();
    let steps = np.steps().len();
    r.check(
        "polarization-shape",
        c.polarization.len() == rank
            && c.polarization_in_presentation.len() == p.picard_rank()
            && c.curve.class.len() == rank
            && c.epsilon_chain.len() == steps,
        format!(
            "rank {rank} with {steps} steps; polarization has {} entries, curve {}, epsilon chain {}",
            c.polarization.len(),
            c.curve.class.len(),
            c.epsilon_chain.len()
        ),
    )?;

    let (a, b) = (&c.polarization[0], &c.polarization[1]);
    r.check(
        "base-ampleness",
        is_ample_hirzebruch(m, a, b),
        format!("{}Z + {}F on F({m})", Frac(a), Frac(b)),
    )?;

    let z = r.lift(
        "curve-replay",
        np.z_section()
            .ok_or_else(|| Error::Invariant("normal form has no section Z".into())),
    )?;
    r.check(
        "curve-replay",
        c.curve.tag == CurveTag::ZSection && c.curve.class == z.class().coeffs(),
        format!("curve {} with class {}", c.curve.tag, z.class()),
    )?;

    let sesh = r.lift("seshadri-bound", seshadri_at_z(m, a, b))?;
    r.check(
        "seshadri-bound",
        c.seshadri_bound == sesh && c.lambda.is_positive() && c.lambda < sesh,
        format!(
            "lambda = {} must lie in (0, {}); recorded bound {}",
            Frac(&c.lambda),
            Frac(&sesh),
            Frac(&c.seshadri_bound)
        ),
    )?;

    r.check(
        "epsilon-chain",
        c.epsilon_chain.iter().all(Signed::is_positive),
        format!(
            "epsilons: [{}]",
            c.epsilon_chain
                .iter()
                .map(|e| Frac(e).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )?;

    let base = &c.polarization[..2];
    let mut last = None;
    for i in 0..=steps {
        let (stage, l) = r.lift(
            "tracked-positivity",
            stage_polarization(np, base, &c.epsilon_chain[..i]),
        )?;
        let pos = r.lift("tracked-positivity", tracked_positivity(&stage, &l))?;
        let shifted = r.lift(
            "tracked-positivity",
            tracked_seshadri_check(&stage, &l, &c.lambda),
        )?;
        r.check(
            "tracked-positivity",
            pos.passes() && shifted.passes(),
            match pos.first_failure().or_else(|| {
                shifted
                    .first_failure()
                    .map(|f| format!("after subtracting lambda Z: {f}"))
            }) {
                Some(f) => format!("stage {i}: {f}"),
                None => format!("stage {i}: L = {l}"),
            },
        )?;
        let input = r.lift(
            "df-sign",
            SlopeInput::from_presentation(&stage, &l, sesh.clone()),
        )?;
        let df = r.lift("df-sign", df_slope(&input, &c.lambda))?;
        r.check(
            "df-sign",
            df.is_negative(),
            format!("stage {i}: DF = {}", Frac(&df)),
        )?;
        let oracle = r.lift(
            "oracle-agreement",
            df_total_space_oracle(&TestConfigModel::new(input), &c.lambda),
        )?;
        r.check(
            "oracle-agreement",
            oracle == df,
            format!(
                "stage {i}: closed form {}, total space {}",
                Frac(&df),
                Frac(&oracle)
            ),
        )?;
        last = Some((l, df, oracle));
    }
    let (l, df, oracle) = last.expect("at least the base stage");

    let back = norm.transition.apply_inverse(l.coeffs());
    r.check(
        "polarization-replay",
        c.polarization == l.coeffs() && c.polarization_in_presentation == back,
        format!("replayed L = {l}"),
    )?;

    r.check(
        "df-replay",
        c.df_value == df && c.df_value == oracle && c.df_value.is_negative(),
        format!(
            "recomputed DF = {} (both routes), certificate says {}",
            Frac(&df),
            Frac(&c.df_value)
        ),
    )?;

    let positivity = r.lift("positivity-replay", tracked_positivity(np, &l))?;
    r.check(
        "positivity-replay",
        positivity == c.positivity && positivity.passes(),
        format!("verdict {:?}", positivity.verdict),
    )?;

    let required: Vec<&str> = if steps == 0 {
        Vec::new()
    } else {
        KNOWN_ASSUMPTIONS.to_vec()
    };
    let unknown: Vec<&String> = c
        .assumptions
        .iter()
        .filter(|a| !KNOWN_ASSUMPTIONS.contains(&a.as_str()))
        .collect();
    let missing: Vec<&&str> = required
        .iter()
        .filter(|a| !c.assumptions.iter().any(|s| s == **a))
        .collect();
    r.check(
        "assumptions",
        unknown.is_empty() && missing.is_empty(),
        format!("missing {missing:?}, unknown {unknown:?}"),
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::destabilize::{destabilize, DestabilizeOptions};
    use crate::rational::qi;

    fn cert(text: &str) -> Certificate {
        destabilize(&text.parse().unwrap(), DestabilizeOptions::default())
            .unwrap()
            .certificate()
            .unwrap()
            .clone()
    }

    fn rejected_at(c: &Certificate) -> String {
        let report = verify(c);
        assert!(!report.accepted);
        report.first_failure().unwrap().name.clone()
    }

    #[test]
    fn accepts_pipeline_output() {
        let c = cert("F(3); blowup generic; blowup onZ");
        let report = verify(&c);
        assert!(report.accepted, "{:?}", report.first_failure());
        assert!(report.checks.iter().any(|c| c.name == "oracle-agreement"));
    }

    #[test]
    fn flipped_df_sign() {
        let mut c = cert("F(3); blowup generic; blowup onZ");
        c.df_value = -c.df_value.clone();
        assert_eq!(rejected_at(&c), "df-replay");
    }

    #[test]
    fn inflated_epsilon() {
        let mut c = cert("F(3); blowup generic; blowup onZ");
        c.epsilon_chain[1] = qi(5);
        assert_eq!(rejected_at(&c), "tracked-positivity");
    }

    #[test]
    fn lambda_past_seshadri() {
        let mut c = cert("F(2)");
        c.lambda = &c.seshadri_bound + qi(1);
        assert_eq!(rejected_at(&c), "seshadri-bound");
    }

    #[test]
    fn other_tampering() {
        let mut c = cert("F(1); blowup generic");
        c.assumptions.clear();
        assert_eq!(rejected_at(&c), "assumptions");

        let mut c = cert("F(1); blowup generic");
        c.normalized_presentation = "F(2); blowup generic".into();
        assert_eq!(rejected_at(&c), "normalize-replay");

        let mut c = cert("F(1); blowup generic");
        c.presentation = "F(1) blowup".into();
        assert_eq!(rejected_at(&c), "parse");

        let mut c = cert("F(1); blowup generic");
        c.polarization[1] = qi(1);
        assert_eq!(rejected_at(&c), "base-ampleness");

        let mut c = cert("F(1); blowup generic");
        c.epsilon_chain.push(qi(1));
        assert_eq!(rejected_at(&c), "polarization-shape");

        let mut c = cert("F(1); blowup generic");
        c.polarization[2] = -&c.polarization[2];
        assert_eq!(rejected_at(&c), "polarization-replay");
    }
}
