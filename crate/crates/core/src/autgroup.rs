//! Reductivity of `Aut⁰` for toric presentations.
//!
//! The unipotent part of the automorphism group of a complete toric surface
//! is generated by its Demazure roots: characters `m` with `⟨m, ρ⟩ = −1` on
//! one ray and `⟨m, ρ⟩ ≥ 0` on all others. `Aut⁰` is reductive exactly when
//! the root set is closed under negation. An independent table of the
//! explicit groups for the minimal surfaces and their one-point blow-ups is
//! kept alongside for cross-checking.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::BaseKind;
use crate::surface::{Locus, SurfacePresentation};

pub type Ray = [i64; 2];

/// A complete two-dimensional fan, rays in counter-clockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanModel {
    pub rays: Vec<Ray>,
    pub complete: bool,
}

fn det(a: Ray, b: Ray) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl FanModel {
    pub fn of_base(base: BaseKind) -> Self {
        let rays = match base {
            BaseKind::P2 => vec![[1, 0], [0, 1], [-1, -1]],
            BaseKind::Hirzebruch(n) => vec![[1, 0], [0, 1], [-1, n as i64], [0, -1]],
        };
        FanModel {
            rays,
            complete: true,
        }
    }

    /// Cone `i` is spanned by rays `i` and `i + 1` (cyclically).
    pub fn cone_count(&self) -> usize {
        self.rays.len()
    }

    /// Blow up the torus-fixed point of cone `cone`.
    pub fn star_subdivide(&self, cone: usize) -> Result<FanModel> {
        if cone >= self.rays.len() {
            return Err(Error::Usage(format!(
                "cone {cone} out of range ({} cones)",
                self.rays.len()
            )));
        }
        let a = self.rays[cone];
        let b = self.rays[(cone + 1) % self.rays.len()];
        let mut rays = self.rays.clone();
        rays.insert(cone + 1, [a[0] + b[0], a[1] + b[1]]);
        Ok(FanModel {
            rays,
            complete: self.complete,
        })
    }

    /// Primitive rays, consecutive pairs forming unimodular cones that turn
    /// once around the origin.
    pub fn is_valid(&self) -> bool {
        let k = self.rays.len();
        k >= 3
            && self.rays.iter().all(|r| gcd(r[0], r[1]) == 1)
            && (0..k).all(|i| det(self.rays[i], self.rays[(i + 1) % k]) == 1)
            && self.winding() == 1
    }

    /// Number of times the cyclic ray sequence crosses the positive x-axis.
    fn winding(&self) -> usize {
        let k = self.rays.len();
        (0..k)
            .filter(|&i| self.rays[i][1] < 0 && self.rays[(i + 1) % k][1] >= 0)
            .count()
    }

    /// `D_i²` for the boundary divisor of ray `i`: `ρ_{i−1} + ρ_{i+1} = −D_i²·ρ_i`.
    pub fn self_intersection(&self, i: usize) -> i64 {
        let k = self.rays.len();
        let (prev, next, r) = (
            self.rays[(i + k - 1) % k],
            self.rays[(i + 1) % k],
            self.rays[i],
        );
        let s = [prev[0] + next[0], prev[1] + next[1]];
        let c = if r[0] != 0 { s[0] / r[0] } else { s[1] / r[1] };
        -c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DemazureRoot {
    pub character: [i64; 2],
    pub distinguished_ray: usize,
}

fn pair(m: [i64; 2], r: Ray) -> i64 {
    m[0] * r[0] + m[1] * r[1]
}

/// All Demazure roots of a complete fan, sorted.
pub fn demazure_roots(f: &FanModel) -> Vec<DemazureRoot> {
    // every root satisfies ⟨m, ρ⟩ ≥ −1 on all rays; the vertices of that
    // polygon solve 2×2 systems with entries ≤ R, so |m_i| ≤ 2R
    let r = f
        .rays
        .iter()
        .flat_map(|ray| ray.iter().map(|x| x.abs()))
        .max()
        .unwrap_or(1);
    let bound = 2 * r;
    let mut roots = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            let m = [x, y];
            let values: Vec<i64> = f.rays.iter().map(|&ray| pair(m, ray)).collect();
            if values.iter().any(|&v| v < -1) {
                continue;
            }
            let mut negative = values.iter().enumerate().filter(|(_, &v)| v == -1);
            if let (Some((i, _)), None) = (negative.next(), negative.next()) {
                roots.push(DemazureRoot {
                    character: m,
                    distinguished_ray: i,
                });
            }
        }
    }
    roots.sort();
    roots
}

/// Root set closed under `m ↦ −m`.
pub fn is_reductive(f: &FanModel) -> bool {
    let roots = demazure_roots(f);
    roots.iter().all(|r| {
        let neg = [-r.character[0], -r.character[1]];
        roots.iter().any(|s| s.character == neg)
    })
}

/// Fan of `p` with step `i` blowing up the fixed point of cone `schedule[i]`
/// (cone indices refer to the fan at the time of that step).
pub fn fan_of(p: &SurfacePresentation, schedule: &[usize]) -> Result<FanModel> {
    if schedule.len() != p.steps().len() {
        return Err(Error::Usage(format!(
            "schedule has {} entries for {} steps",
            schedule.len(),
            p.steps().len()
        )));
    }
    schedule
        .iter()
        .try_fold(FanModel::of_base(p.base()), |f, &cone| {
            f.star_subdivide(cone)
        })
}

/// Fixed-point schedule for presentations with at most one step: an on-`Z`
/// point goes to a corner of the ray `(0, 1)`, which carries `Z`; a generic
/// point goes to the opposite corner. Every point of `F(n)` is equivalent
/// under `Aut⁰` to one of these two, so nothing is lost for a single step.
pub fn canonical_schedule(p: &SurfacePresentation) -> Result<Vec<usize>> {
    match (p.base(), p.steps()) {
        (_, []) => Ok(Vec::new()),
        (BaseKind::P2, [_]) => Ok(vec![0]),
        (BaseKind::Hirzebruch(_), [s]) => Ok(vec![match s.locus {
            Locus::OnZ => 0,
            Locus::OffZ => 2,
        }]),
        _ => Err(Error::Unsupported(format!(
            "no torus-fixed model for `{p}`: only bases with at most one blow-up are covered"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupDescription {
    pub unipotent_dim: u32,
    pub reductive_part: String,
    pub reductive_dim: u32,
    pub finite_quotient: Option<String>,
    pub display: String,
}

impl GroupDescription {
    pub fn dimension(&self) -> u32 {
        self.unipotent_dim + self.reductive_dim
    }

    /// A nontrivial unipotent radical rules out reductivity.
    pub fn is_reductive(&self) -> bool {
        self.unipotent_dim == 0
    }
}

impl fmt::Display for GroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display)
    }
}

fn with_quotient(inner: &str, n: u32) -> (String, Option<String>) {
    if n <= 1 {
        (inner.to_string(), None)
    } else {
        (format!("{inner}/mu_{n}"), Some(format!("mu_{n}")))
    }
}

fn hirzebruch_group(n: u32) -> GroupDescription {
    let (reductive, quotient) = with_quotient("GL2", n);
    GroupDescription {
        unipotent_dim: n + 1,
        reductive_part: "GL2".into(),
        reductive_dim: 4,
        finite_quotient: quotient,
        display: format!("(Ga)^{} ⋊ ({reductive})", n + 1),
    }
}

/// Stabiliser of a point on `Z` in `Aut⁰(F(n))`.
fn on_z_blowup_group(n: u32) -> GroupDescription {
    let inner = if n <= 1 {
        "Ga ⋊ Gm^2"
    } else {
        "(Ga ⋊ Gm^2)"
    };
    let (reductive, quotient) = with_quotient(inner, n);
    GroupDescription {
        unipotent_dim: n + 2,
        reductive_part: "Gm^2".into(),
        reductive_dim: 2,
        finite_quotient: quotient,
        display: format!("(Ga)^{} ⋊ ({reductive})", n + 1),
    }
}

/// Explicit `Aut⁰` for `P2`, `F(n)` and one-point blow-ups of `F(n)`.
pub fn aut0_description(p: &SurfacePresentation) -> Result<GroupDescription> {
    match (p.base(), p.steps()) {
        (BaseKind::P2, []) => Ok(GroupDescription {
            unipotent_dim: 0,
            reductive_part: "PGL3".into(),
            reductive_dim: 8,
            finite_quotient: None,
            display: "PGL3".into(),
        }),
        (BaseKind::Hirzebruch(0), []) => Ok(GroupDescription {
            unipotent_dim: 0,
            reductive_part: "PGL2 × PGL2".into(),
            reductive_dim: 6,
            finite_quotient: None,
            display: "PGL2 × PGL2".into(),
        }),
        (BaseKind::Hirzebruch(n), []) => Ok(hirzebruch_group(n)),
        // P2 blown up at a point is F(1)
        (BaseKind::P2, [_]) => Ok(hirzebruch_group(1)),
        (BaseKind::Hirzebruch(n), [s]) => match (s.locus, n) {
            (Locus::OnZ, n) => Ok(on_z_blowup_group(n)),
            // every point of F(0) lies on a ruling line
            (Locus::OffZ, 0) => Ok(on_z_blowup_group(0)),
            // off Z on F(n) is on Z of F(n - 1) after an elementary transformation
            (Locus::OffZ, n) => Ok(on_z_blowup_group(n - 1)),
        },
        _ => Err(Error::Unsupported(format!(
            "no explicit automorphism group recorded for `{p}`"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    NonReductive,
    Silent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub presentation: String,
    pub rays: Vec<Ray>,
    pub root_count: usize,
    pub roots: Vec<DemazureRoot>,
    pub reductive: bool,
    pub verdict: Obstruction,
    pub group: Option<GroupDescription>,
    pub message: String,
}

impl ObstructionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("presentation: {}\n", self.presentation);
        let rays: Vec<String> = self
            .rays
            .iter()
            .map(|r| format!("({}, {})", r[0], r[1]))
            .collect();
        out += &format!("fan rays: {}\n", rays.join(" "));
        out += &format!("demazure roots: {}\n", self.root_count);
        if let Some(g) = &self.group {
            out += &format!("aut0: {} (dimension {})\n", g, g.dimension());
        }
        out += &format!(
            "aut0 reductive: {}\n",
            if self.reductive { "yes" } else { "no" }
        );
        out += &self.message;
        out.push('\n');
        out
    }
}

/// Matsushima–Lichnérowicz test on the torus-fixed model of `p`.
pub fn matsushima_verdict(p: &SurfacePresentation) -> Result<ObstructionReport> {
    let fan = fan_of(p, &canonical_schedule(p)?)?;
    let roots = demazure_roots(&fan);
    let reductive = is_reductive(&fan);
    let group = aut0_description(p).ok();
    if let Some(g) = &group {
        if g.is_reductive() != reductive || g.dimension() as usize != 2 + roots.len() {
            return Err(Error::Invariant(format!(
                "fan of `{p}` has {} roots but the recorded group is {g}",
                roots.len()
            )));
        }
    }
    let (verdict, message) = if reductive {
        (
            Obstruction::Silent,
            "obstruction silent: Aut0 is reductive, no conclusion about cscK metrics".to_string(),
        )
    } else {
        (
            Obstruction::NonReductive,
            "Aut0 is not reductive: no cscK metric in any Kähler class".to_string(),
        )
    };
    Ok(ObstructionReport {
        presentation: p.to_string(),
        rays: fan.rays,
        root_count: roots.len(),
        roots,
        reductive,
        verdict,
        group,
        message,
    })
}
