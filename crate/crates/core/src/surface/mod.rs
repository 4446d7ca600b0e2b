//! Rational surfaces presented as a base (`P2` or `F(n)`) followed by a word
//! of blow-up steps, each tagged by whether its point lies on the proper
//! transform of the negative section `Z`.
//!
//! Points are combinatorial: on-`Z` points sit on pairwise distinct fibres,
//! and generic points avoid every tracked curve.

mod normalize;
mod parse;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{BaseKind, CurveClassRecord, CurveTag, DivisorClass, IntersectionLattice};

pub use normalize::{BasisChange, Normalization, Rewrite};
pub use parse::parse_presentation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Locus {
    OnZ,
    OffZ,
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Locus::OnZ => "onZ",
            Locus::OffZ => "generic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlowupStep {
    pub locus: Locus,
}

impl BlowupStep {
    pub const GENERIC: BlowupStep = BlowupStep { locus: Locus::OffZ };
    pub const ON_Z: BlowupStep = BlowupStep { locus: Locus::OnZ };
}

#[derive(Clone, Debug)]
pub struct SurfacePresentation {
    base: BaseKind,
    steps: Vec<BlowupStep>,
    lattice: Arc<IntersectionLattice>,
    canonical: DivisorClass,
    tracked: Vec<CurveClassRecord>,
}

impl PartialEq for SurfacePresentation {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.steps == other.steps
    }
}

impl Eq for SurfacePresentation {}

impl SurfacePresentation {
    pub fn new(base: BaseKind, steps: Vec<BlowupStep>) -> Result<Self> {
        if base == BaseKind::P2 && steps.first().map(|s| s.locus) == Some(Locus::OnZ) {
            return Err(Error::Usage(
                "the first blow-up of P2 cannot lie on Z: no section Z exists yet".into(),
            ));
        }
        let (lattice, tracked) = build_tracked(base, &steps)?;
        let canonical = DivisorClass::canonical(&lattice);
        Ok(SurfacePresentation {
            base,
            steps,
            lattice,
            canonical,
            tracked,
        })
    }

    pub fn hirzebruch(n: u32) -> Self {
        Self::new(BaseKind::Hirzebruch(n), Vec::new()).expect("bare Hirzebruch surface")
    }

    pub fn plane() -> Self {
        Self::new(BaseKind::P2, Vec::new()).expect("bare plane")
    }

    pub fn base(&self) -> BaseKind {
        self.base
    }

    pub fn steps(&self) -> &[BlowupStep] {
        &self.steps
    }

    pub fn lattice(&self) -> &Arc<IntersectionLattice> {
        &self.lattice
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    /// Tracked curves in a fixed order: `Z`, the generic fibre, then per
    /// step the fibre through an on-`Z` point and the exceptional curve.
    pub fn tracked(&self) -> &[CurveClassRecord] {
        &self.tracked
    }

    pub fn tracked_curve(&self, tag: CurveTag) -> Option<&CurveClassRecord> {
        self.tracked.iter().find(|c| c.tag() == tag)
    }

    pub fn z_section(&self) -> Option<&CurveClassRecord> {
        self.tracked_curve(CurveTag::ZSection)
    }

    pub fn picard_rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn hirzebruch_index(&self) -> Option<u32> {
        match self.base {
            BaseKind::Hirzebruch(n) => Some(n),
            BaseKind::P2 => None,
        }
    }

    pub fn on_z_count(&self) -> usize {
        self.steps.iter().filter(|s| s.locus == Locus::OnZ).count()
    }

    /// Bare `P2` or bare `F(0)`.
    pub fn is_minimal_polystable(&self) -> bool {
        self.steps.is_empty() && matches!(self.base, BaseKind::P2 | BaseKind::Hirzebruch(0))
    }

    /// The presentation made of the base and the first `count` steps.
    pub fn truncated(&self, count: usize) -> Result<Self> {
        if count > self.steps.len() {
            return Err(Error::Usage(format!(
                "cannot keep {count} of {} steps",
                self.steps.len()
            )));
        }
        Self::new(self.base, self.steps[..count].to_vec())
    }

    pub fn pretty(&self) -> String {
        self.to_string()
    }
}

fn build_tracked(
    base: BaseKind,
    steps: &[BlowupStep],
) -> Result<(Arc<IntersectionLattice>, Vec<CurveClassRecord>)> {
    let mut lattice = Arc::new(IntersectionLattice::of_base(base));
    let mut tracked = Vec::new();
    let mut remaining = steps.iter().enumerate();
    match base {
        BaseKind::Hirzebruch(_) => {
            tracked.push(CurveClassRecord::new(
                DivisorClass::basis(&lattice, 0),
                0,
                CurveTag::ZSection,
            )?);
            tracked.push(CurveClassRecord::new(
                DivisorClass::basis(&lattice, 1),
                0,
                CurveTag::GenericFiber,
            )?);
        }
        BaseKind::P2 => match remaining.next() {
            None => tracked.push(CurveClassRecord::new(
                DivisorClass::basis(&lattice, 0),
                0,
                CurveTag::Line,
            )?),
            Some(_) => {
                // Blowing up one point of P2 gives F(1) with Z = E1, F = H - E1.
                lattice = Arc::new(lattice.extend_by_blowup());
                let h = DivisorClass::basis(&lattice, 0);
                let e1 = DivisorClass::basis(&lattice, 1);
                tracked.push(CurveClassRecord::new(e1.clone(), 0, CurveTag::ZSection)?);
                tracked.push(CurveClassRecord::new(&h - &e1, 0, CurveTag::GenericFiber)?);
            }
        },
    }
    for (index, step) in remaining {
        let next = Arc::new(lattice.extend_by_blowup());
        let generic_fiber = tracked
            .iter()
            .find(|c| c.tag() == CurveTag::GenericFiber)
            .map(|c| c.class().clone());
        let mut moved = Vec::with_capacity(tracked.len() + 2);
        for curve in &tracked {
            let on = curve.tag() == CurveTag::ZSection && step.locus == Locus::OnZ;
            moved.push(curve.proper_transform(&next, u8::from(on))?);
        }
        let e = DivisorClass::basis(&next, next.rank() - 1);
        if step.locus == Locus::OnZ {
            let f = generic_fiber
                .ok_or_else(|| Error::Invariant("no ruling to carry an on-Z fibre".into()))?
                .pullback(&next)?;
            moved.push(CurveClassRecord::new(&f - &e, 0, CurveTag::Fiber(index))?);
        }
        moved.push(CurveClassRecord::new(e, 0, CurveTag::Exceptional(index))?);
        lattice = next;
        tracked = moved;
    }
    Ok((lattice, tracked))
}

impl fmt::Display for SurfacePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for step in &self.steps {
            write!(f, "; blowup {}", step.locus)?;
        }
        Ok(())
    }
}

impl FromStr for SurfacePresentation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_presentation(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn picard_rank_counts_steps() {
        let p: SurfacePresentation = "F(2); blowup generic; blowup onZ".parse().unwrap();
        assert_eq!(p.picard_rank(), 4);
        let p: SurfacePresentation = "P2; blowup generic; blowup onZ".parse().unwrap();
        assert_eq!(p.picard_rank(), 3);
    }

    #[test]
    fn z_self_intersection_tracks_on_z_steps() {
        let p: SurfacePresentation = "F(2); blowup onZ; blowup generic; blowup onZ"
            .parse()
            .unwrap();
        assert_eq!(p.z_section().unwrap().class().square(), qi(-4));
        let p: SurfacePresentation = "F(0)".parse().unwrap();
        assert_eq!(p.z_section().unwrap().class().square(), qi(0));
        // on the plane, Z is the first exceptional curve
        let p: SurfacePresentation = "P2; blowup generic; blowup onZ".parse().unwrap();
        assert_eq!(p.z_section().unwrap().class().square(), qi(-2));
    }

    #[test]
    fn fibres_through_on_z_points_are_minus_one_curves() {
        let p: SurfacePresentation = "F(1); blowup onZ; blowup onZ".parse().unwrap();
        for step in 0..2 {
            let f = p.tracked_curve(CurveTag::Fiber(step)).unwrap();
            assert_eq!(f.class().square(), qi(-1));
            assert_eq!(
                f.class().intersect(p.z_section().unwrap().class()).unwrap(),
                qi(0)
            );
        }
        assert!(p.tracked_curve(CurveTag::Fiber(2)).is_none());
    }

    #[test]
    fn plane_first_step_must_be_generic() {
        assert!(SurfacePresentation::new(BaseKind::P2, vec![BlowupStep::ON_Z]).is_err());
        assert!(SurfacePresentation::new(
            BaseKind::P2,
            vec![BlowupStep::GENERIC, BlowupStep::ON_Z]
        )
        .is_ok());
    }

    #[test]
    fn bare_plane_tracks_a_line() {
        let p = SurfacePresentation::plane();
        assert!(p.z_section().is_none());
        assert_eq!(p.tracked()[0].tag(), CurveTag::Line);
        assert!(p.is_minimal_polystable());
        assert!(SurfacePresentation::hirzebruch(0).is_minimal_polystable());
        assert!(!SurfacePresentation::hirzebruch(1).is_minimal_polystable());
    }
}
