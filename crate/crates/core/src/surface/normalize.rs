//! Elementary transformations and the normal form used by the destabilizer:
//! a Hirzebruch base `F(m)`, `m >= 1`, with no blow-up point on `Z`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{BaseKind, DivisorClass};
use crate::rational::{qi, Q};

use super::{BlowupStep, Locus, SurfacePresentation};

/// Integer change of coordinates between two presentations of the same
/// surface: `new = forward · old`, `old = inverse · new`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    forward: Vec<Vec<i64>>,
    inverse: Vec<Vec<i64>>,
}

impl BasisChange {
    pub fn identity(rank: usize) -> Self {
        let id: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        BasisChange {
            forward: id.clone(),
            inverse: id,
        }
    }

    pub fn forward(&self) -> &[Vec<i64>] {
        &self.forward
    }

    pub fn inverse(&self) -> &[Vec<i64>] {
        &self.inverse
    }

    /// `other ∘ self`.
    fn then(&self, other: &BasisChange) -> BasisChange {
        BasisChange {
            forward: matmul(&other.forward, &self.forward),
            inverse: matmul(&self.inverse, &other.inverse),
        }
    }

    pub fn apply(&self, coeffs: &[Q]) -> Vec<Q> {
        apply(&self.forward, coeffs)
    }

    pub fn apply_inverse(&self, coeffs: &[Q]) -> Vec<Q> {
        apply(&self.inverse, coeffs)
    }
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b[0].len();
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

fn apply(m: &[Vec<i64>], coeffs: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(coeffs)
                .filter(|(&t, _)| t != 0)
                .fold(Q::zero(), |acc, (&t, c)| acc + c * qi(t))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rewrite {
    /// `P2` blown up at its first point is `F(1)` with `Z = E1`.
    PlaneToF1,
    /// On `F(0)` every point lies on a ruling line; take that line as `Z`.
    QuadricRuling { step: usize },
    /// Blow up an on-`Z` point of `F(n)` and contract the fibre through it,
    /// landing in `F(n+1)` with the point now off `Z`.
    Elementary { step: usize, from: u32 },
}

#[derive(Clone, Debug)]
pub struct Normalization {
    pub presentation: SurfacePresentation,
    pub transition: BasisChange,
    pub rewrites: Vec<Rewrite>,
    /// Set only for bare `P2` and bare `F(0)`, which are returned unchanged.
    pub minimal_polystable: bool,
}

impl SurfacePresentation {
    /// Rewrite the on-`Z` step `step` via the elementary transformation
    /// `F(n) <- Y -> F(n+1)`.
    ///
    /// In the new basis `Z' = Z - Ei`, `F' = F` and `Ei' = F - Ei`, the
    /// proper transform of the fibre through the point.
    pub fn elementary_transform(&self, step: usize) -> Result<(SurfacePresentation, BasisChange)> {
        let n = self.hirzebruch_index().ok_or_else(|| {
            Error::Usage("elementary transformations need a Hirzebruch base".into())
        })?;
        match self.steps.get(step) {
            Some(s) if s.locus == Locus::OnZ => {}
            Some(_) => {
                return Err(Error::Usage(format!(
                    "step {} is not an on-Z blow-up",
                    step + 1
                )))
            }
            None => {
                return Err(Error::Usage(format!(
                    "step {} out of range ({} steps)",
                    step + 1,
                    self.steps.len()
                )))
            }
        }
        let mut steps = self.steps.clone();
        steps[step] = BlowupStep::GENERIC;
        let next = SurfacePresentation::new(BaseKind::Hirzebruch(n + 1), steps)?;

        let rank = self.picard_rank();
        let e = 2 + step;
        let mut change = BasisChange::identity(rank);
        // (z, f, e) -> (z, z + f + e, -z - e)
        change.forward[1][0] = 1;
        change.forward[1][e] = 1;
        change.forward[e][0] = -1;
        change.forward[e][e] = -1;
        // (z', f', e') -> (z', f' + e', -z' - e')
        change.inverse[1][e] = 1;
        change.inverse[e][0] = -1;
        change.inverse[e][e] = -1;
        Ok((next, change))
    }

    /// Rewrite `P2; blowup generic; rest` as `F(1); rest`.
    fn plane_to_f1(&self) -> Result<(SurfacePresentation, BasisChange)> {
        if self.base != BaseKind::P2 || self.steps.is_empty() {
            return Err(Error::Usage("plane rewrite needs a blown-up P2".into()));
        }
        let next = SurfacePresentation::new(BaseKind::Hirzebruch(1), self.steps[1..].to_vec())?;
        let rank = self.picard_rank();
        let mut change = BasisChange::identity(rank);
        // (h, e1) -> (h + e1, h);  (z, f) -> (f, z - f)
        change.forward[0] = unit(rank, &[(0, 1), (1, 1)]);
        change.forward[1] = unit(rank, &[(0, 1)]);
        change.inverse[0] = unit(rank, &[(1, 1)]);
        change.inverse[1] = unit(rank, &[(0, 1), (1, -1)]);
        Ok((next, change))
    }

    /// Normal form: a Hirzebruch base of index at least one with every step
    /// off `Z`. Total; bare `P2` and `F(0)` come back unchanged and flagged.
    pub fn normalize(&self) -> Normalization {
        let mut current = self.clone();
        let mut transition = BasisChange::identity(self.picard_rank());
        let mut rewrites = Vec::new();
        if self.is_minimal_polystable() {
            return Normalization {
                presentation: current,
                transition,
                rewrites,
                minimal_polystable: true,
            };
        }
        loop {
            let (next, change, rewrite) = match current.base {
                BaseKind::P2 => {
                    let (next, change) = current.plane_to_f1().expect("non-bare plane");
                    (next, change, Rewrite::PlaneToF1)
                }
                BaseKind::Hirzebruch(0) => {
                    let step = current
                        .steps
                        .iter()
                        .position(|s| s.locus == Locus::OnZ)
                        .unwrap_or(0);
                    if current.steps[step].locus == Locus::OffZ {
                        // choose the ruling line through this point as Z
                        let mut steps = current.steps.clone();
                        steps[step] = BlowupStep::ON_Z;
                        current = SurfacePresentation::new(BaseKind::Hirzebruch(0), steps)
                            .expect("retagged quadric");
                        rewrites.push(Rewrite::QuadricRuling { step });
                    }
                    let (next, change) = current.elementary_transform(step).expect("on-Z step");
                    (next, change, Rewrite::Elementary { step, from: 0 })
                }
                BaseKind::Hirzebruch(n) => {
                    match current.steps.iter().position(|s| s.locus == Locus::OnZ) {
                        None => break,
                        Some(step) => {
                            let (next, change) =
                                current.elementary_transform(step).expect("on-Z step");
                            (next, change, Rewrite::Elementary { step, from: n })
                        }
                    }
                }
            };
            transition = transition.then(&change);
            rewrites.push(rewrite);
            current = next;
        }
        Normalization {
            presentation: current,
            transition,
            rewrites,
            minimal_polystable: false,
        }
    }

    /// Express a class given in this presentation's basis in the basis of
    /// `normalization.presentation`.
    pub fn transport(
        &self,
        class: &DivisorClass,
        normalization: &Normalization,
    ) -> Result<DivisorClass> {
        if class.lattice().as_ref() != self.lattice().as_ref() {
            return Err(Error::Usage(
                "class does not live on this presentation".into(),
            ));
        }
        DivisorClass::new(
            normalization.presentation.lattice(),
            normalization.transition.apply(class.coeffs()),
        )
    }
}

fn unit(rank: usize, entries: &[(usize, i64)]) -> Vec<i64> {
    let mut row = vec![0; rank];
    for &(i, v) in entries {
        row[i] = v;
    }
    row
}
