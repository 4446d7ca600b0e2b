//! Picard lattices of rational surfaces.
//!
//! Bases are ordered `(Z, F, E1, …, Ek)` over a Hirzebruch surface and
//! `(H, E1, …, Ek)` over the plane. Each `Ei` is the *total* transform of the
//! i-th exceptional curve, so distinct exceptionals are orthogonal and the
//! Gram matrix is the base block followed by `-1` on the diagonal. Proper
//! transforms are expressed by subtracting exceptional classes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{qi, Frac, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum BaseKind {
    P2,
    Hirzebruch(u32),
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseKind::P2 => f.write_str("P2"),
            BaseKind::Hirzebruch(n) => write!(f, "F({n})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntersectionLattice {
    base: BaseKind,
    labels: Vec<String>,
    gram: Vec<Vec<i64>>,
}

impl IntersectionLattice {
    pub fn of_base(base: BaseKind) -> Self {
        match base {
            BaseKind::P2 => IntersectionLattice {
                base,
                labels: vec!["H".into()],
                gram: vec![vec![1]],
            },
            BaseKind::Hirzebruch(n) => IntersectionLattice {
                base,
                labels: vec!["Z".into(), "F".into()],
                gram: vec![vec![-(n as i64), 1], vec![1, 0]],
            },
        }
    }

    /// Lattice of `base` blown up at `blowups` points.
    pub fn with_blowups(base: BaseKind, blowups: usize) -> Self {
        (0..blowups).fold(Self::of_base(base), |lat, _| lat.extend_by_blowup())
    }

    /// Adds one exceptional class `E_{k+1}` with self-intersection `-1`,
    /// orthogonal to the pullback of every existing basis element.
    pub fn extend_by_blowup(&self) -> Self {
        let k = self.exceptional_count();
        let mut gram: Vec<Vec<i64>> = self
            .gram
            .iter()
            .map(|row| {
                let mut row = row.clone();
                row.push(0);
                row
            })
            .collect();
        let mut last = vec![0; self.rank() + 1];
        last[self.rank()] = -1;
        gram.push(last);
        let mut labels = self.labels.clone();
        labels.push(format!("E{}", k + 1));
        IntersectionLattice {
            base: self.base,
            labels,
            gram,
        }
    }

    pub fn base(&self) -> BaseKind {
        self.base
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn base_rank(&self) -> usize {
        match self.base {
            BaseKind::P2 => 1,
            BaseKind::Hirzebruch(_) => 2,
        }
    }

    pub fn exceptional_count(&self) -> usize {
        self.rank() - self.base_rank()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Basis index of the exceptional class of blow-up step `step` (0-based).
    pub fn exceptional_index(&self, step: usize) -> Result<usize> {
        if step >= self.exceptional_count() {
            return Err(Error::Usage(format!(
                "step {} out of range for a lattice with {} exceptional classes",
                step + 1,
                self.exceptional_count()
            )));
        }
        Ok(self.base_rank() + step)
    }

    /// True if `self` is obtained from `smaller` by further blow-ups.
    pub fn extends(&self, smaller: &IntersectionLattice) -> bool {
        self.base == smaller.base && self.rank() >= smaller.rank()
    }

    /// Exact signature `(positive, negative, zero)` by congruence
    /// diagonalisation over the rationals.
    pub fn signature(&self) -> (usize, usize, usize) {
        let pivots = diagonalize(&self.gram);
        let pos = pivots.iter().filter(|p| p.is_positive()).count();
        let neg = pivots.iter().filter(|p| p.is_negative()).count();
        (pos, neg, pivots.len() - pos - neg)
    }

    pub fn determinant(&self) -> BigInt {
        let n = self.rank();
        let mut m: Vec<Vec<Q>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| qi(x)).collect())
            .collect();
        let mut det = qi(1);
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return BigInt::zero();
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            let pivot = m[col][col].clone();
            det *= &pivot;
            for r in col + 1..n {
                let f = &m[r][col] / &pivot;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
        det.to_integer()
    }
}

/// Diagonal entries of a congruence-diagonalised symmetric matrix; zero
/// pivots are reported explicitly so the list has full length.
fn diagonalize(gram: &[Vec<i64>]) -> Vec<Q> {
    let n = gram.len();
    let mut m: Vec<Vec<Q>> = gram
        .iter()
        .map(|r| r.iter().map(|&x| qi(x)).collect())
        .collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if m[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(i, j);
                for row in m.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !m[i][j].is_zero()) {
                // row_i += row_j, col_i += col_j gives a_ii = 2 a_ij != 0
                for c in 0..n {
                    let v = m[j][c].clone();
                    m[i][c] += v;
                }
                for r in 0..n {
                    let v = m[r][j].clone();
                    m[r][i] += v;
                }
            }
        }
        let pivot = m[i][i].clone();
        if !pivot.is_zero() {
            for r in i + 1..n {
                let f = &m[r][i] / &pivot;
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let delta = &f * &m[i][c];
                    m[r][c] -= delta;
                }
                for rr in 0..n {
                    let delta = &f * &m[rr][i];
                    m[rr][r] -= delta;
                }
            }
        }
        out.push(pivot);
    }
    out
}

/// A rational divisor class on a fixed lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    lattice: Arc<IntersectionLattice>,
    coeffs: Vec<Q>,
}

impl DivisorClass {
    pub fn new(lattice: &Arc<IntersectionLattice>, coeffs: Vec<Q>) -> Result<Self> {
        if coeffs.len() != lattice.rank() {
            return Err(Error::Usage(format!(
                "class has {} coefficients but the lattice has rank {}",
                coeffs.len(),
                lattice.rank()
            )));
        }
        Ok(DivisorClass {
            lattice: Arc::clone(lattice),
            coeffs,
        })
    }

    pub fn from_ints(lattice: &Arc<IntersectionLattice>, coeffs: &[i64]) -> Result<Self> {
        Self::new(lattice, coeffs.iter().map(|&c| qi(c)).collect())
    }

    pub fn zero(lattice: &Arc<IntersectionLattice>) -> Self {
        DivisorClass {
            lattice: Arc::clone(lattice),
            coeffs: vec![Q::zero(); lattice.rank()],
        }
    }

    pub fn basis(lattice: &Arc<IntersectionLattice>, index: usize) -> Self {
        let mut c = Self::zero(lattice);
        c.coeffs[index] = qi(1);
        c
    }

    /// Canonical class: `-(2Z + (n+2)F) + ΣEi` or `-3H + ΣEi`.
    pub fn canonical(lattice: &Arc<IntersectionLattice>) -> Self {
        let mut coeffs = match lattice.base {
            BaseKind::P2 => vec![qi(-3)],
            BaseKind::Hirzebruch(n) => vec![qi(-2), qi(-(n as i64) - 2)],
        };
        coeffs.extend(std::iter::repeat_n(qi(1), lattice.exceptional_count()));
        DivisorClass {
            lattice: Arc::clone(lattice),
            coeffs,
        }
    }

    /// Exceptional class of blow-up step `step` (0-based).
    pub fn exceptional(lattice: &Arc<IntersectionLattice>, step: usize) -> Result<Self> {
        Ok(Self::basis(lattice, lattice.exceptional_index(step)?))
    }

    pub fn lattice(&self) -> &Arc<IntersectionLattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Q> {
        self.coeffs
    }

    fn check_same(&self, other: &DivisorClass) -> Result<()> {
        if Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice {
            Ok(())
        } else {
            Err(Error::Usage(
                "divisor classes live on different lattices".into(),
            ))
        }
    }

    /// `coeffs(self)ᵀ · gram · coeffs(other)`.
    pub fn intersect(&self, other: &DivisorClass) -> Result<Q> {
        self.check_same(other)?;
        let mut total = Q::zero();
        for (i, row) in self.lattice.gram.iter().enumerate() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            let mut inner = Q::zero();
            for (j, &g) in row.iter().enumerate() {
                if g != 0 && !other.coeffs[j].is_zero() {
                    inner += &other.coeffs[j] * qi(g);
                }
            }
            total += &self.coeffs[i] * inner;
        }
        Ok(total)
    }

    pub fn square(&self) -> Q {
        self.intersect(self).expect("same lattice")
    }

    /// Pullback along the blow-ups that take `self.lattice` to `target`.
    pub fn pullback(&self, target: &Arc<IntersectionLattice>) -> Result<DivisorClass> {
        if !target.extends(&self.lattice) {
            return Err(Error::Usage(
                "pullback target is not a blow-up of the source lattice".into(),
            ));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(target.rank(), Q::zero());
        DivisorClass::new(target, coeffs)
    }

    pub fn scale(&self, c: &Q) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn try_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check_same(other)?;
        Ok(DivisorClass {
            lattice: Arc::clone(&self.lattice),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.try_add(&-other)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }
}

/// Panics on lattice mismatch; use [`DivisorClass::try_add`] when the
/// operands come from untrusted input.
impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.try_add(rhs).expect("lattice mismatch")
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.try_sub(rhs).expect("lattice mismatch")
    }
}

impl Mul<&DivisorClass> for &Q {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, label) in self.coeffs.iter().zip(&self.lattice.labels) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            if a == qi(1) {
                f.write_str(label)?;
            } else if a.is_integer() {
                write!(f, "{}{}", a.numer(), label)?;
            } else {
                write!(f, "({}){}", Frac(&a), label)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "step", rename_all = "snake_case")]
pub enum CurveTag {
    /// The negative section `Z` (or its proper transform).
    ZSection,
    /// A general fibre of the ruling.
    GenericFiber,
    /// Proper transform of the fibre through the point of an on-`Z` step.
    Fiber(usize),
    /// Exceptional curve of a step.
    Exceptional(usize),
    /// A general line on the plane.
    Line,
}

impl fmt::Display for CurveTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveTag::ZSection => f.write_str("Z"),
            CurveTag::GenericFiber => f.write_str("F"),
            CurveTag::Fiber(s) => write!(f, "F_{}", s + 1),
            CurveTag::Exceptional(s) => write!(f, "E{}", s + 1),
            CurveTag::Line => f.write_str("H"),
        }
    }
}

/// A smooth curve class with its genus; adjunction is enforced on
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveClassRecord {
    class: DivisorClass,
    genus: u32,
    tag: CurveTag,
}

impl CurveClassRecord {
    pub fn new(class: DivisorClass, genus: u32, tag: CurveTag) -> Result<Self> {
        let k = DivisorClass::canonical(class.lattice());
        let lhs = qi(2 * genus as i64 - 2);
        let rhs = class.square() + k.intersect(&class)?;
        if lhs != rhs {
            return Err(Error::Invariant(format!(
                "adjunction fails for {tag} = {class}: 2g-2 = {} but C^2 + K.C = {}",
                Frac(&lhs),
                Frac(&rhs)
            )));
        }
        Ok(CurveClassRecord { class, genus, tag })
    }

    pub fn class(&self) -> &DivisorClass {
        &self.class
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn tag(&self) -> CurveTag {
        self.tag
    }

    /// Proper transform under the last blow-up of `blown_up`: pull back and
    /// subtract `multiplicity` copies of the new exceptional class.
    pub fn proper_transform(
        &self,
        blown_up: &Arc<IntersectionLattice>,
        multiplicity: u8,
    ) -> Result<Self> {
        if multiplicity > 1 {
            return Err(Error::Usage(
                "only smooth points (multiplicity 0 or 1) are supported".into(),
            ));
        }
        if blown_up.rank() != self.class.lattice().rank() + 1
            || !blown_up.extends(self.class.lattice())
        {
            return Err(Error::Usage(
                "proper transform needs the one-step blow-up of the curve's lattice".into(),
            ));
        }
        let mut class = self.class.pullback(blown_up)?;
        if multiplicity == 1 {
            let e = DivisorClass::basis(blown_up, blown_up.rank() - 1);
            class = &class - &e;
        }
        Self::new(class, self.genus, self.tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn lat(base: BaseKind, k: usize) -> Arc<IntersectionLattice> {
        Arc::new(IntersectionLattice::with_blowups(base, k))
    }

    #[test]
    fn intersect_on_f1() {
        let l = lat(BaseKind::Hirzebruch(1), 0);
        let a = DivisorClass::from_ints(&l, &[2, 3]).unwrap();
        let b = DivisorClass::from_ints(&l, &[1, 2]).unwrap();
        // (2Z+3F)(Z+2F) = 2(-1) + 4 + 3 + 0
        assert_eq!(a.intersect(&b).unwrap(), qi(5));
    }

    #[test]
    fn exceptional_self_intersection() {
        let l = lat(BaseKind::Hirzebruch(3), 4);
        for s in 0..4 {
            let e = DivisorClass::exceptional(&l, s).unwrap();
            assert_eq!(e.square(), qi(-1));
        }
        let l = lat(BaseKind::P2, 2);
        assert_eq!(DivisorClass::exceptional(&l, 1).unwrap().square(), qi(-1));
    }

    #[test]
    fn quadric_section_is_isotropic() {
        let l = lat(BaseKind::Hirzebruch(0), 0);
        let z = DivisorClass::basis(&l, 0);
        assert_eq!(z.square(), qi(0));
    }

    #[test]
    fn lattice_mismatch_is_usage_error() {
        let a = DivisorClass::basis(&lat(BaseKind::Hirzebruch(1), 0), 0);
        let b = DivisorClass::basis(&lat(BaseKind::Hirzebruch(2), 0), 0);
        assert!(matches!(a.intersect(&b), Err(Error::Usage(_))));
        let c = DivisorClass::basis(&lat(BaseKind::Hirzebruch(1), 1), 0);
        assert!(matches!(a.intersect(&c), Err(Error::Usage(_))));
    }

    #[test]
    fn canonical_classes() {
        let f2 = lat(BaseKind::Hirzebruch(2), 0);
        assert_eq!(
            DivisorClass::canonical(&f2),
            DivisorClass::from_ints(&f2, &[-2, -4]).unwrap()
        );
        let f1 = lat(BaseKind::Hirzebruch(1), 1);
        let k = DivisorClass::canonical(&f1);
        assert_eq!(k, DivisorClass::from_ints(&f1, &[-2, -3, 1]).unwrap());
        // adjunction on E1: -2 = -1 + K.E1
        let e = DivisorClass::exceptional(&f1, 0).unwrap();
        assert_eq!(e.square() + k.intersect(&e).unwrap(), qi(-2));
        let p2 = lat(BaseKind::P2, 0);
        assert_eq!(
            DivisorClass::canonical(&p2),
            DivisorClass::from_ints(&p2, &[-3]).unwrap()
        );
        // K^2 = 8 on every Hirzebruch surface, minus one per blow-up
        for n in 0..6 {
            for k in 0..4 {
                let l = lat(BaseKind::Hirzebruch(n), k);
                assert_eq!(DivisorClass::canonical(&l).square(), qi(8 - k as i64));
            }
        }
        assert_eq!(
            DivisorClass::canonical(&lat(BaseKind::P2, 0)).square(),
            qi(9)
        );
    }

    #[test]
    fn blowup_extension() {
        let f1 = IntersectionLattice::of_base(BaseKind::Hirzebruch(1));
        let ext = f1.extend_by_blowup();
        assert_eq!(ext.rank(), 3);
        assert_eq!(ext.gram(), &[vec![-1, 1, 0], vec![1, 0, 0], vec![0, 0, -1]]);
        assert_eq!(ext.labels(), &["Z", "F", "E1"]);
        assert_eq!(ext.determinant(), -f1.determinant());
        assert_eq!(f1.determinant(), BigInt::from(-1));
        assert_eq!(ext.signature(), (1, 2, 0));
    }

    #[test]
    fn signature_handles_zero_diagonal() {
        // F0 has gram [[0,1],[1,0]]
        let f0 = IntersectionLattice::with_blowups(BaseKind::Hirzebruch(0), 3);
        assert_eq!(f0.signature(), (1, 4, 0));
        assert_eq!(
            IntersectionLattice::of_base(BaseKind::P2).signature(),
            (1, 0, 0)
        );
    }

    #[test]
    fn proper_transforms_of_z() {
        let n = 3u32;
        let base = lat(BaseKind::Hirzebruch(n), 0);
        let z =
            CurveClassRecord::new(DivisorClass::basis(&base, 0), 0, CurveTag::ZSection).unwrap();
        let up = Arc::new(base.extend_by_blowup());
        let on = z.proper_transform(&up, 1).unwrap();
        assert_eq!(on.class().square(), qi(-(n as i64) - 1));
        let off = z.proper_transform(&up, 0).unwrap();
        assert_eq!(off.class().square(), qi(-(n as i64)));
        assert!(z.proper_transform(&up, 2).is_err());

        let f =
            CurveClassRecord::new(DivisorClass::basis(&base, 1), 0, CurveTag::Fiber(0)).unwrap();
        let ft = f.proper_transform(&up, 1).unwrap();
        assert_eq!(ft.class().square(), f.class().square() - qi(1));
    }

    #[test]
    fn adjunction_rejects_wrong_genus() {
        let l = lat(BaseKind::Hirzebruch(1), 0);
        let z = DivisorClass::basis(&l, 0);
        assert!(matches!(
            CurveClassRecord::new(z, 1, CurveTag::ZSection),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn display() {
        let l = lat(BaseKind::Hirzebruch(1), 1);
        let c = DivisorClass::new(&l, vec![qi(1), qi(2), q(-1, 4)]).unwrap();
        assert_eq!(c.to_string(), "Z + 2F - (1/4)E1");
    }
}
