//! Dense univariate polynomials over the rationals with Sturm-sequence root
//! counting. Everything is exact; bisection points are dyadic refinements of
//! the given bounds.

use num_traits::{Signed, Zero};

use crate::rational::{qi, Q};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> &Q {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * qi(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        let lead = divisor.lead();
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.lead().clone();
        Poly::new(a.coeffs.iter().map(|c| c / &lead).collect())
    }

    /// Same roots, each simple.
    pub fn square_free(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    pub fn sturm_chain(&self) -> SturmChain {
        let mut chain = vec![self.clone()];
        if self.is_zero() {
            return SturmChain { chain };
        }
        let mut next = self.derivative();
        while !next.is_zero() {
            let (_, r) = chain.last().unwrap().div_rem(&next);
            chain.push(next);
            next = Poly::new(r.coeffs.iter().map(|c| -c).collect());
        }
        SturmChain { chain }
    }
}

pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    /// Sign changes of the chain at `x`, zeros skipped.
    pub fn variations(&self, x: &Q) -> usize {
        let mut last: Option<bool> = None;
        let mut count = 0;
        for p in &self.chain {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let pos = v.is_positive();
            if last.is_some_and(|l| l != pos) {
                count += 1;
            }
            last = Some(pos);
        }
        count
    }

    /// Distinct roots in the half-open interval `(a, b]`. Valid for every
    /// `a < b` when the leading polynomial is square-free.
    pub fn count_half_open(&self, a: &Q, b: &Q) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }

    pub fn count_open(&self, a: &Q, b: &Q) -> usize {
        let at_b = usize::from(self.chain[0].eval(b).is_zero());
        self.count_half_open(a, b) - at_b
    }
}

/// Rational points meeting every connected component of `(lo, hi)` minus the
/// real roots of `p`, so the sign of `p` on the open interval is fully
/// described by its values at the returned points.
pub fn component_samples(p: &Poly, lo: &Q, hi: &Q) -> Vec<Q> {
    let mut out = Vec::new();
    if lo >= hi {
        return out;
    }
    if p.degree().unwrap_or(0) == 0 {
        out.push((lo + hi) / qi(2));
        return out;
    }
    let sqf = p.square_free();
    let chain = sqf.sturm_chain();
    sample_rec(&sqf, &chain, lo.clone(), hi.clone(), &mut out);
    out.sort();
    out.dedup();
    out
}

fn sample_rec(p: &Poly, chain: &SturmChain, lo: Q, hi: Q, out: &mut Vec<Q>) {
    let two = qi(2);
    let roots = chain.count_open(&lo, &hi);
    let mid = (&lo + &hi) / &two;
    match roots {
        0 => out.push(mid),
        1 => {
            // walk the single root r until points strictly on both sides of
            // it are found; terminates because r is interior
            let (mut l, mut h) = (lo.clone(), hi.clone());
            loop {
                let m = (&l + &h) / &two;
                if p.eval(&m).is_zero() {
                    out.push((&l + &m) / &two);
                    out.push((&m + &h) / &two);
                    return;
                }
                if chain.count_open(&l, &m) == 1 {
                    h = m;
                } else {
                    l = m;
                }
                if l != lo && h != hi {
                    out.push(l);
                    out.push(h);
                    return;
                }
            }
        }
        _ => {
            if !p.eval(&mid).is_zero() {
                out.push(mid.clone());
            }
            sample_rec(p, chain, lo, mid.clone(), out);
            sample_rec(p, chain, mid, hi, out);
        }
    }
}

/// Isolating intervals `[lo_i, hi_i]` of width at most `width`, one per
/// distinct root of `p` in the open interval `(lo, hi)`. Exact rational roots
/// hit during bisection come back as degenerate intervals.
pub fn isolate_roots(p: &Poly, lo: &Q, hi: &Q, width: &Q) -> Vec<(Q, Q)> {
    let mut out = Vec::new();
    if lo >= hi || p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let sqf = p.square_free();
    let chain = sqf.sturm_chain();
    let mut stack = vec![(lo.clone(), hi.clone())];
    let two = qi(2);
    while let Some((l, h)) = stack.pop() {
        let n = chain.count_open(&l, &h);
        if n == 0 {
            continue;
        }
        let m = (&l + &h) / &two;
        if n == 1 && &h - &l <= *width {
            out.push((l, h));
            continue;
        }
        if sqf.eval(&m).is_zero() {
            out.push((m.clone(), m.clone()));
        }
        stack.push((m.clone(), h));
        stack.push((l, m));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn poly(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| qi(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let p = poly(&[6, -7, 0, 1]);
        let (quot, rem) = p.div_rem(&poly(&[-1, 1]));
        assert!(rem.is_zero());
        assert_eq!(quot, poly(&[-6, 1, 1]));
        let g = p.gcd(&poly(&[-2, 1]));
        assert_eq!(g, poly(&[-2, 1]));
    }

    #[test]
    fn square_free_part() {
        // (x-1)^2 (x+1)
        let p = poly(&[1, -1, -1, 1]);
        assert_eq!(p.square_free(), poly(&[-1, 0, 1]));
    }

    #[test]
    fn sturm_counts_match_known_roots() {
        let p = poly(&[6, -7, 0, 1]).square_free();
        let s = p.sturm_chain();
        assert_eq!(s.count_half_open(&qi(-10), &qi(10)), 3);
        assert_eq!(s.count_half_open(&qi(0), &qi(2)), 2);
        assert_eq!(s.count_open(&qi(0), &qi(2)), 1);
        assert_eq!(s.count_half_open(&qi(1), &qi(2)), 1);
        assert_eq!(s.count_open(&qi(1), &qi(2)), 0);
    }

    #[test]
    fn isolation_of_sqrt_two() {
        let p = poly(&[-2, 0, 1]);
        let roots = isolate_roots(&p, &qi(-4), &qi(4), &q(1, 16));
        assert_eq!(roots.len(), 2);
        for (l, h) in &roots {
            assert!(h - l <= q(1, 16));
            assert!(p.eval(l) * p.eval(h) < qi(0));
        }
    }

    #[test]
    fn isolation_hits_rational_roots() {
        // roots 0 and 1 inside (-1, 3); bisection lands on 1 exactly
        let p = poly(&[0, -1, 1]);
        let roots = isolate_roots(&p, &qi(-1), &qi(3), &q(1, 8));
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().any(|(l, h)| l == h && *l == qi(1)));
    }

    #[test]
    fn samples_cover_every_sign_component() {
        // x (x - 1/3)(x - 1/2) on (0, 1): components (0,1/3), (1/3,1/2), (1/2,1)
        let p = Poly::new(vec![qi(0), q(1, 6), q(-5, 6), qi(1)]);
        let pts = component_samples(&p, &qi(0), &qi(1));
        let signs: Vec<bool> = pts.iter().map(|x| p.eval(x).is_positive()).collect();
        assert!(pts.iter().any(|x| *x > qi(0) && *x < q(1, 3)));
        assert!(pts.iter().any(|x| *x > q(1, 3) && *x < q(1, 2)));
        assert!(pts.iter().any(|x| *x > q(1, 2) && *x < qi(1)));
        assert!(signs.contains(&true) && signs.contains(&false));
        assert!(pts.iter().all(|x| !p.eval(x).is_zero()));
    }

    #[test]
    fn samples_with_double_root() {
        // (x - 1/2)^2 touches zero without changing sign
        let p = Poly::new(vec![q(1, 4), qi(-1), qi(1)]);
        let pts = component_samples(&p, &qi(0), &qi(1));
        assert!(pts.iter().all(|x| !p.eval(x).is_negative()));
        assert!(pts.iter().any(|x| *x < q(1, 2)));
        assert!(pts.iter().any(|x| *x > q(1, 2)));
    }

    #[test]
    fn root_near_endpoint() {
        // root at 1/1000 inside (0, 1)
        let p = Poly::new(vec![q(-1, 1000), qi(1)]);
        let pts = component_samples(&p, &qi(0), &qi(1));
        assert!(pts.iter().any(|x| *x < q(1, 1000)));
        assert!(pts.iter().any(|x| *x > q(1, 1000)));
    }
}
