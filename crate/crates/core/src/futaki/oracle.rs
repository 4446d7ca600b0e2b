//! Intersection numbers on the total space `𝒳 = Bl_{Z×{0}}(S × P¹)` of the
//! slope test configuration, and `DF` computed from them directly.
//!
//! Classes are combinations of `M` (pullback of `L`), `N` (pullback of
//! `K_S`) and the exceptional divisor `E`. Triple products with no `E` or a
//! single `E` vanish (two pulled-back surface classes meet `E` in a finite
//! set of fibres that the third pulls back away from), and
//!
//! ```text
//! M·E² = −L·Z    N·E² = −K_S·Z    E³ = −Z²
//! ```

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{q, qi, Frac, Q};

use super::SlopeInput;

/// `m·M + n·N + e·E` on the total space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreefoldClass {
    pub m: Q,
    pub n: Q,
    pub e: Q,
}

impl ThreefoldClass {
    pub fn new(m: Q, n: Q, e: Q) -> Self {
        ThreefoldClass { m, n, e }
    }

    fn coeffs(&self) -> [&Q; 3] {
        [&self.m, &self.n, &self.e]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestConfigModel {
    pub input: SlopeInput,
    /// `K_S·Z`, recovered from the genus by adjunction.
    pub k_dot_z: Q,
}

impl TestConfigModel {
    pub fn new(input: SlopeInput) -> Self {
        let k_dot_z = qi(2 * input.genus as i64 - 2) - &input.z_sq;
        TestConfigModel { input, k_dot_z }
    }

    /// Triple product of generators (0 = M, 1 = N, 2 = E).
    fn generator_triple(&self, i: usize, j: usize, k: usize) -> Q {
        let idx = [i, j, k];
        match idx.iter().filter(|&&g| g == 2).count() {
            3 => -&self.input.z_sq,
            2 => match idx.iter().find(|&&g| g != 2) {
                Some(0) => -&self.input.l_dot_z,
                _ => -&self.k_dot_z,
            },
            _ => Q::zero(),
        }
    }

    pub fn triple(&self, a: &ThreefoldClass, b: &ThreefoldClass, c: &ThreefoldClass) -> Q {
        let mut total = Q::zero();
        for (i, x) in a.coeffs().into_iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs().into_iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                for (k, z) in c.coeffs().into_iter().enumerate() {
                    if !z.is_zero() {
                        total += x * y * z * self.generator_triple(i, j, k);
                    }
                }
            }
        }
        total
    }

    /// `ℒ_λ = M − λE`.
    pub fn polarization(&self, lambda: &Q) -> ThreefoldClass {
        ThreefoldClass::new(qi(1), Q::zero(), -lambda)
    }

    /// `K_𝒳 − p*K_{P¹} = N + E`.
    pub fn relative_canonical(&self) -> ThreefoldClass {
        ThreefoldClass::new(Q::zero(), qi(1), qi(1))
    }
}

/// `DF = (2/3)·ν·ℒ³ + ℒ²·K_rel` (surface case, exponent one), for
/// `0 ≤ λ ≤ sesh`; `λ = 0` is the trivial configuration.
pub fn df_total_space_oracle(tc: &TestConfigModel, lambda: &Q) -> Result<Q> {
    if lambda.is_negative() || *lambda > tc.input.sesh {
        return Err(Error::Domain(format!(
            "lambda = {} lies outside [0, {}]",
            Frac(lambda),
            Frac(&tc.input.sesh)
        )));
    }
    let l = tc.polarization(lambda);
    let cube = tc.triple(&l, &l, &l);
    let canonical = tc.triple(&l, &l, &tc.relative_canonical());
    Ok(q(2, 3) * &tc.input.nu * cube + canonical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::futaki::df_slope;

    fn f1() -> TestConfigModel {
        TestConfigModel::new(SlopeInput::hirzebruch(1, &qi(1), &qi(2)).unwrap())
    }

    #[test]
    fn cube_of_polarization() {
        let tc = f1();
        let l = tc.polarization(&qi(1));
        assert_eq!(tc.triple(&l, &l, &l), qi(-4));
    }

    #[test]
    fn agrees_with_closed_form() {
        let tc = f1();
        assert_eq!(df_total_space_oracle(&tc, &q(9, 10)).unwrap(), q(-9, 100));
        for k in 1..=20 {
            let x = q(k, 20);
            assert_eq!(
                df_total_space_oracle(&tc, &x).unwrap(),
                df_slope(&tc.input, &x).unwrap()
            );
        }
    }

    #[test]
    fn trivial_configuration() {
        assert_eq!(df_total_space_oracle(&f1(), &qi(0)).unwrap(), qi(0));
        assert!(df_total_space_oracle(&f1(), &q(-1, 3)).is_err());
        assert!(df_total_space_oracle(&f1(), &qi(2)).is_err());
    }

    #[test]
    fn triple_is_symmetric() {
        let tc = f1();
        let a = ThreefoldClass::new(qi(1), qi(2), qi(-1));
        let b = ThreefoldClass::new(q(1, 2), qi(0), qi(3));
        let c = ThreefoldClass::new(qi(-2), qi(1), qi(1));
        let abc = tc.triple(&a, &b, &c);
        assert_eq!(abc, tc.triple(&b, &c, &a));
        assert_eq!(abc, tc.triple(&c, &b, &a));
    }
}
