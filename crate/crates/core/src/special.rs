//! Truncated q-Pochhammer products, the Jacobi theta function, the R-matrix
//! normalization `ρ(z)` and the unitarity scalar `𝔫(z) = ρ(z)ρ(1/z)`.

use crate::error::{guard_nonzero, Error, Result};
use crate::params::{Cx, Params};

/// Multiple Pochhammer product `(z; p₁,…,p_m)_∞ = Π (1 − z p₁^{n₁}…p_m^{n_m})`
/// truncated to multi-indices of total degree `n₁+…+n_m < order`.
pub fn qpochhammer(z: Cx, bases: &[Cx], order: usize) -> Result<Cx> {
    if bases.is_empty() {
        return Err(Error::Domain("qpochhammer needs at least one base".into()));
    }
    for b in bases {
        if b.norm().is_nan() || b.norm() >= 1.0 {
            return Err(Error::Divergent(b.norm()));
        }
    }
    Ok(pochhammer_unchecked(z, bases, order))
}

pub(crate) fn pochhammer_unchecked(z: Cx, bases: &[Cx], order: usize) -> Cx {
    match bases {
        [] => Cx::new(1.0, 0.0),
        [b] => pochhammer1(z, *b, order),
        [b, b2] => pochhammer2(z, *b, *b2, order),
        [b, rest @ ..] => {
            let mut acc = Cx::new(1.0, 0.0);
            let mut x = z;
            for n in 0..order {
                acc *= pochhammer_unchecked(x, rest, order - n);
                x *= b;
            }
            acc
        }
    }
}

#[inline]
fn pochhammer1(z: Cx, b: Cx, order: usize) -> Cx {
    let mut acc = Cx::new(1.0, 0.0);
    let mut x = z;
    for _ in 0..order {
        acc *= 1.0 - x;
        x *= b;
    }
    acc
}

#[inline]
fn pochhammer2(z: Cx, b1: Cx, b2: Cx, order: usize) -> Cx {
    let mut acc = Cx::new(1.0, 0.0);
    let mut x = z;
    for n1 in 0..order {
        acc *= pochhammer1(x, b2, order - n1);
        x *= b1;
    }
    acc
}

/// Single-base product with the base taken from `params` validation.
pub(crate) fn poch_p(z: Cx, params: &Params) -> Cx {
    pochhammer1(z, params.p(), params.truncation_order())
}

/// `Θ_p(z) = (z;p)_∞ (p/z;p)_∞ (p;p)_∞`.
pub fn theta(z: Cx, params: &Params) -> Result<Cx> {
    if z == Cx::new(0.0, 0.0) {
        return Err(Error::Domain("theta is undefined at z = 0".into()));
    }
    let p = params.p();
    Ok(poch_p(z, params) * poch_p(p / z, params) * poch_p(p, params))
}

/// Normalization `ρ(z)` of the R-matrix, a ratio of double products with
/// bases `(p, q⁴)` and the prefactor `q^{-1/2}`.
pub fn rho_norm(z: Cx, params: &Params) -> Result<Cx> {
    if z == Cx::new(0.0, 0.0) {
        return Err(Error::Domain("rho_norm is undefined at z = 0".into()));
    }
    let p = params.p();
    let q2 = params.q() * params.q();
    let q4 = q2 * q2;
    let order = params.truncation_order();
    let guard = params.singular_guard();
    let dp = |x: Cx| pochhammer2(x, p, q4, order);

    let den_a = dp(p * q2 / z);
    let den_b = dp(z);
    let den_c = dp(q4 * z);
    guard_nonzero(|| "(p q^2/z; p, q^4) in rho".into(), den_a, guard)?;
    guard_nonzero(|| "(z; p, q^4) in rho".into(), den_b, guard)?;
    guard_nonzero(|| "(q^4 z; p, q^4) in rho".into(), den_c, guard)?;

    let num_a = dp(q2 * z);
    let num = num_a * num_a * dp(p / z) * dp(p * q4 / z);
    let den = den_a * den_a * den_b * den_c;
    Ok(num / den / params.q_half())
}

/// `𝔫(z) = ρ(z)·ρ(1/z)`.
pub fn unitarity_scalar(z: Cx, params: &Params) -> Result<Cx> {
    Ok(rho_norm(z, params)? * rho_norm(z.inv(), params)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(q_half: f64, p: f64) -> Params {
        Params::new(Cx::new(q_half, 0.0), Cx::new(p, 0.0)).unwrap()
    }

    #[test]
    fn qpochhammer_zero_base_keeps_first_factor() {
        let v = qpochhammer(Cx::new(0.5, 0.0), &[Cx::new(0.0, 0.0)], 7).unwrap();
        assert_eq!(v, Cx::new(0.5, 0.0));
    }

    #[test]
    fn qpochhammer_vanishes_at_one() {
        let v = qpochhammer(Cx::new(1.0, 0.0), &[Cx::new(0.37, 0.1)], 30).unwrap();
        assert_eq!(v, Cx::new(0.0, 0.0));
    }

    #[test]
    fn qpochhammer_symmetric_in_bases() {
        let z = Cx::new(0.3, 0.0);
        let a = qpochhammer(z, &[Cx::new(0.2, 0.0), Cx::new(0.1, 0.0)], 50).unwrap();
        let b = qpochhammer(z, &[Cx::new(0.1, 0.0), Cx::new(0.2, 0.0)], 50).unwrap();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn qpochhammer_rejects_divergent_base() {
        let err = qpochhammer(Cx::new(0.3, 0.0), &[Cx::new(1.0, 0.0)], 10).unwrap_err();
        assert!(matches!(err, Error::Divergent(_)));
        assert!(qpochhammer(Cx::new(0.3, 0.0), &[], 10).is_err());
    }

    #[test]
    fn three_bases_match_nested_definition() {
        let z = Cx::new(0.4, 0.1);
        let b = [Cx::new(0.3, 0.0), Cx::new(0.2, 0.1), Cx::new(0.1, 0.0)];
        let order = 12;
        let mut expected = Cx::new(1.0, 0.0);
        for n1 in 0..order {
            for n2 in 0..order - n1 {
                for n3 in 0..order - n1 - n2 {
                    expected *= 1.0
                        - z * b[0].powi(n1 as i32) * b[1].powi(n2 as i32) * b[2].powi(n3 as i32);
                }
            }
        }
        let got = qpochhammer(z, &b, order).unwrap();
        assert!((got - expected).norm() < 1e-14);
    }

    #[test]
    fn theta_trigonometric_limit() {
        let params = params(0.6, 0.0);
        assert_eq!(theta(Cx::new(2.0, 0.0), &params).unwrap(), Cx::new(-1.0, 0.0));
        assert!(theta(Cx::new(0.0, 0.0), &params).is_err());
    }

    #[test]
    fn theta_vanishes_at_one() {
        let params = params(0.6, 0.31);
        assert_eq!(theta(Cx::new(1.0, 0.0), &params).unwrap(), Cx::new(0.0, 0.0));
    }

    #[test]
    fn rho_singular_at_one() {
        let params = params(0.6855654600401044, 0.31);
        let err = rho_norm(Cx::new(1.0, 0.0), &params).unwrap_err();
        assert!(err.is_singular());
        assert!(err.to_string().contains("singular point"));
    }

    #[test]
    fn unitarity_scalar_is_inversion_symmetric() {
        let params = params(0.6855654600401044, 0.31);
        let z = Cx::new(0.6, 0.2);
        let a = unitarity_scalar(z, &params).unwrap();
        let b = unitarity_scalar(z.inv(), &params).unwrap();
        assert!((a - b).norm() <= 1e-15 * a.norm());
    }

    fn annulus_point() -> impl Strategy<Value = Cx> {
        (0.3f64..3.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Cx::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn theta_quasi_periodic(z in annulus_point(), p in 0.02f64..0.6, qh in 0.4f64..0.85) {
            let params = params(qh, p);
            let lhs = theta(params.p() * z, &params).unwrap();
            let rhs = -theta(z, &params).unwrap() / z;
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
        }

        #[test]
        fn theta_inversion(z in annulus_point(), p in 0.02f64..0.6) {
            let params = params(0.6, p);
            let lhs = theta(z.inv(), &params).unwrap();
            let rhs = -theta(z, &params).unwrap() / z;
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
        }

        #[test]
        fn unitarity_scalar_q4_periodic(z in annulus_point(), p in 0.02f64..0.6, qh in 0.4f64..0.85) {
            let params = params(qh, p);
            let a = unitarity_scalar(z, &params);
            let b = unitarity_scalar(params.q_powi(4) * z, &params);
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert!((a - b).norm() <= 1e-10 * b.norm().max(1.0));
            }
        }
    }
}
