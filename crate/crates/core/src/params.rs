//! Global numeric context shared by every evaluation.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Cx = Complex64;

/// Numeric context: the deformation parameter (through its chosen square
/// root), the elliptic nome, and the error-control knobs.
///
/// `q` is always derived as `q_half²`, so every half-integer power of `q`
/// is single valued. Powers `q^x` for complex `x` are taken along the branch
/// `exp(2x·ln q_half)` with the principal logarithm of `q_half`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    q_half: Cx,
    q: Cx,
    p: Cx,
    truncation_order: usize,
    tolerance: f64,
    singular_guard: f64,
    #[serde(skip)]
    ln_q_half: Cx,
}

impl Params {
    pub const DEFAULT_TOLERANCE: f64 = 1e-9;
    pub const DEFAULT_SINGULAR_GUARD: f64 = 1e-6;
    /// Cap applied by [`Params::auto_truncation_order`].
    pub const MAX_AUTO_ORDER: usize = 200;

    /// Builds a context with auto-selected truncation order and default
    /// tolerance and singular guard.
    pub fn new(q_half: Cx, p: Cx) -> Result<Self> {
        let order = Self::auto_truncation_order(q_half, p);
        Self::with_settings(
            q_half,
            p,
            order,
            Self::DEFAULT_TOLERANCE,
            Self::DEFAULT_SINGULAR_GUARD,
        )
    }

    pub fn with_settings(
        q_half: Cx,
        p: Cx,
        truncation_order: usize,
        tolerance: f64,
        singular_guard: f64,
    ) -> Result<Self> {
        let params = Params {
            q_half,
            q: q_half * q_half,
            p,
            truncation_order,
            tolerance,
            singular_guard,
            ln_q_half: q_half.ln(),
        };
        params.validate()?;
        Ok(params)
    }

    /// Smallest `N` with `max(|p|, |q|⁴)^N < 1e-18`, capped at
    /// [`Params::MAX_AUTO_ORDER`].
    pub fn auto_truncation_order(q_half: Cx, p: Cx) -> usize {
        let ratio = p.norm().max(q_half.norm().powi(8));
        if ratio.is_nan() || ratio == 0.0 {
            return 1;
        }
        if ratio >= 1.0 {
            return Self::MAX_AUTO_ORDER;
        }
        let mut n = 1usize;
        let mut acc = ratio;
        while acc >= 1e-18 && n < Self::MAX_AUTO_ORDER {
            acc *= ratio;
            n += 1;
        }
        n
    }

    fn validate(&self) -> Result<()> {
        let q_half_norm = self.q_half.norm();
        if !q_half_norm.is_finite() || q_half_norm == 0.0 {
            return Err(Error::InvalidParams("q_half must be finite and non-zero".into()));
        }
        if self.p.norm().is_nan() || self.p.norm() >= 1.0 {
            return Err(Error::InvalidParams("|p| must be < 1".into()));
        }
        if self.q.norm().is_nan() || self.q.norm().powi(4) >= 1.0 {
            return Err(Error::InvalidParams("|q|^4 must be < 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidParams("tolerance must be > 0".into()));
        }
        if self.singular_guard.is_nan() || self.singular_guard <= 0.0 {
            return Err(Error::InvalidParams("singular_guard must be > 0".into()));
        }
        if self.truncation_order == 0 {
            return Err(Error::InvalidParams("truncation_order must be positive".into()));
        }
        let tail = self
            .convergence_ratio()
            .powi(self.truncation_order.min(i32::MAX as usize) as i32);
        if tail > self.tolerance * 1e-3 {
            return Err(Error::InvalidParams(format!(
                "truncation_order {} leaves tail {tail:e} above tolerance*1e-3 = {:e}",
                self.truncation_order,
                self.tolerance * 1e-3
            )));
        }
        Ok(())
    }

    pub fn with_truncation_order(self, order: usize) -> Result<Self> {
        Self::with_settings(self.q_half, self.p, order, self.tolerance, self.singular_guard)
    }

    /// Same context with another nome, keeping the truncation order.
    pub fn with_nome(self, p: Cx) -> Result<Self> {
        Self::with_settings(self.q_half, p, self.truncation_order, self.tolerance, self.singular_guard)
    }

    pub fn with_tolerance(self, tolerance: f64) -> Result<Self> {
        Self::with_settings(self.q_half, self.p, self.truncation_order, tolerance, self.singular_guard)
    }

    pub fn with_singular_guard(self, guard: f64) -> Result<Self> {
        Self::with_settings(self.q_half, self.p, self.truncation_order, self.tolerance, guard)
    }

    pub fn q_half(&self) -> Cx {
        self.q_half
    }

    pub fn q(&self) -> Cx {
        self.q
    }

    pub fn p(&self) -> Cx {
        self.p
    }

    pub fn truncation_order(&self) -> usize {
        self.truncation_order
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn singular_guard(&self) -> f64 {
        self.singular_guard
    }

    /// `max(|p|, |q|⁴)`, the geometric rate of every truncated product.
    pub fn convergence_ratio(&self) -> f64 {
        self.p.norm().max(self.q.norm().powi(4))
    }

    /// `q^x` on the branch fixed by `q_half`.
    pub fn q_pow(&self, x: Cx) -> Cx {
        (self.ln_q_half * x * 2.0).exp()
    }

    /// Integer power of `q`; exact for every branch choice.
    pub fn q_powi(&self, k: i32) -> Cx {
        self.q.powi(k)
    }

    /// Dynamical parameter `w = q^{2s}`.
    pub fn dyn_w(&self, s: Cx) -> Cx {
        self.q_pow(s * 2.0)
    }

    /// `w^{-1/2} = q^{-s}` on the s-branch.
    pub fn dyn_w_inv_sqrt(&self, s: Cx) -> Cx {
        self.q_pow(-s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_domain() {
        let err = Params::new(Cx::new(0.6, 0.0), Cx::new(1.5, 0.0)).unwrap_err();
        assert!(err.to_string().contains("|p| must be < 1"));
        assert!(Params::new(Cx::new(1.1, 0.0), Cx::new(0.3, 0.0)).is_err());
        assert!(Params::new(Cx::new(0.0, 0.0), Cx::new(0.3, 0.0)).is_err());
    }

    #[test]
    fn auto_order_meets_tail_bound() {
        let q_half = Cx::new(0.8, 0.0);
        let p = Cx::new(0.5, 0.0);
        let params = Params::new(q_half, p).unwrap();
        let n = params.truncation_order();
        assert!(0.5f64.powi(n as i32) < 1e-18);
        assert!(0.5f64.powi(n as i32 - 1) >= 1e-18);
    }

    #[test]
    fn p_zero_is_admitted() {
        let params = Params::new(Cx::new(0.6, 0.0), Cx::new(0.0, 0.0)).unwrap();
        assert!(params.truncation_order() >= 1);
    }

    #[test]
    fn too_short_truncation_is_rejected() {
        let params = Params::new(Cx::new(0.6, 0.0), Cx::new(0.4, 0.0)).unwrap();
        assert!(params.with_truncation_order(3).is_err());
    }

    #[test]
    fn branch_is_consistent_under_unit_shift() {
        let params = Params::new(Cx::new(0.5, 0.2), Cx::new(0.3, 0.0)).unwrap();
        let s = Cx::new(0.37, 0.11);
        let ratio = params.dyn_w(s + 1.0) / params.dyn_w(s);
        assert!((ratio - params.q() * params.q()).norm() < 1e-14);
        let half = params.dyn_w_inv_sqrt(s) * params.dyn_w_inv_sqrt(s) * params.dyn_w(s);
        assert!((half - 1.0).norm() < 1e-14);
    }
}
