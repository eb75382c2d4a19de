use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::params::Cx;

type ScalarFn = dyn Fn(Cx) -> Result<Cx> + Send + Sync;

/// A complex function of the dynamical coordinate `s` (with `w = q^{2s}`).
///
/// Values are produced on demand; shifting composes closures, so shifted
/// scalars stay exact.
#[derive(Clone)]
pub struct DynScalar(Arc<ScalarFn>);

impl DynScalar {
    pub fn new(f: impl Fn(Cx) -> Result<Cx> + Send + Sync + 'static) -> Self {
        DynScalar(Arc::new(f))
    }

    pub fn constant(c: Cx) -> Self {
        DynScalar::new(move |_| Ok(c))
    }

    pub fn eval(&self, s: Cx) -> Result<Cx> {
        (self.0)(s)
    }

    /// `s ↦ f(s + k)`.
    pub fn shift(&self, k: i32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let f = self.clone();
        DynScalar::new(move |s| f.eval(s + k as f64))
    }

    pub fn mul(&self, other: &DynScalar) -> Self {
        let (a, b) = (self.clone(), other.clone());
        DynScalar::new(move |s| Ok(a.eval(s)? * b.eval(s)?))
    }

    pub fn add(&self, other: &DynScalar) -> Self {
        let (a, b) = (self.clone(), other.clone());
        DynScalar::new(move |s| Ok(a.eval(s)? + b.eval(s)?))
    }

    pub fn recip(&self) -> Self {
        let a = self.clone();
        DynScalar::new(move |s| Ok(a.eval(s)?.inv()))
    }

    pub fn scale(&self, c: Cx) -> Self {
        let a = self.clone();
        DynScalar::new(move |s| Ok(a.eval(s)? * c))
    }
}

impl fmt::Debug for DynScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DynScalar(<fn>)")
    }
}

/// `s ↦ f(s + k)`; singular points surface when the result is evaluated.
pub fn shift_scalar(f: &DynScalar, k: i32) -> DynScalar {
    f.shift(k)
}

/// Finite formal sum `Σ_k f_k·E^k` in the skew shift ring.
#[derive(Clone, Default, Debug)]
pub struct ShiftElement {
    terms: BTreeMap<i32, DynScalar>,
}

impl ShiftElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(DynScalar::constant(Cx::new(1.0, 0.0)), 0)
    }

    /// The bare shift `E^k`.
    pub fn shift_operator(k: i32) -> Self {
        Self::term(DynScalar::constant(Cx::new(1.0, 0.0)), k)
    }

    /// `f·E^k`.
    pub fn term(f: DynScalar, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, f);
        ShiftElement { terms }
    }

    pub fn from_scalar(f: DynScalar) -> Self {
        Self::term(f, 0)
    }

    pub fn coefficient(&self, k: i32) -> Option<&DynScalar> {
        self.terms.get(&k)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    pub fn add(&self, other: &ShiftElement) -> Self {
        let mut terms = self.terms.clone();
        for (k, f) in &other.terms {
            let merged = match terms.get(k) {
                Some(g) => g.add(f),
                None => f.clone(),
            };
            terms.insert(*k, merged);
        }
        ShiftElement { terms }
    }

    /// Coefficients evaluated at `s`, keyed by shift degree.
    pub fn eval_coefficients(&self, s: Cx) -> Result<BTreeMap<i32, Cx>> {
        self.terms
            .iter()
            .map(|(k, f)| Ok((*k, f.eval(s)?)))
            .collect()
    }
}

/// Product in the skew ring: `(f·E^a)(g·E^b) = (f·g(·+a))·E^{a+b}`.
pub fn skew_mul(a: &ShiftElement, b: &ShiftElement) -> ShiftElement {
    let mut out = ShiftElement::zero();
    for (&da, fa) in &a.terms {
        for (&db, fb) in &b.terms {
            let term = ShiftElement::term(fa.mul(&fb.shift(da)), da + db);
            out = out.add(&term);
        }
    }
    out
}
