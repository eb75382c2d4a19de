use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::{leg_index, set_leg, weight, weight_sum, DynScalar};
use crate::error::{Error, Result};
use crate::params::Cx;

/// Dense complex matrix produced by evaluating a [`DynMatrix`].
pub type CMat = DMatrix<Cx>;

type MatrixFn = dyn Fn(Cx) -> Result<CMat> + Send + Sync;

/// A square matrix on `legs` two-dimensional tensor legs whose entries are
/// functions of the dynamical coordinate `s`.
///
/// The whole matrix is produced by one evaluator, so R-matrices are
/// regenerated at every shifted argument instead of being stored.
#[derive(Clone)]
pub struct DynMatrix {
    legs: usize,
    eval: Arc<MatrixFn>,
}

impl fmt::Debug for DynMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DynMatrix {{ legs: {} }}", self.legs)
    }
}

impl DynMatrix {
    pub fn new(legs: usize, f: impl Fn(Cx) -> Result<CMat> + Send + Sync + 'static) -> Self {
        DynMatrix {
            legs,
            eval: Arc::new(f),
        }
    }

    pub fn constant(legs: usize, m: CMat) -> Self {
        assert_eq!(m.nrows(), 1 << legs, "constant matrix has wrong dimension");
        assert_eq!(m.ncols(), 1 << legs, "constant matrix has wrong dimension");
        DynMatrix::new(legs, move |_| Ok(m.clone()))
    }

    pub fn identity(legs: usize) -> Self {
        Self::constant(legs, CMat::identity(1 << legs, 1 << legs))
    }

    /// Diagonal matrix whose entry at flat index `i` is `f(i, s)`.
    pub fn diagonal(
        legs: usize,
        f: impl Fn(usize, Cx) -> Result<Cx> + Send + Sync + 'static,
    ) -> Self {
        let dim = 1 << legs;
        DynMatrix::new(legs, move |s| {
            let mut m = CMat::zeros(dim, dim);
            for i in 0..dim {
                m[(i, i)] = f(i, s)?;
            }
            Ok(m)
        })
    }

    /// Builds a matrix from per-entry scalars (row-major).
    pub fn from_entries(legs: usize, entries: Vec<DynScalar>) -> Self {
        let dim = 1 << legs;
        assert_eq!(entries.len(), dim * dim, "need dim² entries");
        DynMatrix::new(legs, move |s| {
            let mut m = CMat::zeros(dim, dim);
            for r in 0..dim {
                for c in 0..dim {
                    m[(r, c)] = entries[r * dim + c].eval(s)?;
                }
            }
            Ok(m)
        })
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn dim(&self) -> usize {
        1 << self.legs
    }

    pub fn eval(&self, s: Cx) -> Result<CMat> {
        (self.eval)(s)
    }

    pub fn entry(&self, row: usize, col: usize) -> DynScalar {
        let m = self.clone();
        DynScalar::new(move |s| Ok(m.eval(s)?[(row, col)]))
    }

    /// The whole matrix evaluated at `s + k`.
    pub fn at_shifted(&self, k: i32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let m = self.clone();
        DynMatrix::new(self.legs, move |s| m.eval(s + k as f64))
    }

    /// Applies an entry-dependent argument shift: entry `(r, c)` of the
    /// result at `s` is entry `(r, c)` of `self` at `s + shift_of(r, c)`.
    fn entrywise_shift(&self, shift_of: impl Fn(usize, usize) -> i32 + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        let dim = self.dim();
        DynMatrix::new(self.legs, move |s| {
            let mut cache: Vec<(i32, CMat)> = Vec::with_capacity(5);
            let mut out = CMat::zeros(dim, dim);
            for r in 0..dim {
                for c in 0..dim {
                    let d = shift_of(r, c);
                    let slot = match cache.iter().position(|(k, _)| *k == d) {
                        Some(i) => i,
                        None => {
                            cache.push((d, inner.eval(s + d as f64)?));
                            cache.len() - 1
                        }
                    };
                    out[(r, c)] = cache[slot].1[(r, c)];
                }
            }
            Ok(out)
        })
    }

    /// Shift-column dressing: entry `(I, J)` is evaluated at
    /// `s + Σ sign·weight(J_leg)` over the legs in `spec`.
    pub fn shift_col(&self, spec: &[(usize, i32)]) -> Self {
        self.check_spec(spec);
        let spec = spec.to_vec();
        let legs = self.legs;
        self.entrywise_shift(move |_, c| weight_sum(c, &spec, legs))
    }

    /// Shift-line (shift-row) dressing: as [`DynMatrix::shift_col`] with the
    /// row weights. For a matrix acting trivially on the legs of `spec`
    /// this is the argument shift `M(λ + Σ sign·σ_z^{(leg)})`.
    pub fn shift_row(&self, spec: &[(usize, i32)]) -> Self {
        self.check_spec(spec);
        let spec = spec.to_vec();
        let legs = self.legs;
        self.entrywise_shift(move |r, _| weight_sum(r, &spec, legs))
    }

    fn check_spec(&self, spec: &[(usize, i32)]) {
        for &(leg, _) in spec {
            assert!(leg < self.legs, "leg {leg} out of range for {} legs", self.legs);
        }
    }

    fn permute(&self, map: impl Fn(usize, usize) -> (usize, usize) + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        let dim = self.dim();
        DynMatrix::new(self.legs, move |s| {
            let m = inner.eval(s)?;
            let mut out = CMat::zeros(dim, dim);
            for r in 0..dim {
                for c in 0..dim {
                    let (r2, c2) = map(r, c);
                    out[(r2, c2)] = m[(r, c)];
                }
            }
            Ok(out)
        })
    }

    /// Partial transpose on one leg.
    pub fn transpose_leg(&self, leg: usize) -> Self {
        assert!(leg < self.legs, "leg {leg} out of range");
        let legs = self.legs;
        self.permute(move |r, c| {
            let (ir, ic) = (leg_index(r, leg, legs), leg_index(c, leg, legs));
            (set_leg(r, leg, legs, ic), set_leg(c, leg, legs, ir))
        })
    }

    /// Exchanges tensor factors `a` and `b` (e.g. `R₁₂ → R₂₁`).
    pub fn swap_legs(&self, a: usize, b: usize) -> Self {
        assert!(a < self.legs && b < self.legs, "leg out of range");
        let legs = self.legs;
        let swap = move |i: usize| {
            let (ia, ib) = (leg_index(i, a, legs), leg_index(i, b, legs));
            set_leg(set_leg(i, a, legs, ib), b, legs, ia)
        };
        self.permute(move |r, c| (swap(r), swap(c)))
    }

    /// Trace over one leg, leaving a matrix on the remaining legs.
    pub fn partial_trace(&self, leg: usize) -> Self {
        assert!(leg < self.legs, "leg {leg} out of range");
        assert!(self.legs > 1, "cannot trace out the only leg");
        let legs = self.legs;
        let inner = self.clone();
        let out_dim = 1 << (legs - 1);
        DynMatrix::new(legs - 1, move |s| {
            let m = inner.eval(s)?;
            let mut out = CMat::zeros(out_dim, out_dim);
            for r in 0..out_dim {
                for c in 0..out_dim {
                    let mut acc = Cx::new(0.0, 0.0);
                    for x in 0..2 {
                        acc += m[(insert_leg(r, leg, legs, x), insert_leg(c, leg, legs, x))];
                    }
                    out[(r, c)] = acc;
                }
            }
            Ok(out)
        })
    }

    /// Places `self` on the legs `positions` of a `total`-leg space,
    /// acting as the identity on the others.
    pub fn embed(&self, total: usize, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.legs, "one position per leg");
        for (i, &p) in positions.iter().enumerate() {
            assert!(p < total, "position out of range");
            assert!(!positions[..i].contains(&p), "positions must be distinct");
        }
        let positions = positions.to_vec();
        let legs = self.legs;
        let inner = self.clone();
        let dim = 1 << total;
        let rest: Vec<usize> = (0..total).filter(|l| !positions.contains(l)).collect();
        let local = move |flat: usize| {
            positions
                .iter()
                .enumerate()
                .fold(0, |acc, (k, &p)| set_leg(acc, k, legs, leg_index(flat, p, total)))
        };
        DynMatrix::new(total, move |s| {
            let m = inner.eval(s)?;
            let mut out = CMat::zeros(dim, dim);
            for r in 0..dim {
                for c in 0..dim {
                    if rest
                        .iter()
                        .all(|&l| leg_index(r, l, total) == leg_index(c, l, total))
                    {
                        out[(r, c)] = m[(local(r), local(c))];
                    }
                }
            }
            Ok(out)
        })
    }

    /// Matrix inverse at every `s`; raises a singular-point error when
    /// the determinant of the row- and column-equilibrated
    /// matrix falls below `guard`.
    pub fn inverse(&self, guard: f64) -> Self {
        let inner = self.clone();
        DynMatrix::new(self.legs, move |s| invert(&inner.eval(s)?, guard))
    }

    pub fn scale(&self, c: Cx) -> Self {
        let inner = self.clone();
        DynMatrix::new(self.legs, move |s| Ok(inner.eval(s)? * c))
    }

    pub fn scale_by(&self, f: &DynScalar) -> Self {
        let (inner, f) = (self.clone(), f.clone());
        DynMatrix::new(self.legs, move |s| Ok(inner.eval(s)? * f.eval(s)?))
    }

    pub fn add(&self, other: &DynMatrix) -> Self {
        assert_eq!(self.legs, other.legs, "leg count mismatch");
        let (a, b) = (self.clone(), other.clone());
        DynMatrix::new(self.legs, move |s| Ok(a.eval(s)? + b.eval(s)?))
    }

    pub fn determinant(&self) -> DynScalar {
        let inner = self.clone();
        DynScalar::new(move |s| Ok(inner.eval(s)?.determinant()))
    }
}

impl Mul<&DynMatrix> for &DynMatrix {
    type Output = DynMatrix;

    fn mul(self, rhs: &DynMatrix) -> DynMatrix {
        assert_eq!(self.legs, rhs.legs, "leg count mismatch");
        let (a, b) = (self.clone(), rhs.clone());
        DynMatrix::new(self.legs, move |s| Ok(a.eval(s)? * b.eval(s)?))
    }
}

impl Mul<DynMatrix> for DynMatrix {
    type Output = DynMatrix;

    fn mul(self, rhs: DynMatrix) -> DynMatrix {
        &self * &rhs
    }
}

#[inline]
fn insert_leg(flat: usize, leg: usize, legs: usize, value: usize) -> usize {
    // flat indexes legs-1 legs; open a slot at position `leg`.
    let low_bits = legs - 1 - leg;
    let high = flat >> low_bits;
    let low = flat & ((1 << low_bits) - 1);
    (((high << 1) | value) << low_bits) | low
}

/// `|det|` of `m` after alternately scaling rows and columns to unit
/// norm: invariant under diagonal scaling on either side, 1 for unitary
/// matrices and 0 for singular ones.
pub(crate) fn equilibrated_det(m: &CMat) -> f64 {
    let mut scaled = m.clone();
    for _ in 0..200 {
        let mut spread = 0.0f64;
        for mut col in scaled.column_iter_mut() {
            let norm = col.norm();
            if !(norm > 0.0 && norm.is_finite()) {
                return 0.0;
            }
            col /= Cx::new(norm, 0.0);
        }
        for mut row in scaled.row_iter_mut() {
            let norm = row.norm();
            if !(norm > 0.0 && norm.is_finite()) {
                return 0.0;
            }
            row /= Cx::new(norm, 0.0);
            spread = spread.max((norm - 1.0).abs());
        }
        if spread < 1e-12 {
            break;
        }
    }
    scaled.determinant().norm()
}

pub(crate) fn invert(m: &CMat, guard: f64) -> Result<CMat> {
    let rel = equilibrated_det(m);
    if !rel.is_finite() || rel < guard {
        return Err(Error::Singular {
            what: "matrix inverse".into(),
            magnitude: rel,
            guard,
        });
    }
    m.clone().try_inverse().ok_or_else(|| Error::Singular {
        what: "matrix inverse".into(),
        magnitude: 0.0,
        guard,
    })
}

/// Diagonal matrix with entry `f(s + Σ sign·weight(I_leg))` at multi-index
/// `I`; an empty `spec` gives `f·1`.
pub fn promote_shifted_scalar(f: &DynScalar, legs: usize, spec: &[(usize, i32)]) -> DynMatrix {
    for &(leg, _) in spec {
        assert!(leg < legs, "leg out of range");
    }
    let (f, spec) = (f.clone(), spec.to_vec());
    DynMatrix::diagonal(legs, move |i, s| f.eval(s + weight_sum(i, &spec, legs) as f64))
}

/// True when every entry whose row weight total differs from its column
/// weight total vanishes (relative to the largest entry) at all samples.
pub fn zero_weight_check(m: &DynMatrix, samples: &[Cx], tolerance: f64) -> Result<bool> {
    let legs = m.legs();
    let total = |flat: usize| -> i32 { (0..legs).map(|l| weight(leg_index(flat, l, legs))).sum() };
    for &s in samples {
        let v = m.eval(s)?;
        let scale = v.iter().fold(1.0f64, |acc, x| acc.max(x.norm()));
        for r in 0..m.dim() {
            for c in 0..m.dim() {
                if total(r) != total(c) && v[(r, c)].norm() > tolerance * scale {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    /// Random-ish smooth two-leg matrix: entry (r, c) = exp((r+1)(c+2)·0.1·s) + r − c.
    fn smooth(legs: usize) -> DynMatrix {
        let dim = 1 << legs;
        DynMatrix::new(legs, move |s| {
            Ok(CMat::from_fn(dim, dim, |r, col| {
                (s * (0.1 * ((r + 1) * (col + 2)) as f64)).exp() + c(r as f64, -(col as f64))
            }))
        })
    }

    fn max_diff(a: &DynMatrix, b: &DynMatrix, s: Cx) -> f64 {
        (a.eval(s).unwrap() - b.eval(s).unwrap())
            .iter()
            .fold(0.0, |acc, x| acc.max(x.norm()))
    }

    #[test]
    fn double_transpose_is_identity() {
        let m = smooth(2);
        let s = c(0.2, 0.1);
        assert_eq!(max_diff(&m.transpose_leg(0).transpose_leg(0), &m, s), 0.0);
        assert_eq!(max_diff(&DynMatrix::identity(2).transpose_leg(1), &DynMatrix::identity(2), s), 0.0);
    }

    #[test]
    fn transposes_on_distinct_legs_commute() {
        let m = smooth(2);
        let s = c(-0.3, 0.4);
        let a = m.transpose_leg(0).transpose_leg(1);
        let b = m.transpose_leg(1).transpose_leg(0);
        assert_eq!(max_diff(&a, &b, s), 0.0);
    }

    #[test]
    fn shift_col_component_contract() {
        let m = smooth(2);
        let s = c(0.1, 0.2);
        let shifted = m.shift_col(&[(0, 1), (1, -1)]).eval(s).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let d = weight(leg_index(col, 0, 2)) - weight(leg_index(col, 1, 2));
                let expected = m.eval(s + d as f64).unwrap()[(r, col)];
                assert_eq!(shifted[(r, col)], expected);
            }
        }
    }

    #[test]
    fn shift_col_inverse_shifts_cancel() {
        let m = smooth(1);
        let s = c(0.3, 0.0);
        let back = m.shift_col(&[(0, 1)]).shift_col(&[(0, -1)]);
        assert!(max_diff(&back, &m, s) < 1e-14);
        let id = DynMatrix::identity(2).shift_col(&[(0, 1), (1, 1)]);
        assert_eq!(max_diff(&id, &DynMatrix::identity(2), s), 0.0);
    }

    #[test]
    fn swap_twice_and_embedding() {
        let m = smooth(2);
        let s = c(0.0, 0.3);
        assert_eq!(max_diff(&m.swap_legs(0, 1).swap_legs(0, 1), &m, s), 0.0);
        // embedding on reversed positions equals swapping
        assert_eq!(max_diff(&m.embed(2, &[1, 0]), &m.swap_legs(0, 1), s), 0.0);
    }

    #[test]
    fn partial_trace_of_identity() {
        let t = DynMatrix::identity(2).partial_trace(0).eval(c(0.0, 0.0)).unwrap();
        assert_eq!(t, CMat::identity(2, 2) * c(2.0, 0.0));
    }

    #[test]
    fn partial_trace_is_cyclic_on_traced_leg() {
        let a = smooth(1).embed(2, &[0]);
        let b = smooth(2);
        // A acts on the traced leg only.
        let s = c(0.2, -0.1);
        let ab = (&a * &b).partial_trace(0);
        let ba = (&b * &a).partial_trace(0);
        assert!(max_diff(&ab, &ba, s) < 1e-12);
    }

    #[test]
    fn promote_with_empty_spec_is_scalar_identity() {
        let f = DynScalar::new(|s| Ok(s * 2.0 + 1.0));
        let s = c(0.4, 0.1);
        let m = promote_shifted_scalar(&f, 2, &[]).eval(s).unwrap();
        assert_eq!(m, CMat::identity(4, 4) * f.eval(s).unwrap());
        let spec = promote_shifted_scalar(&f, 2, &[(1, 1)]).eval(s).unwrap();
        assert_eq!(spec[(0, 0)], f.eval(s + 1.0).unwrap());
        assert_eq!(spec[(1, 1)], f.eval(s - 1.0).unwrap());
        assert_eq!(spec[(2, 2)], f.eval(s + 1.0).unwrap());
        assert_eq!(spec[(3, 3)], f.eval(s - 1.0).unwrap());
    }

    #[test]
    fn zero_weight_detection() {
        let samples = [c(0.1, 0.0)];
        assert!(zero_weight_check(&DynMatrix::identity(2), &samples, 1e-12).unwrap());
        let mut bad = CMat::zeros(4, 4);
        bad[(0, 3)] = c(1.0, 0.0);
        assert!(!zero_weight_check(&DynMatrix::constant(2, bad), &samples, 1e-12).unwrap());
    }

    #[test]
    fn inverse_guard_fires_on_singular_matrix() {
        let m = DynMatrix::constant(1, CMat::from_element(2, 2, c(1.0, 0.0)));
        let err = m.inverse(1e-6).eval(c(0.0, 0.0)).unwrap_err();
        assert!(err.is_singular());
    }

    #[test]
    fn insert_leg_roundtrip() {
        for flat in 0..4 {
            for leg in 0..3 {
                for x in 0..2 {
                    let full = insert_leg(flat, leg, 3, x);
                    assert_eq!(leg_index(full, leg, 3), x);
                }
            }
        }
        assert_eq!(insert_leg(0b11, 0, 3, 0), 0b011);
        assert_eq!(insert_leg(0b11, 2, 3, 0), 0b110);
    }

    fn cmat(dim: usize) -> impl Strategy<Value = CMat> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim)
            .prop_map(move |v| CMat::from_iterator(dim, dim, v.into_iter().map(|(re, im)| c(re, im))))
    }

    proptest! {
        #[test]
        fn equilibrated_det_ignores_diagonal_scaling(
            m in cmat(4),
            rows in prop::collection::vec(-12.0f64..12.0, 4),
            cols in prop::collection::vec(-12.0f64..12.0, 4),
        ) {
            let scaled = CMat::from_fn(4, 4, |r, col| m[(r, col)] * (rows[r] + cols[col]).exp());
            let a = equilibrated_det(&m);
            let b = equilibrated_det(&scaled);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-300) + 1e-14);
        }

        #[test]
        fn partial_trace_commutes_with_transpose_of_other_leg(m in cmat(4)) {
            let d = DynMatrix::constant(2, m);
            let s = c(0.0, 0.0);
            let a = d.transpose_leg(1).partial_trace(0).eval(s).unwrap();
            let b = d.partial_trace(0).eval(s).unwrap().transpose();
            prop_assert!((a - b).iter().all(|x| x.norm() < 1e-15));
        }

        #[test]
        fn swap_conjugates_embedding(m in cmat(2)) {
            let one = DynMatrix::constant(1, m);
            let s = c(0.1, 0.0);
            let a = one.embed(2, &[0]).swap_legs(0, 1);
            prop_assert_eq!(a.eval(s).unwrap(), one.embed(2, &[1]).eval(s).unwrap());
        }
    }
}
