use std::collections::BTreeMap;

use super::{weight_sum, CMat, DynMatrix, DynScalar, ShiftElement};
use crate::error::Result;
use crate::params::Cx;

/// A matrix with entries in the skew shift ring, stored degree by degree:
/// `Σ_k C_k(s)·E^k` with `C_k` a [`DynMatrix`] multiplying from the left.
#[derive(Clone, Debug)]
pub struct ShiftMatrix {
    legs: usize,
    terms: BTreeMap<i32, DynMatrix>,
}

impl ShiftMatrix {
    pub fn from_dyn(m: DynMatrix) -> Self {
        let legs = m.legs();
        let mut terms = BTreeMap::new();
        terms.insert(0, m);
        ShiftMatrix { legs, terms }
    }

    pub fn identity(legs: usize) -> Self {
        Self::from_dyn(DynMatrix::identity(legs))
    }

    /// Builds from explicit `(degree, coefficient)` pairs; repeated degrees add.
    pub fn from_terms(legs: usize, terms: impl IntoIterator<Item = (i32, DynMatrix)>) -> Self {
        let mut out = ShiftMatrix {
            legs,
            terms: BTreeMap::new(),
        };
        for (k, m) in terms {
            assert_eq!(m.legs(), legs, "leg count mismatch");
            out.push_term(k, m);
        }
        out
    }

    fn push_term(&mut self, k: i32, m: DynMatrix) {
        let merged = match self.terms.get(&k) {
            Some(prev) => prev.add(&m),
            None => m,
        };
        self.terms.insert(k, merged);
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn dim(&self) -> usize {
        1 << self.legs
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    pub fn coefficient(&self, k: i32) -> Option<&DynMatrix> {
        self.terms.get(&k)
    }

    /// Product in the skew ring: `C_a E^a · D_b E^b = C_a D_b(s+a) E^{a+b}`.
    pub fn mul(&self, other: &ShiftMatrix) -> ShiftMatrix {
        assert_eq!(self.legs, other.legs, "leg count mismatch");
        let mut out = ShiftMatrix {
            legs: self.legs,
            terms: BTreeMap::new(),
        };
        for (&a, ca) in &self.terms {
            for (&b, db) in &other.terms {
                out.push_term(a + b, ca * &db.at_shifted(a));
            }
        }
        out
    }

    pub fn add(&self, other: &ShiftMatrix) -> ShiftMatrix {
        assert_eq!(self.legs, other.legs, "leg count mismatch");
        let mut out = self.clone();
        for (&k, m) in &other.terms {
            out.push_term(k, m.clone());
        }
        out
    }

    pub fn scale(&self, c: Cx) -> ShiftMatrix {
        self.map(|m| m.scale(c))
    }

    fn map(&self, f: impl Fn(&DynMatrix) -> DynMatrix) -> ShiftMatrix {
        ShiftMatrix {
            legs: self.legs,
            terms: self.terms.iter().map(|(k, m)| (*k, f(m))).collect(),
        }
    }

    /// Index transpose on one leg; operator entries are kept as they are.
    pub fn transpose_leg(&self, leg: usize) -> ShiftMatrix {
        self.map(|m| m.transpose_leg(leg))
    }

    pub fn swap_legs(&self, a: usize, b: usize) -> ShiftMatrix {
        self.map(|m| m.swap_legs(a, b))
    }

    pub fn partial_trace(&self, leg: usize) -> ShiftMatrix {
        ShiftMatrix {
            legs: self.legs - 1,
            terms: self.terms.iter().map(|(k, m)| (*k, m.partial_trace(leg))).collect(),
        }
    }

    pub fn embed(&self, total: usize, positions: &[usize]) -> ShiftMatrix {
        ShiftMatrix {
            legs: total,
            terms: self
                .terms
                .iter()
                .map(|(k, m)| (*k, m.embed(total, positions)))
                .collect(),
        }
    }

    /// Entry `(row, col)` as an element of the skew ring.
    pub fn entry(&self, row: usize, col: usize) -> ShiftElement {
        self.terms
            .iter()
            .fold(ShiftElement::zero(), |acc, (&k, m)| acc.add(&ShiftElement::term(m.entry(row, col), k)))
    }

    /// Coefficient matrices evaluated at `s`, keyed by shift degree.
    pub fn eval_coefficients(&self, s: Cx) -> Result<BTreeMap<i32, CMat>> {
        self.terms
            .iter()
            .map(|(k, m)| Ok((*k, m.eval(s)?)))
            .collect()
    }

    /// Left multiplication by a function of `s` (a degree-0 scalar).
    pub fn scale_by(&self, f: &DynScalar) -> ShiftMatrix {
        self.map(|m| m.scale_by(f))
    }
}

/// Diagonal shift matrix `exp(Σ c_leg σ_z^{(leg)} ∂)`: entry `E^{Σ c·weight}`
/// at multi-index `I`.
pub fn joint_weight_shift(legs: usize, spec: &[(usize, i32)]) -> ShiftMatrix {
    for &(leg, _) in spec {
        assert!(leg < legs, "leg out of range");
    }
    let dim = 1 << legs;
    let mut by_degree: BTreeMap<i32, CMat> = BTreeMap::new();
    for i in 0..dim {
        let k = weight_sum(i, spec, legs);
        by_degree.entry(k).or_insert_with(|| CMat::zeros(dim, dim))[(i, i)] = Cx::new(1.0, 0.0);
    }
    ShiftMatrix::from_terms(
        legs,
        by_degree.into_iter().map(|(k, m)| (k, DynMatrix::constant(legs, m))),
    )
}

/// `e^{sign·σ_z ∂}` on one leg: `diag(E^{sign}, E^{-sign})` on that leg and
/// the identity on the others.
pub fn weight_shift_matrix(legs: usize, leg: usize, sign: i32) -> ShiftMatrix {
    joint_weight_shift(legs, &[(leg, sign)])
}

/// `D⁻¹·M·D` with `D = e^{σ_z ∂}` on `leg`, computed in the skew ring.
pub fn conjugate_by_shift(m: &ShiftMatrix, leg: usize) -> ShiftMatrix {
    let legs = m.legs();
    weight_shift_matrix(legs, leg, -1)
        .mul(m)
        .mul(&weight_shift_matrix(legs, leg, 1))
}


#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn eval_entry(m: &ShiftMatrix, r: usize, col: usize, s: Cx) -> BTreeMap<i32, Cx> {
        let mut out = m.entry(r, col).eval_coefficients(s).unwrap();
        out.retain(|_, v| v.norm() > 0.0);
        out
    }

    #[test]
    fn single_leg_weight_shift_is_diag_e_einv() {
        let d = weight_shift_matrix(1, 0, 1);
        let s = c(0.0, 0.0);
        assert_eq!(eval_entry(&d, 0, 0, s).keys().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(eval_entry(&d, 1, 1, s).keys().copied().collect::<Vec<_>>(), vec![-1]);
        assert!(eval_entry(&d, 0, 1, s).is_empty());
    }

    #[test]
    fn opposite_weight_shifts_cancel() {
        let prod = weight_shift_matrix(2, 1, 1).mul(&weight_shift_matrix(2, 1, -1));
        let coeffs = prod.eval_coefficients(c(0.3, 0.0)).unwrap();
        for (k, m) in coeffs {
            if k == 0 {
                assert_eq!(m, CMat::identity(4, 4));
            } else {
                assert!(m.iter().all(|x| x.norm() == 0.0));
            }
        }
    }

    #[test]
    fn conjugation_hand_expanded() {
        // M = [[f, g], [h, k]] with distinct smooth entries.
        let f = |s: Cx| (s * 0.3).exp();
        let g = |s: Cx| s * s + 1.0;
        let h = |s: Cx| (s * -0.2).exp() * 2.0;
        let k = |s: Cx| s + 3.0;
        let m = DynMatrix::new(1, move |s| {
            Ok(CMat::from_row_slice(2, 2, &[f(s), g(s), h(s), k(s)]))
        });
        let conj = conjugate_by_shift(&ShiftMatrix::from_dyn(m), 0);
        let s = c(0.25, -0.1);
        let e = |r, col| eval_entry(&conj, r, col, s);
        assert_eq!(e(0, 0).len(), 1);
        assert!((e(0, 0)[&0] - f(s - 1.0)).norm() < 1e-14);
        assert!((e(0, 1)[&-2] - g(s - 1.0)).norm() < 1e-14);
        assert!((e(1, 0)[&2] - h(s + 1.0)).norm() < 1e-14);
        assert!((e(1, 1)[&0] - k(s + 1.0)).norm() < 1e-14);
    }

    #[test]
    fn conjugating_identity_is_identity() {
        let conj = conjugate_by_shift(&ShiftMatrix::identity(2), 1);
        let coeffs = conj.eval_coefficients(c(0.1, 0.1)).unwrap();
        assert_eq!(coeffs[&0], CMat::identity(4, 4));
        assert!(coeffs.iter().filter(|(k, _)| **k != 0).all(|(_, m)| m.iter().all(|x| x.norm() == 0.0)));
    }
}
