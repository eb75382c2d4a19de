//! Dynamical scalars, the skew shift ring `Σ f_k(s)·E^k` with
//! `E·f(s) = f(s+1)·E`, and tensor-leg matrices over both.
//!
//! Every leg is two dimensional with basis weights `+1` (index 0) and `−1`
//! (index 1). A shift of the dynamical argument by a `σ_z`-eigenvalue `k`
//! is `s → s + k`, i.e. `w → w·q^{2k}`. Legs are numbered from 0; in a flat
//! multi-index the first leg is the most significant bit.

mod matrix;
mod operator;
mod scalar;

pub use matrix::{promote_shifted_scalar, zero_weight_check, CMat, DynMatrix};
pub use operator::{conjugate_by_shift, joint_weight_shift, weight_shift_matrix, ShiftMatrix};
pub use scalar::{shift_scalar, skew_mul, DynScalar, ShiftElement};

/// `σ_z` eigenvalue of a basis index.
#[inline]
pub fn weight(index: usize) -> i32 {
    if index == 0 {
        1
    } else {
        -1
    }
}

/// Basis index of `leg` inside the flat multi-index `flat` on `legs` legs.
#[inline]
pub fn leg_index(flat: usize, leg: usize, legs: usize) -> usize {
    (flat >> (legs - 1 - leg)) & 1
}

/// Sum of `sign·weight` over the legs of `spec` for the multi-index `flat`.
#[inline]
pub fn weight_sum(flat: usize, spec: &[(usize, i32)], legs: usize) -> i32 {
    spec.iter()
        .map(|&(leg, sign)| sign * weight(leg_index(flat, leg, legs)))
        .sum()
}

#[inline]
pub(crate) fn set_leg(flat: usize, leg: usize, legs: usize, value: usize) -> usize {
    let bit = 1 << (legs - 1 - leg);
    if value == 0 {
        flat & !bit
    } else {
        flat | bit
    }
}
