//! Integer scalars for the elimination kernels.
//!
//! Every algorithm in this crate is written once, generically over
//! [`Scalar`], and run first with overflow-checked `i64` arithmetic. The
//! first overflow aborts the attempt and the same algorithm is re-run on
//! `BigInt`, so results are always exact.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) type Checked<T> = Result<T, Overflow>;

pub(crate) trait Scalar: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn abs_cmp(&self, other: &Self) -> Ordering;
    fn add(&self, o: &Self) -> Checked<Self>;
    fn sub(&self, o: &Self) -> Checked<Self>;
    fn mul(&self, o: &Self) -> Checked<Self>;
    fn neg(&self) -> Checked<Self>;
    /// Floor division; `o` is nonzero.
    fn div_floor(&self, o: &Self) -> Checked<Self>;
    /// Remainder in `[0, |m|)`.
    fn modulo(&self, m: &Self) -> Checked<Self>;
    fn lift(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;

    fn is_one(&self) -> bool {
        *self == Self::from_i64(1)
    }

    /// `self -= q * y`
    fn sub_mul(&mut self, q: &Self, y: &Self) -> Checked<()> {
        if y.is_zero() || q.is_zero() {
            return Ok(());
        }
        *self = self.sub(&q.mul(y)?)?;
        Ok(())
    }
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn add(&self, o: &Self) -> Checked<Self> {
        self.checked_add(*o).ok_or(Overflow)
    }
    fn sub(&self, o: &Self) -> Checked<Self> {
        self.checked_sub(*o).ok_or(Overflow)
    }
    fn mul(&self, o: &Self) -> Checked<Self> {
        self.checked_mul(*o).ok_or(Overflow)
    }
    fn neg(&self) -> Checked<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    fn div_floor(&self, o: &Self) -> Checked<Self> {
        if *o == -1 {
            return self.neg();
        }
        Ok(Integer::div_floor(self, o))
    }
    fn modulo(&self, m: &Self) -> Checked<Self> {
        if *m == i64::MIN {
            return Err(Overflow);
        }
        Ok(self.rem_euclid(m.abs()))
    }
    fn lift(v: &BigInt) -> Option<Self> {
        // keep headroom so that a single product of two lifted values
        // cannot silently wrap before the checked ops see it
        v.to_i64().filter(|x| x.unsigned_abs() < (1 << 62))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn sub_mul(&mut self, q: &Self, y: &Self) -> Checked<()> {
        if *y == 0 || *q == 0 {
            return Ok(());
        }
        let p = q.checked_mul(*y).ok_or(Overflow)?;
        *self = self.checked_sub(p).ok_or(Overflow)?;
        Ok(())
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn add(&self, o: &Self) -> Checked<Self> {
        Ok(self + o)
    }
    fn sub(&self, o: &Self) -> Checked<Self> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self) -> Checked<Self> {
        Ok(self * o)
    }
    fn neg(&self) -> Checked<Self> {
        Ok(-self)
    }
    fn div_floor(&self, o: &Self) -> Checked<Self> {
        Ok(Integer::div_floor(self, o))
    }
    fn modulo(&self, m: &Self) -> Checked<Self> {
        Ok(self.mod_floor(&m.abs()))
    }
    fn lift(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn sub_mul(&mut self, q: &Self, y: &Self) -> Checked<()> {
        if Zero::is_zero(y) || Zero::is_zero(q) {
            return Ok(());
        }
        *self -= q * y;
        Ok(())
    }
}

pub(crate) fn lift_vec<S: Scalar>(v: &[BigInt]) -> Checked<Vec<S>> {
    v.iter().map(|x| S::lift(x).ok_or(Overflow)).collect()
}

pub(crate) fn lift_sparse<S: Scalar>(rows: &[Vec<(usize, BigInt)>]) -> Checked<Vec<Vec<(usize, S)>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|(j, x)| S::lift(x).map(|v| (*j, v)).ok_or(Overflow))
                .collect()
        })
        .collect()
}

pub(crate) fn big_vec<S: Scalar>(v: &[S]) -> Vec<BigInt> {
    v.iter().map(Scalar::to_big).collect()
}

/// Runs `f` on machine integers, retrying on `BigInt` if anything overflows.
pub(crate) fn exact<R>(
    fast: impl FnOnce() -> Checked<R>,
    slow: impl FnOnce() -> Checked<R>,
) -> R {
    match fast() {
        Ok(r) => r,
        Err(Overflow) => slow().expect("BigInt arithmetic cannot overflow"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i64_overflow_is_detected() {
        let mut a = i64::MAX - 1;
        assert_eq!(a.sub_mul(&-1, &2), Err(Overflow));
        assert_eq!(Scalar::div_floor(&-7i64, &2), Ok(-4));
        assert_eq!(Scalar::modulo(&-7i64, &3), Ok(2));
        assert!(<i64 as Scalar>::lift(&(BigInt::from(1) << 63)).is_none());
    }

    #[test]
    fn exact_falls_back() {
        let r = exact(|| Err(Overflow), || Ok(BigInt::from(3)));
        assert_eq!(r, BigInt::from(3));
    }
}
