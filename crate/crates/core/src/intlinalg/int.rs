use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Signals that a fixed-width computation left its range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) type Checked<T> = Result<T, Overflow>;

/// Integer arithmetic shared by the `i64` fast path and the `BigInt` path.
pub(crate) trait Int: Clone + PartialEq + Eq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_big(v: &BigInt) -> Checked<Self>;
    fn to_big(&self) -> BigInt;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn add(&self, o: &Self) -> Checked<Self>;
    fn sub(&self, o: &Self) -> Checked<Self>;
    fn mul(&self, o: &Self) -> Checked<Self>;
    fn neg(&self) -> Checked<Self>;
    /// Quotient rounded toward zero; `o` is nonzero.
    fn quot(&self, o: &Self) -> Checked<Self>;
    fn divides(&self, o: &Self) -> bool;
}

impl Int for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_big(v: &BigInt) -> Checked<Self> {
        v.to_i64().ok_or(Overflow)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
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
    fn quot(&self, o: &Self) -> Checked<Self> {
        self.checked_div(*o).ok_or(Overflow)
    }
    fn divides(&self, o: &Self) -> bool {
        if *self == 0 {
            *o == 0
        } else {
            o.checked_rem(*self).is_none_or(|r| r == 0)
        }
    }
}

impl Int for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_big(v: &BigInt) -> Checked<Self> {
        Ok(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
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
    fn quot(&self, o: &Self) -> Checked<Self> {
        Ok(self / o)
    }
    fn divides(&self, o: &Self) -> bool {
        if Zero::is_zero(self) {
            Zero::is_zero(o)
        } else {
            Zero::is_zero(&o.mod_floor(self))
        }
    }
}

/// Returns `(g, s, t)` with `g = s*a + t*b = gcd(a, b) >= 0`.
pub(crate) fn ext_gcd<T: Int>(a: &T, b: &T) -> Checked<(T, T, T)> {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let q = r0.quot(&r1)?;
        let r2 = r0.sub(&q.mul(&r1)?)?;
        let s2 = s0.sub(&q.mul(&s1)?)?;
        let t2 = t0.sub(&q.mul(&t1)?)?;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        Ok((r0.neg()?, s0.neg()?, t0.neg()?))
    } else {
        Ok((r0, s0, t0))
    }
}

/// `v[k] -= c * w[k]` for `k >= from`.
pub(crate) fn sub_scaled<T: Int>(v: &mut [T], c: &T, w: &[T], from: usize) -> Checked<()> {
    for (x, y) in v[from..].iter_mut().zip(&w[from..]) {
        if !y.is_zero() {
            *x = x.sub(&c.mul(y)?)?;
        }
    }
    Ok(())
}

/// Runs `f` in `i64`, retrying in arbitrary precision on overflow.
pub(crate) fn with_fallback<R>(
    fast: impl FnOnce() -> Checked<R>,
    exact: impl FnOnce() -> Checked<R>,
) -> R {
    match fast() {
        Ok(r) => r,
        Err(Overflow) => {
            log::debug!("i64 overflow, retrying in arbitrary precision");
            exact().expect("arbitrary precision arithmetic cannot overflow")
        }
    }
}
