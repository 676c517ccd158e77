//! Exact scalar arithmetic over the Gaussian rationals Q(i).

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// A Gaussian rational `re + im·i` with arbitrary-precision rational parts.
///
/// Every computation in the workbench that admits exact arithmetic runs over
/// this field; floating point enters only through [`Scalar::to_complex`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar { re: BigRational::one(), im: BigRational::zero() }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    /// Exact rational `num/den`. Panics on a zero denominator.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    /// Gaussian rational `(re_n/re_d) + (im_n/im_d)·i`.
    pub fn from_parts(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        Scalar {
            re: BigRational::new(BigInt::from(re_n), BigInt::from(re_d)),
            im: BigRational::new(BigInt::from(im_n), BigInt::from(im_d)),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Squared modulus `re² + im²` (a nonnegative rational on the real axis).
    pub fn norm_sqr(&self) -> Self {
        Scalar { re: &self.re * &self.re + &self.im * &self.im, im: BigRational::zero() }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero scalar");
        let n = &self.re * &self.re + &self.im * &self.im;
        Scalar { re: &self.re / &n, im: -&self.im / &n }
    }

    /// Lossless-within-f64 embedding into machine complex numbers.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().expect("rational out of f64 range"),
            self.im.to_f64().expect("rational out of f64 range"),
        )
    }

    /// Modulus in f64, used for deviation reporting on exact data.
    pub fn abs_f64(&self) -> f64 {
        self.to_complex().norm()
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}i", fmt_rational(&self.im));
        }
        let im = if self.im.is_negative() {
            format!("-{}i", fmt_rational(&-self.im.clone()))
        } else {
            format!("+{}i", fmt_rational(&self.im))
        };
        write!(f, "{}{}", fmt_rational(&self.re), im)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a> Add<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: self.re + &rhs.re, im: self.im + &rhs.im }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl<'a> AddAssign<&'a Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl<'a, 'b> Mul<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Mul<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        &self * rhs
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = &*self * &rhs;
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self * &rhs.inv()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Scalar {
        Scalar::from_parts(re_n, re_d, im_n, im_d)
    }

    #[test]
    fn field_basics() {
        let a = s(1, 2, -3, 4);
        let b = s(2, 3, 1, 5);
        assert_eq!(a.clone() + b.clone() - b.clone(), a);
        assert_eq!((a.clone() * b.clone()) / b, a);
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn conjugation_is_a_ring_involution() {
        let a = s(3, 7, 2, 9);
        let b = s(-1, 4, 5, 6);
        assert_eq!(a.conj().conj(), a);
        assert_eq!((a.clone() * b.clone()).conj(), a.conj() * b.conj());
        assert_eq!((a.clone() + b.clone()).conj(), a.conj() + b.conj());
    }

    #[test]
    fn display_forms() {
        assert_eq!(s(1, 2, 0, 1).to_string(), "1/2");
        assert_eq!(s(0, 1, -1, 1).to_string(), "-1i");
        assert_eq!(s(2, 1, 1, 3).to_string(), "2+1/3i");
    }

    proptest! {
        // The f64 embedding must be a ring homomorphism up to machine epsilon.
        #[test]
        fn embedding_respects_ring_ops(an in -50i64..50, ad in 1i64..20,
                                       bn in -50i64..50, bd in 1i64..20,
                                       cn in -50i64..50, cd in 1i64..20) {
            let a = s(an, ad, bn, bd);
            let b = s(cn, cd, an.wrapping_abs().max(1), bd);
            let sum = (a.clone() + b.clone()).to_complex();
            let prod = (a.clone() * b.clone()).to_complex();
            prop_assert!((sum - (a.to_complex() + b.to_complex())).norm() < 1e-9);
            prop_assert!((prod - (a.to_complex() * b.to_complex())).norm() < 1e-9);
        }
    }
}
