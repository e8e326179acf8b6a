//! Exact Gaussian-rational arithmetic.
//!
//! A [`Scalar`] is `re + im*i` with `re`, `im` arbitrary-precision rationals
//! (`i = sqrt(-1)`). Every operation is exact; rationals are kept in lowest
//! terms with positive denominator by `num-rational`. This is the coefficient
//! field for all states, fields and series in this crate: the structure
//! constants that show up (normal-ordering rearrangements, cocycle values,
//! character coefficients) all live in Q(i).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// An element of Q(i), stored as real and imaginary rational parts.
///
/// The `Ord` impl is the lexicographic one on `(re, im)` — a canonical order
/// for use as map keys, not a meaningful order on complex numbers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `num/den`, panicking on a zero denominator (callers pass literals).
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// `(num/den)*i`.
    pub fn from_ratio_im(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::new(
            BigRational::zero(),
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
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
        self.im.is_zero() && self.re.is_one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// For purely imaginary values `k*i` with integer `k`, returns `k`.
    pub fn as_imag_int(&self) -> Option<i64> {
        if !self.re.is_zero() {
            return None;
        }
        if !self.im.is_integer() {
            return None;
        }
        i64::try_from(self.im.to_integer()).ok()
    }

    /// For real integer values, returns the integer.
    pub fn as_int(&self) -> Option<i64> {
        if !self.im.is_zero() || !self.re.is_integer() {
            return None;
        }
        i64::try_from(self.re.to_integer()).ok()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1/(c+di) = (c-di)/(c^2+d^2)
        let norm = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        let num = self * &rhs.conj();
        Ok(Scalar::new(num.re / &norm, num.im / &norm))
    }

    pub fn pow(&self, mut exp: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_value_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $trait::$method(&self, rhs)
            }
        }
    )*};
}
forward_value_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Canonical rendering `a/b + c/d*i`, omitting zero parts; `0` if both
    /// parts vanish. Unit imaginary parts render as `i` / `-i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut wrote_re = false;
        if !self.re.is_zero() {
            fmt_rational(&self.re, f)?;
            wrote_re = true;
        }
        if !self.im.is_zero() {
            let mag = self.im.abs();
            if wrote_re {
                write!(f, " {} ", if self.im.is_negative() { "-" } else { "+" })?;
            } else if self.im.is_negative() {
                write!(f, "-")?;
            }
            if mag.is_one() {
                write!(f, "i")?;
            } else {
                fmt_rational(&mag, f)?;
                write!(f, "*i")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_units() {
        // (1+i)(1-i) = 2
        let a = &Scalar::new(
            BigRational::one(),
            BigRational::one(),
        ) * &Scalar::new(BigRational::one(), -BigRational::one());
        assert_eq!(a, Scalar::from_int(2));
        // i*i = -1
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
        // (1/2 + i/3) + (1/2 - i/3) = 1
        let b = &(&Scalar::from_ratio(1, 2) + &Scalar::from_ratio_im(1, 3))
            + &(&Scalar::from_ratio(1, 2) - &Scalar::from_ratio_im(1, 3));
        assert!(b.is_one());
    }

    #[test]
    fn division() {
        let q = Scalar::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(3)),
        );
        let r = q.checked_div(&q).unwrap();
        assert!(r.is_one());
        assert!(matches!(
            Scalar::one().checked_div(&Scalar::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn rendering() {
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(Scalar::from_ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(Scalar::i().to_string(), "i");
        assert_eq!((-Scalar::i()).to_string(), "-i");
        let z = &Scalar::from_ratio(1, 2) - &Scalar::from_ratio_im(1, 3);
        assert_eq!(z.to_string(), "1/2 - 1/3*i");
    }
}
