//! Exact Gaussian rationals `a/b + (c/d)i`.
//!
//! Every coefficient the engine touches lives in this field. The text form
//! is `re`, `imi`, or `re+imi` / `re-imi` where each part is an integer or a
//! reduced fraction, e.g. `1/2-3i`, `-i`, `7`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
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
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    /// `num/den` with zero imaginary part. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar { re: BigRational::new(BigInt::from(num), BigInt::from(den)), im: BigRational::zero() }
    }

    pub fn complex(re: (i64, i64), im: (i64, i64)) -> Self {
        Scalar {
            re: BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            im: BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|^2`, always real.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero, like integer division.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero scalar");
        let n = self.norm_sqr();
        Scalar { re: &self.re / &n, im: -(&self.im / &n) }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}i", fmt_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", fmt_rational(&self.re), sign, fmt_rational(&self.im.abs()))
            }
        }
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("invalid scalar `{whole}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let valid_int = |t: &str, signed: bool| {
        let digits = if signed { t.strip_prefix(['+', '-']).unwrap_or(t) } else { t };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(num, true) {
        return Err(bad());
    }
    let numer: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad())?;
    let denom: BigInt = match den {
        Some(d) => {
            if !valid_int(d, false) {
                return Err(bad());
            }
            d.parse().map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{whole}`")));
    }
    Ok(BigRational::new(numer, denom))
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Error> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Scalar { re: parse_rational(&s, text)?, im: BigRational::zero() });
        };
        // split at the last sign that is not the leading one
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t, text)?,
        };
        let re = if re_part.is_empty() { BigRational::zero() } else { parse_rational(re_part, text)? };
        Ok(Scalar { re, im })
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => Scalar { re: &self.re * &o.re, im: BigRational::zero() },
            (true, false) => Scalar { re: &self.re * &o.re, im: &self.re * &o.im },
            (false, true) => Scalar { re: &self.re * &o.re, im: &self.im * &o.re },
            (false, false) => Scalar { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re },
        }
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        if o.im.is_zero() {
            assert!(!o.re.is_zero(), "division by zero scalar");
            return Scalar { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        self * &o.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        if o.is_zero() {
            return;
        }
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        if o.is_zero() {
            return;
        }
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn parses_and_prints_canonical_forms() {
        for text in ["0", "7", "-3", "1/2", "-5/3", "i", "-i", "1/2-3i", "-1/2+2/7i", "3i", "-4/9i"] {
            let x = s(text);
            let printed = x.to_string();
            assert_eq!(s(&printed), x, "{text} -> {printed}");
        }
        assert_eq!(s("1/2-3i").to_string(), "1/2-3i");
        assert_eq!(s("i").to_string(), "1i");
        assert_eq!(s("2/4").to_string(), "1/2");
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x", "1/0", "1/2/3", "1+", "--1", "1.5", "i2", "1/i"] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn field_arithmetic() {
        let a = s("1/2-3i");
        let b = s("-2+1/3i");
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&a * &a.inv(), Scalar::one());
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
        assert_eq!((&a - &a), Scalar::zero());
        assert_eq!(a.conj().conj(), a);
    }
}
