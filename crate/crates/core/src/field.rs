//! Exact arithmetic in the quadratic field Q(√3).
//!
//! Every element is stored as a pair of reduced big rationals `(a, b)`
//! representing `a + b·√3`. Because √3 is irrational the representation is
//! unique, so equality is structural and zero-testing is trivial.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::FieldError;

/// An element `a + b·√3` of Q(√3).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Qs3 {
    a: BigRational,
    b: BigRational,
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Qs3 {
    /// `BigRational` is always kept reduced with a positive denominator, so
    /// no further canonicalisation is needed here.
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Qs3 { a, b }
    }

    pub fn from_ratios(a: (i64, i64), b: (i64, i64)) -> Self {
        Qs3::new(ratio(a.0, a.1), ratio(b.0, b.1))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Qs3::new(ratio(num, den), BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Qs3::rational(n, 1)
    }

    pub fn sqrt3() -> Self {
        Qs3::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        Qs3::default()
    }

    pub fn one() -> Self {
        Qs3::from_int(1)
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of √3.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The field automorphism `a + b√3 ↦ a − b√3`.
    pub fn conj(&self) -> Self {
        Qs3::new(self.a.clone(), -&self.b)
    }

    /// Field norm `a² − 3b²`, i.e. `x · conj(x)`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(3)) * &self.b * &self.b
    }

    /// Exact sign of the real number `a + b√3`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // Mixed signs: compare a² with 3b².
            (Ordering::Greater, Ordering::Less) => self.norm().cmp(&BigRational::zero()),
            (Ordering::Less, Ordering::Greater) => BigRational::zero().cmp(&self.norm()),
        }
    }

    /// Sign as -1, 0 or +1.
    pub fn sign(&self) -> i32 {
        match self.signum() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Nearest double to `a + b√3`.
    ///
    /// When `a` and `b√3` have opposite signs the sum is rewritten as
    /// `norm / (a − b√3)`, whose denominator has no cancellation.
    pub fn to_f64(&self) -> f64 {
        let af = self.a.to_f64().unwrap_or(f64::NAN);
        let bf = self.b.to_f64().unwrap_or(f64::NAN);
        let s3 = 3f64.sqrt();
        if self.a.is_zero() || self.b.is_zero() || self.a.is_positive() == self.b.is_positive() {
            return bf.mul_add(s3, af);
        }
        let norm = self.norm().to_f64().unwrap_or(f64::NAN);
        let den = af - bf * s3;
        norm / den
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Qs3::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, rhs: &Qs3) -> Result<Self, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Qs3::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        Qs3::new(&self.a * &k, &self.b * &k)
    }
}

impl fmt::Display for Qs3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b_sign = if self.b.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{}/{}{}{}/{}*sqrt3",
            self.a.numer(),
            self.a.denom(),
            b_sign,
            self.b.numer().abs(),
            self.b.denom()
        )
    }
}

fn parse_fraction(s: &str) -> Result<BigRational, FieldError> {
    let bad = || FieldError::Parse(s.to_string());
    let (n, d) = s.split_once('/').ok_or_else(bad)?;
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for Qs3 {
    type Err = FieldError;

    /// Parses the `p/q+r/s*sqrt3` form produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .strip_suffix("*sqrt3")
            .ok_or_else(|| FieldError::Parse(s.to_string()))?;
        // The separator is the first sign after the leading one.
        let split = body
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .ok_or_else(|| FieldError::Parse(s.to_string()))?;
        let (a, b) = body.split_at(split);
        let b = b.strip_prefix('+').unwrap_or(b);
        Ok(Qs3::new(parse_fraction(a)?, parse_fraction(b)?))
    }
}

impl Serialize for Qs3 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Qs3 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a Qs3> for &'a Qs3 {
    type Output = Qs3;
    fn add(self, rhs: &Qs3) -> Qs3 {
        Qs3::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a Qs3> for &'a Qs3 {
    type Output = Qs3;
    fn sub(self, rhs: &Qs3) -> Qs3 {
        Qs3::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a Qs3> for &'a Qs3 {
    type Output = Qs3;
    fn mul(self, rhs: &Qs3) -> Qs3 {
        if self.is_zero() || rhs.is_zero() {
            return Qs3::zero();
        }
        let three = BigRational::from_integer(BigInt::from(3));
        let a = &self.a * &rhs.a + three * (&self.b * &rhs.b);
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Qs3::new(a, b)
    }
}

impl Neg for &Qs3 {
    type Output = Qs3;
    fn neg(self) -> Qs3 {
        Qs3::new(-&self.a, -&self.b)
    }
}

impl Add for Qs3 {
    type Output = Qs3;
    fn add(self, rhs: Qs3) -> Qs3 {
        &self + &rhs
    }
}

impl Sub for Qs3 {
    type Output = Qs3;
    fn sub(self, rhs: Qs3) -> Qs3 {
        &self - &rhs
    }
}

impl Mul for Qs3 {
    type Output = Qs3;
    fn mul(self, rhs: Qs3) -> Qs3 {
        &self * &rhs
    }
}

impl Neg for Qs3 {
    type Output = Qs3;
    fn neg(self) -> Qs3 {
        Qs3::new(-self.a, -self.b)
    }
}

impl AddAssign<&Qs3> for Qs3 {
    fn add_assign(&mut self, rhs: &Qs3) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&Qs3> for Qs3 {
    fn sub_assign(&mut self, rhs: &Qs3) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: (i64, i64), b: (i64, i64)) -> Qs3 {
        Qs3::from_ratios(a, b)
    }

    #[test]
    fn product_of_conjugate_pair() {
        let x = q((1, 1), (1, 1));
        let y = q((-1, 1), (1, 1));
        assert_eq!(&x * &y, Qs3::from_int(2));
    }

    #[test]
    fn rationalized_inverse() {
        let x = q((1, 1), (1, 1));
        assert_eq!(Qs3::one().checked_div(&x).unwrap(), q((-1, 2), (1, 2)));
    }

    #[test]
    fn sqrt3_terms_cancel() {
        let x = q((-3, 8), (3, 8));
        let y = q((-3, 8), (-3, 8));
        assert_eq!(&x + &y, Qs3::rational(-3, 4));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            Qs3::one().checked_div(&Qs3::zero()),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn conj_examples() {
        assert_eq!(q((-3, 8), (3, 8)).conj(), q((-3, 8), (-3, 8)));
        assert_eq!(Qs3::rational(1, 3).conj(), Qs3::rational(1, 3));
        let x = q((17, 88), (10, 88));
        assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn exact_signs() {
        assert_eq!(q((7, 1), (-4, 1)).sign(), 1);
        assert_eq!(q((-1, 1), (-1, 1)).sign(), -1);
        assert_eq!(Qs3::zero().sign(), 0);
        assert_eq!(q((-7, 1), (4, 1)).sign(), -1);
        assert_eq!(q((6, 1), (-4, 1)).sign(), -1);
    }

    #[test]
    fn float_conversion() {
        // 0.375 * (sqrt(3) - 1) and -0.375 * (1 + sqrt(3)), from a 30-digit evaluation.
        assert!((q((-3, 8), (3, 8)).to_f64() - 0.274_519_052_838_329_1).abs() < 1e-15);
        assert!((q((-3, 8), (-3, 8)).to_f64() + 1.024_519_052_838_329).abs() < 1e-15);
        assert!((Qs3::rational(1, 3).to_f64() - 1.0 / 3.0).abs() < 1e-16);
        // 7 - 4√3 = 0.0717967697244908...
        assert!((q((7, 1), (-4, 1)).to_f64() - 0.071_796_769_724_490_8).abs() < 1e-16);
    }

    #[test]
    fn display_and_parse() {
        let m4 = q((-351, 704), (-189, 704));
        assert_eq!(m4.to_string(), "-351/704-189/704*sqrt3");
        assert_eq!(q((-9, 8), (3, 8)).to_string(), "-9/8+3/8*sqrt3");
        assert_eq!(Qs3::zero().to_string(), "0/1+0/1*sqrt3");
        assert_eq!("-351/704-189/704*sqrt3".parse::<Qs3>().unwrap(), m4);
        assert_eq!("2/4+0/1*sqrt3".parse::<Qs3>().unwrap(), Qs3::rational(1, 2));
        assert!("1/0+0/1*sqrt3".parse::<Qs3>().is_err());
        assert!("1/2".parse::<Qs3>().is_err());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let l = q((-1, 1), (-1, 1));
        assert_eq!(l.pow(3), q((-10, 1), (-6, 1)));
        assert_eq!(l.pow(0), Qs3::one());
    }

    fn small() -> impl Strategy<Value = Qs3> {
        (-40i64..40, 1i64..12, -40i64..40, 1i64..12)
            .prop_map(|(an, ad, bn, bd)| q((an, ad), (bn, bd)))
    }

    proptest! {
        #[test]
        fn field_axioms(x in small(), y in small(), z in small()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x + &y, &y + &x);
            if !x.is_zero() {
                prop_assert_eq!(&x * &Qs3::one().checked_div(&x).unwrap(), Qs3::one());
            }
        }

        #[test]
        fn conj_is_ring_homomorphism(x in small(), y in small()) {
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
        }

        #[test]
        fn sign_times_conj_sign_is_norm_sign(x in small()) {
            let norm_sign = match x.norm().cmp(&BigRational::zero()) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            };
            prop_assert_eq!(x.sign() * x.conj().sign(), norm_sign);
        }

        #[test]
        fn float_close_to_naive(x in small()) {
            let naive = x.a().to_f64().unwrap() + x.b().to_f64().unwrap() * 3f64.sqrt();
            let got = x.to_f64();
            let ulp = f64::EPSILON * naive.abs().max(got.abs()).max(1.0);
            // Naive evaluation loses digits under cancellation; scale by the
            // magnitude of the terms rather than the sum.
            let scale = x.a().to_f64().unwrap().abs() + x.b().to_f64().unwrap().abs() * 3f64.sqrt();
            prop_assert!((got - naive).abs() <= 4.0 * ulp.max(f64::EPSILON * scale));
        }

        #[test]
        fn display_roundtrip(x in small()) {
            prop_assert_eq!(x.to_string().parse::<Qs3>().unwrap(), x);
        }
    }
}
