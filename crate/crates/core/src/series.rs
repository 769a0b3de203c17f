//! Truncated univariate power series.
//!
//! A series of order `K` stores the coefficients of `x^0 .. x^K`. Binary
//! operations truncate to the smaller of the two orders, so the order of a
//! result always states exactly which coefficients are known.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::SeriesError;
use crate::field::Qs3;

/// Coefficient ring for [`Series`].
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale_int(&self, k: i64) -> Self;
}

impl Coefficient for Qs3 {
    fn zero() -> Self {
        Qs3::zero()
    }
    fn one() -> Self {
        Qs3::one()
    }
    fn is_zero(&self) -> bool {
        Qs3::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale_int(&self, k: i64) -> Self {
        Qs3::scale_int(self, k)
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Series<C> {
    order: usize,
    coeffs: Vec<C>,
}

/// Series with exact Q(√3) coefficients.
pub type TruncSeries = Series<Qs3>;

impl<C: Coefficient> Series<C> {
    /// Pads with zeros or truncates so that exactly `order + 1` coefficients
    /// are stored.
    pub fn new(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Series { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series::new(Vec::new(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        Series::new(vec![c], order)
    }

    /// The series `x` (identity for composition).
    pub fn identity(order: usize) -> Self {
        Series::monomial(C::one(), 1, order)
    }

    pub fn monomial(c: C, power: usize, order: usize) -> Self {
        let mut coeffs = vec![C::zero(); order + 1];
        if power <= order {
            coeffs[power] = c;
        }
        Series { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &C {
        &self.coeffs[i]
    }

    pub fn set_coeff(&mut self, i: usize, c: C) {
        self.coeffs[i] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    /// Index of the lowest nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order, "cannot raise the order of a series");
        Series::new(self.coeffs[..=order].to_vec(), order)
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].add(&rhs.coeffs[i]))
            .collect();
        Series { order, coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].sub(&rhs.coeffs[i]))
            .collect();
        Series { order, coeffs }
    }

    pub fn neg(&self) -> Self {
        self.map(C::neg)
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Series { order, coeffs }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| x.mul(c))
    }

    /// `self(inner(x))` by Horner's rule in the truncated ring.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let order = self.order.min(inner.order);
        let inner = inner.truncate(order);
        let mut acc = Series::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].add(c);
        }
        Ok(acc)
    }

    pub fn derive(&self) -> Result<Self, SeriesError> {
        if self.order == 0 {
            return Err(SeriesError::OrderTooLow);
        }
        let coeffs = (1..=self.order)
            .map(|i| self.coeffs[i].scale_int(i as i64))
            .collect();
        Ok(Series {
            order: self.order - 1,
            coeffs,
        })
    }

    /// Powers `self^0 ..= self^n`, each truncated to the order of `self`.
    pub fn powers(&self, n: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(Series::constant(C::one(), self.order));
        for k in 1..=n {
            let next = out[k - 1].mul(self);
            out.push(next);
        }
        out
    }
}

impl TruncSeries {
    pub fn conj(&self) -> Self {
        self.map(Qs3::conj)
    }

    /// Horner evaluation of the float images of the coefficients.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(Qs3::to_f64).collect()
    }
}

/// Horner evaluation of float coefficients.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(coeffs: &[Qs3], order: usize) -> TruncSeries {
        Series::new(coeffs.to_vec(), order)
    }

    fn r(n: i64, d: i64) -> Qs3 {
        Qs3::rational(n, d)
    }

    fn f_conjugate() -> TruncSeries {
        s(
            &[
                r(1, 3),
                Qs3::zero(),
                Qs3::from_ratios((-3, 8), (-3, 8)),
                Qs3::zero(),
                Qs3::from_ratios((-351, 704), (-189, 704)),
            ],
            4,
        )
    }

    #[test]
    fn square_of_one_plus_x() {
        let a = s(&[r(1, 1), r(1, 1)], 2);
        assert_eq!(a.mul(&a), s(&[r(1, 1), r(2, 1), r(1, 1)], 2));
    }

    #[test]
    fn self_difference_is_zero() {
        let a = s(&[r(1, 3), Qs3::zero(), r(-1, 1)], 2);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn multiplicative_identity() {
        let f = f_conjugate();
        assert_eq!(f.mul(&Series::constant(Qs3::one(), 4)), f);
    }

    #[test]
    fn mixed_orders_truncate_to_weaker() {
        let a = s(&[r(1, 1), r(1, 1)], 5);
        let b = s(&[r(1, 1)], 2);
        assert_eq!(a.mul(&b).order(), 2);
        assert_eq!(a.add(&b).order(), 2);
    }

    #[test]
    fn compose_examples() {
        let a = Series::monomial(r(1, 1), 2, 4);
        let b = Series::monomial(r(2, 1), 1, 4);
        assert_eq!(a.compose(&b).unwrap(), Series::monomial(r(4, 1), 2, 4));

        // (1/3 - (3/8)(1+√3)x²) ∘ (-(1+√3)x); (1+√3)³ = 10+6√3 by hand.
        let one_plus = Qs3::from_ratios((1, 1), (1, 1));
        let a = s(&[r(1, 3), Qs3::zero(), -&(&r(3, 8) * &one_plus)], 2);
        let b = s(&[Qs3::zero(), -&one_plus], 2);
        let want = s(
            &[
                r(1, 3),
                Qs3::zero(),
                -&(&r(3, 8) * &Qs3::from_ratios((10, 1), (6, 1))),
            ],
            2,
        );
        assert_eq!(a.compose(&b).unwrap(), want);

        let f = f_conjugate();
        assert_eq!(f.compose(&Series::identity(4)).unwrap(), f);
    }

    #[test]
    fn compose_rejects_constant_term() {
        let f = f_conjugate();
        assert_eq!(f.compose(&f), Err(SeriesError::NonzeroConstantTerm));
    }

    #[test]
    fn derive_examples() {
        let one_plus = Qs3::from_ratios((1, 1), (1, 1));
        let f = s(&[r(1, 3), Qs3::zero(), -&(&r(3, 8) * &one_plus)], 2);
        assert_eq!(
            f.derive().unwrap(),
            s(&[Qs3::zero(), -&(&r(3, 4) * &one_plus)], 1)
        );
        assert!(Series::constant(r(5, 1), 3).derive().unwrap().is_zero());
        assert_eq!(
            Series::monomial(r(1, 1), 3, 3).derive().unwrap(),
            Series::monomial(r(3, 1), 2, 2)
        );
        assert_eq!(
            Series::<Qs3>::constant(r(1, 1), 0).derive(),
            Err(SeriesError::OrderTooLow)
        );
    }

    #[test]
    fn float_evaluation() {
        let f = f_conjugate();
        assert!((f.eval_f64(0.0) - 1.0 / 3.0).abs() < 1e-16);
        let s3 = 3f64.sqrt();
        let want = 1.0 / 3.0 - 0.375 * (1.0 + s3) * 0.01 - 27.0 / 704.0 * (13.0 + 7.0 * s3) * 1e-4;
        assert!((f.eval_f64(0.1) - want).abs() < 1e-15);
        assert_eq!(TruncSeries::zero(3).eval_f64(5.0), 0.0);
    }

    fn arb_series(order: usize, zero_const: bool) -> impl Strategy<Value = TruncSeries> {
        proptest::collection::vec((-9i64..9, 1i64..5, -9i64..9, 1i64..5), order + 1).prop_map(
            move |v| {
                let mut c: Vec<Qs3> = v
                    .into_iter()
                    .map(|(a, b, c, d)| Qs3::from_ratios((a, b), (c, d)))
                    .collect();
                if zero_const {
                    c[0] = Qs3::zero();
                }
                Series::new(c, order)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn ring_laws(a in arb_series(5, false), b in arb_series(5, false), c in arb_series(5, false)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn leibniz_rule(a in arb_series(5, false), b in arb_series(5, false)) {
            let lhs = a.mul(&b).derive().unwrap();
            let rhs = a.derive().unwrap().mul(&b.truncate(4)).add(&a.truncate(4).mul(&b.derive().unwrap()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn composition_is_associative(a in arb_series(4, false), b in arb_series(4, true), c in arb_series(4, true)) {
            let lhs = a.compose(&b).unwrap().compose(&c).unwrap();
            let rhs = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
