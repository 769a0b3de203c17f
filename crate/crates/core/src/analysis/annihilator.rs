//! Search for polynomial relations `P(x, f(x)) ≡ 0` of bounded total degree.
//!
//! `P` is written in the shifted basis `x^i (y − c)^j`, `i + j ≤ D`. Each
//! Taylor coefficient of `P(x, f(x))` is a linear form in the unknown
//! coefficients `p_{i,j}`; the jet matrix collects these forms for orders
//! `0..=K` and its exact nullspace is the space of relations visible at
//! that order.

use serde::{Deserialize, Serialize};

use super::linalg::Matrix;
use crate::branch::BranchSolution;
use crate::error::AnalysisError;
use crate::field::Qs3;
use crate::series::{Series, TruncSeries};

/// Extra jet conditions beyond the number of unknowns.
pub const OVERSAMPLING: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub i: usize,
    pub j: usize,
    pub coeff: Qs3,
}

/// A polynomial `Σ p_{i,j} x^i (y − shift)^j`, nonzero terms only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnihilatorResult {
    pub degree: usize,
    pub jet_order: usize,
    pub unknowns: usize,
    pub shift: Qs3,
    pub rank: usize,
    pub nullity: usize,
    pub basis: Vec<Relation>,
}

pub fn unknown_count(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

/// Required series order for a degree bound.
pub fn required_order(degree: usize) -> usize {
    unknown_count(degree) + OVERSAMPLING
}

/// Monomials `(i, j)` ordered by total degree, then by `j`.
pub fn monomials(degree: usize) -> Vec<(usize, usize)> {
    (0..=degree)
        .flat_map(|d| (0..=d).map(move |j| (d - j, j)))
        .collect()
}

/// Jet matrix: entry `(k, col)` is `[x^k] x^i (f − shift)^j`.
pub fn jet_matrix(f: &TruncSeries, shift: &Qs3, degree: usize, jet_order: usize) -> Matrix {
    let f = f.truncate(jet_order);
    let g = f.sub(&Series::constant(shift.clone(), jet_order));
    let powers = g.powers(degree);
    let mons = monomials(degree);
    let mut m = Matrix::zeros(jet_order + 1, mons.len());
    for (col, &(i, j)) in mons.iter().enumerate() {
        for k in i..=jet_order {
            let c = powers[j].coeff(k - i);
            if !c.is_zero() {
                m.set(k, col, c.clone());
            }
        }
    }
    m
}

impl Relation {
    pub fn from_vector(v: &[Qs3], degree: usize) -> Relation {
        let terms = monomials(degree)
            .into_iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j), c)| Term {
                i,
                j,
                coeff: c.clone(),
            })
            .collect();
        Relation { terms }
    }

    pub fn to_vector(&self, degree: usize) -> Vec<Qs3> {
        monomials(degree)
            .into_iter()
            .map(|(i, j)| {
                self.terms
                    .iter()
                    .find(|t| t.i == i && t.j == j)
                    .map_or_else(Qs3::zero, |t| t.coeff.clone())
            })
            .collect()
    }

    /// Exact proportionality test: `self = c · other` for some nonzero `c`.
    pub fn is_proportional_to(&self, other: &Relation, degree: usize) -> bool {
        let a = self.to_vector(degree);
        let b = other.to_vector(degree);
        let Some(k) = b.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        if a[k].is_zero() {
            return false;
        }
        let scale = a[k].checked_div(&b[k]).expect("nonzero");
        a.iter().zip(&b).all(|(x, y)| *x == &scale * y)
    }
}

/// Exact rank and nullspace of the jet matrix at `K = M + 10`.
pub fn annihilator_rank_series(
    f: &TruncSeries,
    shift: &Qs3,
    degree: usize,
) -> Result<AnnihilatorResult, AnalysisError> {
    let jet_order = required_order(degree);
    if f.order() < jet_order {
        return Err(AnalysisError::OrderTooSmall {
            have: f.order(),
            need: jet_order,
        });
    }
    let matrix = jet_matrix(f, shift, degree, jet_order);
    let unknowns = unknown_count(degree);
    if let Some(rank) = matrix.full_column_rank_certificate() {
        return Ok(AnnihilatorResult {
            degree,
            jet_order,
            unknowns,
            shift: shift.clone(),
            rank,
            nullity: 0,
            basis: Vec::new(),
        });
    }
    let echelon = matrix.rref();
    let basis: Vec<Relation> = echelon
        .nullspace()
        .iter()
        .map(|v| Relation::from_vector(v, degree))
        .collect();
    Ok(AnnihilatorResult {
        degree,
        jet_order,
        unknowns,
        shift: shift.clone(),
        rank: echelon.rank(),
        nullity: unknowns - echelon.rank(),
        basis,
    })
}

/// Annihilator search for a solved branch, in the basis `x^i (y − 1/3)^j`.
pub fn annihilator_rank(
    s: &BranchSolution,
    degree: usize,
) -> Result<AnnihilatorResult, AnalysisError> {
    annihilator_rank_series(&s.f_series, &Qs3::rational(1, 3), degree)
}

/// Checks that every basis vector is annihilated by the jet matrix.
pub fn verify_basis(f: &TruncSeries, r: &AnnihilatorResult) -> bool {
    let m = jet_matrix(f, &r.shift, r.degree, r.jet_order);
    r.basis
        .iter()
        .all(|rel| m.mul_vec(&rel.to_vector(r.degree)).iter().all(Qs3::is_zero))
}
