//! Synthetic series with a known polynomial relation, used to confirm that
//! the annihilator search finds relations when they exist.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::annihilator::{annihilator_rank_series, required_order, Relation, Term};
use super::linalg::Matrix;
use crate::error::AnalysisError;
use crate::field::Qs3;
use crate::series::{Series, TruncSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlFamily {
    /// `y − c = p(x)` with `deg p = D`.
    Graph,
    /// `(1 − a x)(y − c) = x q(x)` with `deg q = D − 1`.
    Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Control {
    pub family: ControlFamily,
    pub degree: usize,
    pub shift: Qs3,
    pub series: TruncSeries,
    pub relation: Relation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlOutcome {
    pub family: ControlFamily,
    pub degree: usize,
    pub nullity: usize,
    /// The known relation lies in the computed nullspace.
    pub recovered: bool,
    /// The nullspace is one-dimensional and spanned by the known relation.
    pub proportional: bool,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_scalar(rng: &mut StdRng, nonzero: bool) -> Qs3 {
    loop {
        let a = ratio(rng.random_range(-6..=6), rng.random_range(1..=4));
        let b = ratio(rng.random_range(-3..=3), rng.random_range(1..=3));
        let x = Qs3::new(a, b);
        if !nonzero || !x.is_zero() {
            return x;
        }
    }
}

fn random_control(rng: &mut StdRng) -> Control {
    let degree = rng.random_range(2..=4);
    let family = if rng.random_bool(0.5) {
        ControlFamily::Graph
    } else {
        ControlFamily::Rational
    };
    let order = required_order(degree);
    let shift = Qs3::new(
        ratio(rng.random_range(-4..=4), rng.random_range(1..=5)),
        ratio(0, 1),
    );
    let mut terms = vec![Term {
        i: 0,
        j: 1,
        coeff: Qs3::one(),
    }];
    let g = match family {
        ControlFamily::Graph => {
            let p: Vec<Qs3> = (0..=degree)
                .map(|i| random_scalar(rng, i == degree))
                .collect();
            for (i, c) in p.iter().enumerate() {
                if !c.is_zero() {
                    terms.push(Term { i, j: 0, coeff: -c });
                }
            }
            Series::new(p, order)
        }
        ControlFamily::Rational => {
            let a = random_scalar(rng, true);
            let q: Vec<Qs3> = (0..degree)
                .map(|i| random_scalar(rng, i == 0 || i + 1 == degree))
                .collect();
            terms.push(Term {
                i: 1,
                j: 1,
                coeff: -&a,
            });
            for (i, c) in q.iter().enumerate() {
                if !c.is_zero() {
                    terms.push(Term {
                        i: i + 1,
                        j: 0,
                        coeff: -c,
                    });
                }
            }
            // x q(x) Σ (a x)^k
            let mut xq = vec![Qs3::zero()];
            xq.extend(q);
            let geometric: Vec<Qs3> = (0..=order as u32).map(|k| a.pow(k)).collect();
            Series::new(xq, order).mul(&Series::new(geometric, order))
        }
    };
    let series = g.add(&Series::constant(shift.clone(), order));
    terms.sort_by_key(|t| (t.i + t.j, t.j));
    Control {
        family,
        degree,
        shift,
        series,
        relation: Relation { terms },
    }
}

/// `count` controls drawn from a fixed seed.
pub fn controls(count: usize, seed: u64) -> Vec<Control> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| random_control(&mut rng)).collect()
}

/// Whether `relation` is an exact linear combination of `basis`.
pub fn in_span(basis: &[Relation], relation: &Relation, degree: usize) -> bool {
    if basis.is_empty() {
        return false;
    }
    let rows: Vec<Vec<Qs3>> = basis.iter().map(|r| r.to_vector(degree)).collect();
    let base = Matrix::from_rows(rows.clone()).rank();
    let mut with = rows;
    with.push(relation.to_vector(degree));
    Matrix::from_rows(with).rank() == base
}

pub fn check_control(c: &Control) -> Result<ControlOutcome, AnalysisError> {
    let r = annihilator_rank_series(&c.series, &c.shift, c.degree)?;
    let recovered = in_span(&r.basis, &c.relation, c.degree);
    let proportional = r.nullity == 1 && r.basis[0].is_proportional_to(&c.relation, c.degree);
    Ok(ControlOutcome {
        family: c.family,
        degree: c.degree,
        nullity: r.nullity,
        recovered,
        proportional,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::annihilator::jet_matrix;

    #[test]
    fn known_relations_annihilate_their_series() {
        for c in controls(20, 7) {
            let m = jet_matrix(&c.series, &c.shift, c.degree, required_order(c.degree));
            let image = m.mul_vec(&c.relation.to_vector(c.degree));
            assert!(image.iter().all(Qs3::is_zero), "{:?}", c.family);
        }
    }

    #[test]
    fn controls_are_reproducible() {
        assert_eq!(controls(5, 1), controls(5, 1));
        assert_ne!(controls(5, 1), controls(5, 2));
    }

    #[test]
    fn every_control_is_recovered() {
        for c in controls(20, 11) {
            let out = check_control(&c).unwrap();
            assert!(out.nullity >= 1);
            assert!(out.recovered);
        }
    }

    #[test]
    fn span_membership() {
        let rel = |c: i64| Relation {
            terms: vec![Term {
                i: 1,
                j: 0,
                coeff: Qs3::from_int(c),
            }],
        };
        assert!(in_span(&[rel(2)], &rel(5), 1));
        let other = Relation {
            terms: vec![Term {
                i: 0,
                j: 1,
                coeff: Qs3::one(),
            }],
        };
        assert!(!in_span(&[rel(2)], &other, 1));
        assert!(!in_span(&[], &other, 1));
    }
}
