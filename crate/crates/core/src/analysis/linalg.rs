//! Exact Gauss–Jordan elimination over Q(√3).

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::field::Qs3;

/// Dense row-major matrix with exact entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Qs3>,
}

/// Primes `p ≡ 11 (mod 12)` below 2^61, for which 3 is a square mod `p`.
pub const RANK_PRIMES: [u64; 4] = [
    2305843009213693907,
    2305843009213693487,
    2305843009213692671,
    2305843009213692527,
];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Image of a rational in `F_p`, or `None` when `p` divides the denominator.
fn rational_mod(r: &num_rational::BigRational, p: u64) -> Option<u64> {
    let m = BigInt::from(p);
    let reduce = |x: &BigInt| {
        let v = x % &m;
        let v = if v < BigInt::zero() { v + &m } else { v };
        v.to_u64().expect("reduced below p")
    };
    let d = reduce(r.denom());
    (d != 0).then(|| mul_mod(reduce(r.numer()), inv_mod(d, p), p))
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Rough size of an entry, used only to prefer small pivots.
fn weight(x: &Qs3) -> u64 {
    let bits = |r: &num_rational::BigRational| {
        if r.is_zero() {
            0
        } else {
            r.numer().bits() + r.denom().bits()
        }
    };
    bits(x.a()) + bits(x.b())
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Qs3::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Qs3>>) -> Self {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Qs3 {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Qs3) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn mul_vec(&self, v: &[Qs3]) -> Vec<Qs3> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(Qs3::zero(), |acc, c| {
                    let e = self.get(r, c);
                    if e.is_zero() || v[c].is_zero() {
                        acc
                    } else {
                        &acc + &(e * &v[c])
                    }
                })
            })
            .collect()
    }

    /// Gauss–Jordan elimination. Among the nonzero candidates in a column the
    /// entry with the fewest bits is chosen as pivot; ties go to the upper row.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let best = (row..m.rows)
                .filter(|&r| !m.get(r, col).is_zero())
                .min_by_key(|&r| weight(m.get(r, col)));
            let Some(p) = best else { continue };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let pv = m.get(row, c);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c) - &(&factor * pv);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Rank of the image under `√3 ↦ s`, `s² ≡ 3 (mod p)`.
    ///
    /// This is a ring homomorphism on entries whose denominators avoid `p`,
    /// so every minor that survives is nonzero over Q(√3): the result is a
    /// lower bound for the exact rank. Returns `None` if some denominator
    /// vanishes mod `p`.
    pub fn rank_mod_p(&self, p: u64) -> Option<usize> {
        let s = pow_mod(3, (p + 1) / 4, p);
        debug_assert_eq!(mul_mod(s, s, p), 3);
        let mut m = Vec::with_capacity(self.data.len());
        for x in &self.data {
            let a = rational_mod(x.a(), p)?;
            let b = rational_mod(x.b(), p)?;
            m.push((a + mul_mod(b, s, p)) % p);
        }
        let cols = self.cols;
        let mut row = 0;
        for col in 0..cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| m[r * cols + col] != 0) else {
                continue;
            };
            for c in 0..cols {
                m.swap(row * cols + c, piv * cols + c);
            }
            let inv = inv_mod(m[row * cols + col], p);
            for r in row + 1..self.rows {
                let f = mul_mod(m[r * cols + col], inv, p);
                if f == 0 {
                    continue;
                }
                for c in col..cols {
                    let sub = mul_mod(f, m[row * cols + c], p);
                    m[r * cols + c] = (m[r * cols + c] + p - sub) % p;
                }
            }
            row += 1;
        }
        Some(row)
    }

    /// Exact rank when a modular image already has full column rank.
    pub fn full_column_rank_certificate(&self) -> Option<usize> {
        RANK_PRIMES
            .iter()
            .filter_map(|&p| self.rank_mod_p(p))
            .find(|&r| r == self.cols)
    }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// One basis vector per free column, with that column set to 1.
    pub fn nullspace(&self) -> Vec<Vec<Qs3>> {
        let cols = self.matrix.cols();
        let free: Vec<usize> = (0..cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Qs3::zero(); cols];
                v[f] = Qs3::one();
                for (r, &p) in self.pivots.iter().enumerate() {
                    v[p] = -self.matrix.get(r, f);
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Qs3 {
        Qs3::from_int(n)
    }

    #[test]
    fn full_rank_square() {
        let m = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(3)]]);
        let e = m.rref();
        assert_eq!(e.rank(), 2);
        assert!(e.nullspace().is_empty());
    }

    #[test]
    fn rank_deficient_with_sqrt3_entries() {
        let s = Qs3::sqrt3();
        // Second row is √3 times the first.
        let m = Matrix::from_rows(vec![
            vec![q(1), q(2), q(3)],
            vec![s.clone(), &s * &q(2), &s * &q(3)],
            vec![q(0), q(1), q(1)],
        ]);
        let e = m.rref();
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(Qs3::is_zero));
    }

    #[test]
    fn modular_rank_bounds_exact_rank() {
        let s = Qs3::sqrt3();
        let m = Matrix::from_rows(vec![
            vec![q(1), s.clone()],
            vec![s.clone(), q(3)],
            vec![Qs3::rational(1, 7), q(0)],
        ]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_mod_p(RANK_PRIMES[0]), Some(2));
        assert_eq!(m.full_column_rank_certificate(), Some(2));
        let singular = Matrix::from_rows(vec![vec![q(1), s.clone()], vec![s.clone(), q(3)]]);
        assert_eq!(singular.rank_mod_p(RANK_PRIMES[1]), Some(1));
        assert_eq!(singular.full_column_rank_certificate(), None);
    }

    #[test]
    fn zero_matrix() {
        let m = Matrix::zeros(3, 2);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.rref().nullspace().len(), 2);
    }
}
