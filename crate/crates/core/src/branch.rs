//! Order-by-order solution of the trisector functional equations.
//!
//! The curve is the graph of an even function `f` and `t(x)` is the odd
//! reparametrisation with `(t(x), f(t(x)))` the mirror of the envelope point
//! of `(x, f(x))`. They satisfy
//!
//! ```text
//! R1 = (t − x)² + (f(t) + f)² − x² − (f − 1)²  = 0
//! R2 = t − x + (f + f(t)) · f'(t)              = 0
//! ```
//!
//! The quadratic seed fixes `(λ, q₂) = (λ₁, m₂)`. Each later step `j`
//! introduces the pair `(m_{2j}, λ_{2j−1})` as formal unknowns, pushes
//! affine-in-unknowns coefficients through both residuals and reads a 2×2
//! linear system off `R1[x^{2j}]` and `R2[x^{2j−1}]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SolverError;
use crate::field::Qs3;
use crate::series::{Coefficient, Series, TruncSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Convex curve, `λ = √3 − 1`.
    Trisector,
    /// Spiral-like curve, `λ = −√3 − 1`.
    Conjugate,
}

impl Branch {
    pub fn other(self) -> Branch {
        match self {
            Branch::Trisector => Branch::Conjugate,
            Branch::Conjugate => Branch::Trisector,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Trisector => "trisector",
            Branch::Conjugate => "conjugate",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trisector" => Ok(Branch::Trisector),
            "conjugate" => Ok(Branch::Conjugate),
            _ => Err(format!(
                "unknown branch {s:?} (expected trisector or conjugate)"
            )),
        }
    }
}

/// Root `(λ, q₂)` of the quadratic seed system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub lambda: Qs3,
    pub q2: Qs3,
}

impl Seed {
    pub fn conj(&self) -> Seed {
        Seed {
            lambda: self.lambda.conj(),
            q2: self.q2.conj(),
        }
    }
}

/// Both roots of `λ − 1 + (4/3)λq₂ = 0`, `λ² − 2λ + (4/3)(λ² + 2)q₂ = 0`,
/// trisector first.
pub fn seed_solutions() -> [Seed; 2] {
    let tri = Seed {
        lambda: Qs3::from_ratios((-1, 1), (1, 1)),
        q2: Qs3::from_ratios((-3, 8), (3, 8)),
    };
    let conj = tri.conj();
    [tri, conj]
}

pub fn seed_for(branch: Branch) -> Seed {
    let [tri, conj] = seed_solutions();
    match branch {
        Branch::Trisector => tri,
        Branch::Conjugate => conj,
    }
}

/// Left-hand sides of the seed system at `(λ, q₂)`.
pub fn seed_residuals(seed: &Seed) -> (Qs3, Qs3) {
    let four_thirds = Qs3::rational(4, 3);
    let l = &seed.lambda;
    let first = &(l - &Qs3::one()) + &(&(&four_thirds * l) * &seed.q2);
    let l2 = l * l;
    let second =
        &(&l2 - &l.scale_int(2)) + &(&(&four_thirds * &(&l2 + &Qs3::from_int(2))) * &seed.q2);
    (first, second)
}

/// Determinant of the 2×2 system solved at step `k = 2j`, the step that
/// fixes `(m_k, λ_{k−1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Determinant {
    pub k: usize,
    pub value: Qs3,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchSolution {
    pub branch: Branch,
    pub order: usize,
    /// Coefficients `m_i` of `f`.
    pub f_series: TruncSeries,
    /// Coefficients `λ_i` of `t(x)`.
    pub t_series: TruncSeries,
    pub determinants: Vec<Determinant>,
    pub seed: Seed,
}

impl BranchSolution {
    pub fn m(&self, i: usize) -> &Qs3 {
        self.f_series.coeff(i)
    }

    pub fn lambda(&self, i: usize) -> &Qs3 {
        self.t_series.coeff(i)
    }

    pub fn determinant(&self, k: usize) -> Option<&Qs3> {
        self.determinants
            .iter()
            .find(|d| d.k == k)
            .map(|d| &d.value)
    }
}

/// Coefficient `c + u·U + v·V` in the two current unknowns. Products of two
/// non-constant parts are dropped and remembered in `nonlinear`.
#[derive(Clone, Debug, PartialEq)]
struct Affine {
    c: Qs3,
    u: Qs3,
    v: Qs3,
    nonlinear: bool,
}

impl Affine {
    fn constant(c: Qs3) -> Self {
        Affine {
            c,
            u: Qs3::zero(),
            v: Qs3::zero(),
            nonlinear: false,
        }
    }

    fn has_linear(&self) -> bool {
        !self.u.is_zero() || !self.v.is_zero()
    }
}

impl Coefficient for Affine {
    fn zero() -> Self {
        Affine::constant(Qs3::zero())
    }
    fn one() -> Self {
        Affine::constant(Qs3::one())
    }
    fn is_zero(&self) -> bool {
        self.c.is_zero() && self.u.is_zero() && self.v.is_zero() && !self.nonlinear
    }
    fn add(&self, rhs: &Self) -> Self {
        Affine {
            c: &self.c + &rhs.c,
            u: &self.u + &rhs.u,
            v: &self.v + &rhs.v,
            nonlinear: self.nonlinear || rhs.nonlinear,
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Affine {
            c: &self.c - &rhs.c,
            u: &self.u - &rhs.u,
            v: &self.v - &rhs.v,
            nonlinear: self.nonlinear || rhs.nonlinear,
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Affine::zero();
        }
        Affine {
            c: &self.c * &rhs.c,
            u: &(&self.c * &rhs.u) + &(&self.u * &rhs.c),
            v: &(&self.c * &rhs.v) + &(&self.v * &rhs.c),
            nonlinear: self.nonlinear || rhs.nonlinear || (self.has_linear() && rhs.has_linear()),
        }
    }
    fn neg(&self) -> Self {
        Affine {
            c: -&self.c,
            u: -&self.u,
            v: -&self.v,
            nonlinear: self.nonlinear,
        }
    }
    fn scale_int(&self, k: i64) -> Self {
        Affine {
            c: self.c.scale_int(k),
            u: self.u.scale_int(k),
            v: self.v.scale_int(k),
            nonlinear: self.nonlinear,
        }
    }
}

/// Both residual series for `f` and `t`. The first has the order of the
/// inputs, the second one less.
pub fn residuals<C: Coefficient>(
    f: &Series<C>,
    t: &Series<C>,
) -> Result<(Series<C>, Series<C>), SolverError> {
    let order = f.order().min(t.order());
    let x = Series::identity(order);
    let one = Series::constant(C::one(), order);
    let ft = f.compose(t)?;
    let fp_t = f.derive()?.compose(&t.truncate(order - 1))?;

    let t_minus_x = t.sub(&x);
    let sum = ft.add(f);
    let f_minus_1 = f.sub(&one);
    let r1 = t_minus_x
        .mul(&t_minus_x)
        .add(&sum.mul(&sum))
        .sub(&x.mul(&x))
        .sub(&f_minus_1.mul(&f_minus_1));
    let r2 = t_minus_x
        .truncate(order - 1)
        .add(&sum.truncate(order - 1).mul(&fp_t));
    Ok((r1, r2))
}

fn unknown_u() -> Affine {
    Affine {
        c: Qs3::zero(),
        u: Qs3::one(),
        v: Qs3::zero(),
        nonlinear: false,
    }
}

fn unknown_v() -> Affine {
    Affine {
        c: Qs3::zero(),
        u: Qs3::zero(),
        v: Qs3::one(),
        nonlinear: false,
    }
}

/// Coefficient `n` of the product of two coefficient sequences.
fn convolve_at(a: &[Affine], b: &[Affine], n: usize) -> Affine {
    (0..=n).fold(Affine::zero(), |acc, i| acc.add(&a[i].mul(&b[n - i])))
}

fn affine_vec(c: &[Qs3]) -> Vec<Affine> {
    c.iter().cloned().map(Affine::constant).collect()
}

/// Row `k` of the power table, `[x^k] t(x)^i` for `i = 0..=k`, from the
/// rows below it and the coefficients of `t`.
fn power_row(rows: &[Vec<Affine>], lam: &[Affine], k: usize) -> Vec<Affine> {
    let mut row = vec![Affine::zero(); k + 1];
    for (i, slot) in row.iter_mut().enumerate().skip(1) {
        // t^i = t · t^(i−1); t has no constant term.
        let mut acc = Affine::zero();
        for a in 1..=k + 1 - i {
            if lam[a].is_zero() {
                continue;
            }
            let prev = &rows[k - a];
            if i - 1 < prev.len() {
                acc = acc.add(&lam[a].mul(&prev[i - 1]));
            }
        }
        *slot = acc;
    }
    row
}

fn substitute(a: &Affine, u: &Qs3, v: &Qs3) -> Qs3 {
    &(&a.c + &(&a.u * u)) + &(&a.v * v)
}

/// Solves branch `branch` through even order `order`.
///
/// Coefficients of the powers `t(x)^i` are kept in a table that grows by two
/// rows per step, so only the two residual coefficients holding the new
/// unknowns are formed at each step.
pub fn solve_branch(branch: Branch, order: usize) -> Result<BranchSolution, SolverError> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(SolverError::InvalidOrder(order));
    }
    let seed = seed_for(branch);
    let mut m = vec![Qs3::zero(); order + 1];
    let mut l = vec![Qs3::zero(); order + 1];
    m[0] = Qs3::rational(1, 3);
    m[2] = seed.q2.clone();
    l[1] = seed.lambda.clone();

    let mut rows: Vec<Vec<Affine>> = vec![vec![Affine::one()]];
    let lam_seed = affine_vec(&l);
    for k in 1..=2 {
        let row = power_row(&rows, &lam_seed, k);
        rows.push(row);
    }

    let mut determinants = Vec::new();
    for j in 2..=order / 2 {
        let n = 2 * j;
        let mut lam = affine_vec(&l[..=n]);
        lam[n - 1] = unknown_v();
        let mut fc = affine_vec(&m[..=n]);
        fc[n] = unknown_u();

        for k in n - 1..=n {
            let row = power_row(&rows, &lam, k);
            rows.push(row);
        }

        // f(t(x)) through x^n and f'(t(x)) through x^(n−1).
        let ft: Vec<Affine> = (0..=n)
            .map(|k| (0..=k).fold(Affine::zero(), |acc, i| acc.add(&fc[i].mul(&rows[k][i]))))
            .collect();
        let fpt: Vec<Affine> = (0..n)
            .map(|k| {
                (0..=k).fold(Affine::zero(), |acc, i| {
                    acc.add(&fc[i + 1].scale_int(i as i64 + 1).mul(&rows[k][i]))
                })
            })
            .collect();

        let mut t_minus_x = lam.clone();
        t_minus_x[1] = t_minus_x[1].sub(&Affine::one());
        let sum: Vec<Affine> = (0..=n).map(|k| ft[k].add(&fc[k])).collect();
        let mut f_minus_1 = fc.clone();
        f_minus_1[0] = f_minus_1[0].sub(&Affine::one());

        // R1[x^n] and R2[x^(n−1)]; the −x² term only reaches order 2.
        let e1 = convolve_at(&t_minus_x, &t_minus_x, n)
            .add(&convolve_at(&sum, &sum, n))
            .sub(&convolve_at(&f_minus_1, &f_minus_1, n));
        let e2 = t_minus_x[n - 1].add(&convolve_at(&sum, &fpt, n - 1));

        if e1.nonlinear || e2.nonlinear {
            return Err(SolverError::Nonlinear { order: n });
        }
        // [e1.u e1.v; e2.u e2.v] (U, V)ᵀ = −(e1.c, e2.c)ᵀ
        let det = &(&e1.u * &e2.v) - &(&e1.v * &e2.u);
        if det.is_zero() {
            return Err(SolverError::Singular { order: n });
        }
        let u_num = &(&e1.v * &e2.c) - &(&e1.c * &e2.v);
        let v_num = &(&e1.c * &e2.u) - &(&e1.u * &e2.c);
        let u = u_num.checked_div(&det)?;
        let v = v_num.checked_div(&det)?;
        for row in &mut rows[n - 1..] {
            for a in row.iter_mut() {
                *a = Affine::constant(substitute(a, &u, &v));
            }
        }
        m[n] = u;
        l[n - 1] = v;
        determinants.push(Determinant { k: n, value: det });
    }

    Ok(BranchSolution {
        branch,
        order,
        f_series: Series::new(m, order),
        t_series: Series::new(l, order),
        determinants,
        seed,
    })
}

/// Applies the field conjugation to every coefficient.
pub fn conjugate_solution(s: &BranchSolution) -> BranchSolution {
    BranchSolution {
        branch: s.branch.other(),
        order: s.order,
        f_series: s.f_series.conj(),
        t_series: s.t_series.conj(),
        determinants: s
            .determinants
            .iter()
            .map(|d| Determinant {
                k: d.k,
                value: d.value.conj(),
            })
            .collect(),
        seed: s.seed.conj(),
    }
}

/// Exact residual series of a solution: `R1` through `K`, `R2` through `K − 1`.
pub fn residual_orders(s: &BranchSolution) -> Result<(TruncSeries, TruncSeries), SolverError> {
    residuals(&s.f_series, &s.t_series)
}

pub fn residuals_vanish(s: &BranchSolution) -> Result<bool, SolverError> {
    let (r1, r2) = residual_orders(s)?;
    Ok(r1.is_zero() && r2.is_zero())
}

pub fn branch_determinant_floats(s: &BranchSolution) -> Vec<(usize, f64)> {
    s.determinants
        .iter()
        .map(|d| (d.k, d.value.to_f64()))
        .collect()
}

/// Steps whose determinant lies within `tol` of `target`.
pub fn find_determinant(s: &BranchSolution, target: f64, tol: f64) -> Vec<usize> {
    branch_determinant_floats(s)
        .into_iter()
        .filter(|(_, d)| (d - target).abs() <= tol)
        .map(|(k, _)| k)
        .collect()
}
