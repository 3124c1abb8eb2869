//! The pentagram map written on the invariants.
//!
//! The mapped vertex lift is `lambda_k rho_k r_k` where `r_k` holds every
//! other invariant. Expanding `T(rho_k)` in the frame at `k` produces the
//! columns `F_{k+j} = K_k ... K_{k+j-1} r_{k+j}`; the mapped invariants are
//! the unique solution of a linear system in those columns, evaluated by
//! Cramer's rule. The normalization scalars `lambda_k` themselves need
//! (n+1)-th roots, but every ratio of them is rational, so the map on
//! invariants stays inside exact arithmetic.

use crate::cyclic::{solve_window_products, window_ratio_chain};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polygon::InvariantField;
use crate::scalar::Scalar;

/// The vector `r_k`: entry `j` is `a_k^j` (or 1 at j = 0) on the positions
/// sharing the parity of n, zero elsewhere.
pub fn r_vector<S: Scalar>(inv: &InvariantField<S>, k: i64) -> Vec<S> {
    let n = inv.dim();
    (0..=n)
        .map(|j| {
            if j % 2 == n % 2 {
                if j == 0 {
                    S::one()
                } else {
                    inv.get(k, j).clone()
                }
            } else {
                S::zero()
            }
        })
        .collect()
}

/// The complementary vector `p_k`, chosen so `p_k + r_k` is the last column
/// of the Maurer-Cartan matrix. Its last entry is always zero.
pub fn p_vector<S: Scalar>(inv: &InvariantField<S>, k: i64) -> Vec<S> {
    let n = inv.dim();
    (0..=n)
        .map(|j| {
            if j % 2 == n % 2 {
                S::zero()
            } else if j == 0 {
                S::one().neg()
            } else {
                inv.get(k, j).clone()
            }
        })
        .collect()
}

/// Structural positions where `r` (non-hat) vectors may be nonzero.
pub fn r_support(n: usize, j: usize) -> bool {
    j % 2 == n % 2
}

/// `K_k v` without forming the matrix: shift the entries down one slot and
/// add the last entry times the last column of `K_k`.
pub fn apply_mc<S: Scalar>(inv: &InvariantField<S>, k: i64, v: &[S]) -> Vec<S> {
    let n = inv.dim();
    assert_eq!(v.len(), n + 1);
    let last = &v[n];
    let mut out = shift_down(v);
    let lead = if n % 2 == 0 { S::one() } else { S::one().neg() };
    out[0] = out[0].add(&last.mul(&lead));
    for i in 1..=n {
        out[i] = out[i].add(&last.mul(inv.get(k, i)));
    }
    out
}

/// `[v]^1`: entries moved down one slot, zero inserted on top, last dropped.
pub fn shift_down<S: Scalar>(v: &[S]) -> Vec<S> {
    let mut out = Vec::with_capacity(v.len());
    out.push(S::zero());
    out.extend(v[..v.len() - 1].iter().cloned());
    out
}

/// `F_{k+j} = K_k K_{k+1} ... K_{k+j-1} r_{k+j}`; `j = 0` returns `r_k`.
pub fn f_vector<S: Scalar>(inv: &InvariantField<S>, k: i64, j: usize) -> Vec<S> {
    let mut v = r_vector(inv, k + j as i64);
    for m in (0..j as i64).rev() {
        v = apply_mc(inv, k + m, &v);
    }
    v
}

/// All `F_{k+j}` for `k` mod N and `j = 0..=n+1`, sharing the recursion
/// `F_j at k = K_k (F_{j-1} at k+1)`.
fn f_table<S: Scalar>(inv: &InvariantField<S>) -> Vec<Vec<Vec<S>>> {
    let len = inv.num_vertices();
    let n = inv.dim();
    let mut table: Vec<Vec<Vec<S>>> = (0..len)
        .map(|k| vec![r_vector(inv, k as i64)])
        .collect();
    for j in 1..=n + 1 {
        for k in 0..len {
            let prev = table[(k + 1) % len][j - 1].clone();
            let fkj = apply_mc(inv, k as i64, &prev);
            table[k].push(fkj);
        }
    }
    table
}

fn denominator_from_table<S: Scalar>(table: &[Vec<Vec<S>>], n: usize, k: usize) -> S {
    let cols: Vec<Vec<S>> = (0..=n).map(|j| table[k][j].clone()).collect();
    Matrix::from_cols(&cols).det()
}

/// `D_k = det(F_k, F_{k+1}, ..., F_{k+n})`. A zero value signals a
/// degenerate field; callers decide whether that is an error.
pub fn cramer_denominator<S: Scalar>(inv: &InvariantField<S>, k: i64) -> S {
    let len = inv.num_vertices();
    let table = f_table(inv);
    denominator_from_table(&table, inv.dim(), k.rem_euclid(len as i64) as usize)
}

/// `D_k^i`: the denominator determinant with column `i` replaced by
/// `F_{k+n+1}`, `1 <= i <= n`.
pub fn cramer_numerator<S: Scalar>(inv: &InvariantField<S>, k: i64, i: usize) -> S {
    let n = inv.dim();
    assert!((1..=n).contains(&i), "column index out of range");
    let len = inv.num_vertices();
    let table = f_table(inv);
    let kk = k.rem_euclid(len as i64) as usize;
    let cols: Vec<Vec<S>> = (0..=n)
        .map(|j| table[kk][if j == i { n + 1 } else { j }].clone())
        .collect();
    Matrix::from_cols(&cols).det()
}

/// Exact ratios of the normalization scalars.
///
/// Consecutive unit-window conditions give
/// `lambda_{k+n+1} = (D_k / D_{k+1}) lambda_k`; with gcd(N, n+1) = 1 the
/// (n+1)-step chain reaches every residue, expressing each `lambda_j` as
/// `lambda_0` times an explicit rational. The base factor cancels in every
/// ratio, so ratios are exact even though the scalars themselves need roots.
pub struct LambdaRatios<S> {
    rho: Vec<S>,
}

impl<S: Scalar> LambdaRatios<S> {
    pub fn new(inv: &InvariantField<S>) -> Result<Self> {
        let len = inv.num_vertices();
        let n = inv.dim();
        let table = f_table(inv);
        let mut targets = Vec::with_capacity(len);
        for k in 0..len {
            let d = denominator_from_table(&table, n, k);
            if d.is_zero() {
                return Err(Error::ZeroDenominator(k));
            }
            targets.push(S::one().div(&d));
        }
        Ok(LambdaRatios {
            rho: window_ratio_chain(&targets, n + 1)?,
        })
    }

    /// `lambda_a / lambda_b` (indices mod N).
    pub fn ratio_between(&self, a: i64, b: i64) -> S {
        let len = self.rho.len() as i64;
        let ra = &self.rho[a.rem_euclid(len) as usize];
        let rb = &self.rho[b.rem_euclid(len) as usize];
        ra.div(rb)
    }

    /// `lambda_{k+n+1} / lambda_{k+i}` with `n+1` recovered from the chain
    /// context: callers pass the dimension explicitly.
    pub fn map_ratio(&self, n: usize, k: i64, i: usize) -> S {
        self.ratio_between(k + n as i64 + 1, k + i as i64)
    }
}

/// `lambda_{k+n+1} / lambda_{k+i}`, exact.
pub fn lambda_ratio<S: Scalar>(inv: &InvariantField<S>, k: i64, i: usize) -> Result<S> {
    assert!(i <= inv.dim(), "offset out of range");
    let ratios = LambdaRatios::new(inv)?;
    Ok(ratios.map_ratio(inv.dim(), k, i))
}

/// Real normalization scalars for the float pipeline: magnitudes from the
/// additive cyclic system in `ln |lambda|`, signs over {-1, +1}. For odd n
/// the sign system can be unsolvable, in which case no real scalars exist.
pub fn lambda_solve_float<S: Scalar>(inv: &InvariantField<S>) -> Result<Vec<f64>> {
    let len = inv.num_vertices();
    let n = inv.dim();
    let table = f_table(inv);
    let mut targets = Vec::with_capacity(len);
    for k in 0..len {
        let d = denominator_from_table(&table, n, k);
        if d.is_zero() {
            return Err(Error::ZeroDenominator(k));
        }
        let d = d.to_f64();
        if d == 0.0 || !d.is_finite() {
            return Err(Error::ZeroDenominator(k));
        }
        targets.push(1.0 / d);
    }
    solve_window_products(&targets, n + 1).map_err(|e| match e {
        Error::SignUnsolvable => Error::NoRealSolution,
        other => other,
    })
}

/// The pentagram map on invariants:
/// `T(a_k^i) = (lambda_{k+n+1} / lambda_{k+i}) D_k^i / D_k`.
pub fn pentagram_map_invariants<S: Scalar>(inv: &InvariantField<S>) -> Result<InvariantField<S>> {
    let len = inv.num_vertices();
    let n = inv.dim();
    let table = f_table(inv);
    let mut dens = Vec::with_capacity(len);
    for k in 0..len {
        let d = denominator_from_table(&table, n, k);
        if d.is_zero() {
            return Err(Error::ZeroDenominator(k));
        }
        dens.push(d);
    }
    let ratios = LambdaRatios {
        rho: window_ratio_chain(
            &dens.iter().map(|d| S::one().div(d)).collect::<Vec<_>>(),
            n + 1,
        )?,
    };
    let mut rows = Vec::with_capacity(len);
    for k in 0..len {
        let mut row = Vec::with_capacity(n);
        for i in 1..=n {
            let cols: Vec<Vec<S>> = (0..=n)
                .map(|j| table[k][if j == i { n + 1 } else { j }].clone())
                .collect();
            let num = Matrix::from_cols(&cols).det();
            let ratio = ratios.map_ratio(n, k as i64, i);
            row.push(ratio.mul(&num).div(&dens[k]));
        }
        rows.push(row);
    }
    InvariantField::new(n, rows)
}

/// One level of the F-column reduction: `F_{k+j}` written as a combination
/// of earlier columns of the same index parity plus a structured residual.
///
/// Residuals alternate between the support patterns of `r` (non-hat, for
/// even j) and `p` (hat, zero last entry, for odd j); the coefficients obey
/// a pure shift recursion seeded by the last entry of the previous residual.
#[derive(Debug, Clone)]
pub struct Decomposition<S> {
    /// Pairs `(offset, coefficient)`: the combination sums
    /// `coefficient * F_{k+offset}`.
    pub coefficients: Vec<(usize, S)>,
    pub residual: Vec<S>,
    /// True when the residual has the `p` support pattern (zero last entry).
    pub hat: bool,
}

pub fn f_decomposition<S: Scalar>(
    inv: &InvariantField<S>,
    k: i64,
    j: usize,
) -> Decomposition<S> {
    assert!(j >= 1, "decomposition starts at offset 1");
    if j == 1 {
        let r_next = r_vector(inv, k + 1);
        let lead = r_next[inv.dim()].clone();
        let p = p_vector(inv, k);
        let residual: Vec<S> = shift_down(&r_next)
            .iter()
            .zip(&p)
            .map(|(s, pe)| s.add(&lead.mul(pe)))
            .collect();
        return Decomposition {
            coefficients: vec![(0, lead)],
            residual,
            hat: true,
        };
    }
    let inner = f_decomposition(inv, k + 1, j - 1);
    let shifted: Vec<(usize, S)> = inner
        .coefficients
        .iter()
        .map(|(off, c)| (off + 1, c.clone()))
        .collect();
    if j % 2 == 0 {
        // even offset: the previous residual had zero last entry, so the
        // companion action is a pure shift and no new coefficient appears
        debug_assert!(inner.hat);
        Decomposition {
            coefficients: shifted,
            residual: shift_down(&inner.residual),
            hat: false,
        }
    } else {
        debug_assert!(!inner.hat);
        let lead = inner.residual[inv.dim()].clone();
        let p = p_vector(inv, k);
        let residual: Vec<S> = shift_down(&inner.residual)
            .iter()
            .zip(&p)
            .map(|(s, pe)| s.add(&lead.mul(pe)))
            .collect();
        let mut coefficients = vec![(0, lead)];
        coefficients.extend(shifted);
        Decomposition {
            coefficients,
            residual,
            hat: true,
        }
    }
}
