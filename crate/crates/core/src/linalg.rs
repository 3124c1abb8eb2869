//! Dense linear algebra over either scalar pipeline.
//!
//! Matrices here are tiny ((n+1) x (n+1) with n <= 6 in practice), so the
//! routines favor exactness and clarity. Over `ExactScalar` the elimination
//! is fraction-free (Bareiss updates, divisions only by previous pivots) to
//! keep intermediate rationals small; over `f64` it is ordinary Gaussian
//! elimination with partial pivoting and relative thresholds.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative rank threshold for floating-point kernel computations.
pub const RANK_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| S::zero())
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_cols(cols: &[Vec<S>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[S]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i].clone();
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mat_mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                acc = acc.add(&self[(i, k)].mul(&rhs[(k, j)]));
            }
            acc
        })
    }

    pub fn mat_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self[(i, k)].mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].mul(c))
    }

    pub fn map_scalar<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| f(&self[(i, j)]))
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map_scalar(|x| x.to_f64())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn max_pivot_magnitude(&self) -> f64 {
        self.data
            .iter()
            .map(Scalar::pivot_magnitude)
            .fold(0.0_f64, f64::max)
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    /// Exact scalars route through an integerized equivalent.
    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        S::det_dim(self.rows, self.data.clone())
    }

    /// Solves the square system `self * x = rhs` by pivoted elimination.
    /// The float path equilibrates rows and applies one step of iterative
    /// refinement; the exact path needs neither.
    pub fn solve(&self, rhs: &[S]) -> Result<Vec<S>> {
        let x = self.solve_once(rhs)?;
        if S::EXACT {
            return Ok(x);
        }
        let mut residual = rhs.to_vec();
        for (slot, ax) in residual.iter_mut().zip(self.mat_vec(&x)) {
            *slot = slot.sub(&ax);
        }
        let correction = self.solve_once(&residual)?;
        Ok(x.iter()
            .zip(&correction)
            .map(|(a, d)| a.add(d))
            .collect())
    }

    fn solve_once(&self, rhs: &[S]) -> Result<Vec<S>> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(rhs.len(), self.rows);
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, n + 1, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                rhs[i].clone()
            }
        });
        if !S::EXACT {
            aug.equilibrate_rows();
        }
        let tol = if S::EXACT {
            0.0
        } else {
            RANK_REL_TOL * aug.max_pivot_magnitude().max(f64::MIN_POSITIVE)
        };
        for r in 0..n {
            let p = (r..n)
                .max_by(|&a, &b| {
                    aug[(a, r)]
                        .pivot_magnitude()
                        .total_cmp(&aug[(b, r)].pivot_magnitude())
                })
                .unwrap();
            if aug[(p, r)].is_zero() || aug[(p, r)].pivot_magnitude() <= tol {
                return Err(Error::Degenerate(format!(
                    "singular system (pivot {r} of {n})"
                )));
            }
            aug.swap_rows(p, r);
            for i in r + 1..n {
                if aug[(i, r)].is_zero() {
                    continue;
                }
                let factor = aug[(i, r)].div(&aug[(r, r)]);
                for j in r..=n {
                    let t = aug[(i, j)].sub(&factor.mul(&aug[(r, j)]));
                    aug[(i, j)] = t;
                }
            }
        }
        let mut x = vec![S::zero(); n];
        for r in (0..n).rev() {
            let mut acc = aug[(r, n)].clone();
            for j in r + 1..n {
                acc = acc.sub(&aug[(r, j)].mul(&x[j]));
            }
            x[r] = acc.div(&aug[(r, r)]);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix<S>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<S> = (0..n)
                .map(|i| if i == j { S::one() } else { S::zero() })
                .collect();
            cols.push(self.solve(&e)?);
        }
        Ok(Matrix::from_cols(&cols))
    }

    /// Divides every row by its largest magnitude; kernels and linear-system
    /// solutions are unchanged, pivoting decisions improve. Float path only.
    fn equilibrate_rows(&mut self) {
        for i in 0..self.rows {
            let scale = self.row(i).iter().fold(0.0_f64, |m, x| {
                m.max(x.to_f64().abs())
            });
            if scale > 0.0 && scale.is_finite() {
                let inv = S::from_f64(1.0 / scale);
                for j in 0..self.cols {
                    self[(i, j)] = self[(i, j)].mul(&inv);
                }
            }
        }
    }

    /// Basis of the right null space, using row reduction with a relative
    /// rank threshold (floats) or exact zero tests (rationals).
    pub fn kernel(&self, rel_tol: f64) -> Vec<Vec<S>> {
        let (m, c) = (self.rows, self.cols);
        let mut red = self.clone();
        if !S::EXACT {
            red.equilibrate_rows();
        }
        let tol = if S::EXACT {
            0.0
        } else {
            rel_tol * red.max_pivot_magnitude().max(f64::MIN_POSITIVE)
        };
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        for col in 0..c {
            if row == m {
                break;
            }
            let p = (row..m)
                .max_by(|&a, &b| {
                    red[(a, col)]
                        .pivot_magnitude()
                        .total_cmp(&red[(b, col)].pivot_magnitude())
                })
                .unwrap();
            if red[(p, col)].is_zero() || red[(p, col)].pivot_magnitude() <= tol {
                continue;
            }
            red.swap_rows(p, row);
            // Normalize the pivot row, then clear the column everywhere else
            // so free-column back-substitution reads off directly.
            let inv_pivot = S::one().div(&red[(row, col)]);
            for j in 0..c {
                red[(row, j)] = red[(row, j)].mul(&inv_pivot);
            }
            for i in 0..m {
                if i == row || red[(i, col)].is_zero() {
                    continue;
                }
                let factor = red[(i, col)].clone();
                for j in 0..c {
                    let t = red[(i, j)].sub(&factor.mul(&red[(row, j)]));
                    red[(i, j)] = t;
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in (0..c).filter(|j| !pivot_cols.contains(j)) {
            let mut v = vec![S::zero(); c];
            v[free] = S::one();
            for &(pr, pc) in &pivots {
                v[pc] = red[(pr, free)].neg();
            }
            basis.push(v);
        }
        basis
    }

    pub fn rank(&self, rel_tol: f64) -> usize {
        self.cols - self.kernel(rel_tol).len()
    }

    /// Characteristic polynomial coefficients `[c_0, ..., c_{n-1}, 1]` with
    /// `chi(x) = x^n + c_{n-1} x^{n-1} + ... + c_0`, by Faddeev-LeVerrier.
    pub fn char_poly(&self) -> Vec<S> {
        assert_eq!(self.rows, self.cols);
        S::char_poly_dim(self.rows, &self.data)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
            .fold(0.0_f64, f64::max)
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use proptest::prelude::*;

    fn q(p: i64, q_: i64) -> ExactScalar {
        ExactScalar::from_ratio(p, q_)
    }

    /// Independent determinant oracle: cofactor expansion along the first row.
    fn det_cofactor(m: &Matrix<ExactScalar>) -> ExactScalar {
        let n = m.rows();
        if n == 0 {
            return ExactScalar::one();
        }
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = ExactScalar::zero();
        for j in 0..n {
            let minor = Matrix::from_fn(n - 1, n - 1, |r, c| {
                m[(r + 1, if c < j { c } else { c + 1 })].clone()
            });
            let term = &m[(0, j)] * &det_cofactor(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_oracle(
            entries in proptest::collection::vec((-9i64..=9, 1i64..=9), 25)
        ) {
            let m = Matrix::from_fn(5, 5, |i, j| {
                let (p, den) = entries[i * 5 + j];
                q(p, den)
            });
            prop_assert_eq!(m.det(), det_cofactor(&m));
        }

        #[test]
        fn solve_then_multiply_round_trips(
            entries in proptest::collection::vec(-9i64..=9, 16),
            rhs in proptest::collection::vec(-9i64..=9, 4)
        ) {
            let m = Matrix::from_fn(4, 4, |i, j| ExactScalar::from_int(entries[i * 4 + j]));
            let b: Vec<_> = rhs.iter().map(|&v| ExactScalar::from_int(v)).collect();
            if !m.det().is_zero() {
                let x = m.solve(&b).unwrap();
                prop_assert_eq!(m.mat_vec(&x), b);
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilate_exactly() {
        // rank-2 matrix in Q^{3x4}
        let m = Matrix::from_rows(vec![
            vec![q(1, 1), q(2, 1), q(3, 1), q(4, 1)],
            vec![q(2, 1), q(4, 1), q(6, 1), q(8, 1)],
            vec![q(0, 1), q(1, 1), q(1, 1), q(0, 1)],
        ]);
        let ker = m.kernel(RANK_REL_TOL);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for entry in m.mat_vec(v) {
                assert!(entry.is_zero());
            }
        }
        assert_eq!(m.rank(RANK_REL_TOL), 2);
    }

    #[test]
    fn float_kernel_respects_relative_threshold() {
        let m = Matrix::<f64>::from_rows(vec![
            vec![1.0, 1.0, 0.0],
            vec![1.0, 1.0 + 1e-13, 0.0],
        ]);
        let ker = m.kernel(RANK_REL_TOL);
        // The second row is a numerical copy of the first: rank 1, nullity 2.
        assert_eq!(ker.len(), 2);
    }

    #[test]
    fn inverse_times_self_is_identity() {
        let m = Matrix::from_rows(vec![
            vec![q(2, 1), q(1, 1), q(0, 1)],
            vec![q(1, 3), q(1, 1), q(4, 1)],
            vec![q(0, 1), q(5, 2), q(1, 1)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mat_mul(&inv), Matrix::identity(3));
    }

    #[test]
    fn integerized_paths_match_generic_elimination() {
        // the ExactScalar det/char-poly overrides must agree with the
        // generic scalar-level routines they replace
        for seed in 0..8i64 {
            let m = Matrix::from_fn(4, 4, |i, j| {
                let v = (seed * 31 + 7 * i as i64 + 3 * j as i64) % 11 - 5;
                let d = 1 + ((seed + i as i64 * j as i64) % 4);
                q(v, d)
            });
            let generic_det =
                crate::scalar::bareiss_det_generic(4, m.to_rows().concat());
            assert_eq!(m.det(), generic_det, "seed {seed}");
            let generic_chi =
                crate::scalar::faddeev_leverrier_generic(4, &m.to_rows().concat());
            assert_eq!(m.char_poly(), generic_chi, "seed {seed}");
        }
    }

    #[test]
    fn char_poly_constant_term_is_signed_determinant() {
        let m = Matrix::from_rows(vec![
            vec![q(0, 1), q(2, 1), q(1, 1)],
            vec![q(1, 1), q(-1, 1), q(3, 1)],
            vec![q(2, 1), q(0, 1), q(1, 2)],
        ]);
        let chi = m.char_poly();
        assert_eq!(chi.len(), 4);
        assert_eq!(chi[3], ExactScalar::one());
        // chi(x) = det(xI - M), so chi(0) = det(-M) = (-1)^3 det(M).
        assert_eq!(chi[0], -m.det());
        // trace check: c_2 = -tr(M)
        assert_eq!(chi[2], -(&(&m[(0, 0)] + &m[(1, 1)]) + &m[(2, 2)]));
    }

    #[test]
    fn singular_solve_reports_degenerate() {
        let m = Matrix::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]]);
        assert!(m.solve(&[q(1, 1), q(1, 1)]).is_err());
    }
}
