//! Cyclic window systems.
//!
//! Several normalizations in this crate reduce to the same problem: find
//! scalars `x_0, ..., x_{N-1}` (indices mod N) with prescribed products over
//! every window of `w` consecutive entries,
//!
//! ```text
//! x_k * x_{k+1} * ... * x_{k+w-1} = t_k,     k = 0, ..., N-1.
//! ```
//!
//! The system is uniquely solvable in magnitudes exactly when gcd(N, w) = 1.
//! Magnitudes are solved additively in logs through the explicit inverse of
//! the N x N circulant whose rows sum `w` consecutive entries; signs are
//! resolved separately over {-1, +1}. Quotients of consecutive equations
//! give the exact ratio chain `x_{k+w} / x_k = t_{k+1} / t_k`, which is how
//! the rational pipeline works with ratios without ever taking roots.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Scalar};

fn require_coprime(len: usize, win: usize) -> Result<()> {
    if len == 0 || win == 0 || len.gcd(&win) != 1 {
        return Err(Error::NotCoprime {
            num_verts: len,
            dim_plus_one: win,
        });
    }
    Ok(())
}

/// First row `u` of the inverse of the circulant matrix `C` defined by
/// `(C x)_k = x_k + x_{k+1} + ... + x_{k+w-1}` (indices mod `len`).
///
/// The inverse is circulant as well: `(C^{-1} b)_k = sum_m u_{(m-k) mod len} b_m`.
pub fn circulant_window_inverse(len: usize, win: usize) -> Result<Vec<ExactScalar>> {
    require_coprime(len, win)?;
    // Window sums of u must equal a shifted delta:
    //   sum_{j=0}^{w-1} u_{(e+j) mod N} = rhs_e,  rhs_e = [e == (1-w) mod N].
    // Consecutive differences pin u along the (w)-step chain, and the total
    // sum (each entry counted w times) fixes the remaining constant.
    let spike = (len - (win - 1) % len) % len;
    let rhs = |e: usize| -> i64 { i64::from(e == spike) };
    let mut offset = vec![0i64; len]; // u_j = u_0 + offset_j
    let mut idx = 0usize;
    for _ in 1..len {
        let next = (idx + win) % len;
        offset[next] = offset[idx] + rhs((idx + 1) % len) - rhs(idx);
        idx = next;
    }
    let offset_sum: i64 = offset.iter().sum();
    // sum u_j = 1/w  =>  N*u_0 + sum(offset) = 1/w
    let u0 = &(ExactScalar::from_ratio(1, win as i64) - ExactScalar::from_int(offset_sum))
        / &ExactScalar::from_int(len as i64);
    Ok(offset
        .into_iter()
        .map(|c| &u0 + &ExactScalar::from_int(c))
        .collect())
}

/// Exact ratio chain: returns `rho` with `x_k = rho_k * x_0` for any solution
/// of the window system with the given targets. Every pairwise ratio
/// `x_a / x_b = rho_a / rho_b` is rational even when the `x_k` themselves
/// require roots.
pub fn window_ratio_chain<S: Scalar>(targets: &[S], win: usize) -> Result<Vec<S>> {
    let len = targets.len();
    require_coprime(len, win)?;
    for (k, t) in targets.iter().enumerate() {
        if t.is_zero() {
            return Err(Error::ZeroDenominator(k));
        }
    }
    let mut rho = vec![S::one(); len];
    let mut idx = 0usize;
    for _ in 1..len {
        let next = (idx + win) % len;
        let ratio = targets[(idx + 1) % len].div(&targets[idx]);
        rho[next] = rho[idx].mul(&ratio);
        idx = next;
    }
    Ok(rho)
}

/// Sign part of the window system: `s_k` in {-1, +1} with window products
/// matching the signs of the targets. For odd `win` the solution is unique;
/// for even `win` it either fails (`SignUnsolvable`) or has exactly two
/// solutions differing by a global flip, of which the `s_0 = +1` branch is
/// returned.
pub fn solve_window_signs(target_signs: &[i8], win: usize) -> Result<Vec<i8>> {
    let len = target_signs.len();
    require_coprime(len, win)?;
    assert!(target_signs.iter().all(|&s| s == 1 || s == -1));
    let mut rho = vec![1i8; len];
    let mut idx = 0usize;
    for _ in 1..len {
        let next = (idx + win) % len;
        rho[next] = rho[idx] * target_signs[(idx + 1) % len] * target_signs[idx];
        idx = next;
    }
    // Close with the first equation: s_0^win * prod_{j<win} rho_j = sign(t_0).
    let window_rho: i8 = (0..win).map(|j| rho[j % len]).product();
    let s0 = if win % 2 == 1 {
        target_signs[0] * window_rho
    } else {
        if target_signs[0] * window_rho != 1 {
            return Err(Error::SignUnsolvable);
        }
        1
    };
    Ok(rho.into_iter().map(|r| r * s0).collect())
}

/// Full real solve: magnitudes through the circulant inverse in log space,
/// signs over {-1, +1}. For even `win` with an unsolvable sign system the
/// error distinguishes nothing about magnitudes; callers decide whether to
/// retry with adjusted targets.
pub fn solve_window_products(targets: &[f64], win: usize) -> Result<Vec<f64>> {
    let len = targets.len();
    require_coprime(len, win)?;
    for (k, t) in targets.iter().enumerate() {
        if *t == 0.0 || !t.is_finite() {
            return Err(Error::ZeroDenominator(k));
        }
    }
    let inv_row: Vec<f64> = circulant_window_inverse(len, win)?
        .iter()
        .map(ExactScalar::to_f64)
        .collect();
    let log_rhs: Vec<f64> = targets.iter().map(|t| t.abs().ln()).collect();
    let magnitudes: Vec<f64> = (0..len)
        .map(|k| {
            let eta: f64 = (0..len)
                .map(|m| inv_row[(m + len - k) % len] * log_rhs[m])
                .sum();
            eta.exp()
        })
        .collect();
    let signs = solve_window_signs(
        &targets
            .iter()
            .map(|t| if *t < 0.0 { -1i8 } else { 1i8 })
            .collect::<Vec<_>>(),
        win,
    )?;
    Ok(magnitudes
        .into_iter()
        .zip(signs)
        .map(|(m, s)| m * f64::from(s))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    /// The window-sum operator as an explicit matrix. When `win > len` a
    /// window wraps more than once and entries carry multiplicities.
    fn window_circulant(len: usize, win: usize) -> Matrix<ExactScalar> {
        Matrix::from_fn(len, len, |k, m| {
            let d = (m + len - k % len) % len;
            let count = if d < win { (win - d).div_ceil(len) } else { 0 };
            ExactScalar::from_int(count as i64)
        })
    }

    #[test]
    fn circulant_inverse_is_exact() {
        for (len, win) in [(5, 3), (7, 3), (5, 4), (9, 4), (13, 7), (5, 7)] {
            let u = circulant_window_inverse(len, win).unwrap();
            let c = window_circulant(len, win);
            let u_mat = Matrix::from_fn(len, len, |k, m| u[(m + len - k) % len].clone());
            assert_eq!(c.mat_mul(&u_mat), Matrix::identity(len), "len={len} win={win}");
        }
    }

    #[test]
    fn non_coprime_is_rejected() {
        assert!(matches!(
            circulant_window_inverse(6, 3),
            Err(Error::NotCoprime { .. })
        ));
        assert!(solve_window_products(&[1.0; 6], 3).is_err());
    }

    #[test]
    fn products_solve_satisfies_all_windows() {
        let targets = [2.0, -0.5, 3.0, 1.25, -4.0, 0.75, 2.5];
        let win = 3;
        let x = solve_window_products(&targets, win).unwrap();
        for k in 0..targets.len() {
            let prod: f64 = (0..win).map(|j| x[(k + j) % targets.len()]).product();
            assert!(
                (prod - targets[k]).abs() < 1e-12 * targets[k].abs().max(1.0),
                "window {k}: {prod} vs {}",
                targets[k]
            );
        }
    }

    #[test]
    fn even_window_sign_obstruction() {
        // win = 4, len = 5: a single negative target forces an odd total sign,
        // which a {-1,+1} assignment cannot produce when win is even.
        let targets = [1.0, 1.0, 1.0, 1.0, -1.0];
        match solve_window_products(&targets, 4) {
            Err(Error::SignUnsolvable) => {}
            other => panic!("expected SignUnsolvable, got {other:?}"),
        }
        // All-negative targets: total product is negative^5, again impossible.
        let e = solve_window_products(&[-1.0; 5], 4);
        assert!(matches!(e, Err(Error::SignUnsolvable)));
    }

    #[test]
    fn odd_window_signs_always_solve() {
        let targets = [1.0, -1.0, -1.0, 1.0, -1.0];
        let x = solve_window_products(&targets, 3).unwrap();
        for k in 0..5 {
            let prod: f64 = (0..3).map(|j| x[(k + j) % 5]).product();
            assert!((prod - targets[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn ratio_chain_matches_float_solution() {
        let targets_q: Vec<ExactScalar> = [(3, 2), (-1, 3), (5, 4), (7, 5), (-2, 1)]
            .iter()
            .map(|&(p, q)| ExactScalar::from_ratio(p, q))
            .collect();
        let rho = window_ratio_chain(&targets_q, 3).unwrap();
        let targets_f: Vec<f64> = targets_q.iter().map(ExactScalar::to_f64).collect();
        let x = solve_window_products(&targets_f, 3).unwrap();
        for k in 0..5 {
            let expected = x[k] / x[0];
            assert!(
                (rho[k].to_f64() - expected).abs() < 1e-12 * expected.abs().max(1.0),
                "rho[{k}]"
            );
        }
    }

    #[test]
    fn trivial_targets_give_unit_solution() {
        let x = solve_window_products(&[1.0; 7], 5).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }
}
