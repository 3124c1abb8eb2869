//! Twisted polygons in RP^n, their normalized lifts, and the discrete
//! projective invariants carried by the Maurer-Cartan companion matrices.
//!
//! A twisted N-gon is a bi-infinite vertex sequence with `x_{k+N} = M(x_k)`
//! for a fixed projective monodromy `M`. When gcd(N, n+1) = 1 the vertices
//! admit lifts `V_k` to R^{n+1}, unique up to a global sign for odd n, with
//! every consecutive window satisfying `det(V_k, ..., V_{k+n}) = 1`. The
//! coefficients expressing `V_{k+n+1}` in the window basis are the
//! invariants `a_k^i`; they generate all discrete projective invariants of
//! the polygon.

use num_integer::Integer;

use crate::cyclic::solve_window_products;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Float tolerance on `det(window) - 1` for lifted polygons.
pub const WINDOW_DET_TOL: f64 = 1e-9;
/// Float tolerance on `det(monodromy) - 1`.
pub const MONODROMY_DET_TOL: f64 = 1e-12;

/// Whether a float determinant equals one within `tol`, measured against
/// the determinant's own evaluation scale (the product of row magnitudes):
/// this is the plain absolute test for unit-scale matrices and the only
/// float-meaningful one beyond that.
fn unimodular_within(m: &Matrix<f64>, tol: f64) -> bool {
    let mut scale = 1.0_f64;
    for i in 0..m.rows() {
        scale *= m.row(i).iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    }
    (m.det() - 1.0).abs() <= tol * scale.max(1.0)
}

/// A point of RP^n as homogeneous coordinates, at least one nonzero.
#[derive(Debug, Clone)]
pub struct ProjectivePoint<S> {
    coords: Vec<S>,
}

impl<S: Scalar> ProjectivePoint<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() || coords.iter().all(Scalar::is_zero) {
            return Err(Error::InvalidInput(
                "projective point needs a nonzero coordinate".into(),
            ));
        }
        Ok(ProjectivePoint { coords })
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    /// Exact projective equality: all 2x2 cross products vanish.
    pub fn projectively_equal(&self, other: &Self) -> bool {
        if self.coords.len() != other.coords.len() {
            return false;
        }
        let n = self.coords.len();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.coords[i].mul(&other.coords[j]);
                let rhs = self.coords[j].mul(&other.coords[i]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Distance between two float directions viewed projectively: the smaller
/// l-inf gap between the unit vectors taken with either relative sign.
pub fn projective_gap(u: &[f64], v: &[f64]) -> f64 {
    assert_eq!(u.len(), v.len());
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return f64::INFINITY;
    }
    let mut same = 0.0_f64;
    let mut flip = 0.0_f64;
    for (a, b) in u.iter().zip(v) {
        let (a, b) = (a / nu, b / nv);
        same = same.max((a - b).abs());
        flip = flip.max((a + b).abs());
    }
    same.min(flip)
}

#[derive(Debug, Clone)]
pub struct TwistedPolygon<S> {
    n: usize,
    points: Vec<ProjectivePoint<S>>,
    monodromy: Matrix<S>,
}

impl<S: Scalar> TwistedPolygon<S> {
    pub fn new(n: usize, points: Vec<ProjectivePoint<S>>, monodromy: Matrix<S>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("needs n >= 2".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidInput("needs at least one vertex".into()));
        }
        for p in &points {
            if p.coords().len() != n + 1 {
                return Err(Error::InvalidInput(format!(
                    "vertex has {} coordinates, expected {}",
                    p.coords().len(),
                    n + 1
                )));
            }
        }
        if monodromy.rows() != n + 1 || monodromy.cols() != n + 1 {
            return Err(Error::InvalidInput("monodromy has wrong shape".into()));
        }
        let unimodular = if S::EXACT {
            monodromy.det() == S::one()
        } else {
            unimodular_within(&monodromy.to_f64(), MONODROMY_DET_TOL)
        };
        if !unimodular {
            return Err(Error::InvalidInput(format!(
                "monodromy determinant is {}, expected 1",
                monodromy.det()
            )));
        }
        Ok(TwistedPolygon {
            n,
            points,
            monodromy,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[ProjectivePoint<S>] {
        &self.points
    }

    pub fn monodromy(&self) -> &Matrix<S> {
        &self.monodromy
    }

    /// Representative coordinates of vertex `idx`, wrapped through the
    /// monodromy lift: `W_{idx + qN} = M^q W_idx`.
    pub fn point_rep(&self, idx: i64) -> Result<Vec<S>> {
        let len = self.points.len() as i64;
        let q = idx.div_euclid(len);
        let r = idx.rem_euclid(len) as usize;
        apply_monodromy_power(&self.monodromy, q, self.points[r].coords())
    }
}

fn apply_monodromy_power<S: Scalar>(m: &Matrix<S>, q: i64, v: &[S]) -> Result<Vec<S>> {
    let mut out = v.to_vec();
    if q > 0 {
        for _ in 0..q {
            out = m.mat_vec(&out);
        }
    } else if q < 0 {
        let inv = m.inverse()?;
        for _ in 0..(-q) {
            out = inv.mat_vec(&out);
        }
    }
    Ok(out)
}

/// Scale a float matrix to determinant one, preferring the positive scaling
/// factor. For even-sized matrices a negative determinant cannot be fixed by
/// scaling and is reported as degenerate.
pub fn unit_determinant_scaling(m: &Matrix<f64>) -> Result<Matrix<f64>> {
    assert_eq!(m.rows(), m.cols());
    let dim = m.rows();
    let det = m.det();
    if det == 0.0 || !det.is_finite() {
        return Err(Error::Degenerate("singular monodromy".into()));
    }
    let factor = if dim % 2 == 1 {
        // odd-size: a sign-preserving real root always exists
        det.signum() * det.abs().powf(-1.0 / dim as f64)
    } else {
        if det < 0.0 {
            return Err(Error::Degenerate(
                "negative determinant cannot be scaled to 1 for even matrix size".into(),
            ));
        }
        det.powf(-1.0 / dim as f64)
    };
    Ok(m.scale(&factor))
}

/// Quasi-periodic sequence of lifted vertices with unit window determinants.
#[derive(Debug, Clone)]
pub struct LiftedPolygon<S> {
    n: usize,
    lifts: Vec<Vec<S>>,
    monodromy: Matrix<S>,
    monodromy_inv: Matrix<S>,
}

impl<S: Scalar> LiftedPolygon<S> {
    pub fn new(n: usize, lifts: Vec<Vec<S>>, monodromy: Matrix<S>) -> Result<Self> {
        if lifts.is_empty() || lifts.iter().any(|v| v.len() != n + 1) {
            return Err(Error::InvalidInput("lift vectors must have n+1 entries".into()));
        }
        if monodromy.rows() != n + 1 || monodromy.cols() != n + 1 {
            return Err(Error::InvalidInput("monodromy has wrong shape".into()));
        }
        let monodromy_inv = monodromy
            .inverse()
            .map_err(|_| Error::Degenerate("monodromy lift is singular".into()))?;
        let lp = LiftedPolygon {
            n,
            lifts,
            monodromy,
            monodromy_inv,
        };
        for k in 0..lp.num_vertices() {
            let frame = lp.frame(k as i64)?;
            let ok = if S::EXACT {
                frame.det() == S::one()
            } else {
                unimodular_within(&frame.to_f64(), WINDOW_DET_TOL)
            };
            if !ok {
                return Err(Error::NormalizationBroken(format!(
                    "window determinant at k = {k} is {}, expected 1",
                    frame.det()
                )));
            }
        }
        Ok(lp)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.lifts.len()
    }

    pub fn lifts(&self) -> &[Vec<S>] {
        &self.lifts
    }

    pub fn monodromy(&self) -> &Matrix<S> {
        &self.monodromy
    }

    /// Lift of vertex `idx` for any integer index, resolved through powers
    /// of the monodromy lift.
    pub fn lift(&self, idx: i64) -> Vec<S> {
        let len = self.lifts.len() as i64;
        let q = idx.div_euclid(len);
        let r = idx.rem_euclid(len) as usize;
        let mut out = self.lifts[r].clone();
        let m = if q >= 0 {
            &self.monodromy
        } else {
            &self.monodromy_inv
        };
        for _ in 0..q.unsigned_abs() {
            out = m.mat_vec(&out);
        }
        out
    }

    /// Moving frame at `k`: the unimodular matrix with columns V_k..V_{k+n}.
    pub fn frame(&self, k: i64) -> Result<Matrix<S>> {
        let cols: Vec<Vec<S>> = (0..=self.n as i64).map(|j| self.lift(k + j)).collect();
        Ok(Matrix::from_cols(&cols))
    }

    pub fn to_f64(&self) -> LiftedPolygon<f64> {
        LiftedPolygon {
            n: self.n,
            lifts: self
                .lifts
                .iter()
                .map(|v| v.iter().map(Scalar::to_f64).collect())
                .collect(),
            monodromy: self.monodromy.to_f64(),
            monodromy_inv: self.monodromy_inv.to_f64(),
        }
    }

    /// Forgets the normalization: the underlying twisted polygon.
    pub fn to_twisted(&self) -> Result<TwistedPolygon<S>> {
        let points = self
            .lifts
            .iter()
            .map(|v| ProjectivePoint::new(v.clone()))
            .collect::<Result<Vec<_>>>()?;
        TwistedPolygon::new(self.n, points, self.monodromy.clone())
    }
}

/// The N-periodic array of discrete projective invariants `a_k^i`,
/// `k` mod N, `i = 1..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantField<S> {
    n: usize,
    a: Vec<Vec<S>>,
}

impl<S: Scalar> InvariantField<S> {
    pub fn new(n: usize, a: Vec<Vec<S>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("needs n >= 2".into()));
        }
        if a.is_empty() || a.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput(format!(
                "invariant rows must have n = {n} entries"
            )));
        }
        Ok(InvariantField { n, a })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.a.len()
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.a
    }

    /// `a_k^i` with `k` arbitrary (periodic) and `1 <= i <= n`.
    pub fn get(&self, k: i64, i: usize) -> &S {
        assert!((1..=self.n).contains(&i), "invariant index out of range");
        let len = self.a.len() as i64;
        &self.a[k.rem_euclid(len) as usize][i - 1]
    }

    pub fn row(&self, k: i64) -> &[S] {
        let len = self.a.len() as i64;
        &self.a[k.rem_euclid(len) as usize]
    }

    pub fn map_scalar<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> InvariantField<T> {
        InvariantField {
            n: self.n,
            a: self
                .a
                .iter()
                .map(|row| row.iter().map(&mut f).collect())
                .collect(),
        }
    }

    pub fn to_f64(&self) -> InvariantField<f64> {
        self.map_scalar(Scalar::to_f64)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        assert_eq!(self.a.len(), other.a.len());
        let mut gap = 0.0_f64;
        for (ra, rb) in self.a.iter().zip(&other.a) {
            for (x, y) in ra.iter().zip(rb) {
                gap = gap.max((x.to_f64() - y.to_f64()).abs());
            }
        }
        gap
    }
}

fn check_coprime(num_verts: usize, dim_plus_one: usize) -> Result<()> {
    if num_verts.gcd(&dim_plus_one) != 1 {
        return Err(Error::NotCoprime {
            num_verts,
            dim_plus_one,
        });
    }
    Ok(())
}

/// Rescales arbitrary homogeneous representatives into the unique (up to a
/// global sign for odd n) lift with unit window determinants.
///
/// The scalars `c_k` multiply the representatives `W_k`; their defining
/// window products are solved in log magnitudes through the explicit
/// circulant inverse and in signs over {-1, +1}. A failed sign system is
/// reported as `SignUnsolvable`; the caller may flip the sign of the
/// monodromy lift and retry.
pub fn lift_and_normalize(poly: &TwistedPolygon<f64>) -> Result<LiftedPolygon<f64>> {
    let n = poly.dim();
    let len = poly.num_vertices();
    check_coprime(len, n + 1)?;
    let mut window_dets = Vec::with_capacity(len);
    for k in 0..len as i64 {
        let cols: Vec<Vec<f64>> = (0..=n as i64)
            .map(|j| poly.point_rep(k + j))
            .collect::<Result<_>>()?;
        let det = Matrix::from_cols(&cols).det();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Degenerate(format!(
                "window determinant at k = {k} vanishes"
            )));
        }
        window_dets.push(det);
    }
    let targets: Vec<f64> = window_dets.iter().map(|d| 1.0 / d).collect();
    let mut factors = solve_window_products(&targets, n + 1)?;
    // Odd n leaves a global sign free; fix it by the first nonzero
    // coordinate of V_0.
    if n % 2 == 1 {
        let v0: Vec<f64> = poly.points()[0]
            .coords()
            .iter()
            .map(|w| factors[0] * w)
            .collect();
        let scale = v0.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let lead = v0.iter().find(|x| x.abs() > 1e-12 * scale);
        if let Some(lead) = lead {
            if *lead < 0.0 {
                for c in &mut factors {
                    *c = -*c;
                }
            }
        }
    }
    let lifts: Vec<Vec<f64>> = poly
        .points()
        .iter()
        .zip(&factors)
        .map(|(p, c)| p.coords().iter().map(|w| c * w).collect())
        .collect();
    LiftedPolygon::new(n, lifts, poly.monodromy().clone())
}

/// Invariants straight from homogeneous representatives, no normalized lift
/// required.
///
/// The normalization factors `c_k` solve window products and would need
/// (n+1)-th roots, but the invariants only consume their ratios, which the
/// cyclic chain provides exactly: expressing `V_{k+n+1}` over the window
/// basis in terms of the raw representatives gives coefficients off by
/// `c_{k+n+1} / c_{k+i}`. This keeps extraction inside rational arithmetic
/// for rational vertex data.
pub fn extract_invariants_unnormalized<S: Scalar>(
    poly: &TwistedPolygon<S>,
) -> Result<InvariantField<S>> {
    let n = poly.dim();
    let len = poly.num_vertices();
    check_coprime(len, n + 1)?;
    let mut targets = Vec::with_capacity(len);
    for k in 0..len as i64 {
        let cols: Vec<Vec<S>> = (0..=n as i64)
            .map(|j| poly.point_rep(k + j))
            .collect::<Result<_>>()?;
        let det = Matrix::from_cols(&cols).det();
        if det.is_zero() {
            return Err(Error::Degenerate(format!(
                "window determinant at k = {k} vanishes"
            )));
        }
        targets.push(S::one().div(&det));
    }
    let rho = crate::cyclic::window_ratio_chain(&targets, n + 1)?;
    let ratio = |a: i64, b: i64| -> S {
        let wrap = |m: i64| m.rem_euclid(len as i64) as usize;
        rho[wrap(a)].div(&rho[wrap(b)])
    };
    let expected_lead = if n % 2 == 0 {
        S::one()
    } else {
        S::one().neg()
    };
    let mut rows = Vec::with_capacity(len);
    for k in 0..len as i64 {
        let cols: Vec<Vec<S>> = (0..=n as i64)
            .map(|j| poly.point_rep(k + j))
            .collect::<Result<_>>()?;
        let window = Matrix::from_cols(&cols);
        let rhs = poly.point_rep(k + n as i64 + 1)?;
        let x = window
            .solve(&rhs)
            .map_err(|_| Error::Degenerate(format!("singular window at k = {k}")))?;
        let lead = x[0].mul(&ratio(k + n as i64 + 1, k));
        let lead_ok = if S::EXACT {
            lead == expected_lead
        } else {
            (lead.to_f64() - expected_lead.to_f64()).abs() <= WINDOW_DET_TOL
        };
        if !lead_ok {
            return Err(Error::NormalizationBroken(format!(
                "leading coefficient at k = {k} is {lead}, expected {expected_lead}"
            )));
        }
        rows.push(
            (1..=n)
                .map(|i| x[i].mul(&ratio(k + n as i64 + 1, k + i as i64)))
                .collect(),
        );
    }
    InvariantField::new(n, rows)
}

/// Reads the invariants off a normalized lift: for each k the lift
/// `V_{k+n+1}` is expressed in the frame basis; the leading coefficient is
/// pinned to (-1)^n by the normalization and is verified here.
pub fn extract_invariants<S: Scalar>(lp: &LiftedPolygon<S>) -> Result<InvariantField<S>> {
    let n = lp.dim();
    let len = lp.num_vertices();
    let expected_lead = if n % 2 == 0 {
        S::one()
    } else {
        S::one().neg()
    };
    let mut rows = Vec::with_capacity(len);
    for k in 0..len as i64 {
        let frame = lp.frame(k)?;
        let rhs = lp.lift(k + n as i64 + 1);
        let x = frame
            .solve(&rhs)
            .map_err(|_| Error::Degenerate(format!("singular frame at k = {k}")))?;
        let lead_ok = if S::EXACT {
            x[0] == expected_lead
        } else {
            (x[0].to_f64() - expected_lead.to_f64()).abs() <= WINDOW_DET_TOL
        };
        if !lead_ok {
            return Err(Error::NormalizationBroken(format!(
                "leading coefficient at k = {k} is {}, expected {expected_lead}",
                x[0]
            )));
        }
        rows.push(x[1..].to_vec());
    }
    InvariantField::new(n, rows)
}

/// The Maurer-Cartan matrix `K_k`: companion form with a subdiagonal of
/// ones, `(-1)^n` in the top-right corner, and the invariants `a_k^i` down
/// the rest of the last column. Its determinant is 1 for every input.
pub fn mc_matrix<S: Scalar>(inv: &InvariantField<S>, k: i64) -> Matrix<S> {
    let n = inv.dim();
    let mut m = Matrix::zeros(n + 1, n + 1);
    for i in 0..n {
        m[(i + 1, i)] = S::one();
    }
    m[(0, n)] = if n % 2 == 0 { S::one() } else { S::one().neg() };
    for i in 1..=n {
        m[(i, n)] = inv.get(k, i).clone();
    }
    m
}

/// Product `K_0 K_1 ... K_{N-1}` entering the spectral invariants.
pub fn monodromy_product<S: Scalar>(inv: &InvariantField<S>) -> Matrix<S> {
    let mut acc = Matrix::identity(inv.dim() + 1);
    for k in 0..inv.num_vertices() as i64 {
        acc = acc.mat_mul(&mc_matrix(inv, k));
    }
    acc
}

/// Rebuilds a lifted polygon from its invariants by propagating the frame
/// recursion `rho_{k+1} = rho_k K_k` from the given initial frame. The
/// monodromy lift is `rho_0 (K_0 ... K_{N-1}) rho_0^{-1}`.
pub fn reconstruct<S: Scalar>(
    inv: &InvariantField<S>,
    rho0: &Matrix<S>,
) -> Result<LiftedPolygon<S>> {
    let n = inv.dim();
    let len = inv.num_vertices();
    if rho0.rows() != n + 1 || rho0.cols() != n + 1 {
        return Err(Error::InvalidInput("initial frame has wrong shape".into()));
    }
    let unimodular = if S::EXACT {
        rho0.det() == S::one()
    } else {
        unimodular_within(&rho0.to_f64(), WINDOW_DET_TOL)
    };
    if !unimodular {
        return Err(Error::InvalidInput(format!(
            "initial frame determinant is {}, expected 1",
            rho0.det()
        )));
    }
    let mut frame = rho0.clone();
    let mut lifts = Vec::with_capacity(len);
    for k in 0..len as i64 {
        lifts.push(frame.col(0));
        frame = frame.mat_mul(&mc_matrix(inv, k));
    }
    let monodromy = frame.mat_mul(&rho0.inverse()?);
    LiftedPolygon::new(n, lifts, monodromy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    fn q(p: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(p, d)
    }

    fn small_field(n: usize, len: usize, seed: i64) -> InvariantField<ExactScalar> {
        // deterministic small rationals, no RNG needed at unit-test scale
        let a = (0..len)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        let p = ((seed + 3 * k as i64 + 7 * i as i64) % 9) - 4;
                        let d = 1 + ((seed + 5 * k as i64 + i as i64).rem_euclid(4));
                        q(if p == 0 { 1 } else { p }, d)
                    })
                    .collect()
            })
            .collect();
        InvariantField::new(n, a).unwrap()
    }

    #[test]
    fn mc_matrix_matches_companion_form() {
        let inv = InvariantField::new(2, vec![vec![q(3, 1), q(5, 1)]]).unwrap();
        let k = mc_matrix(&inv, 0);
        let expected = Matrix::from_rows(vec![
            vec![q(0, 1), q(0, 1), q(1, 1)],
            vec![q(1, 1), q(0, 1), q(3, 1)],
            vec![q(0, 1), q(1, 1), q(5, 1)],
        ]);
        assert_eq!(k, expected);

        let inv3 = InvariantField::new(3, vec![vec![q(2, 1), q(7, 1), q(11, 1)]]).unwrap();
        let k3 = mc_matrix(&inv3, 0);
        assert_eq!(k3[(0, 3)], q(-1, 1));
        assert_eq!(k3.col(3), vec![q(-1, 1), q(2, 1), q(7, 1), q(11, 1)]);
        assert_eq!(k3[(1, 0)], q(1, 1));
        assert_eq!(k3[(0, 0)], q(0, 1));
    }

    #[test]
    fn mc_matrix_is_unimodular_for_all_n() {
        for n in 2..=6 {
            let inv = small_field(n, 5, n as i64);
            for k in 0..5 {
                assert_eq!(mc_matrix(&inv, k).det(), ExactScalar::one(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn reconstruct_then_extract_is_identity() {
        for (n, len) in [(2usize, 5usize), (3, 5), (4, 7), (5, 7), (6, 5)] {
            let inv = small_field(n, len, (n + len) as i64);
            let lp = reconstruct(&inv, &Matrix::identity(n + 1)).unwrap();
            let back = extract_invariants(&lp).unwrap();
            assert_eq!(back, inv, "n={n} N={len}");
            assert_eq!(lp.monodromy().det(), ExactScalar::one());
        }
    }

    #[test]
    fn reconstruct_with_zero_invariants_cycles_vertices() {
        for n in 2..=5usize {
            let len = if (n + 1) % 5 == 0 { 7 } else { 5 };
            let zero = InvariantField::new(n, vec![vec![ExactScalar::zero(); n]; len]).unwrap();
            let lp = reconstruct(&zero, &Matrix::identity(n + 1)).unwrap();
            let sign = if n % 2 == 0 { q(1, 1) } else { q(-1, 1) };
            for k in 0..len as i64 {
                let lhs = lp.lift(k + n as i64 + 1);
                let rhs: Vec<ExactScalar> =
                    lp.lift(k).iter().map(|v| v.mul(&sign)).collect();
                assert_eq!(lhs, rhs, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn extract_flags_broken_normalization() {
        let inv = small_field(2, 5, 1);
        let lp = reconstruct(&inv, &Matrix::identity(3)).unwrap();
        let mut lifts = lp.lifts().to_vec();
        lifts[2][0] = &lifts[2][0] + &q(1, 7);
        // Direct construction re-validates window determinants.
        assert!(matches!(
            LiftedPolygon::new(2, lifts, lp.monodromy().clone()),
            Err(Error::NormalizationBroken(_))
        ));
    }

    #[test]
    fn equivariance_under_unimodular_maps() {
        let inv = small_field(3, 5, 9);
        let lp = reconstruct(&inv, &Matrix::identity(4)).unwrap();
        // g = product of integer shears, det 1 exactly
        let mut g = Matrix::identity(4);
        g[(0, 2)] = q(3, 1);
        let mut h = Matrix::identity(4);
        h[(3, 1)] = q(-2, 1);
        let g = g.mat_mul(&h);
        assert_eq!(g.det(), ExactScalar::one());
        let moved: Vec<Vec<ExactScalar>> =
            lp.lifts().iter().map(|v| g.mat_vec(v)).collect();
        let conj = g
            .mat_mul(lp.monodromy())
            .mat_mul(&g.inverse().unwrap());
        let moved_lp = LiftedPolygon::new(3, moved, conj).unwrap();
        assert_eq!(extract_invariants(&moved_lp).unwrap(), inv);
    }

    #[test]
    fn monodromy_product_single_vertex() {
        let inv = InvariantField::new(2, vec![vec![q(2, 3), q(-1, 2)]]).unwrap();
        assert_eq!(monodromy_product(&inv), mc_matrix(&inv, 0));
    }

    #[test]
    fn regular_pentagon_normalizes_and_has_constant_invariants() {
        let pts: Vec<ProjectivePoint<f64>> = (0..5)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                ProjectivePoint::new(vec![th.cos(), th.sin(), 1.0]).unwrap()
            })
            .collect();
        let poly = TwistedPolygon::new(2, pts, Matrix::identity(3)).unwrap();
        let lp = lift_and_normalize(&poly).unwrap();
        for k in 0..5 {
            let det = lp.frame(k).unwrap().det();
            assert!((det - 1.0).abs() < 1e-12, "window {k}: {det}");
        }
        let inv = extract_invariants(&lp).unwrap();
        for k in 1..5 {
            for i in 1..=2 {
                assert!(
                    (inv.get(k, i) - inv.get(0, i)).abs() < 1e-12,
                    "a_{k}^{i} differs"
                );
            }
        }
    }

    #[test]
    fn normalization_is_identity_on_normalized_input() {
        let inv = small_field(2, 7, 4);
        let lp = reconstruct(&inv, &Matrix::identity(3)).unwrap().to_f64();
        let poly = lp.to_twisted().unwrap();
        let again = lift_and_normalize(&poly).unwrap();
        for (a, b) in lp.lifts().iter().zip(again.lifts()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-9, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn unnormalized_extraction_ignores_representative_scales() {
        for (n, len) in [(2usize, 5usize), (3, 5), (4, 7)] {
            let inv = small_field(n, len, 2 + n as i64);
            let lp = reconstruct(&inv, &Matrix::identity(n + 1)).unwrap();
            // rescale each lift by an arbitrary nonzero rational
            let points = lp
                .lifts()
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let c = q(2 * k as i64 + 1, (k as i64 % 3) + 2);
                    ProjectivePoint::new(v.iter().map(|x| x * &c).collect()).unwrap()
                })
                .collect();
            let poly = TwistedPolygon::new(n, points, lp.monodromy().clone()).unwrap();
            let back = extract_invariants_unnormalized(&poly).unwrap();
            assert_eq!(back, inv, "n={n}");
        }
    }

    #[test]
    fn coprimality_is_enforced() {
        let pts: Vec<ProjectivePoint<f64>> = (0..6)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / 6.0;
                ProjectivePoint::new(vec![th.cos(), th.sin(), 1.0]).unwrap()
            })
            .collect();
        let poly = TwistedPolygon::new(2, pts, Matrix::identity(3)).unwrap();
        assert!(matches!(
            lift_and_normalize(&poly),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn degenerate_windows_are_reported() {
        let mut pts: Vec<ProjectivePoint<f64>> = (0..5)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                ProjectivePoint::new(vec![th.cos(), th.sin(), 1.0]).unwrap()
            })
            .collect();
        pts[1] = pts[0].clone(); // repeated vertex collapses every window containing both
        let poly = TwistedPolygon::new(2, pts, Matrix::identity(3)).unwrap();
        assert!(matches!(
            lift_and_normalize(&poly),
            Err(Error::Degenerate(_))
        ));
    }
}
