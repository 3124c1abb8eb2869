//! The pentagram map computed geometrically on lifted vertices.
//!
//! Each image vertex is the intersection of n consecutive hyperplanes, each
//! spanned by every other vertex around its center. The same point is the
//! intersection of just two subspaces built from alternating lifts, which is
//! both cheaper and the form the invariant-space derivation uses; the full
//! hyperplane intersection is kept as an independent oracle. Both paths run
//! over either scalar pipeline; only the final renormalization of the image
//! polygon is float-only.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, RANK_REL_TOL};
use crate::polygon::{
    lift_and_normalize, unit_determinant_scaling, LiftedPolygon, ProjectivePoint, TwistedPolygon,
};
use crate::scalar::Scalar;

/// A list of linearly independent vectors in R^{n+1}.
#[derive(Debug, Clone)]
pub struct SubspaceBasis<S> {
    vectors: Vec<Vec<S>>,
}

impl<S: Scalar> SubspaceBasis<S> {
    pub fn new(vectors: Vec<Vec<S>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidInput("empty basis".into()));
        }
        let m = Matrix::from_cols(&vectors);
        if m.rank(RANK_REL_TOL) != vectors.len() {
            return Err(Error::Degenerate(format!(
                "basis of {} vectors is rank-deficient",
                vectors.len()
            )));
        }
        Ok(SubspaceBasis { vectors })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<S>] {
        &self.vectors
    }
}

/// Vertex indices spanning the hyperplane centered at `k`: every other
/// vertex, n of them, symmetric around `k`. Even n skips `k` itself; odd n
/// includes it.
pub fn plane_vertex_indices(k: i64, n: usize) -> Vec<i64> {
    assert!(n >= 2);
    let top = n as i64 - 1;
    (-top..=top).step_by(2).map(|off| k + off).collect()
}

/// Generators of the lifted hyperplane centered at `j`.
pub fn lifted_plane_basis<S: Scalar>(lp: &LiftedPolygon<S>, j: i64) -> Result<SubspaceBasis<S>> {
    let gens = plane_vertex_indices(j, lp.dim())
        .into_iter()
        .map(|idx| lp.lift(idx))
        .collect();
    SubspaceBasis::new(gens)
}

/// The two alternating-lift subspaces whose intersection is the image
/// vertex at `k` (unshifted indexing): sizes s+1 and s+1 for n = 2s,
/// s+1 and s+2 for n = 2s+1.
pub fn reduced_subspaces<S: Scalar>(
    lp: &LiftedPolygon<S>,
    k: i64,
) -> Result<(SubspaceBasis<S>, SubspaceBasis<S>)> {
    let n = lp.dim();
    let s = (n / 2) as i64;
    let first: Vec<Vec<S>> = (0..=s).map(|m| lp.lift(k - s + 2 * m)).collect();
    let second: Vec<Vec<S>> = if n % 2 == 0 {
        (0..=s).map(|m| lp.lift(k - s + 1 + 2 * m)).collect()
    } else {
        (0..=s + 1).map(|m| lp.lift(k - s - 1 + 2 * m)).collect()
    };
    Ok((SubspaceBasis::new(first)?, SubspaceBasis::new(second)?))
}

/// A vector spanning `span(A) ∩ span(B)`, defined up to scale.
///
/// Requires `dim A + dim B = n + 2` so the generic intersection is a line;
/// any other kernel dimension of the stacked coefficient system means the
/// configuration is not transverse.
pub fn intersect_two_subspaces<S: Scalar>(
    a: &SubspaceBasis<S>,
    b: &SubspaceBasis<S>,
) -> Result<Vec<S>> {
    let ambient = a.vectors()[0].len();
    assert!(
        a.dim() + b.dim() == ambient + 1,
        "subspace dimensions must sum to n + 2"
    );
    let mut cols: Vec<Vec<S>> = a.vectors().to_vec();
    cols.extend(
        b.vectors()
            .iter()
            .map(|v| v.iter().map(Scalar::neg).collect::<Vec<S>>()),
    );
    let stacked = Matrix::from_cols(&cols);
    let kernel = stacked.kernel(RANK_REL_TOL);
    if kernel.len() != 1 {
        return Err(Error::NotTransverse(format!(
            "kernel dimension {} (expected 1)",
            kernel.len()
        )));
    }
    let coeffs = &kernel[0];
    let mut point = vec![S::zero(); ambient];
    for (alpha, vec) in coeffs[..a.dim()].iter().zip(a.vectors()) {
        for (slot, entry) in point.iter_mut().zip(vec) {
            *slot = slot.add(&alpha.mul(entry));
        }
    }
    if point.iter().all(Scalar::is_zero) {
        return Err(Error::NotTransverse("intersection vector vanished".into()));
    }
    if !S::EXACT {
        // scale the float direction to unit max entry for stable downstream use
        let scale = point.iter().fold(0.0_f64, |m, x| m.max(x.to_f64().abs()));
        let inv = S::from_f64(1.0 / scale);
        for slot in point.iter_mut() {
            *slot = slot.mul(&inv);
        }
    }
    Ok(point)
}

/// Normal of the hyperplane spanned by n vectors in R^{n+1}: the
/// generalized cross product by cofactor expansion.
pub fn hyperplane_normal<S: Scalar>(vectors: &[Vec<S>]) -> Vec<S> {
    let ambient = vectors[0].len();
    assert_eq!(vectors.len() + 1, ambient, "need n spanning vectors in R^{{n+1}}");
    let rows = Matrix::from_rows(vectors.to_vec());
    (0..ambient)
        .map(|drop| {
            let minor = Matrix::from_fn(ambient - 1, ambient - 1, |i, j| {
                rows[(i, if j < drop { j } else { j + 1 })].clone()
            });
            let d = minor.det();
            if drop % 2 == 0 {
                d
            } else {
                d.neg()
            }
        })
        .collect()
}

/// Image vertex at `k` (unshifted indexing) by intersecting all n lifted
/// hyperplanes directly. Oracle for the reduced two-subspace path.
pub fn hyperplane_intersection_oracle<S: Scalar>(
    lp: &LiftedPolygon<S>,
    k: i64,
) -> Result<Vec<S>> {
    let n = lp.dim();
    let s = (n / 2) as i64;
    let centers: Vec<i64> = if n % 2 == 0 {
        (k - s + 1..=k + s).collect()
    } else {
        (k - s..=k + s).collect()
    };
    let normals: Vec<Vec<S>> = centers
        .into_iter()
        .map(|j| {
            let basis = lifted_plane_basis(lp, j)?;
            Ok(hyperplane_normal(basis.vectors()))
        })
        .collect::<Result<_>>()?;
    let stacked = Matrix::from_rows(normals);
    let kernel = stacked.kernel(RANK_REL_TOL);
    if kernel.len() != 1 {
        return Err(Error::NotTransverse(format!(
            "hyperplanes meet in dimension {} (expected a line)",
            kernel.len()
        )));
    }
    let point = kernel.into_iter().next().unwrap();
    if point.iter().all(Scalar::is_zero) {
        return Err(Error::NotTransverse("intersection vector vanished".into()));
    }
    Ok(point)
}

/// Index shift aligning the geometric intersections with the labeling the
/// invariant-space map uses, where the image lift at k is `lambda_k rho_k
/// r_k`. That combination spans lifts at offsets k..k+n+1 of the parity
/// opposite to n, which is the intersection centered at k + (n+1)/2: the
/// usual half-n shift for even n, one more for odd n.
pub fn map_index_shift(n: usize) -> i64 {
    ((n + 1) / 2) as i64
}

/// The full geometric pentagram map on a lifted polygon.
///
/// Image vertices are two-subspace intersections with the centers shifted
/// by `map_index_shift`, so the geometric and invariant pipelines share one
/// labeling. The image points are renormalized into a lifted polygon with
/// the same monodromy; if the sign system rejects the monodromy lift, the
/// opposite lift is tried (only odd n can need this, and only odd n keeps
/// determinant 1 under the flip).
pub fn pentagram_map_geometric(lp: &LiftedPolygon<f64>) -> Result<LiftedPolygon<f64>> {
    let n = lp.dim();
    let len = lp.num_vertices();
    let s = map_index_shift(n);
    let mut points = Vec::with_capacity(len);
    for k in 0..len as i64 {
        let (a, b) = reduced_subspaces(lp, k + s)?;
        points.push(ProjectivePoint::new(intersect_two_subspaces(&a, &b)?)?);
    }
    // Float determinant evaluation drifts on large matrices; snap the
    // monodromy back onto determinant one before revalidation.
    let monodromy = unit_determinant_scaling(lp.monodromy())?;
    let poly = TwistedPolygon::new(n, points, monodromy.clone())?;
    match lift_and_normalize(&poly) {
        Err(Error::SignUnsolvable) if n % 2 == 1 => {
            let flipped = monodromy.scale(&-1.0);
            let poly = TwistedPolygon::new(n, poly.points().to_vec(), flipped)?;
            lift_and_normalize(&poly)
        }
        other => other,
    }
}
