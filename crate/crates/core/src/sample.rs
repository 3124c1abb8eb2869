//! Deterministic sampling of fields and polygons.
//!
//! Everything is driven by a ChaCha stream seeded from a 64-bit value, so a
//! given seed reproduces the same bytes on any platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::invariants::{cramer_denominator, lambda_solve_float};
use crate::linalg::Matrix;
use crate::polygon::{
    extract_invariants_unnormalized, InvariantField, ProjectivePoint, TwistedPolygon,
};
use crate::scalar::ExactScalar;

const RETRY_BUDGET: usize = 100;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Rational with numerator and denominator uniform in [-9, 9], zero
    /// denominator excluded.
    pub fn rational(&mut self) -> ExactScalar {
        let p = self.rng.gen_range(-9i64..=9);
        let q = loop {
            let q = self.rng.gen_range(-9i64..=9);
            if q != 0 {
                break q;
            }
        };
        ExactScalar::from_ratio(p, q)
    }

    pub fn nonzero_rational(&mut self) -> ExactScalar {
        loop {
            let x = self.rational();
            if !x.is_zero() {
                return x;
            }
        }
    }

    fn raw_field(&mut self, n: usize, num_vertices: usize) -> InvariantField<ExactScalar> {
        let rows = (0..num_vertices)
            .map(|_| (0..n).map(|_| self.rational()).collect())
            .collect();
        InvariantField::new(n, rows).expect("structurally valid field")
    }

    /// A field with every Cramer denominator nonzero, retried within a
    /// bounded budget.
    pub fn field(&mut self, n: usize, num_vertices: usize) -> Result<InvariantField<ExactScalar>> {
        for _ in 0..RETRY_BUDGET {
            let f = self.raw_field(n, num_vertices);
            let nondegenerate =
                (0..num_vertices as i64).all(|k| !cramer_denominator(&f, k).is_zero());
            if nondegenerate {
                return Ok(f);
            }
        }
        Err(Error::GenerationFailed(RETRY_BUDGET))
    }

    /// A nondegenerate field whose normalization scalars exist over the
    /// reals, as the float pipeline needs.
    pub fn field_with_real_lambdas(
        &mut self,
        n: usize,
        num_vertices: usize,
    ) -> Result<InvariantField<ExactScalar>> {
        for _ in 0..RETRY_BUDGET {
            let f = self.field(n, num_vertices)?;
            if lambda_solve_float(&f).is_ok() {
                return Ok(f);
            }
        }
        Err(Error::GenerationFailed(RETRY_BUDGET))
    }

    /// Invariants of a random rational closed pentagon, extracted exactly.
    pub fn closed_pentagon_field(&mut self) -> Result<InvariantField<ExactScalar>> {
        for _ in 0..RETRY_BUDGET {
            let points: Vec<ProjectivePoint<ExactScalar>> = (0..5)
                .map(|_| {
                    ProjectivePoint::new(vec![
                        self.rational(),
                        self.rational(),
                        ExactScalar::one(),
                    ])
                    .expect("last coordinate is one")
                })
                .collect();
            let Ok(poly) = TwistedPolygon::new(2, points, Matrix::identity(3)) else {
                continue;
            };
            let Ok(inv) = extract_invariants_unnormalized(&poly) else {
                continue;
            };
            if (0..5i64).all(|k| !cramer_denominator(&inv, k).is_zero()) {
                return Ok(inv);
            }
        }
        Err(Error::GenerationFailed(RETRY_BUDGET))
    }

    /// Vertices of a convex polygon: sorted angles on the unit circle with a
    /// minimum angular gap.
    pub fn convex_polygon(&mut self, num_vertices: usize) -> Vec<Vec<f64>> {
        loop {
            let mut angles: Vec<f64> = (0..num_vertices)
                .map(|_| self.rng.gen_range(0.0..std::f64::consts::TAU))
                .collect();
            angles.sort_by(f64::total_cmp);
            let min_gap = angles
                .windows(2)
                .map(|w| w[1] - w[0])
                .chain(std::iter::once(
                    std::f64::consts::TAU - angles[num_vertices - 1] + angles[0],
                ))
                .fold(f64::INFINITY, f64::min);
            if min_gap > 0.08 {
                return angles
                    .into_iter()
                    .map(|t| vec![t.cos(), t.sin(), 1.0])
                    .collect();
            }
        }
    }

    /// Random integer unimodular matrix: a product of elementary shears.
    pub fn unimodular_matrix(&mut self, dim: usize) -> Matrix<ExactScalar> {
        let mut m = Matrix::identity(dim);
        for _ in 0..2 * dim {
            let i = self.rng.gen_range(0..dim);
            let j = loop {
                let j = self.rng.gen_range(0..dim);
                if j != i {
                    break j;
                }
            };
            let mut shear = Matrix::identity(dim);
            shear[(i, j)] = ExactScalar::from_int(self.rng.gen_range(-3i64..=3));
            m = m.mat_mul(&shear);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_reproduces_the_field() {
        let a = Sampler::new(42).field(3, 5).unwrap();
        let b = Sampler::new(42).field(3, 5).unwrap();
        assert_eq!(a, b);
        let c = Sampler::new(43).field(3, 5).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn generated_fields_are_nondegenerate() {
        let mut sampler = Sampler::new(7);
        for (n, len) in [(2usize, 5usize), (3, 7), (4, 7), (6, 5)] {
            let f = sampler.field(n, len).unwrap();
            for k in 0..len as i64 {
                assert!(!cramer_denominator(&f, k).is_zero(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn unimodular_samples_have_unit_determinant() {
        let mut sampler = Sampler::new(11);
        for dim in 3..=6 {
            assert_eq!(sampler.unimodular_matrix(dim).det(), ExactScalar::one());
        }
    }

    #[test]
    fn convex_samples_turn_consistently() {
        let mut sampler = Sampler::new(5);
        for len in [6usize, 7] {
            let poly = sampler.convex_polygon(len);
            assert_eq!(poly.len(), len);
            for k in 0..len {
                let (a, b, c) = (&poly[k], &poly[(k + 1) % len], &poly[(k + 2) % len]);
                let turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
                assert!(turn > 0.0, "len={len} k={k}");
            }
        }
    }
}
