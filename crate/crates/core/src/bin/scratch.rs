use pentagram::geometry::pentagram_map_geometric;
use pentagram::integrability::zero_curvature_residual;
use pentagram::invariants::pentagram_map_invariants;
use pentagram::linalg::Matrix;
use pentagram::polygon::{extract_invariants, reconstruct};
use pentagram::sample::Sampler;

fn main() {
    let mut worst6 = 0.0f64;
    for n in 2..=6usize {
        let len = [5usize, 7, 9, 11, 13]
            .into_iter()
            .find(|l| num_integer::gcd(*l, n + 1) == 1)
            .unwrap();
        let mut sampler = Sampler::new(0xC405 + n as u64);
        for _ in 0..20 {
            let a = sampler.field_with_real_lambdas(n, len).unwrap();
            let lp = reconstruct(&a, &Matrix::identity(n + 1)).unwrap().to_f64();
            let geo = extract_invariants(&pentagram_map_geometric(&lp).unwrap()).unwrap();
            let t = pentagram_map_invariants(&a).unwrap().to_f64();
            let mut gap = 0.0f64;
            for k in 0..len as i64 {
                for i in 1..=n {
                    let (x, y) = (geo.get(k, i), t.get(k, i));
                    gap = gap.max((x - y).abs() / y.abs().max(1.0));
                }
            }
            worst6 = worst6.max(gap);
        }
        println!("criterion6 n={n}: running worst rel gap {worst6:.2e}");
    }
    let mut worst7 = 0.0f64;
    for n in 2..=6usize {
        let len = [5usize, 7, 9, 11, 13]
            .into_iter()
            .find(|l| num_integer::gcd(*l, n + 1) == 1)
            .unwrap();
        let mut sampler = Sampler::new(0x2E40 + n as u64);
        for _ in 0..20 {
            let a = sampler.field_with_real_lambdas(n, len).unwrap();
            worst7 = worst7.max(zero_curvature_residual(&a).unwrap());
        }
        println!("criterion7 n={n}: running worst scaled residual {worst7:.2e}");
    }
}
