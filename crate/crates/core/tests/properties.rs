use ifem_core::fe_space::FeSpace;
use ifem_core::interface::{Interface, Sphere};
use ifem_core::mesh::{classify_cells, Aabb, Mesh};
use ifem_core::problem::{ExactSolution, ModelProblem};
use ifem_core::solver::{cg_solve, Preconditioner};
use ifem_core::sparse::CsrMatrix;
use proptest::prelude::*;

fn circle() -> Sphere {
    *ModelProblem::default_2d().sphere()
}

fn random_spd(n: usize, entries: &[(usize, usize, f64)], shift: f64) -> CsrMatrix {
    // graph Laplacian of random weighted edges plus a positive diagonal
    let mut trip = Vec::new();
    for &(i, j, w) in entries {
        let (i, j) = (i % n, j % n);
        if i != j {
            trip.extend([(i, i, w), (j, j, w), (i, j, -w), (j, i, -w)]);
        }
    }
    for i in 0..n {
        trip.push((i, i, shift + i as f64 * 0.01));
    }
    CsrMatrix::from_triplets(n, trip)
}

fn a_norm(a: &CsrMatrix, e: &[f64]) -> f64 {
    a.mul_vec(e).iter().zip(e).map(|(p, q)| p * q).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pi_h_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, sigma in 0.5f64..4.0, n in 4usize..20) {
        let mesh = Mesh::uniform(2, n).unwrap();
        let space = FeSpace::new(&mesh, 1).unwrap();
        let class = classify_cells(&mesh, &circle(), sigma).unwrap();
        let f = |x: &[f64; 3]| x[0] * x[0] - x[1];
        let g = |x: &[f64; 3]| (5.0 * x[1]).cos();
        let combined = space.pi_h(&class, |x| a * f(x) + b * g(x));
        let pf = space.pi_h(&class, f);
        let pg = space.pi_h(&class, g);
        for d in 0..space.n_dofs() {
            prop_assert!((combined[d] - (a * pf[d] + b * pg[d])).abs() < 1e-12);
        }
    }

    #[test]
    fn classification_partitions_cells(sigma in 0.1f64..6.0, n in 2usize..24) {
        let mesh = Mesh::uniform(2, n).unwrap();
        let c = classify_cells(&mesh, &circle(), sigma).unwrap();
        prop_assert_eq!(c.in_cells.len() + c.out_cells.len(), mesh.n_cells());
        for cell in 0..mesh.n_cells() {
            let (lo, hi) = (c.dist_min[cell], c.dist_max[cell]);
            prop_assert!(lo <= hi && hi <= lo + mesh.h() + 1e-15);
            prop_assert_eq!(c.is_in(cell), hi <= sigma * mesh.h());
        }
    }

    #[test]
    fn jacobi_does_not_change_the_solution(
        entries in prop::collection::vec((0usize..40, 0usize..40, 0.1f64..2.0), 20..120),
        shift in 0.05f64..1.0,
        rhs in prop::collection::vec(-1.0f64..1.0, 40),
    ) {
        let a = random_spd(40, &entries, shift);
        let (x, r1) = cg_solve(&a, &rhs, 1e-12, 2000, Preconditioner::None);
        let (y, r2) = cg_solve(&a, &rhs, 1e-12, 2000, Preconditioner::Jacobi);
        prop_assert!(r1.converged && r2.converged);
        let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() / scale < 1e-8);
        }
    }

    #[test]
    fn cg_energy_error_is_monotone(
        entries in prop::collection::vec((0usize..30, 0usize..30, 0.1f64..2.0), 10..80),
        shift in 0.05f64..1.0,
        rhs in prop::collection::vec(-1.0f64..1.0, 30),
    ) {
        let a = random_spd(30, &entries, shift);
        let (exact, _) = cg_solve(&a, &rhs, 1e-14, 5000, Preconditioner::None);
        let mut prev = f64::INFINITY;
        for k in 1..30 {
            let (xk, _) = cg_solve(&a, &rhs, 0.0, k, Preconditioner::None);
            let e: Vec<f64> = xk.iter().zip(&exact).map(|(p, q)| p - q).collect();
            let en = a_norm(&a, &e);
            prop_assert!(en <= prev * (1.0 + 1e-9) + 1e-13, "k={} {} > {}", k, en, prev);
            prev = en;
        }
    }

    #[test]
    fn exact_solution_is_continuous_across_the_interface(t in 0.0f64..std::f64::consts::TAU, eps in 1e-9f64..1e-5) {
        let p = ModelProblem::default_2d();
        let s = p.sphere();
        let y = s.point_at(0.0, t);
        let nu = s.normal(&y).unwrap();
        let out = p.value(&[y[0] + eps * nu[0], y[1] + eps * nu[1], 0.0]);
        let inn = p.value(&[y[0] - eps * nu[0], y[1] - eps * nu[1], 0.0]);
        prop_assert!((out - inn).abs() < 10.0 * eps);
    }
}

#[test]
fn distance_bounds_match_sampling() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
    for s in [circle(), *ModelProblem::default_3d().sphere()] {
        let dim = s.dim();
        for _ in 0..20 {
            let n = rng.gen_range(4..32);
            let mesh = Mesh::uniform(dim, n).unwrap();
            let cell = rng.gen_range(0..mesh.n_cells());
            let b: Aabb = mesh.cell_box(cell);
            let (lo, hi) = s.distance_range(&b);
            let per_axis: usize = if dim == 2 { 101 } else { 22 };
            let (mut smin, mut smax) = (f64::INFINITY, 0.0f64);
            let step = 1.0 / (per_axis - 1) as f64;
            let total = per_axis.pow(dim as u32);
            for k in 0..total {
                let mut xi = [0.0; 3];
                let mut r = k;
                for a in 0..dim {
                    xi[a] = (r % per_axis) as f64 * step;
                    r /= per_axis;
                }
                let d = s.distance(&b.map(&xi, dim));
                smin = smin.min(d);
                smax = smax.max(d);
            }
            let res = mesh.h() * step;
            assert!(lo <= smin + 1e-15 && smin <= lo + res, "{lo} {smin}");
            assert!(hi >= smax - 1e-15 && smax >= hi - res, "{hi} {smax}");
        }
    }
}

#[test]
fn refinement_halves_h() {
    for dim in [2, 3] {
        let m = Mesh::uniform(dim, 4).unwrap();
        assert_eq!(m.refine().h(), m.h() / 2.0);
    }
}
