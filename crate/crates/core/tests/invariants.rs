use ballharm::bloch::{bloch_phi, rho0_r0, BlochParams, CoefficientVariant};
use ballharm::degree::{degree, DegreeConfig};
use ballharm::harmonic::{poisson_kernel, HarmonicGenerator};
use ballharm::majorants::check_majorant;
use ballharm::poisson::{solve_newtonian, Data, PoissonProblem};
use ballharm::polynomial::homogeneous_harmonic_basis;
use ballharm::quadrature::{sphere_rule, stream_rng};
use ballharm::schwarz::{min_stretch_gap, random_orthogonal, schwarz_pick_gap};
use ballharm::{Ball, HarmonicMap, Majorant, MatrixN, MatrixNorm, PointN, PolyMap, Polynomial};
use proptest::prelude::*;

fn point_in_ball(n: usize, radius: f64) -> impl Strategy<Value = PointN<f64>> {
    prop::collection::vec(-1.0..1.0f64, n).prop_filter_map("zero vector", move |v| {
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        (norm > 1e-9 && norm <= 1.0).then(|| PointN::new(v.iter().map(|c| c * radius).collect()).unwrap())
    })
}

fn unit_vector(n: usize) -> impl Strategy<Value = PointN<f64>> {
    prop::collection::vec(-1.0..1.0f64, n).prop_filter_map("degenerate", |v| {
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| PointN::new(v.iter().map(|c| c / norm).collect()).unwrap())
    })
}

fn square_matrix(n: usize) -> impl Strategy<Value = MatrixN<f64>> {
    prop::collection::vec(prop::collection::vec(-1.0..1.0f64, n), n).prop_map(|rows| MatrixN::from_rows(rows).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_positive((x, z) in (2usize..6).prop_flat_map(|n| (point_in_ball(n, 0.999), unit_vector(n)))) {
        prop_assert!(poisson_kernel(&x, &z).unwrap() > 0.0);
    }

    #[test]
    fn kernel_is_positive_in_single_precision(
        (x, z) in (2usize..5).prop_flat_map(|n| (point_in_ball(n, 0.99), unit_vector(n)))
    ) {
        let xs = PointN::<f32>::new(x.coords().iter().map(|&c| c as f32).collect()).unwrap();
        let zs = PointN::<f32>::new(z.coords().iter().map(|&c| c as f32).collect()).unwrap();
        prop_assert!(poisson_kernel(&xs, &zs).unwrap() > 0.0);
    }

    #[test]
    fn planar_kernel_integrates_to_one(x in point_in_ball(2, 0.9)) {
        let rule = sphere_rule::<f64>(2, 4096, 0).unwrap();
        let total = rule.integrate(|z| poisson_kernel(&x, z).unwrap()).value;
        prop_assert!((total - 1.0).abs() < 1e-10, "total = {total}");
    }

    #[test]
    fn power_majorants_satisfy_axioms(alpha in 0.05..=1.0f64, t in 1e-6..10.0f64, lambda in 1.0..50.0f64) {
        let m = Majorant::power(alpha);
        prop_assert!(m.eval(lambda * t) <= lambda * m.eval(t) * (1.0 + 1e-12));
        prop_assert!(m.eval(t) <= m.eval(lambda * t));
        prop_assert!(check_majorant(&m, &[1e-6, 1e-3, 0.5, 1.0, 7.0]).unwrap().passed);
    }

    #[test]
    fn min_stretch_bound_holds(a in (2usize..7).prop_flat_map(square_matrix)) {
        prop_assume!(a.det().abs() > 1e-9);
        let (lhs, rhs) = min_stretch_gap(&a, MatrixNorm::Operator).unwrap();
        prop_assert!(lhs >= rhs - 1e-12 * a.operator_norm(), "{lhs} < {rhs}");
    }

    #[test]
    fn scaled_orthogonal_matrices_attain_min_stretch(n in 2usize..7, c in 0.1..10.0f64, seed in any::<u64>()) {
        let q = random_orthogonal::<f64>(&mut stream_rng(seed, 0), n).scale(c);
        let (lhs, rhs) = min_stretch_gap(&q, MatrixNorm::Operator).unwrap();
        prop_assert!(((lhs - rhs) / lhs).abs() < 1e-10);
    }

    #[test]
    fn linear_schwarz_pick(a in (2usize..5).prop_flat_map(square_matrix), dir in (0.0..0.99f64)) {
        // A linear map's sup over the unit ball is its operator norm.
        let n = a.to_f64_rows().len();
        let map = HarmonicMap::linear(&a);
        let x = PointN::axis(n, 0, dir);
        let (lhs, rhs) = schwarz_pick_gap(&map, a.operator_norm(), &x);
        prop_assert!(lhs <= rhs + 1e-12);
    }

    #[test]
    fn phi_scales_with_the_norm(n in 3usize..7, p in 1.0..4.0f64, r in 0.01..0.99f64, c in 0.25..8.0f64) {
        let base = BlochParams::new(n, p, 1.0, CoefficientVariant::ProofSqrt2).unwrap();
        let scaled = BlochParams::new(n, p, c, CoefficientVariant::ProofSqrt2).unwrap();
        let ratio = bloch_phi(r, &scaled).unwrap().phi / bloch_phi(r, &base).unwrap().phi;
        let want = c.powi(-(2 * n as i32 - 1));
        prop_assert!(((ratio - want) / want).abs() < 1e-12);
    }

    #[test]
    fn landau_radii_scale_with_the_bound(n in 2usize..7, m in 1.0..20.0f64, c in 1.0..4.0f64) {
        let (a, b) = (rho0_r0(n, m).unwrap(), rho0_r0(n, c * m).unwrap());
        let want = c.powi(-(n as i32));
        prop_assert!(((b.rho0 / a.rho0 - want) / want).abs() < 1e-12);
        prop_assert!(b.r0 < a.r0 && a.r0 < a.rho0);
    }

    #[test]
    fn linear_maps_have_degree_sign_det(a in (2usize..4).prop_flat_map(square_matrix)) {
        let sv = a.singular_values();
        let (smax, smin) = (sv.iter().cloned().fold(0.0, f64::max), sv.iter().cloned().fold(f64::INFINITY, f64::min));
        prop_assume!(smin > 0.05 * smax);
        let n = sv.len();
        let cfg = DegreeConfig { random_seeds: 100, ..DegreeConfig::fast() };
        let d = degree(&HarmonicMap::linear(&a), &Ball::unit(n), &PointN::origin(n), &cfg).unwrap();
        prop_assert_eq!(d.degree, a.det().signum() as i64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn harmonic_basis_is_exactly_harmonic(n in 2usize..6, d in 0u32..6) {
        for p in homogeneous_harmonic_basis(n, d) {
            prop_assert!(p.laplacian().is_zero());
        }
    }

    #[test]
    fn generated_maps_are_harmonic(n in 2usize..5, seed in any::<u64>()) {
        let gen = HarmonicGenerator::<f64>::new(n, 4).unwrap();
        let p = gen.polynomial(&mut stream_rng(seed, 0), 1);
        prop_assert!(p.laplacian().max_abs_coefficient() < 1e-12);
    }

    #[test]
    fn solver_is_linear(
        c in prop::collection::vec(-1.0..1.0f64, 8),
        (a, b) in (-2.0..2.0f64, -2.0..2.0f64),
        x in point_in_ball(2, 0.8),
    ) {
        let quad = |k: usize| Polynomial::from_terms(2, [(vec![0, 0], c[k]), (vec![1, 0], c[k + 1]), (vec![1, 1], c[k + 2]), (vec![0, 2], c[k + 3])]);
        let data = |k: usize| Data::Polynomial(PolyMap::new(vec![quad(k)]));
        let (f1, f2, g1, g2) = (data(0), data(4), data(1), data(3));
        let solve = |f: Data<f64>, g: Data<f64>| {
            solve_newtonian(&PoissonProblem::with_holder_samples(2, f, g, 0.5, 16).unwrap(), 256, 0).unwrap()
        };
        let fc = f1.combine(a, &f2, b).unwrap();
        let gc = g1.combine(a, &g2, b).unwrap();
        let (u1, u2, uc) = (solve(f1, g1), solve(f2, g2), solve(fc, gc));
        let lhs = uc.value(&x).coords()[0];
        let rhs = a * u1.value(&x).coords()[0] + b * u2.value(&x).coords()[0];
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }
}
