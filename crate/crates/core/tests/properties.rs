use hh_simplex::prelude::*;
use hh_simplex::bounds::classical_hh;
use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::test_runner::Config;

fn simplex_strategy() -> impl Strategy<Value = Simplex> {
    (1usize..=5, any::<u64>()).prop_map(|(n, seed)| random_simplex(n, seed).unwrap())
}

fn inf_norm(x: &Point) -> f64 {
    x.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn random_polynomial(n: usize, seed: u64, max_degree: u32) -> Polynomial {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let terms = (0..6).map(|_| {
        let mut alpha = vec![0u32; n];
        let degree = rng.random_range(0..=max_degree);
        for _ in 0..degree {
            alpha[rng.random_range(0..n)] += 1;
        }
        (rng.random_range(-1.0..=1.0), MultiIndex::new(alpha))
    });
    Polynomial::from_terms(Basis::Cartesian, n, terms)
}

proptest! {
    #![proptest_config(Config::with_cases(64))]

    #[test]
    fn barycentric_round_trip(s in simplex_strategy(), raw in prop::collection::vec(-5.0f64..5.0, 5)) {
        let x = point(&raw[..s.dim()]);
        let t = to_barycentric(&s, &x).unwrap();
        let sum: f64 = t.as_slice().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-9);
        let back = from_barycentric(&s, &t).unwrap();
        prop_assert!(inf_norm(&(back - &x)) <= 1e-10 * (1.0 + inf_norm(&x)));
    }

    #[test]
    fn cyclic_shift_has_order_n_plus_one(s in simplex_strategy(), raw in prop::collection::vec(-3.0f64..3.0, 5)) {
        let n = s.dim();
        let x = point(&raw[..n]);
        let mut y = x.clone();
        for _ in 0..=n {
            y = apply_cyclic(&s, CyclicPermutation::new(1, n), &y).unwrap();
        }
        prop_assert!(inf_norm(&(y - &x)) <= 1e-9 * (1.0 + inf_norm(&x)));
    }

    #[test]
    fn cyclic_maps_fix_the_barycenter(s in simplex_strategy(), k in 0usize..6) {
        let n = s.dim();
        let b = s.barycenter();
        let t = to_barycentric(&s, b).unwrap();
        for w in t.as_slice() {
            prop_assert!((w - 1.0 / (n + 1) as f64).abs() < 1e-10);
        }
        let image = apply_cyclic(&s, CyclicPermutation::new(k % (n + 1), n), b).unwrap();
        prop_assert!(inf_norm(&(image - b)) <= 1e-10 * (1.0 + inf_norm(b)));
    }

    #[test]
    fn mean_of_affine_is_value_at_barycenter(s in simplex_strategy(), w in prop::collection::vec(-10.0f64..10.0, 5), c in -5.0f64..5.0) {
        let n = s.dim();
        let f = make_affine(w[..n].to_vec(), c).unwrap();
        let r = classical_hh(&f, &s, &IntegratorConfig::default()).unwrap();
        let scale = 1.0 + r.lower.abs();
        prop_assert!((r.middle.value - r.lower).abs() <= 1e-10 * scale);
        prop_assert!((r.middle.value - f.eval(s.barycenter())).abs() <= 1e-10 * scale);
    }

    #[test]
    fn mean_norm_sq_is_invariant_under_relabelling_and_rotation(s in simplex_strategy(), angle in 0.0f64..6.3, shift in 0usize..6) {
        let n = s.dim();
        let m = s.vertices().len();
        let relabelled: Vec<Point> = (0..m).map(|i| s.vertex((i + shift) % m).clone()).collect();
        let base = mean_norm_sq(&s);
        let perm = mean_norm_sq(&make_simplex(relabelled).unwrap());
        prop_assert!((base - perm).abs() <= 1e-10 * (1.0 + base));

        let mut rot = DMatrix::<f64>::identity(n, n);
        if n >= 2 {
            rot[(0, 0)] = angle.cos();
            rot[(0, 1)] = -angle.sin();
            rot[(1, 0)] = angle.sin();
            rot[(1, 1)] = angle.cos();
        } else if angle > 3.15 {
            rot[(0, 0)] = -1.0;
        }
        let rotated: Vec<Point> = s.vertices().iter().map(|v| &rot * v).collect();
        let turned = mean_norm_sq(&make_simplex(rotated).unwrap());
        prop_assert!((base - turned).abs() <= 1e-10 * (1.0 + base));
    }

    #[test]
    fn wright_split_is_recovered(s in simplex_strategy(), w in prop::collection::vec(-100.0f64..100.0, 5), seed in any::<u64>()) {
        let n = s.dim();
        let base = make_quadratic_form(vec![vec![0.0; n]; n]).unwrap();
        let base = make_strongly_convex(&base, 1.0).unwrap();
        let f = make_wright(w[..n].to_vec(), &base).unwrap();
        let parts = f.parts().unwrap();
        prop_assert_eq!(&parts.additive_linear, &w[..n].to_vec());
        for x in sample_uniform(&s, 8, seed) {
            let linear: f64 = x.iter().zip(&w).map(|(a, b)| a * b).sum();
            let expected = linear + x.norm_squared();
            prop_assert!((f.eval(&x) - expected).abs() <= 1e-10 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn strong_bounds_tighten_classical(s in simplex_strategy(), c in 0.05f64..20.0) {
        let f = make_strongly_convex(&make_norm_power(2.0).unwrap(), c).unwrap();
        let r = strongly_convex_hh(&f, &s, &IntegratorConfig::default()).unwrap();
        let classical = r.classical.unwrap();
        prop_assert!(r.lower >= classical.lower - 1e-12);
        prop_assert!(r.upper <= classical.upper + 1e-12);
        prop_assert_eq!(r.status, Status::Holds);
    }

    #[test]
    fn functional_mixing_is_linear(s in simplex_strategy(), lambda in 0.01f64..0.99, w in prop::collection::vec(-3.0f64..3.0, 5)) {
        let n = s.dim();
        let a = make_barycenter_functional(&s).unwrap();
        let b = make_vertex_average_functional(&s).unwrap();
        let mixed = a.mix(&b, lambda).unwrap();
        let g = |x: &Point| x.iter().zip(&w[..n]).map(|(p, q)| (p * q).exp()).sum::<f64>();
        let expected = lambda * a.apply(&g) + (1.0 - lambda) * b.apply(&g);
        prop_assert!((mixed.apply(&g) - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
        prop_assert!(mixed.weights().iter().all(|&v| v > 0.0));
    }
}

proptest! {
    #![proptest_config(Config::with_cases(50))]

    #[test]
    fn exact_and_monte_carlo_agree(s in simplex_strategy(), seed in any::<u64>()) {
        let p = random_polynomial(s.dim(), seed, 4);
        let exact = integrate_polynomial(&s, &p).unwrap();
        let mc = integrate_mc(&s, |x| p.eval(x.as_slice()), 40_000, seed).unwrap();
        let tol = 5.0 * mc.std_error + 1e-12 * (1.0 + exact.value.abs());
        prop_assert!((exact.value - mc.value).abs() <= tol, "exact {} vs mc {} ± {}", exact.value, mc.value, mc.std_error);
    }
}
