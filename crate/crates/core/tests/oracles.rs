//! Library results against independently computed reference values.

use approx::assert_relative_eq;
use hh_simplex::prelude::*;

/// Composite Gauss–Legendre over the unit triangle via the Duffy map
/// `(u, v) ↦ (u, (1−u)v)`, Jacobian `1−u`.
fn triangle_integral(f: impl Fn(f64, f64) -> f64) -> f64 {
    const NODES: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    let panels = 40;
    let h = 1.0 / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        for j in 0..panels {
            for (a, wa) in NODES.iter().zip(WEIGHTS) {
                for (b, wb) in NODES.iter().zip(WEIGHTS) {
                    let u = h * (i as f64 + 0.5 * (a + 1.0));
                    let v = h * (j as f64 + 0.5 * (b + 1.0));
                    total += wa * wb * 0.25 * h * h * (1.0 - u) * f(u, (1.0 - u) * v);
                }
            }
        }
    }
    total
}

#[test]
fn polynomial_moments_match_triangle_quadrature() {
    let s = Simplex::unit(2).unwrap();
    for (i, j) in [(0, 0), (1, 0), (2, 0), (1, 1), (3, 2), (4, 4)] {
        let p = Polynomial::from_terms(Basis::Cartesian, 2, [(1.0, MultiIndex::new(vec![i, j]))]);
        let exact = integrate_polynomial(&s, &p).unwrap().value;
        let reference = triangle_integral(|x, y| x.powi(i as i32) * y.powi(j as i32));
        assert_relative_eq!(exact, reference, max_relative = 1e-12);
    }
}

#[test]
fn affine_image_of_triangle_scales_by_determinant() {
    // S = A·S₁ + t, so ∫_S g = |det A| ∫_{S₁} g(A·+t)
    let (a, b, c, d, tx, ty) = (2.0, 0.5, -0.3, 1.5, 0.7, -1.2);
    let s = make_simplex(vec![point(&[tx, ty]), point(&[a + tx, c + ty]), point(&[b + tx, d + ty])]).unwrap();
    let f = make_quadratic_form(vec![vec![1.0, 0.3], vec![0.3, 2.0]]).unwrap();
    let p = f.polynomial_form(2).unwrap();
    let exact = integrate_polynomial(&s, &p).unwrap().value;
    let det = (a * d - b * c).abs();
    let reference = det
        * triangle_integral(|u, v| {
            let x = a * u + b * v + tx;
            let y = c * u + d * v + ty;
            x * x + 0.6 * x * y + 2.0 * y * y
        });
    assert_relative_eq!(exact, reference, max_relative = 1e-12);
}

#[test]
fn mean_norm_sq_matches_vertex_formula() {
    // (1/|S|)∫‖x‖² = (Σ‖vᵢ‖² + ‖Σvᵢ‖²) / ((n+1)(n+2))
    for n in 1..=6 {
        for seed in 0..5 {
            let s = random_simplex(n, seed).unwrap();
            let m = (n + 1) as f64;
            let sum_sq: f64 = s.vertices().iter().map(|v| v.norm_squared()).sum();
            let sum = s.vertices().iter().fold(Point::zeros(n), |acc, v| acc + v);
            let reference = (sum_sq + sum.norm_squared()) / (m * (m + 1.0));
            assert_relative_eq!(mean_norm_sq(&s), reference, max_relative = 1e-12);
        }
    }
}

#[test]
fn exp_on_interval_matches_closed_form() {
    let (a, b) = (-0.4, 1.3);
    let s = Simplex::interval(a, b).unwrap();
    let reference = f64::exp(b) - f64::exp(a);
    let mc = integrate_mc(&s, |x| x[0].exp(), 400_000, 11).unwrap();
    assert!((mc.value - reference).abs() < 4.0 * mc.std_error, "{} vs {reference}", mc.value);
}

#[test]
fn exp_linear_on_triangle_matches_divided_difference() {
    // ∫_{S₁} e^{αx+βy} = exp[0, α, β] (Hermite–Genocchi)
    let (alpha, beta) = (0.8, -1.1);
    let dd = |x: f64, y: f64| (y.exp() - x.exp()) / (y - x);
    let reference = (dd(alpha, beta) - dd(0.0, alpha)) / beta;
    let quad = triangle_integral(|x, y| (alpha * x + beta * y).exp());
    assert_relative_eq!(quad, reference, max_relative = 1e-12);

    let s = Simplex::unit(2).unwrap();
    let f = make_exp_linear(vec![alpha, beta]).unwrap();
    let mc = integrate_mc(&s, |x| f.eval(x), 400_000, 5).unwrap();
    assert!((mc.value - reference).abs() < 4.0 * mc.std_error);
}

#[test]
fn strongly_convex_chain_on_interval_by_hand() {
    // f = x² + 2x² on [1, 3]: f(2) = 12, mean = 3·13/3 = 13, avg of ends = 15
    let s = Simplex::interval(1.0, 3.0).unwrap();
    let f = make_strongly_convex(&make_norm_power(2.0).unwrap(), 2.0).unwrap();
    let r = strongly_convex_hh(&f, &s, &IntegratorConfig::default()).unwrap();
    let classical = r.classical.unwrap();
    assert_relative_eq!(classical.lower, 12.0, max_relative = 1e-14);
    assert_relative_eq!(r.middle.value, 13.0, max_relative = 1e-14);
    assert_relative_eq!(classical.upper, 15.0, max_relative = 1e-14);
    // corrections: c·(mean‖x‖² − ‖b‖²) = 2·(13/3 − 4) and c·(avg‖vᵢ‖² − mean‖x‖²) = 2·(5 − 13/3)
    assert_relative_eq!(r.lower, 12.0 + 2.0 / 3.0, max_relative = 1e-14);
    assert_relative_eq!(r.upper, 15.0 - 4.0 / 3.0, max_relative = 1e-14);
}
