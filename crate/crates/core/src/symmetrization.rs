//! The cyclic symmetrization `F(x) = Σ_{σ∈C} f(σ(x))` of a function on a simplex.
//!
//! `C` is the cyclic group of order `n+1` acting on vertex indices, and each
//! `σ` acts on ℝⁿ as the affine map `Σ tᵢ vᵢ ↦ Σ t_{σ(i)} vᵢ`. One barycentric
//! solve per evaluation is enough: the images under all shifts are
//! rotations of the same weight vector.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HhError, Result};
use crate::functions::{FunctionSpec, RealFunction};
use crate::polynomial::{Basis, Polynomial};
use crate::quadrature::sample_uniform;
use crate::simplex::{apply_cyclic, CyclicPermutation, Point, Simplex};

/// Absolute-plus-relative tolerance for the constancy check of [`additive_symmetrization_constant`].
pub const CONSTANCY_TOL: f64 = 1e-10;

/// `F = Σ_{σ∈C} f∘σ` for a fixed simplex.
#[derive(Debug, Clone)]
pub struct SymmetrizedFunction {
    base: FunctionSpec,
    simplex: Simplex,
    polynomial_form: Option<Polynomial>,
}

impl SymmetrizedFunction {
    pub fn base(&self) -> &FunctionSpec {
        &self.base
    }

    pub fn simplex(&self) -> &Simplex {
        &self.simplex
    }

    /// `F` as a polynomial in the barycentric coordinates of the simplex.
    pub fn polynomial_form(&self) -> Option<&Polynomial> {
        self.polynomial_form.as_ref()
    }

    /// Group order `n+1`.
    pub fn order(&self) -> usize {
        self.simplex.dim() + 1
    }

    /// `F(x)`; NaN if `x` has the wrong dimension.
    pub fn eval(&self, x: &Point) -> f64 {
        let Ok(t) = self.simplex.barycentric_weights(x) else {
            return f64::NAN;
        };
        let n = self.simplex.dim();
        CyclicPermutation::group(n)
            .map(|sigma| {
                let image = self.simplex.combine(&sigma.permute_weights(t.as_slice()));
                self.base.eval(&image)
            })
            .sum()
    }
}

impl RealFunction for SymmetrizedFunction {
    fn eval(&self, x: &Point) -> f64 {
        SymmetrizedFunction::eval(self, x)
    }
}

/// Builds the symmetrization of `f` on `simplex`.
pub fn symmetrize(f: &FunctionSpec, simplex: &Simplex) -> Result<SymmetrizedFunction> {
    let n = simplex.dim();
    if !f.accepts_dim(n) {
        return Err(HhError::DimensionMismatch {
            expected: n,
            got: f.dim().unwrap_or(0),
        });
    }
    let polynomial_form = f.polynomial_form(n).map(|p| {
        let pb = p.to_barycentric(simplex);
        (0..=n).fold(Polynomial::zero(Basis::Barycentric, n + 1), |acc, k| {
            acc.add(&pb.rotate(k))
        })
    });
    Ok(SymmetrizedFunction {
        base: f.clone(),
        simplex: simplex.clone(),
        polynomial_form,
    })
}

/// `(Σᵢ F(vᵢ), (n+1)·Σᵢ f(vᵢ))`; the two agree for every `f`.
pub fn vertex_sum_identity(sym: &SymmetrizedFunction) -> (f64, f64) {
    let vertices = sym.simplex.vertices();
    let lhs = vertices.iter().map(|v| sym.eval(v)).sum();
    let rhs = sym.order() as f64 * vertices.iter().map(|v| sym.base.eval(v)).sum::<f64>();
    (lhs, rhs)
}

/// How a cyclic permutation acts on points. [`AffineCyclicAction`] is the
/// real action; other implementations exist to exercise the checks below.
pub trait CyclicAction {
    fn apply(&self, simplex: &Simplex, sigma: CyclicPermutation, x: &Point) -> Result<Point>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AffineCyclicAction;

impl CyclicAction for AffineCyclicAction {
    fn apply(&self, simplex: &Simplex, sigma: CyclicPermutation, x: &Point) -> Result<Point> {
        apply_cyclic(simplex, sigma, x)
    }
}

/// The constant `⟨w, Σᵢ vᵢ⟩` taken by the symmetrization of `x ↦ ⟨w, x⟩`,
/// after checking that every probe evaluates to it.
pub fn additive_symmetrization_constant(w: &[f64], simplex: &Simplex, probes: &[Point]) -> Result<f64> {
    additive_symmetrization_constant_with(&AffineCyclicAction, w, simplex, probes)
}

pub fn additive_symmetrization_constant_with<A: CyclicAction + ?Sized>(
    action: &A,
    w: &[f64],
    simplex: &Simplex,
    probes: &[Point],
) -> Result<f64> {
    let n = simplex.dim();
    if w.len() != n {
        return Err(HhError::DimensionMismatch {
            expected: n,
            got: w.len(),
        });
    }
    if probes.is_empty() {
        return Err(HhError::InvalidParameter("no probes".into()));
    }
    let linear = |x: &Point| x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>();
    let vertex_sum = simplex.vertices().iter().fold(Point::zeros(n), |acc, v| acc + v);
    let expected = linear(&vertex_sum);

    let mut worst = (0, expected, 0.0);
    for (probe, x) in probes.iter().enumerate() {
        let mut value = 0.0;
        for sigma in CyclicPermutation::group(n) {
            value += linear(&action.apply(simplex, sigma, x)?);
        }
        let gap = (value - expected).abs();
        if gap > worst.2 || gap.is_nan() {
            worst = (probe, value, gap);
        }
    }
    let scale = 1.0 + expected.abs();
    if worst.2 > CONSTANCY_TOL * scale || worst.2.is_nan() {
        return Err(HhError::ConstancyViolation {
            probe: worst.0,
            value: worst.1,
            expected,
        });
    }
    Ok(expected)
}

/// Largest sampled value of
/// `F(tx+(1−t)y) − [tF(x) + (1−t)F(y) − (n+1)c·t(1−t)‖x−y‖²]`,
/// i.e. the violation of strong convexity of `F` with modulus `(n+1)c`.
pub fn strong_convexity_modulus_check(sym: &SymmetrizedFunction, c: f64, trials: usize, rng_seed: u64) -> f64 {
    modulus_deficit(sym, sym.order() as f64 * c, trials, rng_seed)
}

/// Largest sampled violation of strong convexity of `sym` with the given modulus.
pub fn modulus_deficit(sym: &SymmetrizedFunction, modulus: f64, trials: usize, rng_seed: u64) -> f64 {
    let pts = sample_uniform(&sym.simplex, 2 * trials.max(1), rng_seed);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(0x4d4f_4455_4c55_53);
    pts.chunks_exact(2)
        .map(|pair| {
            let (x, y) = (&pair[0], &pair[1]);
            let t: f64 = rng.random();
            let z = x * t + y * (1.0 - t);
            let chord = t * sym.eval(x) + (1.0 - t) * sym.eval(y) - modulus * t * (1.0 - t) * (x - y).norm_squared();
            sym.eval(&z) - chord
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `M = Σ_{σ∈C} Aσᵀ Aσ`, where `Aσ` is the linear part of the cyclic map `σ`.
///
/// `Σ_σ ‖σ(x)‖²` has Hessian `2M`. `M = (n+1)I` exactly when every cyclic
/// map is an isometry (intervals, regular simplices); for a general simplex
/// the smallest eigenvalue of `M` can be well below `n+1`.
pub fn cyclic_gram(simplex: &Simplex) -> DMatrix<f64> {
    let n = simplex.dim();
    let mut gram = DMatrix::zeros(n, n);
    let origin = Point::zeros(n);
    for sigma in CyclicPermutation::group(n) {
        let offset = apply_cyclic(simplex, sigma, &origin).expect("origin has the simplex dimension");
        let mut a = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = Point::zeros(n);
            e[j] = 1.0;
            let col = apply_cyclic(simplex, sigma, &e).expect("basis vector has the simplex dimension") - &offset;
            a.set_column(j, &col);
        }
        gram += a.transpose() * a;
    }
    gram
}

/// A modulus of strong convexity of the symmetrization of a strongly
/// Wright-convex function with modulus `c`: `c · λ_min(M)` with `M` from
/// [`cyclic_gram`]. It is attained when the Wright part is affine.
pub fn symmetrized_modulus(simplex: &Simplex, c: f64) -> f64 {
    let eig = SymmetricEigen::new(cyclic_gram(simplex));
    c * eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{
        linear_combination, make_affine, make_constant, make_max_affine, make_quadratic_form,
        make_strongly_wright, midpoint_convexity_deficit, AffinePiece,
    };
    use crate::simplex::{make_simplex, point, random_simplex};
    use approx::assert_relative_eq;

    fn regular_triangle() -> Simplex {
        let h = 3f64.sqrt() / 2.0;
        make_simplex(vec![point(&[0.0, 0.0]), point(&[1.0, 0.0]), point(&[0.5, h])]).unwrap()
    }

    #[test]
    fn interval_symmetrization_is_reflection_sum() {
        let (a, b) = (-1.0, 3.0);
        let s = Simplex::interval(a, b).unwrap();
        let f = make_max_affine(vec![
            AffinePiece { w: vec![2.0], b: 0.0 },
            AffinePiece { w: vec![-1.0], b: 1.0 },
        ])
        .unwrap();
        let sym = symmetrize(&f, &s).unwrap();
        for x in [-1.0, 0.0, 0.7, 2.5, 3.0] {
            let expected = f.eval(&point(&[x])) + f.eval(&point(&[a + b - x]));
            assert_relative_eq!(sym.eval(&point(&[x])), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn linear_function_symmetrizes_to_constant() {
        let s = random_simplex(3, 14).unwrap();
        let w = vec![1.5, -2.0, 0.25];
        let f = make_affine(w.clone(), 0.0).unwrap();
        let sym = symmetrize(&f, &s).unwrap();
        let total = s.vertices().iter().fold(Point::zeros(3), |acc, v| acc + v);
        let expected: f64 = total.iter().zip(&w).map(|(a, b)| a * b).sum();
        for x in sample_uniform(&s, 50, 3) {
            assert_relative_eq!(sym.eval(&x), expected, epsilon = 1e-12);
        }
        // exact polynomial form agrees
        let p = sym.polynomial_form().unwrap();
        let t = s.to_barycentric(&point(&[0.1, 0.1, 0.1])).unwrap();
        assert_relative_eq!(p.eval(t.as_slice()), expected, epsilon = 1e-12);
    }

    #[test]
    fn barycenter_value_is_scaled_base() {
        let s = random_simplex(4, 2).unwrap();
        let q = make_quadratic_form((0..4).map(|i| (0..4).map(|j| if i == j { 1.0 + i as f64 } else { 0.1 }).collect()).collect()).unwrap();
        let sym = symmetrize(&q, &s).unwrap();
        let b = s.barycenter();
        assert_relative_eq!(sym.eval(b), 5.0 * q.eval(b), max_relative = 1e-12);
    }

    #[test]
    fn vertex_sum_examples() {
        let s = Simplex::interval(0.0, 1.0).unwrap();
        let sq = make_quadratic_form(vec![vec![1.0]]).unwrap();
        let (l, r) = vertex_sum_identity(&symmetrize(&sq, &s).unwrap());
        assert_relative_eq!(l, 2.0, epsilon = 1e-14);
        assert_relative_eq!(r, 2.0, epsilon = 1e-14);

        let s3 = random_simplex(3, 8).unwrap();
        let (l, r) = vertex_sum_identity(&symmetrize(&make_constant(2.0), &s3).unwrap());
        assert_relative_eq!(l, 16.0 * 2.0, max_relative = 1e-14);
        assert_relative_eq!(r, 16.0 * 2.0, max_relative = 1e-14);
    }

    #[test]
    fn additive_constant_examples() {
        let s = Simplex::interval(0.0, 1.0).unwrap();
        let probes = vec![point(&[-4.0]), point(&[0.3]), point(&[9.0])];
        assert_eq!(additive_symmetrization_constant(&[0.0], &s, &probes).unwrap(), 0.0);
        assert_relative_eq!(additive_symmetrization_constant(&[1.0], &s, &probes).unwrap(), 1.0, epsilon = 1e-14);
        assert!(additive_symmetrization_constant(&[1.0], &s, &[]).is_err());
    }

    struct SkipLastShift;

    impl CyclicAction for SkipLastShift {
        fn apply(&self, simplex: &Simplex, sigma: CyclicPermutation, x: &Point) -> Result<Point> {
            // shift n is mapped back onto shift 0
            let n = simplex.dim();
            let shift = if sigma.shift() == n { 0 } else { sigma.shift() };
            apply_cyclic(simplex, CyclicPermutation::new(shift, n), x)
        }
    }

    #[test]
    fn broken_action_is_detected() {
        let s = random_simplex(2, 30).unwrap();
        let probes = sample_uniform(&s, 20, 1);
        let err = additive_symmetrization_constant_with(&SkipLastShift, &[1.0, 2.0], &s, &probes);
        assert!(matches!(err, Err(HhError::ConstancyViolation { .. })));
    }

    #[test]
    fn sigma_invariance() {
        let s = random_simplex(3, 19).unwrap();
        let f = make_max_affine(vec![
            AffinePiece { w: vec![1.0, 2.0, 0.0], b: 0.0 },
            AffinePiece { w: vec![-1.0, 0.0, 3.0], b: 0.2 },
        ])
        .unwrap();
        let sym = symmetrize(&f, &s).unwrap();
        for x in sample_uniform(&s, 100, 4) {
            let fx = sym.eval(&x);
            for sigma in CyclicPermutation::group(3) {
                let y = apply_cyclic(&s, sigma, &x).unwrap();
                assert!((sym.eval(&y) - fx).abs() <= 1e-10 * (1.0 + fx.abs()));
            }
        }
    }

    #[test]
    fn operator_is_linear() {
        let s = random_simplex(2, 23).unwrap();
        let f = make_quadratic_form(vec![vec![1.0, 0.2], vec![0.2, 0.5]]).unwrap();
        let g = make_max_affine(vec![AffinePiece { w: vec![1.0, -1.0], b: 0.0 }, AffinePiece { w: vec![0.0, 2.0], b: -0.1 }]).unwrap();
        let (alpha, beta) = (2.5, -0.75);
        let h = linear_combination(&[(alpha, f.clone()), (beta, g.clone())]).unwrap();
        let (sf, sg, sh) = (
            symmetrize(&f, &s).unwrap(),
            symmetrize(&g, &s).unwrap(),
            symmetrize(&h, &s).unwrap(),
        );
        for x in sample_uniform(&s, 100, 5) {
            let lhs = sh.eval(&x);
            let rhs = alpha * sf.eval(&x) + beta * sg.eval(&x);
            assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn wright_symmetrization_is_convex() {
        let s = random_simplex(3, 44).unwrap();
        let base = make_max_affine(vec![
            AffinePiece { w: vec![1.0, 0.0, -1.0], b: 0.0 },
            AffinePiece { w: vec![0.0, 3.0, 0.5], b: -0.2 },
        ])
        .unwrap();
        let f = crate::functions::make_wright(vec![400.0, -250.0, 30.0], &base).unwrap();
        let sym = symmetrize(&f, &s).unwrap();
        assert!(midpoint_convexity_deficit(&sym, &s, 10_000, 7) <= 1e-9);
    }

    #[test]
    fn modulus_holds_on_intervals_and_regular_simplices() {
        let c = 0.6;
        let f = make_strongly_wright(vec![3.0], &make_constant(0.0), c).unwrap();
        let interval = Simplex::interval(-2.0, 5.0).unwrap();
        let sym = symmetrize(&f, &interval).unwrap();
        assert!(strong_convexity_modulus_check(&sym, c, 10_000, 1) <= 1e-10);

        let tri = regular_triangle();
        let f2 = make_strongly_wright(vec![1.0, -1.0], &make_constant(0.0), c).unwrap();
        let sym2 = symmetrize(&f2, &tri).unwrap();
        assert!(strong_convexity_modulus_check(&sym2, c, 10_000, 1) <= 1e-10);
        assert_relative_eq!(symmetrized_modulus(&tri, c), 3.0 * c, max_relative = 1e-12);
    }

    #[test]
    fn modulus_of_skewed_simplex_is_smaller() {
        // On a flat triangle the cyclic maps are far from isometries and the
        // symmetrization of c‖x‖² is strictly less convex than (n+1)c‖x‖².
        let c = 1.0;
        let s = make_simplex(vec![point(&[0.0, 0.0]), point(&[1.0, 0.0]), point(&[0.5, 0.05])]).unwrap();
        let f = make_strongly_wright(vec![0.0, 0.0], &make_constant(0.0), c).unwrap();
        let sym = symmetrize(&f, &s).unwrap();
        let guaranteed = symmetrized_modulus(&s, c);
        assert!(guaranteed < 3.0 * c);
        assert!(strong_convexity_modulus_check(&sym, c, 10_000, 2) > 1e-3);
        assert!(modulus_deficit(&sym, guaranteed, 10_000, 2) <= 1e-10);
    }

    #[test]
    fn guaranteed_modulus_holds_on_random_simplices() {
        for seed in 0..20 {
            let s = random_simplex(3, seed).unwrap();
            let base = make_max_affine(vec![
                AffinePiece { w: vec![1.0, 0.0, 0.0], b: 0.0 },
                AffinePiece { w: vec![0.0, 1.0, -1.0], b: 0.3 },
            ])
            .unwrap();
            let c = 0.5;
            let f = make_strongly_wright(vec![2.0, 0.0, -7.0], &base, c).unwrap();
            let sym = symmetrize(&f, &s).unwrap();
            let m = symmetrized_modulus(&s, c);
            assert!(modulus_deficit(&sym, m, 2000, seed) <= 1e-9 * (1.0 + m));
        }
    }
}
