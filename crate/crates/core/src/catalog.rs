//! Random function catalogs, one per convexity class.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::functions::{
    make_affine, make_concave_control, make_exp_linear, make_max_affine, make_norm_power, make_quadratic_form,
    make_strongly_convex, make_strongly_wright, make_wright, AffinePiece, FunctionSpec,
};

/// Moduli cycled through by the strong catalogs.
pub const MODULI: [f64; 3] = [0.1, 1.0, 10.0];

/// Deterministic RNG for the catalog of dimension `n`.
pub fn catalog_rng(seed: u64, n: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0x4341_5441_0000 + n as u64);
    rng
}

fn uniform_vec<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-scale..=scale)).collect()
}

/// `AᵀA/n` with `A` uniform on `[-1, 1]`, plus `ridge·I`.
fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize, ridge: f64) -> Vec<Vec<f64>> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..=1.0));
    let q = a.transpose() * &a / n as f64;
    (0..n)
        .map(|i| (0..n).map(|j| q[(i, j)] + if i == j { ridge } else { 0.0 }).collect())
        .collect()
}

/// Vector with uniformly random direction and norm log-uniform in `[1, max_norm]`.
fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize, max_norm: f64) -> Vec<f64> {
    let dir = uniform_vec(rng, n, 1.0);
    let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
    let norm = if max_norm > 1.0 {
        max_norm.powf(rng.random::<f64>())
    } else {
        max_norm
    };
    dir.iter().map(|v| v / len * norm).collect()
}

/// Seven convex specs: quadratic form, max-affine, exp-linear, three norm
/// powers and an affine function. Four of them are polynomials.
pub fn convex_catalog<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<FunctionSpec> {
    let pieces = (0..4)
        .map(|_| AffinePiece {
            w: uniform_vec(rng, n, 1.0),
            b: rng.random_range(-0.5..=0.5),
        })
        .collect();
    vec![
        make_quadratic_form(random_psd(rng, n, 0.0)).expect("AᵀA is PSD"),
        make_max_affine(pieces).expect("non-empty pieces"),
        make_exp_linear(uniform_vec(rng, n, 1.0)).expect("finite weights"),
        make_norm_power(1.5).expect("p >= 1"),
        make_norm_power(2.0).expect("p >= 1"),
        make_norm_power(4.0).expect("p >= 1"),
        make_affine(uniform_vec(rng, n, 2.0), rng.random_range(-1.0..=1.0)).expect("finite weights"),
    ]
}

/// Each convex spec plus a linear part with `‖w‖` up to `max_weight_norm`.
pub fn wright_catalog<R: Rng + ?Sized>(n: usize, rng: &mut R, max_weight_norm: f64) -> Vec<FunctionSpec> {
    convex_catalog(n, rng)
        .iter()
        .map(|base| make_wright(random_weights(rng, n, max_weight_norm), base).expect("convex base"))
        .collect()
}

/// Each convex spec plus `c‖x‖²`, cycling `c` through [`MODULI`].
pub fn strongly_convex_catalog<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<FunctionSpec> {
    convex_catalog(n, rng)
        .iter()
        .zip(MODULI.iter().cycle())
        .map(|(base, &c)| make_strongly_convex(base, c).expect("positive modulus"))
        .collect()
}

/// Each convex spec plus a linear part and `c‖x‖²`.
pub fn strongly_wright_catalog<R: Rng + ?Sized>(n: usize, rng: &mut R, max_weight_norm: f64) -> Vec<FunctionSpec> {
    convex_catalog(n, rng)
        .iter()
        .zip(MODULI.iter().cycle())
        .map(|(base, &c)| make_strongly_wright(random_weights(rng, n, max_weight_norm), base, c).expect("valid parts"))
        .collect()
}

/// Concave, non-affine negative controls (all polynomials).
pub fn control_catalog<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<FunctionSpec> {
    vec![
        make_concave_control(&make_quadratic_form(random_psd(rng, n, 0.5)).expect("PD")),
        make_concave_control(&make_norm_power(2.0).expect("p >= 1")),
        make_concave_control(&make_norm_power(4.0).expect("p >= 1")),
    ]
}

/// Every catalog for dimension `n`, deterministic in `seed`.
pub fn standard_catalog(n: usize, seed: u64) -> Vec<FunctionSpec> {
    let mut rng = catalog_rng(seed, n);
    let mut out = convex_catalog(n, &mut rng);
    out.extend(wright_catalog(n, &mut rng, 1e3));
    out.extend(strongly_convex_catalog(n, &mut rng));
    out.extend(strongly_wright_catalog(n, &mut rng, 1e3));
    out.extend(control_catalog(n, &mut rng));
    out
}
