//! Integration over simplices.
//!
//! Two tiers: polynomials are integrated exactly through the Dirichlet
//! moment formula
//!
//! ```text
//! ∫_S Π tᵢ^αᵢ dx = |S| · n! · Π αᵢ! / (n + |α|)!
//! ```
//!
//! and anything else goes through Monte Carlo with a reported standard error.
//! Sampling is split into fixed-size chunks, each with its own ChaCha stream,
//! so parallel and sequential runs produce identical numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HhError, Result};
use crate::polynomial::{Basis, MultiIndex, Polynomial};
use crate::simplex::{Point, Simplex};

/// Samples per RNG stream.
pub const MC_CHUNK: usize = 4096;

/// Above this value of `n + |α|` factorials are evaluated in log space.
const LOG_SPACE_THRESHOLD: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    Exact,
    MonteCarlo,
}

/// An integral value together with its error model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    pub std_error: f64,
    pub n_samples: usize,
}

impl IntegralEstimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            kind: EstimateKind::Exact,
            std_error: 0.0,
            n_samples: 0,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == EstimateKind::Exact
    }

    /// Multiplies value and standard error by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            value: self.value * k,
            std_error: self.std_error * k.abs(),
            ..*self
        }
    }
}

fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

fn factorial(k: u32) -> f64 {
    (2..=k).map(|j| j as f64).product()
}

/// `Π αᵢ! / (n + |α|)!`.
fn dirichlet_ratio(n: usize, alpha: &[u32]) -> f64 {
    let total = n as u32 + alpha.iter().sum::<u32>();
    if total > LOG_SPACE_THRESHOLD {
        let ln_num: f64 = alpha.iter().map(|&a| ln_factorial(a)).sum();
        (ln_num - ln_factorial(total)).exp()
    } else {
        let num: f64 = alpha.iter().map(|&a| factorial(a)).product();
        num / factorial(total)
    }
}

/// `∫_{S₁} x₁^α₁ ⋯ xₙ^αₙ dx` over the unit simplex.
pub fn moment_unit_simplex(n: usize, alpha: &MultiIndex) -> Result<f64> {
    if alpha.len() != n {
        return Err(HhError::DimensionMismatch {
            expected: n,
            got: alpha.len(),
        });
    }
    Ok(dirichlet_ratio(n, alpha.exponents()))
}

/// Mean of the barycentric monomial `Π tᵢ^αᵢ` over any n-simplex.
pub fn barycentric_monomial_mean(n: usize, alpha: &MultiIndex) -> f64 {
    debug_assert_eq!(alpha.len(), n + 1);
    let total = n as u32 + alpha.degree();
    if total > LOG_SPACE_THRESHOLD {
        let ln_num: f64 = alpha.exponents().iter().map(|&a| ln_factorial(a)).sum();
        (ln_num + ln_factorial(n as u32) - ln_factorial(total)).exp()
    } else {
        factorial(n as u32) * dirichlet_ratio(n, alpha.exponents())
    }
}

fn barycentric_form(simplex: &Simplex, p: &Polynomial) -> Result<Polynomial> {
    let n = simplex.dim();
    match p.basis() {
        Basis::Barycentric if p.vars() == n + 1 => Ok(p.clone()),
        Basis::Cartesian if p.vars() == n => Ok(p.to_barycentric(simplex)),
        Basis::Barycentric => Err(HhError::DimensionMismatch {
            expected: n + 1,
            got: p.vars(),
        }),
        Basis::Cartesian => Err(HhError::DimensionMismatch {
            expected: n,
            got: p.vars(),
        }),
    }
}

/// `(1/|S|) ∫_S p dx`, exact.
pub fn mean_polynomial(simplex: &Simplex, p: &Polynomial) -> Result<f64> {
    let n = simplex.dim();
    let pb = barycentric_form(simplex, p)?;
    Ok(pb
        .terms()
        .map(|(c, alpha)| c * barycentric_monomial_mean(n, alpha))
        .sum())
}

/// `∫_S p dx` for a polynomial in either basis; Cartesian input is rewritten
/// in the barycentric coordinates of `simplex` first.
pub fn integrate_polynomial(simplex: &Simplex, p: &Polynomial) -> Result<IntegralEstimate> {
    Ok(IntegralEstimate::exact(simplex.volume() * mean_polynomial(simplex, p)?))
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

fn flat_dirichlet(rng: &mut ChaCha8Rng, m: usize, out: &mut [f64]) {
    let mut sum = 0.0;
    for slot in out.iter_mut().take(m) {
        let e: f64 = Exp1.sample(rng);
        *slot = e;
        sum += e;
    }
    for slot in out.iter_mut() {
        *slot /= sum;
    }
}

fn chunk_ranges(count: usize) -> Vec<(usize, usize)> {
    (0..count.div_ceil(MC_CHUNK))
        .map(|c| (c, MC_CHUNK.min(count - c * MC_CHUNK)))
        .collect()
}

fn sample_chunk(simplex: &Simplex, seed: u64, chunk: usize, len: usize) -> Vec<Point> {
    let m = simplex.dim() + 1;
    let mut rng = chunk_rng(seed, chunk);
    let mut t = vec![0.0; m];
    (0..len)
        .map(|_| {
            flat_dirichlet(&mut rng, m, &mut t);
            simplex.combine(&t)
        })
        .collect()
}

/// `count` i.i.d. uniform points on `simplex`.
pub fn sample_uniform(simplex: &Simplex, count: usize, rng_seed: u64) -> Vec<Point> {
    chunk_ranges(count)
        .into_par_iter()
        .map(|(c, len)| sample_chunk(simplex, rng_seed, c, len))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64) * (other.count as f64) / count as f64;
        Moments { count, mean, m2 }
    }
}

/// Monte Carlo estimate of `∫_S f dx` from `count` uniform samples.
pub fn integrate_mc<F>(simplex: &Simplex, f: F, count: usize, rng_seed: u64) -> Result<IntegralEstimate>
where
    F: Fn(&Point) -> f64 + Sync,
{
    if count < 2 {
        return Err(HhError::InvalidParameter(format!(
            "Monte Carlo needs at least 2 samples, got {count}"
        )));
    }
    let chunks: Vec<Result<Moments>> = chunk_ranges(count)
        .into_par_iter()
        .map(|(c, len)| {
            let mut acc = Moments {
                count: 0,
                mean: 0.0,
                m2: 0.0,
            };
            for (k, x) in sample_chunk(simplex, rng_seed, c, len).iter().enumerate() {
                let y = f(x);
                if !y.is_finite() {
                    return Err(HhError::NonFiniteSample {
                        index: c * MC_CHUNK + k,
                    });
                }
                acc.count += 1;
                let delta = y - acc.mean;
                acc.mean += delta / acc.count as f64;
                acc.m2 += delta * (y - acc.mean);
            }
            Ok(acc)
        })
        .collect();

    let mut total = Moments {
        count: 0,
        mean: 0.0,
        m2: 0.0,
    };
    for chunk in chunks {
        total = total.merge(chunk?);
    }
    let variance = (total.m2 / (total.count - 1) as f64).max(0.0);
    let vol = simplex.volume();
    Ok(IntegralEstimate {
        value: vol * total.mean,
        kind: EstimateKind::MonteCarlo,
        std_error: vol * (variance / total.count as f64).sqrt(),
        n_samples: total.count,
    })
}

/// `(1/|S|) ∫_S ‖x‖² dx`, exact.
pub fn mean_norm_sq(simplex: &Simplex) -> f64 {
    let n = simplex.dim();
    mean_polynomial(simplex, &Polynomial::norm_sq(Basis::Cartesian, n))
        .expect("norm polynomial has the simplex dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::random_simplex;
    use approx::assert_relative_eq;

    #[test]
    fn second_moment_on_unit_triangle() {
        let m = moment_unit_simplex(2, &MultiIndex::new(vec![2, 0])).unwrap();
        assert_relative_eq!(m, 1.0 / 12.0, max_relative = 1e-15);
        let m = moment_unit_simplex(1, &MultiIndex::new(vec![0])).unwrap();
        assert_eq!(m, 1.0);
        // ∫₀¹∫₀^{1-x} xy dy dx = ∫₀¹ x(1-x)²/2 dx = 1/24
        let m = moment_unit_simplex(2, &MultiIndex::new(vec![1, 1])).unwrap();
        assert_relative_eq!(m, 1.0 / 24.0, max_relative = 1e-15);
        assert!(moment_unit_simplex(3, &MultiIndex::new(vec![1, 1])).is_err());
    }

    #[test]
    fn log_space_branch_is_continuous() {
        // n + |α| = 20 (direct) vs 21 (log space), related by (n+|α|+1)
        let a = moment_unit_simplex(8, &MultiIndex::new(vec![12, 0, 0, 0, 0, 0, 0, 0])).unwrap();
        let b = moment_unit_simplex(8, &MultiIndex::new(vec![13, 0, 0, 0, 0, 0, 0, 0])).unwrap();
        assert_relative_eq!(b, a * 13.0 / 21.0, max_relative = 1e-13);
    }

    #[test]
    fn polynomial_integration_examples() {
        let s = random_simplex(3, 1).unwrap();
        let one = Polynomial::constant(Basis::Barycentric, 4, 1.0);
        assert_relative_eq!(integrate_polynomial(&s, &one).unwrap().value, s.volume(), max_relative = 1e-14);

        let unit = Simplex::unit(2).unwrap();
        let t1_sq = Polynomial::from_terms(Basis::Barycentric, 3, [(1.0, MultiIndex::unit(3, 1, 2))]);
        assert_relative_eq!(integrate_polynomial(&unit, &t1_sq).unwrap().value, 1.0 / 12.0, max_relative = 1e-14);

        let interval = Simplex::interval(0.0, 2.0).unwrap();
        let t1 = Polynomial::variable(Basis::Barycentric, 2, 1);
        let est = integrate_polynomial(&interval, &t1).unwrap();
        assert_relative_eq!(est.value, 1.0, max_relative = 1e-14);
        assert!(est.is_exact());
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn wrong_arity_is_rejected() {
        let s = Simplex::unit(2).unwrap();
        let p = Polynomial::constant(Basis::Barycentric, 2, 1.0);
        assert!(integrate_polynomial(&s, &p).is_err());
    }

    #[test]
    fn samples_lie_in_simplex_and_are_reproducible() {
        let s = random_simplex(3, 2).unwrap();
        let a = sample_uniform(&s, 10_000, 17);
        let b = sample_uniform(&s, 10_000, 17);
        assert_eq!(a, b);
        for x in &a {
            let t = s.to_barycentric(x).unwrap();
            assert!(t.is_inside(1e-12));
            assert!((t.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sample_mean_is_barycenter() {
        let s = Simplex::unit(2).unwrap();
        let n = 100_000;
        let pts = sample_uniform(&s, n, 5);
        // per-coordinate variance of the flat Dirichlet(1,1,1) marginal: 1/18
        let se = (1.0 / 18.0 / n as f64).sqrt();
        for j in 0..2 {
            let mean = pts.iter().map(|p| p[j]).sum::<f64>() / n as f64;
            assert!((mean - 1.0 / 3.0).abs() < 4.0 * se, "coordinate {j}: {mean}");
        }
    }

    #[test]
    fn mc_constant_is_exact() {
        let s = random_simplex(2, 8).unwrap();
        let est = integrate_mc(&s, |_| 3.0, 1000, 1).unwrap();
        assert_relative_eq!(est.value, 3.0 * s.volume(), max_relative = 1e-14);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.n_samples, 1000);
        assert_eq!(est.kind, EstimateKind::MonteCarlo);
    }

    #[test]
    fn mc_rejects_bad_input() {
        let s = Simplex::unit(1).unwrap();
        assert!(integrate_mc(&s, |_| 1.0, 1, 0).is_err());
        let err = integrate_mc(&s, |x| if x[0] > 0.5 { f64::NAN } else { 0.0 }, 100, 0);
        assert!(matches!(err, Err(HhError::NonFiniteSample { .. })));
    }

    #[test]
    fn mc_std_error_matches_sample_deviation() {
        let s = Simplex::unit(1).unwrap();
        let n = 5000;
        let est = integrate_mc(&s, |x| x[0], n, 3).unwrap();
        let xs: Vec<f64> = sample_uniform(&s, n, 3).iter().map(|p| p[0]).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert_relative_eq!(est.value, mean, max_relative = 1e-12);
        assert_relative_eq!(est.std_error, (var / n as f64).sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn mean_norm_sq_examples() {
        let s = Simplex::interval(0.0, 1.0).unwrap();
        assert_relative_eq!(mean_norm_sq(&s), 1.0 / 3.0, max_relative = 1e-14);
        for n in 1..=6 {
            let unit = Simplex::unit(n).unwrap();
            let nf = n as f64;
            assert_relative_eq!(mean_norm_sq(&unit), 2.0 * nf / ((nf + 1.0) * (nf + 2.0)), max_relative = 1e-13);
        }
    }

    #[test]
    fn linear_mean_is_value_at_barycenter() {
        let s = random_simplex(4, 21).unwrap();
        let w = [0.3, -1.2, 2.0, 0.7];
        let p = Polynomial::affine(Basis::Cartesian, &w, -0.4);
        let mean = mean_polynomial(&s, &p).unwrap();
        assert!((mean - p.eval(s.barycenter().as_slice())).abs() < 1e-12);
    }
}
