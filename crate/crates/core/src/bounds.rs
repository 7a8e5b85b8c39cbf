//! Hermite–Hadamard chains `lower ≤ middle ≤ upper` on a simplex.
//!
//! | family           | lower                       | middle                    | upper                        |
//! |------------------|-----------------------------|---------------------------|------------------------------|
//! | classical        | `f(b)`                      | `⨍ f`                     | `avg f(vᵢ)`                  |
//! | wright           | `(n+1) f(b)`                | `⨍ F`                     | `Σ f(vᵢ)`                    |
//! | strongly convex  | `f(b) + c(⨍‖x‖² − ‖b‖²)`    | `⨍ f`                     | `avg f(vᵢ) + c(⨍‖x‖² − avg ‖vᵢ‖²)` |
//! | strongly wright  | same as strongly convex     | `⨍ F / (n+1)`             | same as strongly convex      |
//! | operator         | `F(b)`                      | `T[F]`                    | `avg F(vᵢ)`                  |
//!
//! Here `⨍` is the mean over the simplex, `b` the barycenter and `F` the
//! cyclic symmetrization of `f`.
//!
//! Verdicts use a guard band. Exact middles get `1e-9·(1+|middle|)`; Monte
//! Carlo middles get four standard errors on top of that, and a margin
//! inside the band is reported as inconclusive rather than passing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HhError, Result};
use crate::functions::{ClassTag, FunctionSpec, RealFunction};
use crate::polynomial::Basis;
use crate::quadrature::{integrate_mc, mean_norm_sq, mean_polynomial, IntegralEstimate};
use crate::simplex::{Point, Simplex};
use crate::symmetrization::{symmetrize, SymmetrizedFunction};

/// Relative guard for exact middles.
pub const EXACT_GUARD: f64 = 1e-9;
/// Width of the Monte Carlo guard band in standard errors.
pub const MC_SIGMAS: f64 = 4.0;
/// Tolerance for moment matching of positive linear functionals.
pub const MOMENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Classical,
    Wright,
    StronglyConvex,
    StronglyWright,
    Operator,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Classical,
        Family::Wright,
        Family::StronglyConvex,
        Family::StronglyWright,
        Family::Operator,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Classical => "classical",
            Family::Wright => "wright",
            Family::StronglyConvex => "strongly_convex",
            Family::StronglyWright => "strongly_wright",
            Family::Operator => "operator",
        }
    }

    /// Whether the family's hypotheses can be stated for this class.
    /// Negative controls run through the families whose hypotheses they
    /// deliberately break.
    pub fn accepts(&self, class: ClassTag) -> bool {
        use ClassTag::*;
        match self {
            Family::Classical => matches!(class, Convex | StronglyConvex(_) | NonConvexControl),
            Family::Wright | Family::Operator => true,
            Family::StronglyConvex => matches!(class, StronglyConvex(_)),
            Family::StronglyWright => matches!(class, StronglyConvex(_) | StronglyWrightConvex(_)),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = HhError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| HhError::InvalidParameter(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Violated,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Violated => "violated",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// The plain (non-strong) bounds, kept next to a strong chain for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalChain {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub family: Family,
    pub lower: f64,
    pub middle: IntegralEstimate,
    pub upper: f64,
    pub margin_lower: f64,
    pub margin_upper: f64,
    pub status: Status,
    pub guard: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalChain>,
}

impl BoundReport {
    pub fn new(family: Family, lower: f64, middle: IntegralEstimate, upper: f64) -> Self {
        let margin_lower = middle.value - lower;
        let margin_upper = upper - middle.value;
        let exact_guard = EXACT_GUARD * (1.0 + middle.value.abs());
        let (guard, status) = if middle.is_exact() {
            let ok = margin_lower >= -exact_guard && margin_upper >= -exact_guard;
            (exact_guard, if ok { Status::Holds } else { Status::Violated })
        } else {
            let guard = MC_SIGMAS * middle.std_error + exact_guard;
            let status = if margin_lower < -guard || margin_upper < -guard || margin_lower.is_nan() || margin_upper.is_nan() {
                Status::Violated
            } else if margin_lower <= guard || margin_upper <= guard {
                Status::Inconclusive
            } else {
                Status::Holds
            };
            (guard, status)
        };
        Self {
            family,
            lower,
            middle,
            upper,
            margin_lower,
            margin_upper,
            status,
            guard,
            classical: None,
        }
    }

    fn with_classical(mut self, lower: f64, upper: f64) -> Self {
        self.classical = Some(ClassicalChain { lower, upper });
        self
    }

    pub fn worst_margin(&self) -> f64 {
        self.margin_lower.min(self.margin_upper)
    }
}

/// How middle terms are integrated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub mc_samples: usize,
    pub seed: u64,
    /// Use the exact polynomial engine whenever a polynomial form exists.
    pub prefer_exact: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            mc_samples: 100_000,
            seed: 0,
            prefer_exact: true,
        }
    }
}

impl IntegratorConfig {
    pub fn monte_carlo(mc_samples: usize, seed: u64) -> Self {
        Self {
            mc_samples,
            seed,
            prefer_exact: false,
        }
    }
}

fn check_applicable(family: Family, f: &FunctionSpec, simplex: &Simplex) -> Result<()> {
    if !f.accepts_dim(simplex.dim()) {
        return Err(HhError::DimensionMismatch {
            expected: simplex.dim(),
            got: f.dim().unwrap_or(0),
        });
    }
    if !family.accepts(f.class()) {
        return Err(HhError::FamilyNotApplicable {
            family: family.to_string(),
            class: f.class().to_string(),
        });
    }
    Ok(())
}

fn mc_mean<F: RealFunction + ?Sized>(f: &F, simplex: &Simplex, config: &IntegratorConfig) -> Result<IntegralEstimate> {
    let est = integrate_mc(simplex, |x| f.eval(x), config.mc_samples, config.seed)?;
    Ok(est.scaled(1.0 / simplex.volume()))
}

/// `(1/|S|) ∫_S f`.
pub fn mean_value(f: &FunctionSpec, simplex: &Simplex, config: &IntegratorConfig) -> Result<IntegralEstimate> {
    if config.prefer_exact {
        if let Some(p) = f.polynomial_form(simplex.dim()) {
            return Ok(IntegralEstimate::exact(mean_polynomial(simplex, &p)?));
        }
    }
    mc_mean(f, simplex, config)
}

/// `(1/|S|) ∫_S F` for a symmetrized function.
pub fn mean_symmetrized(sym: &SymmetrizedFunction, config: &IntegratorConfig) -> Result<IntegralEstimate> {
    if config.prefer_exact {
        if let Some(p) = sym.polynomial_form() {
            return Ok(IntegralEstimate::exact(mean_polynomial(sym.simplex(), p)?));
        }
    }
    mc_mean(sym, sym.simplex(), config)
}

fn vertex_values(f: &dyn Fn(&Point) -> f64, simplex: &Simplex) -> Vec<f64> {
    simplex.vertices().iter().map(f).collect()
}

fn average(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// `f(b) ≤ ⨍ f ≤ avg f(vᵢ)`.
pub fn classical_hh(f: &FunctionSpec, simplex: &Simplex, config: &IntegratorConfig) -> Result<BoundReport> {
    check_applicable(Family::Classical, f, simplex)?;
    let lower = f.eval(simplex.barycenter());
    let upper = average(&vertex_values(&|x| f.eval(x), simplex));
    Ok(BoundReport::new(Family::Classical, lower, mean_value(f, simplex, config)?, upper))
}

/// `(n+1) f(b) ≤ ⨍ F ≤ Σ f(vᵢ)` with `F` the cyclic symmetrization of `f`.
pub fn wright_hh(f: &FunctionSpec, simplex: &Simplex, config: &IntegratorConfig) -> Result<BoundReport> {
    check_applicable(Family::Wright, f, simplex)?;
    let order = (simplex.dim() + 1) as f64;
    let sym = symmetrize(f, simplex)?;
    let lower = order * f.eval(simplex.barycenter());
    let upper = vertex_values(&|x| f.eval(x), simplex).iter().sum();
    Ok(BoundReport::new(Family::Wright, lower, mean_symmetrized(&sym, config)?, upper))
}

/// The two correction terms of the strong bounds for modulus `c`:
/// `c(⨍‖x‖² − ‖b‖²) ≥ 0` and `c(⨍‖x‖² − avg ‖vᵢ‖²) ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongCorrections {
    pub lower: f64,
    pub upper: f64,
}

pub fn strong_corrections(simplex: &Simplex, c: f64) -> StrongCorrections {
    let m = mean_norm_sq(simplex);
    let b2 = simplex.barycenter().norm_squared();
    let v2 = average(&vertex_values(&|x| x.norm_squared(), simplex));
    StrongCorrections {
        lower: c * (m - b2),
        upper: c * (m - v2),
    }
}

fn modulus_of(f: &FunctionSpec) -> Result<f64> {
    f.modulus().ok_or_else(|| HhError::WrongClass(f.class().to_string()))
}

/// Strong bounds for a strongly convex `f`; the report keeps the classical
/// chain alongside.
pub fn strongly_convex_hh(f: &FunctionSpec, simplex: &Simplex, config: &IntegratorConfig) -> Result<BoundReport> {
    check_applicable(Family::StronglyConvex, f, simplex)?;
    let corr = strong_corrections(simplex, modulus_of(f)?);
    let at_b = f.eval(simplex.barycenter());
    let vavg = average(&vertex_values(&|x| f.eval(x), simplex));
    let middle = mean_value(f, simplex, config)?;
    Ok(BoundReport::new(Family::StronglyConvex, at_b + corr.lower, middle, vavg + corr.upper).with_classical(at_b, vavg))
}

/// Strong bounds for a strongly Wright-convex `f`, with middle `⨍ F / (n+1)`.
pub fn strongly_wright_hh(f: &FunctionSpec, simplex: &Simplex, config: &IntegratorConfig) -> Result<BoundReport> {
    check_applicable(Family::StronglyWright, f, simplex)?;
    let corr = strong_corrections(simplex, modulus_of(f)?);
    let order = (simplex.dim() + 1) as f64;
    let at_b = f.eval(simplex.barycenter());
    let vavg = average(&vertex_values(&|x| f.eval(x), simplex));
    let sym = symmetrize(f, simplex)?;
    let middle = mean_symmetrized(&sym, config)?.scaled(1.0 / order);
    Ok(BoundReport::new(Family::StronglyWright, at_b + corr.lower, middle, vavg + corr.upper).with_classical(at_b, vavg))
}

/// Strong bounds on the unit simplex using the closed-form corrections
/// `c·n²/((n+1)²(n+2))` and `−c·n²/((n+1)(n+2))`. The middle is the mean of
/// `f` for strongly convex specs and `⨍ F / (n+1)` for strongly Wright specs.
pub fn unit_simplex_strong_bounds(f: &FunctionSpec, n: usize, config: &IntegratorConfig) -> Result<BoundReport> {
    let c = modulus_of(f)?;
    let s = Simplex::unit(n)?;
    let nf = n as f64;
    let lower_corr = c * nf * nf / ((nf + 1.0).powi(2) * (nf + 2.0));
    let upper_corr = -c * nf * nf / ((nf + 1.0) * (nf + 2.0));
    let at_b = f.eval(s.barycenter());
    let vavg = average(&vertex_values(&|x| f.eval(x), &s));
    let (family, middle) = match f.class() {
        ClassTag::StronglyConvex(_) => (Family::StronglyConvex, mean_value(f, &s, config)?),
        _ => {
            check_applicable(Family::StronglyWright, f, &s)?;
            let sym = symmetrize(f, &s)?;
            (Family::StronglyWright, mean_symmetrized(&sym, config)?.scaled(1.0 / (nf + 1.0)))
        }
    };
    Ok(BoundReport::new(family, at_b + lower_corr, middle, vavg + upper_corr).with_classical(at_b, vavg))
}

/// `T[f] = Σ wⱼ f(xⱼ)` with positive weights summing to one whose values on
/// the coordinate projections match the integral means over the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveLinearFunctionalSpec {
    nodes: Vec<Point>,
    weights: Vec<f64>,
}

impl PositiveLinearFunctionalSpec {
    /// Validates positivity, normalization and moment matching against `simplex`.
    pub fn new(simplex: &Simplex, nodes: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        let n = simplex.dim();
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(HhError::InvalidParameter(format!(
                "{} nodes but {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        if let Some(bad) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(HhError::InvalidParameter(format!("weights must be positive, got {bad}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MOMENT_TOL {
            return Err(HhError::WeightSumError { sum: total });
        }
        for x in &nodes {
            if x.len() != n {
                return Err(HhError::DimensionMismatch { expected: n, got: x.len() });
            }
            if !simplex.to_barycentric(x)?.is_inside(1e-12) {
                return Err(HhError::InvalidParameter("functional node lies outside the simplex".into()));
            }
        }
        let spec = Self { nodes, weights };
        for j in 0..n {
            let projection = crate::polynomial::Polynomial::variable(Basis::Cartesian, n, j);
            let expected = mean_polynomial(simplex, &projection)?;
            let got = spec.apply(&|x: &Point| x[j]);
            if (got - expected).abs() > MOMENT_TOL * (1.0 + expected.abs()) {
                return Err(HhError::MomentMismatch {
                    coordinate: j,
                    got,
                    expected,
                });
            }
        }
        Ok(spec)
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn apply(&self, f: &dyn Fn(&Point) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }

    /// `λ·self + (1−λ)·other`, still positive and moment-matched.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(HhError::InvalidParameter(format!("mixing weight must lie in (0,1), got {lambda}")));
        }
        let mut nodes = self.nodes.clone();
        nodes.extend(other.nodes.iter().cloned());
        let mut weights: Vec<f64> = self.weights.iter().map(|w| lambda * w).collect();
        weights.extend(other.weights.iter().map(|w| (1.0 - lambda) * w));
        Ok(Self { nodes, weights })
    }
}

/// A quadrature rule with nodes given in barycentric coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarycentricRule {
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl BarycentricRule {
    /// The symmetric `(n+1)`-point rule with positive equal weights that is
    /// exact for polynomials of degree two: node `i` has weight `a` on vertex
    /// `i` and `b` on the others, `b = (n+2−√(n+2))/((n+1)(n+2))`, `a = 1−nb`.
    pub fn degree_two(n: usize) -> Self {
        let nf = n as f64;
        let b = (nf + 2.0 - (nf + 2.0).sqrt()) / ((nf + 1.0) * (nf + 2.0));
        let a = 1.0 - nf * b;
        let nodes = (0..=n)
            .map(|i| (0..=n).map(|k| if k == i { a } else { b }).collect())
            .collect();
        Self {
            nodes,
            weights: vec![1.0 / (nf + 1.0); n + 1],
        }
    }
}

pub fn make_vertex_average_functional(simplex: &Simplex) -> Result<PositiveLinearFunctionalSpec> {
    let m = simplex.dim() + 1;
    PositiveLinearFunctionalSpec::new(simplex, simplex.vertices().to_vec(), vec![1.0 / m as f64; m])
}

pub fn make_barycenter_functional(simplex: &Simplex) -> Result<PositiveLinearFunctionalSpec> {
    PositiveLinearFunctionalSpec::new(simplex, vec![simplex.barycenter().clone()], vec![1.0])
}

pub fn make_quadrature_functional(simplex: &Simplex, rule: &BarycentricRule) -> Result<PositiveLinearFunctionalSpec> {
    let n = simplex.dim();
    let nodes = rule
        .nodes
        .iter()
        .map(|t| {
            if t.len() != n + 1 {
                return Err(HhError::DimensionMismatch { expected: n + 1, got: t.len() });
            }
            simplex.from_barycentric(&crate::simplex::BarycentricCoords::new(t.clone())?)
        })
        .collect::<Result<Vec<_>>>()?;
    PositiveLinearFunctionalSpec::new(simplex, nodes, rule.weights.clone())
}

/// A positive linear functional applied to a symmetrized function.
pub trait PositiveFunctional {
    fn apply_symmetrized(&self, sym: &SymmetrizedFunction) -> Result<IntegralEstimate>;
}

impl PositiveFunctional for PositiveLinearFunctionalSpec {
    fn apply_symmetrized(&self, sym: &SymmetrizedFunction) -> Result<IntegralEstimate> {
        Ok(IntegralEstimate::exact(self.apply(&|x| sym.eval(x))))
    }
}

/// The integral mean `T[F] = (1/|S|) ∫_S F`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegralMeanFunctional {
    pub config: IntegratorConfig,
}

impl PositiveFunctional for IntegralMeanFunctional {
    fn apply_symmetrized(&self, sym: &SymmetrizedFunction) -> Result<IntegralEstimate> {
        mean_symmetrized(sym, &self.config)
    }
}

/// `F(b) ≤ T[F] ≤ avg F(vᵢ)`.
pub fn operator_hh<T: PositiveFunctional + ?Sized>(f: &FunctionSpec, simplex: &Simplex, functional: &T) -> Result<BoundReport> {
    check_applicable(Family::Operator, f, simplex)?;
    let sym = symmetrize(f, simplex)?;
    let lower = sym.eval(simplex.barycenter());
    let upper = average(&vertex_values(&|x| sym.eval(x), simplex));
    Ok(BoundReport::new(Family::Operator, lower, functional.apply_symmetrized(&sym)?, upper))
}

/// Runs one family with its default middle term (the integral mean for the
/// operator family).
pub fn run_family(family: Family, f: &FunctionSpec, simplex: &Simplex, config: &IntegratorConfig) -> Result<BoundReport> {
    match family {
        Family::Classical => classical_hh(f, simplex, config),
        Family::Wright => wright_hh(f, simplex, config),
        Family::StronglyConvex => strongly_convex_hh(f, simplex, config),
        Family::StronglyWright => strongly_wright_hh(f, simplex, config),
        Family::Operator => operator_hh(f, simplex, &IntegralMeanFunctional { config: *config }),
    }
}
