//! Self-describing test functions for each convexity class.
//!
//! A [`FunctionSpec`] carries its class tag, an evaluator, the Wright
//! decomposition where one exists, and a polynomial form when the function
//! is a polynomial (which unlocks exact integration). Every spec is built
//! from a [`FunctionDescriptor`], the JSON `{"class": ..., "params": {...}}`
//! form used on the command line.
//!
//! Additive parts of Wright-convex functions are always linear maps.
//! Discontinuous additive functions have no numerical representation.

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HhError, Result};
use crate::polynomial::{Basis, Polynomial};
use crate::quadrature::sample_uniform;
use crate::simplex::{Point, Simplex};

/// Anything that can be evaluated at a point of ℝⁿ.
pub trait RealFunction: Sync {
    fn eval(&self, x: &Point) -> f64;
}

/// Convexity class of a function, with its modulus for the strong classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", content = "modulus", rename_all = "snake_case")]
pub enum ClassTag {
    Convex,
    StronglyConvex(f64),
    WrightConvex,
    StronglyWrightConvex(f64),
    NonConvexControl,
}

impl ClassTag {
    pub fn modulus(&self) -> Option<f64> {
        match *self {
            ClassTag::StronglyConvex(c) | ClassTag::StronglyWrightConvex(c) => Some(c),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassTag::Convex => "convex",
            ClassTag::StronglyConvex(_) => "strongly_convex",
            ClassTag::WrightConvex => "wright_convex",
            ClassTag::StronglyWrightConvex(_) => "strongly_wright_convex",
            ClassTag::NonConvexControl => "non_convex_control",
        }
    }

    /// True for every class other than the negative controls.
    pub fn is_positive(&self) -> bool {
        !matches!(self, ClassTag::NonConvexControl)
    }

    /// Convex or strongly convex.
    pub fn is_convex(&self) -> bool {
        matches!(self, ClassTag::Convex | ClassTag::StronglyConvex(_))
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus() {
            Some(c) => write!(f, "{}({c})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// One piece `⟨w, x⟩ + b` of a max-affine function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub w: Vec<f64>,
    pub b: f64,
}

/// One weighted summand of a linear combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub function: FunctionDescriptor,
}

/// JSON descriptor of a function: `{"class": <builder>, "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", content = "params", rename_all = "snake_case")]
pub enum FunctionDescriptor {
    Constant { value: f64 },
    Affine { w: Vec<f64>, b: f64 },
    QuadraticForm { q: Vec<Vec<f64>> },
    MaxAffine { pieces: Vec<AffinePiece> },
    ExpLinear { w: Vec<f64> },
    NormPower { p: f64 },
    StronglyConvex { base: Box<FunctionDescriptor>, c: f64 },
    Wright { w: Vec<f64>, base: Box<FunctionDescriptor> },
    StronglyWright { w: Vec<f64>, base: Box<FunctionDescriptor>, c: f64 },
    ConcaveControl { base: Box<FunctionDescriptor> },
    LinearCombination { terms: Vec<Term> },
}

impl FunctionDescriptor {
    pub fn build(&self) -> Result<FunctionSpec> {
        match self {
            FunctionDescriptor::Constant { value } => Ok(make_constant(*value)),
            FunctionDescriptor::Affine { w, b } => make_affine(w.clone(), *b),
            FunctionDescriptor::QuadraticForm { q } => make_quadratic_form(q.clone()),
            FunctionDescriptor::MaxAffine { pieces } => make_max_affine(pieces.clone()),
            FunctionDescriptor::ExpLinear { w } => make_exp_linear(w.clone()),
            FunctionDescriptor::NormPower { p } => make_norm_power(*p),
            FunctionDescriptor::StronglyConvex { base, c } => make_strongly_convex(&base.build()?, *c),
            FunctionDescriptor::Wright { w, base } => make_wright(w.clone(), &base.build()?),
            FunctionDescriptor::StronglyWright { w, base, c } => {
                make_strongly_wright(w.clone(), &base.build()?, *c)
            }
            FunctionDescriptor::ConcaveControl { base } => Ok(make_concave_control(&base.build()?)),
            FunctionDescriptor::LinearCombination { terms } => {
                let built = terms
                    .iter()
                    .map(|t| Ok((t.coeff, t.function.build()?)))
                    .collect::<Result<Vec<_>>>()?;
                linear_combination(&built)
            }
        }
    }

    /// Short human label such as `wright(max_affine)`.
    pub fn label(&self) -> String {
        match self {
            FunctionDescriptor::Constant { .. } => "constant".into(),
            FunctionDescriptor::Affine { .. } => "affine".into(),
            FunctionDescriptor::QuadraticForm { .. } => "quadratic_form".into(),
            FunctionDescriptor::MaxAffine { .. } => "max_affine".into(),
            FunctionDescriptor::ExpLinear { .. } => "exp_linear".into(),
            FunctionDescriptor::NormPower { p } => format!("norm_power({p})"),
            FunctionDescriptor::StronglyConvex { base, c } => format!("strongly_convex({}, c={c})", base.label()),
            FunctionDescriptor::Wright { base, .. } => format!("wright({})", base.label()),
            FunctionDescriptor::StronglyWright { base, c, .. } => format!("strongly_wright({}, c={c})", base.label()),
            FunctionDescriptor::ConcaveControl { base } => format!("concave_control({})", base.label()),
            FunctionDescriptor::LinearCombination { terms } => {
                let inner: Vec<String> = terms.iter().map(|t| format!("{}·{}", t.coeff, t.function.label())).collect();
                format!("sum({})", inner.join(" + "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    /// An empty weight vector means a constant in any dimension.
    Affine { w: Vec<f64>, b: f64 },
    Quadratic { q: Vec<Vec<f64>> },
    MaxAffine { pieces: Vec<AffinePiece> },
    ExpLinear { w: Vec<f64> },
    NormPower { p: f64 },
    Sum(Vec<(f64, Expr)>),
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

impl Expr {
    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Affine { w, b } => dot(w, x) + b,
            Expr::Quadratic { q } => q
                .iter()
                .zip(x)
                .map(|(row, xi)| xi * dot(row, x))
                .sum(),
            Expr::MaxAffine { pieces } => pieces
                .iter()
                .map(|p| dot(&p.w, x) + p.b)
                .fold(f64::NEG_INFINITY, f64::max),
            Expr::ExpLinear { w } => dot(w, x).exp(),
            Expr::NormPower { p } => {
                let sq: f64 = x.iter().map(|v| v * v).sum();
                if *p == 2.0 {
                    sq
                } else {
                    sq.sqrt().powf(*p)
                }
            }
            Expr::Sum(terms) => terms.iter().map(|(c, e)| c * e.eval(x)).sum(),
        }
    }

    fn polynomial(&self, n: usize) -> Option<Polynomial> {
        match self {
            Expr::Affine { w, b } if w.is_empty() => Some(Polynomial::constant(Basis::Cartesian, n, *b)),
            Expr::Affine { w, b } if w.len() == n => Some(Polynomial::affine(Basis::Cartesian, w, *b)),
            Expr::Quadratic { q } if q.len() == n => Some(Polynomial::quadratic_form(Basis::Cartesian, q)),
            Expr::NormPower { p } if p.fract() == 0.0 && *p >= 2.0 && (*p as u32) % 2 == 0 => {
                Some(Polynomial::norm_sq(Basis::Cartesian, n).pow(*p as u32 / 2))
            }
            Expr::Sum(terms) => {
                let mut acc = Polynomial::zero(Basis::Cartesian, n);
                for (c, e) in terms {
                    acc = acc.add(&e.polynomial(n)?.scale(*c));
                }
                Some(acc)
            }
            _ => None,
        }
    }

    fn dim(&self) -> Option<usize> {
        match self {
            Expr::Affine { w, .. } if w.is_empty() => None,
            Expr::Affine { w, .. } | Expr::ExpLinear { w } => Some(w.len()),
            Expr::Quadratic { q } => Some(q.len()),
            Expr::MaxAffine { pieces } => pieces.first().map(|p| p.w.len()),
            Expr::NormPower { .. } => None,
            Expr::Sum(terms) => terms.iter().find_map(|(_, e)| e.dim()),
        }
    }
}

/// Decomposition `f = ⟨w, ·⟩ + convex_part` of a Wright-class function.
#[derive(Debug, Clone, PartialEq)]
pub struct WrightParts {
    pub additive_linear: Vec<f64>,
    pub convex_part: Box<FunctionSpec>,
}

/// A tagged, evaluable, self-describing test function.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    class: ClassTag,
    expr: Expr,
    parts: Option<WrightParts>,
    descriptor: FunctionDescriptor,
}

impl FunctionSpec {
    pub fn class(&self) -> ClassTag {
        self.class
    }

    pub fn modulus(&self) -> Option<f64> {
        self.class.modulus()
    }

    pub fn parts(&self) -> Option<&WrightParts> {
        self.parts.as_ref()
    }

    pub fn descriptor(&self) -> &FunctionDescriptor {
        &self.descriptor
    }

    pub fn label(&self) -> String {
        self.descriptor.label()
    }

    /// Dimension fixed by the parameters, if any.
    pub fn dim(&self) -> Option<usize> {
        self.expr.dim()
    }

    /// Whether the function can be evaluated on ℝⁿ.
    pub fn accepts_dim(&self, n: usize) -> bool {
        self.dim().is_none_or(|d| d == n)
    }

    pub fn eval(&self, x: &Point) -> f64 {
        self.expr.eval(x.as_slice())
    }

    /// Cartesian polynomial in `n` variables, when the function is one.
    pub fn polynomial_form(&self, n: usize) -> Option<Polynomial> {
        if !self.accepts_dim(n) {
            return None;
        }
        self.expr.polynomial(n)
    }
}

impl RealFunction for FunctionSpec {
    fn eval(&self, x: &Point) -> f64 {
        FunctionSpec::eval(self, x)
    }
}

fn check_dims<'a>(vectors: impl IntoIterator<Item = &'a [f64]>) -> Result<()> {
    let mut dim = None;
    for v in vectors {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(HhError::NonFiniteCoordinate);
        }
        match dim {
            None => dim = Some(v.len()),
            Some(d) if d != v.len() => {
                return Err(HhError::DimensionMismatch {
                    expected: d,
                    got: v.len(),
                })
            }
            _ => {}
        }
    }
    Ok(())
}

fn check_modulus(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(HhError::InvalidModulus(c))
    }
}

fn require_convex(base: &FunctionSpec) -> Result<()> {
    if base.class.is_convex() {
        Ok(())
    } else {
        Err(HhError::InvalidParameter(format!(
            "base function must be convex, got {}",
            base.class
        )))
    }
}

fn require_dim_match(w: &[f64], base: &FunctionSpec) -> Result<()> {
    match base.dim() {
        Some(d) if d != w.len() => Err(HhError::DimensionMismatch {
            expected: d,
            got: w.len(),
        }),
        _ => Ok(()),
    }
}

fn norm_sq_expr() -> Expr {
    Expr::NormPower { p: 2.0 }
}

pub fn make_constant(value: f64) -> FunctionSpec {
    FunctionSpec {
        class: ClassTag::Convex,
        expr: Expr::Affine { w: Vec::new(), b: value },
        parts: None,
        descriptor: FunctionDescriptor::Constant { value },
    }
}

/// `⟨w, x⟩ + b`. Affine functions are convex (and concave).
pub fn make_affine(w: Vec<f64>, b: f64) -> Result<FunctionSpec> {
    check_dims([w.as_slice()])?;
    Ok(FunctionSpec {
        class: ClassTag::Convex,
        expr: Expr::Affine { w: w.clone(), b },
        parts: None,
        descriptor: FunctionDescriptor::Affine { w, b },
    })
}

/// `xᵀ Q x` for a symmetric positive semidefinite `Q`.
pub fn make_quadratic_form(q: Vec<Vec<f64>>) -> Result<FunctionSpec> {
    let n = q.len();
    if n == 0 {
        return Err(HhError::InvalidParameter("empty matrix".into()));
    }
    for row in &q {
        if row.len() != n {
            return Err(HhError::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
    }
    check_dims(q.iter().map(Vec::as_slice))?;
    let scale = q.iter().flatten().fold(1.0_f64, |m, v| m.max(v.abs()));
    for i in 0..n {
        for j in 0..i {
            if (q[i][j] - q[j][i]).abs() > 1e-12 * scale {
                return Err(HhError::NotPsd);
            }
        }
    }
    // PSD iff Q + δI admits a Cholesky factor for every small δ > 0
    let shift = 1e-12 * scale * n as f64;
    let shifted = DMatrix::from_fn(n, n, |i, j| q[i][j] + if i == j { shift } else { 0.0 });
    if shifted.cholesky().is_none() {
        return Err(HhError::NotPsd);
    }
    Ok(FunctionSpec {
        class: ClassTag::Convex,
        expr: Expr::Quadratic { q: q.clone() },
        parts: None,
        descriptor: FunctionDescriptor::QuadraticForm { q },
    })
}

/// `max_k (⟨w_k, x⟩ + b_k)`.
pub fn make_max_affine(pieces: Vec<AffinePiece>) -> Result<FunctionSpec> {
    if pieces.is_empty() {
        return Err(HhError::InvalidParameter("max-affine needs at least one piece".into()));
    }
    check_dims(pieces.iter().map(|p| p.w.as_slice()))?;
    if pieces.iter().any(|p| !p.b.is_finite()) {
        return Err(HhError::NonFiniteCoordinate);
    }
    Ok(FunctionSpec {
        class: ClassTag::Convex,
        expr: Expr::MaxAffine { pieces: pieces.clone() },
        parts: None,
        descriptor: FunctionDescriptor::MaxAffine { pieces },
    })
}

/// `exp(⟨w, x⟩)`.
pub fn make_exp_linear(w: Vec<f64>) -> Result<FunctionSpec> {
    check_dims([w.as_slice()])?;
    if w.is_empty() {
        return Err(HhError::InvalidParameter("empty weight vector".into()));
    }
    Ok(FunctionSpec {
        class: ClassTag::Convex,
        expr: Expr::ExpLinear { w: w.clone() },
        parts: None,
        descriptor: FunctionDescriptor::ExpLinear { w },
    })
}

/// `‖x‖^p` for `p ≥ 1`.
pub fn make_norm_power(p: f64) -> Result<FunctionSpec> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(HhError::InvalidParameter(format!("norm power needs p >= 1, got {p}")));
    }
    Ok(FunctionSpec {
        class: ClassTag::Convex,
        expr: Expr::NormPower { p },
        parts: None,
        descriptor: FunctionDescriptor::NormPower { p },
    })
}

/// `base + c‖x‖²`, strongly convex with modulus `c` (plus the base's own modulus).
pub fn make_strongly_convex(base: &FunctionSpec, c: f64) -> Result<FunctionSpec> {
    check_modulus(c)?;
    require_convex(base)?;
    let modulus = c + base.modulus().unwrap_or(0.0);
    Ok(FunctionSpec {
        class: ClassTag::StronglyConvex(modulus),
        expr: Expr::Sum(vec![(1.0, base.expr.clone()), (c, norm_sq_expr())]),
        parts: None,
        descriptor: FunctionDescriptor::StronglyConvex {
            base: Box::new(base.descriptor.clone()),
            c,
        },
    })
}

/// `⟨w, x⟩ + base(x)`: Wright-convex with a linear additive part.
pub fn make_wright(w: Vec<f64>, base: &FunctionSpec) -> Result<FunctionSpec> {
    check_dims([w.as_slice()])?;
    require_convex(base)?;
    require_dim_match(&w, base)?;
    Ok(FunctionSpec {
        class: ClassTag::WrightConvex,
        expr: Expr::Sum(vec![
            (1.0, Expr::Affine { w: w.clone(), b: 0.0 }),
            (1.0, base.expr.clone()),
        ]),
        parts: Some(WrightParts {
            additive_linear: w.clone(),
            convex_part: Box::new(base.clone()),
        }),
        descriptor: FunctionDescriptor::Wright {
            w,
            base: Box::new(base.descriptor.clone()),
        },
    })
}

/// `⟨w, x⟩ + base(x) + c‖x‖²`: strongly Wright-convex with modulus `c`.
pub fn make_strongly_wright(w: Vec<f64>, base: &FunctionSpec, c: f64) -> Result<FunctionSpec> {
    check_modulus(c)?;
    check_dims([w.as_slice()])?;
    require_convex(base)?;
    require_dim_match(&w, base)?;
    let modulus = c + base.modulus().unwrap_or(0.0);
    Ok(FunctionSpec {
        class: ClassTag::StronglyWrightConvex(modulus),
        expr: Expr::Sum(vec![
            (1.0, Expr::Affine { w: w.clone(), b: 0.0 }),
            (1.0, base.expr.clone()),
            (c, norm_sq_expr()),
        ]),
        parts: Some(WrightParts {
            additive_linear: w.clone(),
            convex_part: Box::new(base.clone()),
        }),
        descriptor: FunctionDescriptor::StronglyWright {
            w,
            base: Box::new(base.descriptor.clone()),
            c,
        },
    })
}

/// `-base`, tagged as a negative control.
pub fn make_concave_control(base: &FunctionSpec) -> FunctionSpec {
    FunctionSpec {
        class: ClassTag::NonConvexControl,
        expr: Expr::Sum(vec![(-1.0, base.expr.clone())]),
        parts: None,
        descriptor: FunctionDescriptor::ConcaveControl {
            base: Box::new(base.descriptor.clone()),
        },
    }
}

/// `Σ cₖ fₖ`.
///
/// Non-negative combinations keep the weakest class of their terms (convex
/// if every term is convex, Wright-convex if every term is at least
/// Wright-convex); anything else is tagged as a control.
pub fn linear_combination(terms: &[(f64, FunctionSpec)]) -> Result<FunctionSpec> {
    if terms.is_empty() {
        return Err(HhError::InvalidParameter("empty combination".into()));
    }
    let mut dim = None;
    for (_, f) in terms {
        match (dim, f.dim()) {
            (Some(a), Some(b)) if a != b => return Err(HhError::DimensionMismatch { expected: a, got: b }),
            (None, d) => dim = d,
            _ => {}
        }
    }
    let nonneg = terms.iter().all(|(c, _)| *c >= 0.0);
    let class = if nonneg && terms.iter().all(|(_, f)| f.class.is_convex()) {
        ClassTag::Convex
    } else if nonneg && terms.iter().all(|(_, f)| f.class.is_positive()) {
        ClassTag::WrightConvex
    } else {
        ClassTag::NonConvexControl
    };
    Ok(FunctionSpec {
        class,
        expr: Expr::Sum(terms.iter().map(|(c, f)| (*c, f.expr.clone())).collect()),
        parts: None,
        descriptor: FunctionDescriptor::LinearCombination {
            terms: terms
                .iter()
                .map(|(c, f)| Term {
                    coeff: *c,
                    function: f.descriptor.clone(),
                })
                .collect(),
        },
    })
}

fn seeded(seed: u64, salt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(salt);
    rng
}

/// Largest sampled value of `f((x+y)/2) − (f(x)+f(y))/2` over pairs in `simplex`.
pub fn midpoint_convexity_deficit<F: RealFunction + ?Sized>(
    f: &F,
    simplex: &Simplex,
    trials: usize,
    rng_seed: u64,
) -> f64 {
    let pts = sample_uniform(simplex, 2 * trials.max(1), rng_seed);
    pts.chunks_exact(2)
        .map(|pair| {
            let (x, y) = (&pair[0], &pair[1]);
            let mid = (x + y) * 0.5;
            f.eval(&mid) - 0.5 * (f.eval(x) + f.eval(y))
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Largest sampled violation of the strong Wright inequality
/// `f(tx+(1−t)y) + f((1−t)x+ty) ≤ f(x) + f(y) − 2c·t(1−t)‖x−y‖²`.
///
/// Accepts strongly convex specs too, since strong convexity with modulus
/// `c` implies strong Wright convexity with the same modulus.
pub fn strong_wright_deficit(f: &FunctionSpec, simplex: &Simplex, trials: usize, rng_seed: u64) -> Result<f64> {
    let c = f.modulus().ok_or_else(|| HhError::WrongClass(f.class.to_string()))?;
    let pts = sample_uniform(simplex, 2 * trials.max(1), rng_seed);
    let mut rng = seeded(rng_seed, 0x5752_4947_4854);
    Ok(pts
        .chunks_exact(2)
        .map(|pair| {
            let (x, y) = (&pair[0], &pair[1]);
            let t: f64 = rng.random();
            let a = x * t + y * (1.0 - t);
            let b = x * (1.0 - t) + y * t;
            let lhs = f.eval(&a) + f.eval(&b);
            let rhs = f.eval(x) + f.eval(y) - 2.0 * c * t * (1.0 - t) * (x - y).norm_squared();
            lhs - rhs
        })
        .fold(f64::NEG_INFINITY, f64::max))
}
