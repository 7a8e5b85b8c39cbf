//! Simplices in ℝⁿ, barycentric coordinates and the cyclic vertex maps.
//!
//! A simplex is stored together with an LU factorization of the
//! `(n+1)×(n+1)` barycentric system
//!
//! ```text
//! | v₀₁ v₁₁ … vₙ₁ |   | t₀ |   | x₁ |
//! |  ⋮   ⋮      ⋮  | · |  ⋮ | = |  ⋮ |
//! | v₀ₙ v₁ₙ … vₙₙ |   |    |   | xₙ |
//! |  1   1  …  1  |   | tₙ |   | 1  |
//! ```
//!
//! so every conversion after construction is a pair of triangular solves.

use nalgebra::{DMatrix, DVector, Dyn, LU};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HhError, Result};

/// A point of ℝⁿ.
pub type Point = DVector<f64>;

/// Relative volume below which a simplex counts as degenerate.
pub const DEGENERACY_RATIO: f64 = 1e-8;

/// Tolerance on `|Σ tᵢ − 1|` accepted by [`BarycentricCoords::new`].
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// Draw budget for [`random_simplex`].
pub const RANDOM_SIMPLEX_ATTEMPTS: usize = 100;

/// Builds a [`Point`] from a slice.
pub fn point(coords: &[f64]) -> Point {
    DVector::from_column_slice(coords)
}

/// Barycentric weights `t₀,…,tₙ` of a point with respect to a simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricCoords(DVector<f64>);

impl BarycentricCoords {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !sum.is_finite() || (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(HhError::WeightSumError { sum });
        }
        Ok(Self(DVector::from_vec(weights)))
    }

    /// All weights equal to `1/(n+1)`.
    pub fn uniform(n: usize) -> Self {
        Self(DVector::from_element(n + 1, 1.0 / (n + 1) as f64))
    }

    pub(crate) fn from_vector_unchecked(weights: DVector<f64>) -> Self {
        Self(weights)
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every weight is at least `-tol`, i.e. the point lies in the simplex.
    pub fn is_inside(&self, tol: f64) -> bool {
        self.0.iter().all(|&t| t >= -tol)
    }
}

/// A cyclic permutation `σ(i) = (i + shift) mod (n+1)` of the vertex indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicPermutation {
    shift: usize,
    order: usize,
}

impl CyclicPermutation {
    /// The shift is reduced modulo `n+1`.
    pub fn new(shift: usize, n: usize) -> Self {
        let order = n + 1;
        Self {
            shift: shift % order,
            order,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(0, n)
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    /// Size of the cyclic group this element belongs to.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `σ(i)`.
    pub fn image(&self, i: usize) -> usize {
        (i + self.shift) % self.order
    }

    /// Applying `self` and then `other` is the shift by the sum of both shifts.
    pub fn then(&self, other: &CyclicPermutation) -> CyclicPermutation {
        debug_assert_eq!(self.order, other.order);
        CyclicPermutation {
            shift: (self.shift + other.shift) % self.order,
            order: self.order,
        }
    }

    /// All `n+1` elements of the cyclic group, shift 0 first.
    pub fn group(n: usize) -> impl Iterator<Item = CyclicPermutation> {
        (0..=n).map(move |k| CyclicPermutation::new(k, n))
    }

    /// `t ↦ (t_{σ(0)}, …, t_{σ(n)})`.
    pub fn permute_weights(&self, weights: &[f64]) -> Vec<f64> {
        (0..weights.len()).map(|i| weights[self.image(i)]).collect()
    }
}

/// JSON form of a simplex: `{"n": int, "vertices": [[f64,...],...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexDescriptor {
    pub n: usize,
    pub vertices: Vec<Vec<f64>>,
}

/// A non-degenerate simplex `conv{v₀,…,vₙ}` in ℝⁿ.
#[derive(Debug, Clone)]
pub struct Simplex {
    vertices: Vec<Point>,
    volume: f64,
    barycenter: Point,
    system: LU<f64, Dyn, Dyn>,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.barycenter.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn barycenter(&self) -> &Point {
        &self.barycenter
    }

    /// The unit simplex `conv{0, e₁, …, eₙ}`.
    pub fn unit(n: usize) -> Result<Self> {
        let mut vertices = vec![Point::zeros(n)];
        for i in 0..n {
            let mut e = Point::zeros(n);
            e[i] = 1.0;
            vertices.push(e);
        }
        make_simplex(vertices)
    }

    /// The interval `[a, b]` as a 1-simplex.
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        make_simplex(vec![point(&[a]), point(&[b])])
    }

    pub fn to_barycentric(&self, x: &Point) -> Result<BarycentricCoords> {
        to_barycentric(self, x)
    }

    pub fn from_barycentric(&self, t: &BarycentricCoords) -> Result<Point> {
        from_barycentric(self, t)
    }

    /// `Σ tᵢ vᵢ` without checking that the weights sum to one.
    pub(crate) fn combine(&self, weights: &[f64]) -> Point {
        let mut out = Point::zeros(self.dim());
        for (t, v) in weights.iter().zip(&self.vertices) {
            out.axpy(*t, v, 1.0);
        }
        out
    }

    pub(crate) fn barycentric_weights(&self, x: &Point) -> Result<DVector<f64>> {
        let n = self.dim();
        if x.len() != n {
            return Err(HhError::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let mut rhs = DVector::from_element(n + 1, 1.0);
        rhs.rows_mut(0, n).copy_from(x);
        let t = self.system.solve(&rhs).ok_or(HhError::SolveFailure)?;
        if t.iter().all(|v| v.is_finite()) {
            Ok(t)
        } else {
            Err(HhError::SolveFailure)
        }
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        max_pairwise_distance(&self.vertices)
    }

    pub fn descriptor(&self) -> SimplexDescriptor {
        SimplexDescriptor {
            n: self.dim(),
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().copied().collect())
                .collect(),
        }
    }

    pub fn from_descriptor(desc: &SimplexDescriptor) -> Result<Self> {
        if desc.vertices.len() != desc.n + 1 {
            return Err(HhError::DimensionMismatch {
                expected: desc.n + 1,
                got: desc.vertices.len(),
            });
        }
        if let Some(bad) = desc.vertices.iter().find(|v| v.len() != desc.n) {
            return Err(HhError::DimensionMismatch {
                expected: desc.n,
                got: bad.len(),
            });
        }
        make_simplex(desc.vertices.iter().map(|v| point(v)).collect())
    }
}

impl Serialize for Simplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.descriptor().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Simplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let desc = SimplexDescriptor::deserialize(deserializer)?;
        Simplex::from_descriptor(&desc).map_err(serde::de::Error::custom)
    }
}

fn max_pairwise_distance(vertices: &[Point]) -> f64 {
    let mut diam: f64 = 0.0;
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            diam = diam.max((a - b).norm());
        }
    }
    diam
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Builds a simplex from `n+1` vertices in ℝⁿ, caching volume and barycenter.
pub fn make_simplex(vertices: Vec<Point>) -> Result<Simplex> {
    let Some(first) = vertices.first() else {
        return Err(HhError::DimensionMismatch {
            expected: 2,
            got: 0,
        });
    };
    let n = first.len();
    if n == 0 {
        return Err(HhError::DimensionMismatch {
            expected: 1,
            got: 0,
        });
    }
    if vertices.len() != n + 1 {
        return Err(HhError::DimensionMismatch {
            expected: n + 1,
            got: vertices.len(),
        });
    }
    for v in &vertices {
        if v.len() != n {
            return Err(HhError::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err(HhError::NonFiniteCoordinate);
        }
    }

    let edges = DMatrix::from_fn(n, n, |r, c| vertices[c + 1][r] - vertices[0][r]);
    let volume = edges.lu().determinant().abs() / factorial(n);
    let threshold = DEGENERACY_RATIO * max_pairwise_distance(&vertices).powi(n as i32);
    if !(volume > 0.0) || volume < threshold {
        return Err(HhError::DegenerateSimplex { volume, threshold });
    }

    let mut barycenter = Point::zeros(n);
    for v in &vertices {
        barycenter += v;
    }
    barycenter /= (n + 1) as f64;

    let system = DMatrix::from_fn(n + 1, n + 1, |r, c| if r < n { vertices[c][r] } else { 1.0 }).lu();
    if !system.is_invertible() {
        return Err(HhError::DegenerateSimplex { volume, threshold });
    }

    Ok(Simplex {
        vertices,
        volume,
        barycenter,
        system,
    })
}

/// Solves for the unique weights with `Σ tᵢ = 1` and `Σ tᵢ vᵢ = x`.
pub fn to_barycentric(simplex: &Simplex, x: &Point) -> Result<BarycentricCoords> {
    simplex
        .barycentric_weights(x)
        .map(BarycentricCoords::from_vector_unchecked)
}

pub fn from_barycentric(simplex: &Simplex, t: &BarycentricCoords) -> Result<Point> {
    if t.len() != simplex.dim() + 1 {
        return Err(HhError::DimensionMismatch {
            expected: simplex.dim() + 1,
            got: t.len(),
        });
    }
    let sum: f64 = t.as_slice().iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(HhError::WeightSumError { sum });
    }
    Ok(simplex.combine(t.as_slice()))
}

/// The affine self-map of ℝⁿ induced by `σ`: `Σ tᵢ vᵢ ↦ Σ t_{σ(i)} vᵢ`.
pub fn apply_cyclic(simplex: &Simplex, sigma: CyclicPermutation, x: &Point) -> Result<Point> {
    if sigma.order() != simplex.dim() + 1 {
        return Err(HhError::DimensionMismatch {
            expected: simplex.dim() + 1,
            got: sigma.order(),
        });
    }
    let t = simplex.barycentric_weights(x)?;
    Ok(simplex.combine(&sigma.permute_weights(t.as_slice())))
}

/// Draws `n+1` vertices uniformly from `[-1, 1]ⁿ`, redrawing degenerate sets.
pub fn random_simplex(n: usize, rng_seed: u64) -> Result<Simplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    random_simplex_with(n, &mut rng)
}

pub fn random_simplex_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Simplex> {
    if n == 0 {
        return Err(HhError::DimensionMismatch {
            expected: 1,
            got: 0,
        });
    }
    for _ in 0..RANDOM_SIMPLEX_ATTEMPTS {
        let vertices = (0..=n)
            .map(|_| Point::from_fn(n, |_, _| rng.random_range(-1.0..=1.0)))
            .collect();
        match make_simplex(vertices) {
            Ok(s) => return Ok(s),
            Err(HhError::DegenerateSimplex { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(HhError::GenerationFailure {
        attempts: RANDOM_SIMPLEX_ATTEMPTS,
    })
}
