//! Sparse multivariate polynomials in Cartesian or barycentric variables.

use std::collections::BTreeMap;
use std::fmt;

use crate::simplex::Simplex;

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zero(vars: usize) -> Self {
        Self(vec![0; vars])
    }

    /// `k·eᵢ` in `vars` variables.
    pub fn unit(vars: usize, i: usize, k: u32) -> Self {
        let mut e = vec![0; vars];
        e[i] = k;
        Self(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&a, &xi)| xi.powi(a as i32))
            .product()
    }
}

/// Which variables a polynomial is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// `x₁,…,xₙ`.
    Cartesian,
    /// `t₀,…,tₙ` relative to some simplex.
    Barycentric,
}

/// `Σ c_α · z^α` stored as a map from exponents to coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    basis: Basis,
    vars: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

impl Polynomial {
    pub fn zero(basis: Basis, vars: usize) -> Self {
        Self {
            basis,
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(basis: Basis, vars: usize, value: f64) -> Self {
        let mut p = Self::zero(basis, vars);
        p.add_term(value, MultiIndex::zero(vars));
        p
    }

    /// The single variable `z_i`.
    pub fn variable(basis: Basis, vars: usize, i: usize) -> Self {
        let mut p = Self::zero(basis, vars);
        p.add_term(1.0, MultiIndex::unit(vars, i, 1));
        p
    }

    pub fn from_terms(basis: Basis, vars: usize, terms: impl IntoIterator<Item = (f64, MultiIndex)>) -> Self {
        let mut p = Self::zero(basis, vars);
        for (c, alpha) in terms {
            p.add_term(c, alpha);
        }
        p
    }

    /// `Σ wᵢ xᵢ + b`.
    pub fn affine(basis: Basis, weights: &[f64], offset: f64) -> Self {
        let vars = weights.len();
        let mut p = Self::constant(basis, vars, offset);
        for (i, &w) in weights.iter().enumerate() {
            p.add_term(w, MultiIndex::unit(vars, i, 1));
        }
        p
    }

    /// `xᵀ Q x` for a row-major square matrix.
    pub fn quadratic_form(basis: Basis, q: &[Vec<f64>]) -> Self {
        let vars = q.len();
        let mut p = Self::zero(basis, vars);
        for (i, row) in q.iter().enumerate() {
            for (j, &qij) in row.iter().enumerate() {
                let mut e = vec![0; vars];
                e[i] += 1;
                e[j] += 1;
                p.add_term(qij, MultiIndex(e));
            }
        }
        p
    }

    /// `‖x‖²`.
    pub fn norm_sq(basis: Basis, vars: usize) -> Self {
        Self::from_terms(basis, vars, (0..vars).map(|i| (1.0, MultiIndex::unit(vars, i, 2))))
    }

    pub fn add_term(&mut self, coeff: f64, alpha: MultiIndex) {
        assert_eq!(alpha.len(), self.vars, "multi-index arity");
        if coeff == 0.0 {
            return;
        }
        let entry = self.terms.entry(alpha).or_insert(0.0);
        *entry += coeff;
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (f64, &MultiIndex)> {
        self.terms.iter().map(|(a, &c)| (c, a))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        debug_assert_eq!(z.len(), self.vars);
        self.terms.iter().map(|(a, c)| c * a.eval(z)).sum()
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut out = Self::zero(self.basis, self.vars);
        for (a, c) in &self.terms {
            out.add_term(k * c, a.clone());
        }
        out
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(*c, a.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.basis, self.vars);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out.add_term(c * d, a.add(b));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.basis, self.vars, 1.0);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    fn check_compatible(&self, other: &Polynomial) {
        assert_eq!(self.basis, other.basis, "mixing polynomial bases");
        assert_eq!(self.vars, other.vars, "mixing polynomial arities");
    }

    /// Rewrites a Cartesian polynomial in the barycentric coordinates of
    /// `simplex` by substituting `x_j = Σᵢ tᵢ v_{i,j}`.
    pub fn to_barycentric(&self, simplex: &Simplex) -> Polynomial {
        assert_eq!(self.basis, Basis::Cartesian);
        assert_eq!(self.vars, simplex.dim());
        let n = simplex.dim();
        let coords: Vec<Polynomial> = (0..n)
            .map(|j| {
                Polynomial::from_terms(
                    Basis::Barycentric,
                    n + 1,
                    simplex
                        .vertices()
                        .iter()
                        .enumerate()
                        .map(|(i, v)| (v[j], MultiIndex::unit(n + 1, i, 1))),
                )
            })
            .collect();

        let mut out = Polynomial::zero(Basis::Barycentric, n + 1);
        for (alpha, c) in &self.terms {
            let mut term = Polynomial::constant(Basis::Barycentric, n + 1, *c);
            for (j, &e) in alpha.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&coords[j].pow(e));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// For a barycentric polynomial `p(t)`, returns `p(t_{σ(0)},…,t_{σ(n)})`
    /// with `σ(i) = (i + shift) mod (n+1)`: the polynomial of `f∘σ`.
    pub fn rotate(&self, shift: usize) -> Polynomial {
        assert_eq!(self.basis, Basis::Barycentric);
        let m = self.vars;
        let mut out = Polynomial::zero(Basis::Barycentric, m);
        for (alpha, c) in &self.terms {
            // t_{σ(i)}^{α_i} contributes exponent α_i to variable (i+shift) mod m
            let mut beta = vec![0; m];
            for (i, &a) in alpha.0.iter().enumerate() {
                beta[(i + shift) % m] = a;
            }
            out.add_term(*c, MultiIndex(beta));
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = match self.basis {
            Basis::Cartesian => "x",
            Basis::Barycentric => "t",
        };
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (alpha, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &e) in alpha.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·{var}{i}")?,
                    _ => write!(f, "·{var}{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}
