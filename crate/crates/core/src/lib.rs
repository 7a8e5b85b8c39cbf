//! Hermite–Hadamard type bounds on simplices.
//!
//! For a simplex `S = conv{v₀,…,vₙ}` with barycenter `b`, this crate computes
//! and checks chains of the form `lower ≤ mean over S ≤ upper` for convex,
//! Wright-convex, strongly convex and strongly Wright-convex functions, plus
//! the version where the integral mean is replaced by a positive linear
//! functional. Wright-type bounds go through the cyclic symmetrization
//! `F(x) = Σ_σ f(σ(x))`, where `σ` runs over the affine maps that rotate the
//! vertex labels.
//!
//! Middle terms are exact for polynomial functions (barycentric moment
//! formula) and Monte Carlo otherwise; every report says which and carries
//! the guard band used for its verdict.
//!
//! ```
//! use hh_simplex::prelude::*;
//!
//! let s = Simplex::interval(0.0, 1.0).unwrap();
//! let f = make_quadratic_form(vec![vec![1.0]]).unwrap();
//! let r = wright_hh(&f, &s, &IntegratorConfig::default()).unwrap();
//! assert!((r.middle.value - 2.0 / 3.0).abs() < 1e-12);
//! assert_eq!(r.status, Status::Holds);
//! ```

pub mod bounds;
pub mod campaign;
pub mod catalog;
pub mod error;
pub mod functions;
pub mod polynomial;
pub mod quadrature;
pub mod simplex;
pub mod symmetrization;

pub use error::{HhError, Result};

pub mod prelude {
    pub use crate::bounds::{
        classical_hh, make_barycenter_functional, make_quadrature_functional, make_vertex_average_functional,
        operator_hh, run_family, strong_corrections, strongly_convex_hh, strongly_wright_hh,
        unit_simplex_strong_bounds, wright_hh, BarycentricRule, BoundReport, Family, IntegralMeanFunctional,
        IntegratorConfig, PositiveLinearFunctionalSpec, Status,
    };
    pub use crate::campaign::{run_campaign, CampaignConfig, CampaignReport, OutputFormat};
    pub use crate::error::{HhError, Result};
    pub use crate::functions::{
        make_affine, make_concave_control, make_constant, make_exp_linear, make_max_affine, make_norm_power,
        make_quadratic_form, make_strongly_convex, make_strongly_wright, make_wright, midpoint_convexity_deficit,
        strong_wright_deficit, AffinePiece, ClassTag, FunctionDescriptor, FunctionSpec, RealFunction,
    };
    pub use crate::polynomial::{Basis, MultiIndex, Polynomial};
    pub use crate::quadrature::{
        integrate_mc, integrate_polynomial, mean_norm_sq, moment_unit_simplex, sample_uniform, IntegralEstimate,
    };
    pub use crate::simplex::{
        apply_cyclic, from_barycentric, make_simplex, point, random_simplex, to_barycentric, BarycentricCoords,
        CyclicPermutation, Point, Simplex,
    };
    pub use crate::symmetrization::{
        additive_symmetrization_constant, strong_convexity_modulus_check, symmetrize, vertex_sum_identity,
        SymmetrizedFunction,
    };
}
