//! The cyclic symmetrization F(x) = Σ_σ f(σ(x)) and its properties.

use hh_simplex::prelude::*;
use hh_simplex::symmetrization::{modulus_deficit, symmetrized_modulus};

fn main() -> hh_simplex::Result<()> {
    let s = random_simplex(2, 9)?;
    let f = make_wright(vec![5.0, -2.0], &make_exp_linear(vec![1.0, 0.5])?)?;
    let sym = symmetrize(&f, &s)?;

    let b = s.barycenter();
    println!("F(b) = {:.10}, 3·f(b) = {:.10}", sym.eval(b), 3.0 * f.eval(b));
    let (lhs, rhs) = vertex_sum_identity(&sym);
    println!("Σ F(vᵢ) = {lhs:.10}, 3·Σ f(vᵢ) = {rhs:.10}");
    println!("midpoint convexity deficit of F: {:.2e}", midpoint_convexity_deficit(&sym, &s, 10_000, 1));

    // moduli of the symmetrization of a strongly Wright-convex function
    let c = 1.0;
    let g = make_strongly_wright(vec![1.0, 1.0], &make_constant(0.0), c)?;
    let sym_g = symmetrize(&g, &s)?;
    println!("deficit against (n+1)c = {}: {:.3e}", 3.0 * c, strong_convexity_modulus_check(&sym_g, c, 10_000, 1));
    let m = symmetrized_modulus(&s, c);
    println!("deficit against c·λmin = {m:.4}: {:.3e}", modulus_deficit(&sym_g, m, 10_000, 1));

    let regular = make_simplex(vec![point(&[0.0, 0.0]), point(&[1.0, 0.0]), point(&[0.5, 3f64.sqrt() / 2.0])])?;
    println!("on a regular triangle c·λmin = {:.4}", symmetrized_modulus(&regular, c));
    Ok(())
}
