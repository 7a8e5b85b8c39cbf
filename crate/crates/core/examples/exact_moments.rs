//! Exact polynomial integration over simplices.

use hh_simplex::prelude::*;

fn main() -> hh_simplex::Result<()> {
    for n in 1..=6 {
        let m = moment_unit_simplex(n, &MultiIndex::unit(n, 0, 2))?;
        let factorial: f64 = (1..=n + 2).map(|k| k as f64).product();
        println!("n={n}: ∫x₁² = {m:.6e}, 2/(n+2)! = {:.6e}", 2.0 / factorial);
    }

    let s = make_simplex(vec![point(&[1.0, 0.0]), point(&[3.0, 1.0]), point(&[0.0, 2.0])])?;
    let x = Polynomial::variable(Basis::Cartesian, 2, 0);
    let y = Polynomial::variable(Basis::Cartesian, 2, 1);
    let p = x.pow(3).add(&x.mul(&y).scale(-2.0)).add(&Polynomial::constant(Basis::Cartesian, 2, 5.0));
    let integral = integrate_polynomial(&s, &p)?;
    println!("∫_S ({p}) = {:.12}", integral.value);
    println!("in barycentric variables: {}", p.to_barycentric(&s));
    println!("mean ‖x‖² over S = {:.12}", mean_norm_sq(&s));
    Ok(())
}
