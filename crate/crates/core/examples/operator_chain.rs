//! Positive linear functionals in place of the integral mean.

use hh_simplex::prelude::*;

fn main() -> hh_simplex::Result<()> {
    let s = random_simplex(3, 2)?;
    let f = make_wright(vec![10.0, -3.0, 1.0], &make_norm_power(4.0)?)?;

    let functionals = [
        ("barycenter", make_barycenter_functional(&s)?),
        ("vertex average", make_vertex_average_functional(&s)?),
        ("degree-2 rule", make_quadrature_functional(&s, &BarycentricRule::degree_two(3))?),
    ];
    for (name, t) in &functionals {
        let r = operator_hh(&f, &s, t)?;
        println!("{name:<15} {:.6} ≤ {:.6} ≤ {:.6} ({})", r.lower, r.middle.value, r.upper, r.status);
    }
    let mixed = functionals[0].1.mix(&functionals[1].1, 0.25)?;
    let r = operator_hh(&f, &s, &mixed)?;
    println!("{:<15} {:.6} ≤ {:.6} ≤ {:.6} ({})", "mixture", r.lower, r.middle.value, r.upper, r.status);

    let mean = IntegralMeanFunctional { config: IntegratorConfig::default() };
    let r = operator_hh(&f, &s, &mean)?;
    println!("{:<15} {:.6} ≤ {:.6} ≤ {:.6} ({})", "integral mean", r.lower, r.middle.value, r.upper, r.status);

    let bad = PositiveLinearFunctionalSpec::new(&s, vec![s.vertex(0).clone()], vec![1.0]);
    println!("a single vertex is rejected: {}", bad.unwrap_err());
    Ok(())
}
