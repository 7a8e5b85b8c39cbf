//! Bounds for Wright-convex functions through the cyclic symmetrization.

use hh_simplex::prelude::*;

fn main() -> hh_simplex::Result<()> {
    let interval = Simplex::interval(0.0, 1.0)?;
    let sq = make_norm_power(2.0)?;
    let r = wright_hh(&sq, &interval, &IntegratorConfig::default())?;
    println!("x² on [0,1]: {} ≤ {} ≤ {}", r.lower, r.middle.value, r.upper);

    let s = random_simplex(3, 11)?;
    let base = make_exp_linear(vec![0.3, -0.2, 0.1])?;
    let f = make_wright(vec![250.0, -40.0, 900.0], &base)?;
    let r = wright_hh(&f, &s, &IntegratorConfig::default())?;
    println!(
        "{}: {:.6} ≤ {:.6} ± {:.1e} ≤ {:.6} ({})",
        f.label(),
        r.lower,
        r.middle.value,
        r.middle.std_error,
        r.upper,
        r.status
    );

    let parts = f.parts().expect("Wright spec keeps its parts");
    let probes = sample_uniform(&s, 50, 0);
    let constant = additive_symmetrization_constant(&parts.additive_linear, &s, &probes)?;
    println!("the linear part symmetrizes to the constant {constant:.6}");
    Ok(())
}
