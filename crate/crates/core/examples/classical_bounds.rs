//! The classical chain f(b) ≤ mean of f ≤ average of f over the vertices.

use hh_simplex::prelude::*;

fn show(r: &BoundReport, label: &str) {
    println!(
        "{label:<28} {:>12.6} ≤ {:>12.6} ≤ {:>12.6}  [{}{}] {}",
        r.lower,
        r.middle.value,
        r.upper,
        if r.middle.is_exact() { "exact" } else { "mc" },
        if r.middle.is_exact() { String::new() } else { format!(" ±{:.1e}", r.middle.std_error) },
        r.status
    );
}

fn main() -> hh_simplex::Result<()> {
    let s = random_simplex(2, 3)?;
    let cfg = IntegratorConfig::default();
    let functions = [
        make_norm_power(2.0)?,
        make_norm_power(1.5)?,
        make_quadratic_form(vec![vec![2.0, 0.5], vec![0.5, 1.0]])?,
        make_exp_linear(vec![1.0, -1.0])?,
        make_max_affine(vec![
            AffinePiece { w: vec![1.0, 0.0], b: 0.0 },
            AffinePiece { w: vec![-1.0, 2.0], b: 0.3 },
        ])?,
        make_concave_control(&make_norm_power(2.0)?),
    ];
    for f in &functions {
        show(&classical_hh(f, &s, &cfg)?, &f.label());
    }
    Ok(())
}
