//! Strongly convex and strongly Wright-convex refinements.

use hh_simplex::prelude::*;

fn main() -> hh_simplex::Result<()> {
    for n in 1..=4 {
        let s = Simplex::unit(n)?;
        let k = strong_corrections(&s, 1.0);
        println!("unit {n}-simplex, c = 1: lower +{:.6}, upper {:.6}", k.lower, k.upper);
    }

    let s = random_simplex(2, 5)?;
    let cfg = IntegratorConfig::default();
    let f = make_strongly_convex(&make_exp_linear(vec![0.5, 1.0])?, 2.0)?;
    let r = strongly_convex_hh(&f, &s, &cfg)?;
    let c = r.classical.expect("strong reports carry the classical chain");
    println!("{}", f.label());
    println!("  classical {:.6} ≤ {:.6} ≤ {:.6}", c.lower, r.middle.value, c.upper);
    println!("  strong    {:.6} ≤ {:.6} ≤ {:.6} ({})", r.lower, r.middle.value, r.upper, r.status);

    let g = make_strongly_wright(vec![0.0], &make_constant(0.0), 3.0)?;
    let r = strongly_wright_hh(&g, &Simplex::interval(0.0, 1.0)?, &cfg)?;
    println!("3x² on [0,1], strongly Wright: {} = {} = {}", r.lower, r.middle.value, r.upper);
    Ok(())
}
