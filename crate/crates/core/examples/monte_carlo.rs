//! Uniform sampling and Monte Carlo integration with standard errors.

use hh_simplex::prelude::*;

fn main() -> hh_simplex::Result<()> {
    let s = Simplex::unit(3)?;
    let exact = 2.0 / 120.0;
    for samples in [1_000, 10_000, 100_000, 1_000_000] {
        let est = integrate_mc(&s, |x| x[0] * x[0], samples, 7)?;
        println!(
            "{samples:>8} samples: {:.6e} ± {:.1e} (error {:.1}σ)",
            est.value,
            est.std_error,
            (est.value - exact).abs() / est.std_error
        );
    }

    let f = make_exp_linear(vec![1.0, -2.0, 0.5])?;
    let a = integrate_mc(&s, |x| f.eval(x), 200_000, 1)?;
    let b = integrate_mc(&s, |x| f.eval(x), 200_000, 1)?;
    assert_eq!(a, b);
    println!("∫ exp(⟨w,x⟩) ≈ {:.6e} ± {:.1e}, reproducible for a fixed seed", a.value, a.std_error);

    let pts = sample_uniform(&s, 5, 3);
    for p in pts {
        println!("sample {:?}", p.as_slice());
    }
    Ok(())
}
