//! Simplices, barycentric coordinates and the cyclic vertex rotations.

use hh_simplex::prelude::*;

fn main() -> hh_simplex::Result<()> {
    let s = make_simplex(vec![point(&[0.0, 0.0]), point(&[4.0, 0.0]), point(&[1.0, 3.0])])?;
    println!("volume {}, diameter {:.4}", s.volume(), s.diameter());
    println!("barycenter {:?}", s.barycenter().as_slice());

    let x = point(&[2.0, 1.0]);
    let t = to_barycentric(&s, &x)?;
    println!("barycentric coordinates of {:?}: {:?}", x.as_slice(), t.as_slice());
    println!("inside: {}", t.is_inside(1e-12));

    for sigma in CyclicPermutation::group(s.dim()) {
        let y = apply_cyclic(&s, sigma, &x)?;
        println!("shift {}: {:?}", sigma.shift(), y.as_slice());
    }

    let r = random_simplex(3, 42)?;
    println!("random 3-simplex volume {:.4e}", r.volume());
    println!("{}", serde_json::to_string(&r)?);

    match make_simplex(vec![point(&[0.0, 0.0]), point(&[1.0, 1.0]), point(&[2.0, 2.0])]) {
        Err(e) => println!("collinear vertices rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
