//! Truncated inverse zeta values: one fiber, then a product over primes.
//!
//!     cargo run --example zeta_truncation

use bertini::geom::ProjectiveScheme;
use bertini::zeta::{
    closed_point_counts, global_zeta_inverse, local_zeta_inverse, projective_local_inverse,
    projective_tables, ratio_f64, PointCountTable,
};

fn main() -> bertini::Result<()> {
    // P^1 over F_2: N_e = 2^e + 1
    let t = PointCountTable::projective_space(2, 1, 6)?;
    let a = closed_point_counts(&t)?;
    println!("closed points of P^1/F_2 by degree: {:?}", a);

    let exact = projective_local_inverse(2, 1, 3);
    println!("exact (1-2^-3)(1-2^-2) = {exact}");
    for r in 0..=6 {
        let z = local_zeta_inverse(&t, 3, r, 2)?;
        println!(
            "  r={r}: {:>10.8}  gap {:.3e}  bound {:.3e}",
            z.value_f64(),
            z.value_f64() - ratio_f64(&exact),
            z.error_f64()
        );
    }

    // a conic, counted by enumeration
    let conic = ProjectiveScheme::from_json(
        r#"{"n":2,"m":1,"defining_forms":[[[[2,0,0],1],[[0,2,0],1],[[0,0,2],-1]]]}"#,
    )?;
    let t = PointCountTable::for_fiber(&conic, 3, 4)?;
    println!("conic over F_3, N_e = {:?}", t.counts());

    // P^1 over Spec Z at s = 3, primes up to 50
    let tables = projective_tables(1, 50)?;
    let g = global_zeta_inverse(&tables, 3, 50, |_| 4, 2)?;
    println!(
        "prod_(p<=50) local values = {:.6} (error <= {:.2e})",
        ratio_f64(&g.value),
        ratio_f64(&g.error_bound)
    );
    Ok(())
}
