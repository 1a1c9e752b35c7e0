//! Sections mod p^2 on P^1 with no singular point of small degree: exact
//! counts next to the truncated product, plus a seeded Monte Carlo run.
//!
//!     cargo run --release --example fiber_density

use bertini::fiber::{fiber_density_exhaustive, fiber_density_mc, small_degree_product, ProductMode};
use bertini::geom::ProjectiveScheme;

fn main() -> bertini::Result<()> {
    let p1 = ProjectiveScheme::projective_space(1, None)?;
    println!("p=2, degree <= 1 product: spec Z {} | F_2 {}",
        small_degree_product(&p1, 2, 1, ProductMode::Arithmetic)?,
        small_degree_product(&p1, 2, 1, ProductMode::FiniteField)?);

    for d in 3..=6 {
        let e = fiber_density_exhaustive(&p1, 2, d, 1)?;
        let cert = e.certificate.as_ref().unwrap();
        println!(
            "d={d}: {}/{} = {} | certified {} | equals product: {:?} | rescued pairs {}",
            e.hits, e.total, e.value(), cert.surjective, e.exact_equality, e.rescue_count
        );
    }

    let mc = fiber_density_mc(&p1, 3, 10, 3, 200_000, 7)?;
    println!(
        "p=3 d=10 r=3 MC: {:.5} +- {:.5}, reference {:.5} +- {:.2e}",
        mc.mean, mc.ci_halfwidth, mc.reference_f64(), mc.reference_error_f64()
    );
    Ok(())
}
