//! Squarefree binary forms over F_2: the exact density for each d against
//! zeta_{P^1}(2)^{-1} = 3/8 and the band 2 c0 2^{-r(d)}.
//!
//!     cargo run --release --example finite_field_bertini

use bertini::fiber::squarefree_form_density;

fn main() -> bertini::Result<()> {
    println!("{:>3} {:>12} {:>10} {:>3} {:>10} {}", "d", "count", "density", "r", "band", "inside");
    for d in 2..=16 {
        let (e, r) = squarefree_form_density(2, d)?;
        println!(
            "{d:>3} {:>12} {:>10.6} {r:>3} {:>10.6} {}",
            format!("{}/{}", e.hits, e.total),
            e.mean,
            e.reference_error_f64(),
            e.within_tolerance()
        );
    }
    Ok(())
}
