//! Exact densities as d grows, with log_p of the gap to the limit. Reported,
//! not asserted: the asymptotic rates carry unknown constants.
//!
//!     cargo run --release --example convergence_table

use bertini::fiber::{fiber_density_exhaustive, gap_log, squarefree_form_density, small_degree_product, ProductMode};
use bertini::geom::ProjectiveScheme;

fn main() -> bertini::Result<()> {
    let p1 = ProjectiveScheme::projective_space(1, None)?;
    println!("forms over F_2, squarefree:");
    for d in 2..=18 {
        let (e, r) = squarefree_form_density(2, d)?;
        let gap = gap_log(&e.value(), &e.reference_value, 2).map_or("exact".into(), |g| format!("{g:.2}"));
        println!("  d={d:>2} r={r} density {:.6} log2|gap| {gap}", e.mean);
    }
    println!("sections mod 4, no singular point of degree <= 2:");
    let limit = small_degree_product(&p1, 2, 2, ProductMode::Arithmetic)?;
    for d in 2..=10 {
        let e = fiber_density_exhaustive(&p1, 2, d, 2)?;
        let gap = gap_log(&e.value(), &limit, 2).map_or("exact".into(), |g| format!("{g:.2}"));
        println!("  d={d:>2} density {:.6} (limit {:.6}) log2|gap| {gap}", e.mean, bertini::zeta::ratio_f64(&limit));
    }
    Ok(())
}
