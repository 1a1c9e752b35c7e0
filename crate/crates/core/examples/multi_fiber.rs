//! Integer binary forms of degree 8 in a box, regular over every fiber
//! p <= 7 at closed points of degree <= 4.
//!
//!     cargo run --release --example multi_fiber [samples]

use bertini::arith::multi_fiber_experiment;

fn main() -> bertini::Result<()> {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let r = multi_fiber_experiment(2, 8, 10_000, 7, 4, samples, 1)?;
    let e = &r.estimate;
    println!(
        "estimate {:.5} +- {:.5}, reference prod (1-p^-3)(1-p^-2) = {:.5} +- {:.2e}",
        e.mean, e.ci_halfwidth, e.reference_f64(), e.reference_error_f64()
    );
    for f in &r.local_factors {
        println!(
            "  p={}: local {:.5}, {} closed points, jet map onto: {}, singular in {:.4} of samples",
            f.p,
            bertini::zeta::ratio_f64(&f.value),
            f.closed_points,
            f.jet_surjective,
            f.singular_sections as f64 / samples as f64
        );
    }
    Ok(())
}
