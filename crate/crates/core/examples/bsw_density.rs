//! Monic cubics with Z[x]/(f) the full ring of integers: sampled from a
//! height ball and compared with prod_{p <= T} (1 - p^{-2}); then every
//! quadratic in a small ball, counted exactly.
//!
//!     cargo run --release --example bsw_density [samples]

use bertini::arith::{bsw_exhaustive, bsw_experiment, maximality_scan, MonicPoly};

fn main() -> bertini::Result<()> {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);

    for f in [MonicPoly::from_i64(&[0, -5]), MonicPoly::from_i64(&[-1, -1]), MonicPoly::from_i64(&[0, 0, -2])] {
        let v = maximality_scan(&f, 100);
        println!("{f}: disc {}, {:?}", f.discriminant(), v);
    }

    let r = bsw_experiment(3, 1000, 1000, samples, 42)?;
    let e = &r.estimate;
    println!(
        "\ncubics, R=T=1000, {samples} samples: {:.5} +- {:.5}; reference {:.5} +- {:.5}; 1/zeta(2) = {:.5}",
        e.mean, e.ci_halfwidth, e.reference_f64(), e.reference_error_f64(), r.limit
    );
    println!("verdicts {:?}", r.verdicts);
    println!("cross-checked {} (f, p) pairs for p in {:?}", r.cross_checked_pairs, r.cross_check_primes);

    let r = bsw_exhaustive(2, 50, 200, 7)?;
    println!(
        "\nall {} quadratics with H <= 50: {:.5}, bias vs 1/zeta(2): {:+.5}",
        r.estimate.total, r.estimate.mean, r.bias_vs_limit
    );
    Ok(())
}
