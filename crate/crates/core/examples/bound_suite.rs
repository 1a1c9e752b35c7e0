//! The point-count, log and truncation inequalities on the standard grid.
//!
//!     cargo run --release --example bound_suite

use bertini::zeta::verify_section3_bounds;

fn main() -> bertini::Result<()> {
    let report = verify_section3_bounds(&[2, 3, 5, 7, 11], 10, 10, &[1, 2])?;
    let mut per: std::collections::BTreeMap<&str, (usize, f64)> = Default::default();
    for c in &report.checks {
        let slot = per.entry(c.check).or_default();
        slot.0 += 1;
        if c.rhs > 0.0 {
            slot.1 = slot.1.max(c.lhs / c.rhs);
        }
    }
    for (name, (count, worst)) in per {
        println!("{name:>16}: {count:>4} checks, worst lhs/rhs {worst:.3}");
    }
    println!("violations: {}", report.violations.len());
    Ok(())
}
