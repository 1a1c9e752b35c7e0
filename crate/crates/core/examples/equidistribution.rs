//! How evenly [-B, B]^h maps onto (Z/N)^h.
//!
//!     cargo run --example equidistribution

use bertini::arith::equidistribution_audit;

fn main() -> bertini::Result<()> {
    for (h, b, n) in [(1, 7, 5), (1, 8, 5), (3, 8, 5), (3, 12, 7), (2, 1, 5), (9, 10_000, 49)] {
        let a = equidistribution_audit(h, b, n)?;
        let ratio = a.ratio.map(|r| format!("{r} ~ {:.6}", bertini::zeta::ratio_f64(&r)));
        println!(
            "h={h} B={b} N={n}: 2B+1 = {}*{n}+{}, counts {}..{}, ratio {}",
            a.k, a.s, a.min_count, a.max_count, ratio.unwrap_or_else(|| "undefined (not onto)".into())
        );
    }
    Ok(())
}
