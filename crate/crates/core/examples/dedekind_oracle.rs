//! Dedekind's criterion against the mod-p^2 classification of the points of
//! div(F) on P^1: two independent routes to the same verdict.
//!
//!     cargo run --release --example dedekind_oracle

use bertini::arith::dedekind_agreement;

fn main() -> bertini::Result<()> {
    let r = dedekind_agreement(3, 50, 500, 50, 6)?;
    println!(
        "{} cubics, {} (f, p) pairs, {} non-maximal, {} disagreements",
        r.polynomials, r.pairs, r.non_maximal_pairs, r.disagreements
    );
    if let Some(d) = r.first_disagreement {
        println!("first disagreement: {d}");
    }
    Ok(())
}
