//! Proportion of forms whose divisor is singular at one fixed closed point:
//! p^{-(m+1) deg x} whenever the jet map at the point is onto.
//!
//!     cargo run --example singular_at_point

use std::sync::Arc;

use bertini::ff::{ExtField, Fq};
use bertini::fiber::singular_at_point_proportion;
use bertini::geom::{ClosedPoint, ProjectiveScheme};

fn main() -> bertini::Result<()> {
    let p1 = ProjectiveScheme::projective_space(1, None)?;
    let p2 = ProjectiveScheme::projective_space(2, None)?;

    let x = ClosedPoint::rational(2, &[1, 0])?;
    let (v, c) = singular_at_point_proportion(&p1, &x, 3)?;
    println!("P^1/F_2, [1:0], d=3: {v} (onto: {})", c.surjective);

    let x = ClosedPoint::rational(2, &[0, 0, 1])?;
    let (v, c) = singular_at_point_proportion(&p2, &x, 3)?;
    println!("P^2/F_2, [0:0:1], d=3: {v} (onto: {})", c.surjective);

    // [t:1] with t a generator of F_4
    let f4 = Arc::new(ExtField::new(2, 2)?);
    let x = ClosedPoint::new(f4.clone(), vec![f4.monomial(1), Fq(1)])?;
    let (v, c) = singular_at_point_proportion(&p1, &x, 5)?;
    println!("P^1/F_2, degree-2 point, d=5: {v} (onto: {})", c.surjective);

    // below the certified degree the proportion drifts off p^{-2e}
    let (v, c) = singular_at_point_proportion(&p1, &x, 2)?;
    println!("same point, d=2: {v} (onto: {})", c.surjective);
    Ok(())
}
