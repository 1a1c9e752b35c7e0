//! The conic X^2 + 5Y^2 - Z^2 at [0:1:0] over p = 5: singular on the fiber,
//! regular once the mod-25 value is taken into account.
//!
//!     cargo run --example classify_point

use bertini::fiber::{classify_point_detailed, SectionModP2};
use bertini::geom::{divisor_smooth_at, parse_form, ClosedPoint, ProjectiveScheme};

fn main() -> bertini::Result<()> {
    let p2 = ProjectiveScheme::projective_space(2, None)?;
    let form = parse_form("X^2+5*Y^2-Z^2", 2)?;
    for (p, pt) in [(5, [0, 1, 0]), (2, [1, 1, 0]), (3, [1, 0, 1]), (7, [0, 1, 0])] {
        let x = ClosedPoint::rational(p, &pt)?;
        let sigma = SectionModP2::new(&form, p)?;
        let fiber = divisor_smooth_at(&p2, &form, &x)?;
        let arith = classify_point_detailed(&sigma, &x, &p2)?;
        println!(
            "p={p} {:?}: sigma mod p^2 = {}, fiber {:?}, arithmetic {:?}{}",
            pt,
            sigma.form(),
            fiber,
            arith.class,
            if arith.rescued { " (rescued)" } else { "" }
        );
    }
    Ok(())
}
