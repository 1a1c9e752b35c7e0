use serde::{Deserialize, Serialize};

use super::form::{Coefficient, HomogeneousForm};
use super::points::{on_forms, rescale, ClosedPoint};
use super::scheme::{jacobian_rank, ProjectiveScheme};
use crate::error::{Error, Result};

/// How div(sigma) meets X at a closed point, over the base field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DivisorPoint {
    NotOnDivisor,
    SmoothPoint,
    SingularPoint,
}

/// Smoothness of div(sigma) ∩ X at `x`, in the first nonzero chart.
pub fn divisor_smooth_at<C: Coefficient>(
    x: &ProjectiveScheme,
    sigma: &HomogeneousForm<C>,
    pt: &ClosedPoint,
) -> Result<DivisorPoint> {
    divisor_smooth_at_chart(x, sigma, &pt.coords().to_vec(), pt, pt.chart())
}

/// As [`divisor_smooth_at`], evaluated at an arbitrary conjugate `coords` of
/// `pt` in the affine chart where coordinate `chart` is 1.
pub fn divisor_smooth_at_chart<C: Coefficient>(
    x: &ProjectiveScheme,
    sigma: &HomogeneousForm<C>,
    coords: &[crate::ff::Fq],
    pt: &ClosedPoint,
    chart: usize,
) -> Result<DivisorPoint> {
    let field = pt.field();
    let p = field.characteristic();
    x.resolve_prime(Some(p))?;
    if sigma.ambient_dim() != x.ambient_dim() || coords.len() != x.ambient_dim() + 1 {
        return Err(Error::RingMismatch("section and point live on different P^n".into()));
    }
    if coords[chart].0 == 0 {
        return Err(Error::InvalidInput(format!("coordinate {chart} vanishes at the point")));
    }
    let affine = rescale(field, coords, chart);
    let forms = x.forms_mod(p);
    if !on_forms(&forms, field, &affine) {
        return Err(Error::NotOnScheme(format!("{pt:?}")));
    }
    let codim = x.ambient_dim() - x.dim();
    if jacobian_rank(&forms, field, &affine, Some(chart)) != codim {
        return Err(Error::SingularFiber(format!("{pt:?}")));
    }
    let s = sigma.reduce_mod(p);
    if s.eval(field.as_ref(), &affine)?.0 != 0 {
        return Ok(DivisorPoint::NotOnDivisor);
    }
    let mut all = forms;
    all.push(s);
    if jacobian_rank(&all, field, &affine, Some(chart)) == codim + 1 {
        Ok(DivisorPoint::SmoothPoint)
    } else {
        Ok(DivisorPoint::SingularPoint)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::form::parse_form;
    use crate::geom::points::closed_points_up_to;

    #[test]
    fn examples() {
        let p1 = ProjectiveScheme::projective_space(1, None).unwrap();
        let xy = parse_form("X*Y", 1).unwrap();
        let pt = ClosedPoint::rational(2, &[1, 0]).unwrap();
        assert_eq!(divisor_smooth_at(&p1, &xy, &pt).unwrap(), DivisorPoint::SmoothPoint);
        let sq = parse_form("X^2*Y^2", 1).unwrap();
        assert_eq!(divisor_smooth_at(&p1, &sq, &pt).unwrap(), DivisorPoint::SingularPoint);
        let p2 = ProjectiveScheme::projective_space(2, None).unwrap();
        let conic = parse_form("X^2+Y^2-Z^2", 2).unwrap();
        let pt = ClosedPoint::rational(5, &[3, 4, 0]).unwrap();
        assert_eq!(divisor_smooth_at(&p2, &conic, &pt).unwrap(), DivisorPoint::SmoothPoint);
        let off = ClosedPoint::rational(5, &[1, 0, 0]).unwrap();
        assert_eq!(divisor_smooth_at(&p2, &conic, &off).unwrap(), DivisorPoint::NotOnDivisor);
    }

    #[test]
    fn conjugate_and_chart_invariance() {
        let p1 = ProjectiveScheme::projective_space(1, None).unwrap();
        let sections = ["X^4+X*Y^3+Y^4", "X^2*Y^2+X^3*Y", "X^4+X^2*Y^2+Y^4", "X^3*Y+X*Y^3"];
        for s in sections {
            let sigma = parse_form(s, 1).unwrap();
            for pt in closed_points_up_to(&p1, 2, 3).unwrap() {
                let base = divisor_smooth_at(&p1, &sigma, &pt).unwrap();
                for conj in pt.orbit() {
                    for chart in (0..2).filter(|&i| conj[i].0 != 0) {
                        let v = divisor_smooth_at_chart(&p1, &sigma, &conj, &pt, chart).unwrap();
                        assert_eq!(v, base, "{s} at {pt:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_points_off_scheme() {
        let conic = ProjectiveScheme::from_json(
            r#"{"p":5,"n":2,"m":1,"defining_forms":[[[[2,0,0],1],[[0,2,0],1],[[0,0,2],-1]]]}"#,
        )
        .unwrap();
        let sigma = parse_form("X", 2).unwrap();
        let pt = ClosedPoint::rational(5, &[1, 0, 0]).unwrap();
        assert!(matches!(divisor_smooth_at(&conic, &sigma, &pt), Err(Error::NotOnScheme(_))));
        let on = ClosedPoint::rational(5, &[0, 1, 1]).unwrap();
        assert_eq!(divisor_smooth_at(&conic, &sigma, &on).unwrap(), DivisorPoint::SmoothPoint);
    }
}
