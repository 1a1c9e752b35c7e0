use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ff::{is_prime, solve, ExtField, Fq, GaloisRing, Gr, Ring, RingMatrix};
use crate::geom::points::{on_forms, rescale};
use crate::geom::scheme::jacobian_rank;
use crate::geom::{ClosedPoint, Coefficient, HomogeneousForm, ProjectiveScheme};

/// A degree-d form with coefficients in Z/p^2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionModP2 {
    p: u64,
    form: HomogeneousForm<u64>,
}

impl SectionModP2 {
    pub fn new<C: Coefficient>(form: &HomogeneousForm<C>, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if p >= 1 << 12 {
            return invalid(format!("p = {p} too large for mod-p^2 jet arithmetic"));
        }
        Ok(Self {
            p,
            form: form.reduce_mod(p * p),
        })
    }

    /// From a coefficient vector in monomial-basis order.
    pub fn from_coeffs(n: usize, d: usize, p: u64, coeffs: Vec<u64>) -> Result<Self> {
        Self::new(&HomogeneousForm::new(n, d, coeffs)?, p)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    pub fn ambient_dim(&self) -> usize {
        self.form.ambient_dim()
    }

    pub fn form(&self) -> &HomogeneousForm<u64> {
        &self.form
    }

    pub fn coeffs(&self) -> &[u64] {
        self.form.coeffs()
    }

    /// The reduction mod p, a form over F_p.
    pub fn reduce_mod_p(&self) -> HomogeneousForm<u64> {
        self.form.reduce_mod(self.p)
    }
}

/// Position of a closed point of the fiber relative to div(sigma), read in
/// the local ring of the arithmetic scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointClassification {
    NotOnDivisor,
    RegularPoint,
    SingularPoint,
}

/// A classification together with whether the fiber alone would have called
/// the point singular (the mod-p^2 value rescues it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassifiedPoint {
    pub class: PointClassification,
    pub rescued: bool,
}

pub fn classify_point(
    sigma: &SectionModP2,
    x: &ClosedPoint,
    scheme: &ProjectiveScheme,
) -> Result<PointClassification> {
    Ok(classify_point_detailed(sigma, x, scheme)?.class)
}

pub fn classify_point_detailed(
    sigma: &SectionModP2,
    x: &ClosedPoint,
    scheme: &ProjectiveScheme,
) -> Result<ClassifiedPoint> {
    classify_point_at(sigma, scheme, x, x.coords(), x.chart(), None)
}

/// Classify using the conjugate `coords` of `x`, the affine chart `chart`,
/// and optionally a caller-chosen lift of the point to GR(p^2, deg x).
pub fn classify_point_at(
    sigma: &SectionModP2,
    scheme: &ProjectiveScheme,
    x: &ClosedPoint,
    coords: &[Fq],
    chart: usize,
    lift: Option<&[Gr]>,
) -> Result<ClassifiedPoint> {
    let p = sigma.prime();
    if x.characteristic() != p {
        return Err(Error::RingMismatch(format!(
            "section mod {p}^2, point over characteristic {}",
            x.characteristic()
        )));
    }
    scheme.resolve_prime(Some(p))?;
    let n = scheme.ambient_dim();
    if sigma.ambient_dim() != n || coords.len() != n + 1 {
        return Err(Error::RingMismatch("section and point live on different P^n".into()));
    }
    if coords[chart].0 == 0 {
        return invalid(format!("coordinate {chart} vanishes at the point"));
    }
    let field = x.field();
    let affine = rescale(field, coords, chart);
    let forms = scheme.forms_mod(p);
    if !on_forms(&forms, field, &affine) {
        return Err(Error::NotOnScheme(format!("{x:?}")));
    }
    let codim = n - scheme.dim();
    if jacobian_rank(&forms, field, &affine, Some(chart)) != codim {
        return Err(Error::SingularFiber(format!("{x:?}")));
    }
    let s_bar = sigma.reduce_mod_p();
    if s_bar.eval(field.as_ref(), &affine)?.0 != 0 {
        return Ok(ClassifiedPoint {
            class: PointClassification::NotOnDivisor,
            rescued: false,
        });
    }
    let mut all = forms;
    all.push(s_bar);
    if jacobian_rank(&all, field, &affine, Some(chart)) == codim + 1 {
        return Ok(ClassifiedPoint {
            class: PointClassification::RegularPoint,
            rescued: false,
        });
    }
    let gr = GaloisRing::over(field)?;
    let lifted = match lift {
        Some(l) => {
            check_lift(scheme, &gr, l, &affine, chart)?;
            l.to_vec()
        }
        None => lift_point(scheme, &gr, &affine, chart)?,
    };
    let value = sigma.form().eval(&gr, &lifted)?;
    let quotient = gr
        .div_p(value)
        .ok_or_else(|| Error::Invariant("lifted value of a fiber zero is not divisible by p".into()))?;
    Ok(if quotient.0 != 0 {
        ClassifiedPoint {
            class: PointClassification::RegularPoint,
            rescued: true,
        }
    } else {
        ClassifiedPoint {
            class: PointClassification::SingularPoint,
            rescued: false,
        }
    })
}

/// A GR(p^2, e)-point of the mod-p^2 scheme over the affine point `affine`
/// (chart coordinate 1): the coefficientwise lift, corrected by p times a
/// solution of the linearized equations when defining forms are present.
pub fn lift_point(
    scheme: &ProjectiveScheme,
    gr: &GaloisRing,
    affine: &[Fq],
    chart: usize,
) -> Result<Vec<Gr>> {
    let mut y: Vec<Gr> = affine.iter().map(|&c| gr.lift(c)).collect();
    if scheme.is_projective_space() {
        return Ok(y);
    }
    let p = gr.characteristic_prime();
    let field = gr.residue_field();
    let forms = scheme.forms_mod(p * p);
    let mut rhs = Vec::with_capacity(forms.len());
    for g in &forms {
        let v = g.eval(gr, &y)?;
        let b = gr
            .div_p(v)
            .ok_or_else(|| Error::NotOnScheme("point does not reduce onto the fiber".into()))?;
        rhs.push(field.neg(b));
    }
    let n = affine.len() - 1;
    let cols: Vec<usize> = (0..=n).filter(|&i| i != chart).collect();
    let rows: Vec<Vec<Fq>> = forms
        .iter()
        .map(|g| {
            let g = g.reduce_mod(p);
            cols.iter()
                .map(|&i| g.partial_derivative(i).eval(field, affine).expect("length checked"))
                .collect()
        })
        .collect();
    let delta = solve(field, &RingMatrix::from_rows(rows, cols.len()), &rhs)
        .ok_or_else(|| Error::SingularFiber("linearized equations are inconsistent".into()))?;
    for (k, &i) in cols.iter().enumerate() {
        y[i] = gr.add(y[i], gr.times_p(delta[k]));
    }
    Ok(y)
}

fn check_lift(
    scheme: &ProjectiveScheme,
    gr: &GaloisRing,
    lift: &[Gr],
    affine: &[Fq],
    chart: usize,
) -> Result<()> {
    let field: &ExtField = gr.residue_field();
    let reduced: Vec<Fq> = lift.iter().map(|&c| gr.reduce(c)).collect();
    if reduced.len() != affine.len() || reduced[chart].0 == 0 {
        return invalid("lift does not reduce to the point");
    }
    if rescale(field, &reduced, chart) != affine {
        return invalid("lift does not reduce to the point");
    }
    let p = gr.characteristic_prime();
    for g in scheme.forms_mod(p * p) {
        if g.eval(gr, lift)?.0 != 0 {
            return Err(Error::NotOnScheme("lift is not a point of the mod-p^2 scheme".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::parse_form;

    fn p2() -> ProjectiveScheme {
        ProjectiveScheme::projective_space(2, None).unwrap()
    }

    #[test]
    fn worked_example_mod_25() {
        let sigma = SectionModP2::new(&parse_form("X^2+5Y^2-Z^2", 2).unwrap(), 5).unwrap();
        let x = ClosedPoint::rational(5, &[0, 1, 0]).unwrap();
        let c = classify_point_detailed(&sigma, &x, &p2()).unwrap();
        assert_eq!(c.class, PointClassification::RegularPoint);
        assert!(c.rescued);
    }

    #[test]
    fn product_of_coordinates_is_singular_at_origin() {
        for p in [2u64, 3, 5, 7] {
            let sigma = SectionModP2::new(&parse_form("X*Y", 2).unwrap(), p).unwrap();
            let x = ClosedPoint::rational(p, &[0, 0, 1]).unwrap();
            assert_eq!(classify_point(&sigma, &x, &p2()).unwrap(), PointClassification::SingularPoint);
        }
    }

    #[test]
    fn conic_mod_4_at_one_one_zero() {
        let sigma = SectionModP2::new(&parse_form("X^2+5Y^2-Z^2", 2).unwrap(), 2).unwrap();
        let x = ClosedPoint::rational(2, &[1, 1, 0]).unwrap();
        let c = classify_point_detailed(&sigma, &x, &p2()).unwrap();
        assert_eq!(c.class, PointClassification::RegularPoint);
        assert!(c.rescued);
    }

    #[test]
    fn off_divisor_and_regular() {
        let sigma = SectionModP2::new(&parse_form("X*Y", 1).unwrap(), 3).unwrap();
        let p1 = ProjectiveScheme::projective_space(1, None).unwrap();
        let x = ClosedPoint::rational(3, &[1, 1]).unwrap();
        assert_eq!(classify_point(&sigma, &x, &p1).unwrap(), PointClassification::NotOnDivisor);
        let x = ClosedPoint::rational(3, &[1, 0]).unwrap();
        let c = classify_point_detailed(&sigma, &x, &p1).unwrap();
        assert_eq!(c.class, PointClassification::RegularPoint);
        assert!(!c.rescued);
    }

    #[test]
    fn hensel_lift_lands_on_the_conic() {
        let conic = ProjectiveScheme::from_json(
            r#"{"n":2,"m":1,"defining_forms":[[[[2,0,0],1],[[0,2,0],1],[[0,0,2],-1]]]}"#,
        )
        .unwrap();
        let x = ClosedPoint::rational(5, &[3, 4, 0]).unwrap();
        let gr = GaloisRing::over(x.field()).unwrap();
        let affine = x.in_chart(0);
        let y = lift_point(&conic, &gr, &affine, 0).unwrap();
        let g = conic.forms()[0].reduce_mod(25);
        assert_eq!(g.eval(&gr, &y).unwrap(), Gr(0));
        // naive lift (1, 3, 0) gives 1 + 9 = 10, off the mod-25 conic
        let naive: Vec<Gr> = affine.iter().map(|&c| gr.lift(c)).collect();
        assert_ne!(g.eval(&gr, &naive).unwrap(), Gr(0));
    }

    #[test]
    fn rejects_singular_fiber_points() {
        // the nodal cubic Y^2 Z = X^3 + X^2 Z is singular at [0:0:1]
        let nodal = ProjectiveScheme::from_json(
            r#"{"n":2,"m":1,"defining_forms":[[[[0,2,1],1],[[3,0,0],-1],[[2,0,1],-1]]]}"#,
        )
        .unwrap();
        let sigma = SectionModP2::new(&parse_form("X", 2).unwrap(), 3).unwrap();
        let x = ClosedPoint::rational(3, &[0, 0, 1]).unwrap();
        assert!(matches!(classify_point(&sigma, &x, &nodal), Err(Error::SingularFiber(_))));
    }
}
