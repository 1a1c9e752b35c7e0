use std::sync::Arc;

use super::form::HomogeneousForm;
use super::scheme::ProjectiveScheme;
use crate::error::{Error, Result};
use crate::ff::{ExtField, Field, Fq, Ring};

/// Candidate tuples a point scan may visit.
pub const SCAN_BUDGET: u64 = 100_000_000;

/// Points of X(F_{p^e}), normalized (first nonzero coordinate 1) and sorted.
#[derive(Debug, Clone)]
pub struct RationalPoints {
    pub field: Arc<ExtField>,
    pub points: Vec<Vec<Fq>>,
}

/// A closed point of a variety over F_p: one Frobenius orbit, stored as a
/// normalized representative over its residue field F_{p^deg}.
#[derive(Clone)]
pub struct ClosedPoint {
    field: Arc<ExtField>,
    coords: Vec<Fq>,
}

impl std::fmt::Debug for ClosedPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c: Vec<u64> = self.coords.iter().map(|x| x.0).collect();
        write!(f, "ClosedPoint(deg {}, {:?})", self.degree(), c)
    }
}

impl PartialEq for ClosedPoint {
    fn eq(&self, other: &Self) -> bool {
        self.field.characteristic() == other.field.characteristic()
            && self.field.modulus() == other.field.modulus()
            && self.coords == other.coords
    }
}

impl Eq for ClosedPoint {}

impl ClosedPoint {
    /// Build from coordinates over `field`; normalizes and checks the orbit
    /// has exactly `field.degree()` elements.
    pub fn new(field: Arc<ExtField>, coords: Vec<Fq>) -> Result<Self> {
        let coords = normalize(&field, &coords)
            .ok_or_else(|| Error::InvalidInput("the zero tuple is not a projective point".into()))?;
        let pt = Self { field, coords };
        if pt.orbit_size() != pt.degree() {
            return Err(Error::InvalidInput(format!(
                "coordinates generate a proper subfield of F_{}^{}",
                pt.field.characteristic(),
                pt.degree()
            )));
        }
        Ok(pt)
    }

    /// A rational point over F_p from integer coordinates.
    pub fn rational(p: u64, coords: &[i64]) -> Result<Self> {
        let field = Arc::new(ExtField::prime_field(p)?);
        let c = coords.iter().map(|&v| field.from_int(v)).collect();
        Self::new(field, c)
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn characteristic(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn coords(&self) -> &[Fq] {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// The k-th Frobenius conjugate of the representative.
    pub fn conjugate(&self, k: usize) -> Vec<Fq> {
        self.coords
            .iter()
            .map(|&c| self.field.frobenius_pow(c, k))
            .collect()
    }

    /// All `degree` conjugates, the representative first.
    pub fn orbit(&self) -> Vec<Vec<Fq>> {
        (0..self.degree()).map(|k| self.conjugate(k)).collect()
    }

    fn orbit_size(&self) -> usize {
        (1..=self.degree())
            .find(|&k| self.conjugate(k) == self.coords)
            .unwrap_or(self.degree())
    }

    /// Coordinate indices usable as affine charts (nonzero coordinates).
    pub fn charts(&self) -> Vec<usize> {
        (0..self.coords.len())
            .filter(|&i| self.coords[i].0 != 0)
            .collect()
    }

    /// The default chart: the first nonzero coordinate.
    pub fn chart(&self) -> usize {
        self.charts()[0]
    }

    /// The representative rescaled so coordinate `chart` equals 1.
    pub fn in_chart(&self, chart: usize) -> Vec<Fq> {
        rescale(&self.field, &self.coords, chart)
    }
}

pub(crate) fn rescale(field: &ExtField, x: &[Fq], chart: usize) -> Vec<Fq> {
    let inv = field.inv(x[chart]).expect("chart coordinate is nonzero");
    x.iter().map(|&c| field.mul(c, inv)).collect()
}

fn normalize(field: &ExtField, x: &[Fq]) -> Option<Vec<Fq>> {
    let k = x.iter().position(|c| c.0 != 0)?;
    Some(rescale(field, x, k))
}

/// Visit every normalized point of P^n(F_q) in ascending lexicographic order
/// of packed coordinates.
pub fn for_each_projective_point(field: &ExtField, n: usize, mut visit: impl FnMut(&[Fq])) {
    let q = field.size();
    let mut x = vec![Fq(0); n + 1];
    for lead in (0..=n).rev() {
        for c in x.iter_mut() {
            *c = Fq(0);
        }
        x[lead] = Fq(1);
        loop {
            visit(&x);
            // odometer over positions lead+1..=n, last fastest
            let mut i = n;
            loop {
                if i == lead {
                    break;
                }
                if x[i].0 + 1 < q {
                    x[i].0 += 1;
                    break;
                }
                x[i] = Fq(0);
                i -= 1;
            }
            if i == lead {
                break;
            }
        }
    }
}

/// Number of points of P^n(F_q).
pub fn projective_point_count(q: u64, n: usize) -> u64 {
    (0..=n as u32).map(|i| q.pow(i)).sum()
}

fn check_budget(p: u64, e: usize, n: usize) -> Result<ExtField> {
    let field = ExtField::new(p, e)?;
    let q = field.size() as u128;
    let total = (0..=n as u32).map(|i| q.pow(i)).sum::<u128>();
    if total > SCAN_BUDGET as u128 {
        return Err(Error::BudgetExceeded(format!(
            "scanning P^{n}(F_{p}^{e}) visits {total} points"
        )));
    }
    Ok(field)
}

/// All points of the fiber X_p over F_{p^e}.
pub fn rational_points(x: &ProjectiveScheme, p: u64, e: usize) -> Result<RationalPoints> {
    let p = x.resolve_prime(Some(p))?;
    let field = check_budget(p, e, x.ambient_dim())?;
    let forms = x.forms_mod(p);
    let mut points = Vec::new();
    for_each_projective_point(&field, x.ambient_dim(), |pt| {
        if on_forms(&forms, &field, pt) {
            points.push(pt.to_vec());
        }
    });
    Ok(RationalPoints {
        field: Arc::new(field),
        points,
    })
}

pub(crate) fn on_forms(forms: &[HomogeneousForm<u64>], field: &ExtField, x: &[Fq]) -> bool {
    forms
        .iter()
        .all(|f| f.eval(field, x).expect("length matches").0 == 0)
}

/// Closed points of exact degree `e` on X_p, each orbit once, represented by
/// its lexicographically smallest conjugate.
pub fn closed_points_of_degree(x: &ProjectiveScheme, p: u64, e: usize) -> Result<Vec<ClosedPoint>> {
    let pts = rational_points(x, p, e)?;
    let field = pts.field;
    let mut out = Vec::new();
    for pt in pts.points {
        let mut minimal = true;
        let mut exact = true;
        for k in 1..e {
            let c: Vec<Fq> = pt.iter().map(|&v| field.frobenius_pow(v, k)).collect();
            if c == pt {
                exact = false;
                break;
            }
            if c < pt {
                minimal = false;
            }
        }
        if exact && minimal {
            out.push(ClosedPoint {
                field: field.clone(),
                coords: pt,
            });
        }
    }
    Ok(out)
}

/// Closed points of degree <= r, ordered by degree then representative.
pub fn closed_points_up_to(x: &ProjectiveScheme, p: u64, r: usize) -> Result<Vec<ClosedPoint>> {
    let p = x.resolve_prime(Some(p))?;
    if r as f64 * (p as f64).log2() > 24.0 {
        return Err(Error::BudgetExceeded(format!(
            "closed points of degree up to {r} over F_{p} exceed the field cap"
        )));
    }
    let mut out = Vec::new();
    for e in 1..=r {
        out.extend(closed_points_of_degree(x, p, e)?);
    }
    Ok(out)
}
