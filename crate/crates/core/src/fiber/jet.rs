use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::section::{lift_point, ClassifiedPoint, PointClassification};
use crate::error::{invalid, Error, Result};
use crate::ff::{
    kernel_basis, matrix_rank, p2_image_length, ExtField, Fq, GaloisRing, Ring, RingMatrix,
};
use crate::geom::form::{monomial_value, power_table};
use crate::geom::points::on_forms;
use crate::geom::scheme::jacobian_rank;
use crate::geom::{closed_points_up_to, monomial_basis, ClosedPoint, ProjectiveScheme};

/// Precomputed first-order data of every degree-d monomial at one closed
/// point: values at a lift to GR(p^2, e) and tangential derivatives over the
/// residue field, all as coordinate vectors over Z/p^2 resp. F_p.
#[derive(Debug, Clone)]
pub struct PointJet {
    point: ClosedPoint,
    e: usize,
    /// [k * e + j]: coordinate j of monomial k at the lift, in Z/p^2.
    lifted: Vec<u64>,
    /// [(t * h + k) * e + j]: coordinate j of the t-th tangential derivative.
    tangent: Vec<u64>,
}

impl PointJet {
    pub fn point(&self) -> &ClosedPoint {
        &self.point
    }
}

/// Jets of all degree-d monomials at a list of closed points of one fiber.
#[derive(Debug, Clone)]
pub struct JetTable {
    p: u64,
    n: usize,
    m: usize,
    d: usize,
    h: usize,
    jets: Vec<PointJet>,
}

impl JetTable {
    pub fn new(scheme: &ProjectiveScheme, p: u64, d: usize, points: Vec<ClosedPoint>) -> Result<Self> {
        let p = scheme.resolve_prime(Some(p))?;
        if p >= 1 << 12 {
            return invalid(format!("p = {p} too large for mod-p^2 jet arithmetic"));
        }
        let n = scheme.ambient_dim();
        let m = scheme.dim();
        let basis = monomial_basis(n, d);
        let mut jets = Vec::with_capacity(points.len());
        let mut gr_cache: Vec<Option<GaloisRing>> = Vec::new();
        for x in points {
            if x.characteristic() != p || x.ambient_dim() != n {
                return Err(Error::RingMismatch(format!("{x:?} is not a point of this fiber")));
            }
            let e = x.degree();
            if gr_cache.len() <= e {
                gr_cache.resize(e + 1, None);
            }
            if gr_cache[e].is_none() {
                gr_cache[e] = Some(GaloisRing::over(x.field())?);
            }
            let gr = gr_cache[e].as_ref().unwrap();
            jets.push(point_jet(scheme, gr, &basis, x, m)?);
        }
        Ok(Self {
            p,
            n,
            m,
            d,
            h: basis.len(),
            jets,
        })
    }

    /// Jets at every closed point of degree <= r.
    pub fn up_to_degree(scheme: &ProjectiveScheme, p: u64, d: usize, r: usize) -> Result<Self> {
        let pts = closed_points_up_to(scheme, p, r)?;
        Self::new(scheme, p, d, pts)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Number of coefficients of a degree-d form.
    pub fn coeff_count(&self) -> usize {
        self.h
    }

    pub fn len(&self) -> usize {
        self.jets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jets.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &ClosedPoint> {
        self.jets.iter().map(|j| &j.point)
    }

    /// Keep only the points of degree <= r.
    pub fn restricted(&self, r: usize) -> Self {
        Self {
            jets: self.jets.iter().filter(|j| j.e <= r).cloned().collect(),
            ..self.clone()
        }
    }

    /// Classify the point at `idx` for the section with coefficients `c`
    /// (in Z/p^2, monomial-basis order).
    pub fn classify(&self, idx: usize, c: &[u64]) -> ClassifiedPoint {
        let jet = &self.jets[idx];
        let (p, q, e, h) = (self.p, self.p * self.p, jet.e, self.h);
        let mut value = [0u64; crate::ff::MAX_DEGREE];
        for (k, &ck) in c.iter().enumerate() {
            if ck == 0 {
                continue;
            }
            for j in 0..e {
                value[j] += ck * jet.lifted[k * e + j];
            }
        }
        for v in value.iter_mut().take(e) {
            *v %= q;
        }
        if value[..e].iter().any(|v| v % p != 0) {
            return ClassifiedPoint {
                class: PointClassification::NotOnDivisor,
                rescued: false,
            };
        }
        for t in 0..self.m {
            let base = t * h * e;
            for j in 0..e {
                let mut acc = 0u64;
                for (k, &ck) in c.iter().enumerate() {
                    acc += ck * jet.tangent[base + k * e + j];
                }
                if acc % p != 0 {
                    return ClassifiedPoint {
                        class: PointClassification::RegularPoint,
                        rescued: false,
                    };
                }
            }
        }
        if value[..e].iter().any(|&v| v != 0) {
            ClassifiedPoint {
                class: PointClassification::RegularPoint,
                rescued: true,
            }
        } else {
            ClassifiedPoint {
                class: PointClassification::SingularPoint,
                rescued: false,
            }
        }
    }

    /// Over the fiber only: is div(c mod p) singular at the point?
    pub fn fiber_singular(&self, idx: usize, c: &[u64]) -> bool {
        let jet = &self.jets[idx];
        let (p, e, h) = (self.p, jet.e, self.h);
        for j in 0..e {
            let acc: u64 = c.iter().enumerate().map(|(k, &ck)| ck * jet.lifted[k * e + j]).sum();
            if acc % p != 0 {
                return false;
            }
        }
        for t in 0..self.m {
            for j in 0..e {
                let acc: u64 = c
                    .iter()
                    .enumerate()
                    .map(|(k, &ck)| ck * jet.tangent[(t * h + k) * e + j])
                    .sum();
                if acc % p != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Number of SingularPoint and rescued points for the section `c`.
    pub fn scan(&self, c: &[u64]) -> (usize, usize) {
        let mut singular = 0;
        let mut rescued = 0;
        for idx in 0..self.jets.len() {
            let v = self.classify(idx, c);
            if v.class == PointClassification::SingularPoint {
                singular += 1;
            }
            if v.rescued {
                rescued += 1;
            }
        }
        (singular, rescued)
    }

    pub fn has_singular_point(&self, c: &[u64]) -> bool {
        (0..self.jets.len()).any(|i| self.classify(i, c).class == PointClassification::SingularPoint)
    }

    pub fn has_fiber_singular_point(&self, c: &[u64]) -> bool {
        (0..self.jets.len()).any(|i| self.fiber_singular(i, c))
    }

    /// Matrix over F_p of the fiber jet map (value and tangential
    /// derivatives at every point) on the coefficient space.
    pub fn fiber_matrix(&self) -> RingMatrix<Fq> {
        let p = self.p;
        let rows: Vec<Vec<Fq>> = self
            .jet_rows()
            .into_iter()
            .map(|(row, _)| row.into_iter().map(|v| Fq(v % p)).collect())
            .collect();
        RingMatrix::from_rows(rows, self.h)
    }

    /// Matrix over Z/p^2 of the arithmetic jet map: lifted value coordinates,
    /// and p times the tangential derivative coordinates.
    pub fn arithmetic_matrix(&self) -> RingMatrix<u64> {
        let p = self.p;
        let rows: Vec<Vec<u64>> = self
            .jet_rows()
            .into_iter()
            .map(|(row, is_value)| {
                if is_value {
                    row
                } else {
                    row.into_iter().map(|v| (v % p) * p).collect()
                }
            })
            .collect();
        RingMatrix::from_rows(rows, self.h)
    }

    fn jet_rows(&self) -> Vec<(Vec<u64>, bool)> {
        let h = self.h;
        let mut rows = Vec::new();
        for jet in &self.jets {
            let e = jet.e;
            for j in 0..e {
                rows.push(((0..h).map(|k| jet.lifted[k * e + j]).collect(), true));
            }
            for t in 0..self.m {
                for j in 0..e {
                    rows.push(((0..h).map(|k| jet.tangent[(t * h + k) * e + j]).collect(), false));
                }
            }
        }
        rows
    }

    /// Certificate that the jet map at all points of the table is onto.
    pub fn certificate(&self, mode: JetMode) -> SurjectivityCertificate {
        let total_degree: usize = self.jets.iter().map(|j| j.e).sum();
        match mode {
            JetMode::Fiber => {
                let fp = ExtField::prime_field(self.p).expect("prime");
                let rank = matrix_rank(&fp, &self.fiber_matrix());
                let target = (self.m + 1) * total_degree;
                SurjectivityCertificate {
                    mode,
                    surjective: rank == target,
                    source_rank: rank,
                    source_length: self.h,
                    target_length: target,
                }
            }
            JetMode::Arithmetic => {
                let len = p2_image_length(self.p, &self.arithmetic_matrix());
                let target = (self.n_abs() + 1) * total_degree;
                SurjectivityCertificate {
                    mode,
                    surjective: len == target,
                    source_rank: len,
                    source_length: 2 * self.h,
                    target_length: target,
                }
            }
        }
    }

    /// Absolute dimension of the arithmetic scheme (fiber dimension + 1).
    pub fn n_abs(&self) -> usize {
        self.m + 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }
}

fn point_jet(
    scheme: &ProjectiveScheme,
    gr: &GaloisRing,
    basis: &[Vec<u32>],
    x: ClosedPoint,
    m: usize,
) -> Result<PointJet> {
    let field = x.field().clone();
    let p = field.characteristic();
    let e = x.degree();
    let n = x.ambient_dim();
    let chart = x.chart();
    let affine = x.in_chart(chart);
    let forms = scheme.forms_mod(p);
    if !on_forms(&forms, &field, &affine) {
        return Err(Error::NotOnScheme(format!("{x:?}")));
    }
    if jacobian_rank(&forms, &field, &affine, Some(chart)) != n - m {
        return Err(Error::SingularFiber(format!("{x:?}")));
    }
    let tangents = tangent_basis(&forms, &field, &affine, chart);
    debug_assert_eq!(tangents.len(), m);

    let y = lift_point(scheme, gr, &affine, chart)?;
    let d = basis[0].iter().sum::<u32>() as usize;
    let gr_powers = power_table(gr, &y, d);
    let f_powers = power_table(field.as_ref(), &affine, d);
    let h = basis.len();
    let mut lifted = vec![0u64; h * e];
    let mut tangent = vec![0u64; m * h * e];
    for (k, exps) in basis.iter().enumerate() {
        let v = monomial_value(gr, &gr_powers, exps);
        let coords = gr.unpack(v);
        lifted[k * e..(k + 1) * e].copy_from_slice(&coords[..e]);
        // gradient of the monomial at the residue point
        let grad: Vec<Fq> = (0..=n)
            .map(|i| {
                if exps[i] == 0 {
                    return Fq(0);
                }
                let mut lowered = exps.clone();
                lowered[i] -= 1;
                let v = monomial_value(field.as_ref(), &f_powers, &lowered);
                field.mul(field.from_int((exps[i] as u64 % p) as i64), v)
            })
            .collect();
        for (t, dir) in tangents.iter().enumerate() {
            let dv = (0..=n).fold(Fq(0), |acc, i| field.add(acc, field.mul(grad[i], dir[i])));
            let c = field.unpack(dv);
            tangent[(t * h + k) * e..(t * h + k + 1) * e].copy_from_slice(&c[..e]);
        }
    }
    Ok(PointJet {
        point: x,
        e,
        lifted,
        tangent,
    })
}

/// Basis of the tangent space of the fiber at `affine` inside the chart
/// (vectors in k^{n+1} with zero chart coordinate).
fn tangent_basis(
    forms: &[crate::geom::HomogeneousForm<u64>],
    field: &ExtField,
    affine: &[Fq],
    chart: usize,
) -> Vec<Vec<Fq>> {
    let n = affine.len() - 1;
    let cols: Vec<usize> = (0..=n).filter(|&i| i != chart).collect();
    let embed = |v: &[Fq]| {
        let mut out = vec![Fq(0); n + 1];
        for (k, &i) in cols.iter().enumerate() {
            out[i] = v[k];
        }
        out
    };
    if forms.is_empty() {
        return (0..n)
            .map(|k| {
                let mut v = vec![Fq(0); n];
                v[k] = field.one();
                embed(&v)
            })
            .collect();
    }
    let rows: Vec<Vec<Fq>> = forms
        .iter()
        .map(|g| {
            cols.iter()
                .map(|&i| g.partial_derivative(i).eval(field, affine).expect("length checked"))
                .collect()
        })
        .collect();
    kernel_basis(field, &RingMatrix::from_rows(rows, cols.len()))
        .iter()
        .map(|v| embed(v))
        .collect()
}

/// Which jet map: over the residue fields (value and tangent directions),
/// or over Z/p^2 (first-order neighborhood in the arithmetic scheme).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JetMode {
    Fiber,
    Arithmetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectivityCertificate {
    pub mode: JetMode,
    pub surjective: bool,
    /// Rank over F_p (fiber) or log_p of the image size (arithmetic).
    pub source_rank: usize,
    /// Dimension (fiber) or log_p length (arithmetic) of the source.
    pub source_length: usize,
    pub target_length: usize,
}

/// Whether degree-d forms restrict onto the product of the first-order
/// neighborhoods of `points`.
pub fn restriction_surjectivity(
    scheme: &ProjectiveScheme,
    points: &[ClosedPoint],
    d: usize,
    mode: JetMode,
) -> Result<SurjectivityCertificate> {
    let Some(first) = points.first() else {
        return invalid("no points given");
    };
    let p = first.characteristic();
    let mut seen = HashSet::new();
    for x in points {
        let canonical = x.orbit().into_iter().min().expect("nonempty orbit");
        let key: Vec<u64> = canonical.iter().map(|c| c.0).collect();
        if !seen.insert((x.degree(), key)) {
            return Err(Error::NotDistinct(format!("{x:?} listed twice")));
        }
    }
    let table = JetTable::new(scheme, p, d, points.to_vec())?;
    Ok(table.certificate(mode))
}

/// Largest r such that the jet map at all closed points of degree <= r is
/// onto (0 when even the rational points are not covered).
pub fn certified_jet_degree(
    scheme: &ProjectiveScheme,
    p: u64,
    d: usize,
    mode: JetMode,
    r_cap: usize,
) -> Result<usize> {
    let mut best = 0;
    for r in 1..=r_cap {
        let table = JetTable::up_to_degree(scheme, p, d, r)?;
        if table.is_empty() || !table.certificate(mode).surjective {
            break;
        }
        best = r;
    }
    Ok(best)
}
