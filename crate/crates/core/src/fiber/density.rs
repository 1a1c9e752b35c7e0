use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::jet::{certified_jet_degree, JetMode, JetTable, SurjectivityCertificate};
use crate::error::{invalid, Error, Result};
use crate::ff::poly;
use crate::geom::{monomial_count, ClosedPoint, ProjectiveScheme};
use crate::sampling;
use crate::zeta::{
    c0_estimate, closed_point_counts, local_zeta_inverse, ratio_f64, truncated_product,
    PointCountTable,
};

/// Sections an exhaustive count may visit.
pub const EXHAUSTIVE_BUDGET: u64 = 1 << 26;

pub fn serialize_rational<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", v.numer(), v.denom()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimateMode {
    Exact,
    MonteCarlo,
}

/// A proportion of sections, exact or sampled, next to the value theory
/// predicts for it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub mode: EstimateMode,
    /// Exact mode: favourable sections; MC: favourable samples.
    pub hits: u64,
    /// Exact mode: all sections; MC: samples drawn.
    pub total: u64,
    pub mean: f64,
    pub seed: Option<u64>,
    /// 99% half-width (0 in exact mode).
    pub ci_halfwidth: f64,
    #[serde(serialize_with = "serialize_rational")]
    pub reference_value: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub reference_error: BigRational,
    pub certificate: Option<SurjectivityCertificate>,
    /// Exact mode under a certificate: whether hits/total equals the
    /// reference exactly.
    pub exact_equality: Option<bool>,
    /// (section, point) pairs where the fiber is singular but the section is
    /// regular in the arithmetic scheme.
    pub rescue_count: u64,
}

impl DensityEstimate {
    pub fn value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.hits), BigInt::from(self.total.max(1)))
    }

    pub fn reference_f64(&self) -> f64 {
        ratio_f64(&self.reference_value)
    }

    pub fn reference_error_f64(&self) -> f64 {
        ratio_f64(&self.reference_error)
    }

    /// |mean - reference| <= ci + reference error.
    pub fn within_tolerance(&self) -> bool {
        (self.mean - self.reference_f64()).abs() <= self.ci_halfwidth + self.reference_error_f64()
    }

    fn exact(hits: u64, total: u64, reference: BigRational, error: BigRational) -> Self {
        Self {
            mode: EstimateMode::Exact,
            hits,
            total,
            mean: hits as f64 / total as f64,
            seed: None,
            ci_halfwidth: 0.0,
            reference_value: reference,
            reference_error: error,
            certificate: None,
            exact_equality: None,
            rescue_count: 0,
        }
    }

    pub(crate) fn sampled(hits: u64, samples: u64, seed: u64, reference: BigRational, error: BigRational) -> Self {
        let mean = hits as f64 / samples as f64;
        Self {
            mode: EstimateMode::MonteCarlo,
            hits,
            total: samples,
            mean,
            seed: Some(seed),
            ci_halfwidth: sampling::ci_halfwidth(mean, samples),
            reference_value: reference,
            reference_error: error,
            certificate: None,
            exact_equality: None,
            rescue_count: 0,
        }
    }
}

/// Exponent convention for truncated products: s = m+2 over Spec Z (absolute
/// dimension plus one), s = m+1 over a finite field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductMode {
    Arithmetic,
    FiniteField,
}

impl ProductMode {
    pub fn exponent(self, fiber_dim: usize) -> u32 {
        match self {
            ProductMode::Arithmetic => fiber_dim as u32 + 2,
            ProductMode::FiniteField => fiber_dim as u32 + 1,
        }
    }
}

fn fiber_table(scheme: &ProjectiveScheme, p: u64, depth: usize) -> Result<PointCountTable> {
    PointCountTable::for_fiber(scheme, p, depth)
}

/// prod over closed points of degree <= r of (1 - p^{-s deg x}).
pub fn small_degree_product(scheme: &ProjectiveScheme, p: u64, r: usize, mode: ProductMode) -> Result<BigRational> {
    let p = scheme.resolve_prime(Some(p))?;
    if r == 0 {
        return Ok(BigRational::one());
    }
    let t = fiber_table(scheme, p, r)?;
    let a = closed_point_counts(&t)?;
    truncated_product(&a, p, mode.exponent(scheme.dim()), r)
}

/// Tolerance for the part of the product beyond degree r: 2 c0 p^{-2(r+1)}
/// over Spec Z, 2 c0 q^{-r} over a finite field.
pub fn medium_degree_tail_bound(c0: &BigRational, p: u64, r: usize, mode: ProductMode) -> BigRational {
    let exp = match mode {
        ProductMode::Arithmetic => 2 * (r as u32 + 1),
        ProductMode::FiniteField => r as u32,
    };
    c0 * BigRational::new(BigInt::from(2), BigInt::from(p).pow(exp))
}

fn decode(mut idx: u64, base: u64, out: &mut [u64]) {
    for c in out.iter_mut() {
        *c = idx % base;
        idx /= base;
    }
}

fn exhaustive_total(base: u64, h: usize) -> Result<u64> {
    match base.checked_pow(h as u32) {
        Some(t) if t <= EXHAUSTIVE_BUDGET => Ok(t),
        _ => Err(Error::BudgetExceeded(format!(
            "{base}^{h} sections exceed the exhaustive budget of {EXHAUSTIVE_BUDGET}"
        ))),
    }
}

/// Count, over all sections mod p^2, those with no SingularPoint of degree
/// <= r. Equality with [`small_degree_product`] is checked exactly when the
/// arithmetic jet map is certified onto.
pub fn fiber_density_exhaustive(scheme: &ProjectiveScheme, p: u64, d: usize, r: usize) -> Result<DensityEstimate> {
    let p = scheme.resolve_prime(Some(p))?;
    let h = monomial_count(scheme.ambient_dim(), d);
    let q = p * p;
    let total = exhaustive_total(q, h)?;
    let reference = small_degree_product(scheme, p, r, ProductMode::Arithmetic)?;
    if r == 0 {
        return Ok(DensityEstimate::exact(total, total, reference, BigRational::zero()));
    }
    let table = JetTable::up_to_degree(scheme, p, d, r)?;
    let (hits, rescues) = (0..total)
        .into_par_iter()
        .fold(
            || (0u64, 0u64, vec![0u64; h]),
            |(hits, rescues, mut c), idx| {
                decode(idx, q, &mut c);
                let (singular, rescued) = table.scan(&c);
                (hits + (singular == 0) as u64, rescues + rescued as u64, c)
            },
        )
        .map(|(a, b, _)| (a, b))
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    let cert = table.certificate(JetMode::Arithmetic);
    let mut est = DensityEstimate::exact(hits, total, reference, BigRational::zero());
    est.rescue_count = rescues;
    est.exact_equality = cert.surjective.then(|| est.value() == est.reference_value);
    est.certificate = Some(cert);
    Ok(est)
}

/// Count, over all degree-d forms mod p, those whose divisor has no singular
/// point of degree <= r on the fiber. The reference is the finite-field
/// product (exponent m+1), checked exactly under a fiber jet certificate.
pub fn fiber_density_exhaustive_mod_p(scheme: &ProjectiveScheme, p: u64, d: usize, r: usize) -> Result<DensityEstimate> {
    let p = scheme.resolve_prime(Some(p))?;
    let h = monomial_count(scheme.ambient_dim(), d);
    let total = exhaustive_total(p, h)?;
    let reference = small_degree_product(scheme, p, r, ProductMode::FiniteField)?;
    if r == 0 {
        return Ok(DensityEstimate::exact(total, total, reference, BigRational::zero()));
    }
    let table = JetTable::up_to_degree(scheme, p, d, r)?;
    let hits: u64 = (0..total)
        .into_par_iter()
        .fold(
            || (0u64, vec![0u64; h]),
            |(acc, mut c), idx| {
                decode(idx, p, &mut c);
                (acc + !table.has_fiber_singular_point(&c) as u64, c)
            },
        )
        .map(|(a, _)| a)
        .sum();
    let cert = table.certificate(JetMode::Fiber);
    let mut est = DensityEstimate::exact(hits, total, reference, BigRational::zero());
    est.exact_equality = cert.surjective.then(|| est.value() == est.reference_value);
    est.certificate = Some(cert);
    Ok(est)
}

/// Proportion of uniformly random sections mod p^2 with no SingularPoint of
/// degree <= r, against the truncated local zeta value at s = m+2 and its
/// tail bound.
pub fn fiber_density_mc(
    scheme: &ProjectiveScheme,
    p: u64,
    d: usize,
    r: usize,
    samples: u64,
    seed: u64,
) -> Result<DensityEstimate> {
    if samples < 100 {
        return invalid("need at least 100 samples");
    }
    let p = scheme.resolve_prime(Some(p))?;
    let n_abs = scheme.dim() + 1;
    let t = fiber_table(scheme, p, r.max(1))?;
    let local = local_zeta_inverse(&t, n_abs as u32 + 1, r, n_abs)?;
    let table = JetTable::up_to_degree(scheme, p, d, r)?;
    let h = table.coeff_count();
    let q = p * p;
    let tally: Vec<u64> = sampling::run(samples, seed, |rng, tally: &mut Vec<u64>| {
        if tally.is_empty() {
            tally.resize(2, 0);
        }
        let c: Vec<u64> = (0..h).map(|_| rng.gen_range(0..q)).collect();
        let (singular, rescued) = table.scan(&c);
        tally[0] += (singular == 0) as u64;
        tally[1] += rescued as u64;
    });
    let mut est = DensityEstimate::sampled(tally[0], samples, seed, local.value, local.error_bound);
    est.rescue_count = tally[1];
    Ok(est)
}

/// Exact proportion of degree-d forms over F_p whose divisor is singular at
/// `x`, with the fiber jet certificate at x.
pub fn singular_at_point_proportion(
    scheme: &ProjectiveScheme,
    x: &ClosedPoint,
    d: usize,
) -> Result<(BigRational, SurjectivityCertificate)> {
    let p = x.characteristic();
    let table = JetTable::new(scheme, p, d, vec![x.clone()])?;
    let h = table.coeff_count();
    let total = exhaustive_total(p, h)?;
    let hits: u64 = (0..total)
        .into_par_iter()
        .fold(
            || (0u64, vec![0u64; h]),
            |(acc, mut c), idx| {
                decode(idx, p, &mut c);
                (acc + table.fiber_singular(0, &c) as u64, c)
            },
        )
        .map(|(a, _)| a)
        .sum();
    Ok((
        BigRational::new(hits.into(), total.into()),
        table.certificate(JetMode::Fiber),
    ))
}

/// Is the binary form with coefficients `c` (X^d first) squarefree over F_p,
/// i.e. is its divisor on P^1 smooth?
pub fn binary_form_squarefree(c: &[u64], p: u64) -> bool {
    let d = c.len() - 1;
    // F(t, 1) = sum c_k t^{d-k}, stored constant term first
    let mut f: Vec<u64> = c.iter().rev().map(|&v| v % p).collect();
    poly::trim(&mut f);
    match poly::degree(&f) {
        None => false,
        Some(deg) => d - deg <= 1 && poly::is_squarefree(&f, p),
    }
}

/// Exact density of squarefree degree-d binary forms over F_p, against
/// zeta_{P^1}(2)^{-1} = (1 - 1/p)(1 - 1/p^2) with the band 2 c0 p^{-r(d)},
/// r(d) the largest certified fiber jet degree.
pub fn squarefree_form_density(p: u64, d: usize) -> Result<(DensityEstimate, usize)> {
    let p1 = ProjectiveScheme::projective_space(1, Some(p))?;
    let h = d + 1;
    let total = exhaustive_total(p, h)?;
    let hits: u64 = (0..total)
        .into_par_iter()
        .fold(
            || (0u64, vec![0u64; h]),
            |(acc, mut c), idx| {
                decode(idx, p, &mut c);
                (acc + binary_form_squarefree(&c, p) as u64, c)
            },
        )
        .map(|(a, _)| a)
        .sum();
    let pr = BigInt::from(p);
    let reference = BigRational::new(&pr - 1, pr.clone()) * BigRational::new(&pr * &pr - 1, &pr * &pr);
    let r = certified_jet_degree(&p1, p, d, JetMode::Fiber, d)?;
    let c0 = c0_estimate(&PointCountTable::projective_space(p, 1, r.max(1))?, 2)?;
    let band = medium_degree_tail_bound(&c0, p, r, ProductMode::FiniteField);
    Ok((DensityEstimate::exact(hits, total, reference, band), r))
}

/// Empirical exponent of a density gap: log_p of |value - reference|, for
/// convergence tables.
pub fn gap_log(value: &BigRational, reference: &BigRational, p: u64) -> Option<f64> {
    let gap = (value - reference).abs();
    if gap.is_zero() {
        return None;
    }
    Some(ratio_f64(&gap).ln() / (p as f64).ln())
}

/// Count of closed points of each degree <= r on the fiber (a_1, ..., a_r).
pub fn closed_point_profile(scheme: &ProjectiveScheme, p: u64, r: usize) -> Result<Vec<u64>> {
    let t = fiber_table(scheme, p, r)?;
    Ok(closed_point_counts(&t)?
        .iter()
        .map(|a: &BigUint| a.to_u64().unwrap_or(u64::MAX))
        .collect())
}
