use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::fiber::{serialize_rational, DensityEstimate, JetMode, JetTable};
use crate::ff::{primes_up_to, residue};
use crate::geom::{monomial_count, HomogeneousForm, ProjectiveScheme};
use crate::sampling;
use crate::zeta::{local_zeta_inverse, PointCountTable};

/// How the coefficients of an integer section are bounded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BoxBound {
    /// |a_i| <= B for every coefficient.
    Uniform(BigInt),
    /// Binary forms with a_0 = 1 and |a_i| <= R^i (a_i the coefficient of
    /// X^{d-i} Y^i).
    Height(BigInt),
}

/// A global section of O(d) on P^n_Z with its coefficient box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSection {
    form: HomogeneousForm<BigInt>,
    bound: BoxBound,
}

impl IntegerSection {
    pub fn new(form: HomogeneousForm<BigInt>, bound: BoxBound) -> Result<Self> {
        match &bound {
            BoxBound::Uniform(b) => {
                if b.is_negative() {
                    return invalid("negative box bound");
                }
                if form.coeffs().iter().any(|c| c.abs() > *b) {
                    return invalid(format!("coefficient outside [-{b}, {b}]"));
                }
            }
            BoxBound::Height(r) => {
                if form.ambient_dim() != 1 {
                    return invalid("height boxes are for binary forms");
                }
                if r.is_negative() {
                    return invalid("negative height bound");
                }
                let mut ri = BigInt::one();
                for (i, c) in form.coeffs().iter().enumerate() {
                    if i == 0 && !c.is_one() {
                        return invalid("height-box forms have leading coefficient 1");
                    }
                    if c.abs() > ri {
                        return invalid(format!("coefficient {i} exceeds R^{i}"));
                    }
                    ri *= r;
                }
            }
        }
        Ok(Self { form, bound })
    }

    pub fn form(&self) -> &HomogeneousForm<BigInt> {
        &self.form
    }

    pub fn bound(&self) -> &BoxBound {
        &self.bound
    }

    pub fn restrict_mod(&self, modulus: u64) -> Result<HomogeneousForm<u64>> {
        restrict_mod(self, modulus)
    }
}

/// Coefficientwise reduction mod N.
pub fn restrict_mod(sigma: &IntegerSection, modulus: u64) -> Result<HomogeneousForm<u64>> {
    if modulus < 2 {
        return invalid("modulus must be >= 2");
    }
    Ok(sigma.form.reduce_mod(modulus))
}

/// How evenly the box [-B, B]^h covers (Z/N)^h.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquidistributionAudit {
    pub h: u32,
    pub box_bound: u64,
    pub modulus: u64,
    /// 2B + 1 = k N + s.
    pub k: u64,
    pub s: u64,
    pub min_count: BigUint,
    pub max_count: BigUint,
    /// max/min; absent when some class is missed (k = 0).
    #[serde(serialize_with = "serialize_opt_rational")]
    pub ratio: Option<BigRational>,
    /// Every residue class is hit.
    pub surjective: bool,
}

fn serialize_opt_rational<S: serde::Serializer>(
    v: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => serialize_rational(r, s),
        None => s.serialize_none(),
    }
}

/// Preimage counts of the reduction [-B, B]^h -> (Z/N)^h in closed form.
pub fn equidistribution_audit(h: u32, box_bound: u64, modulus: u64) -> Result<EquidistributionAudit> {
    if h == 0 || box_bound == 0 || modulus < 2 {
        return invalid("need h >= 1, B >= 1, N >= 2");
    }
    let width = 2 * box_bound + 1;
    let (k, s) = (width / modulus, width % modulus);
    let lo = BigUint::from(k).pow(h);
    let hi = if s == 0 { lo.clone() } else { BigUint::from(k + 1).pow(h) };
    let ratio = (k > 0).then(|| BigRational::new(BigInt::from(hi.clone()), BigInt::from(lo.clone())));
    Ok(EquidistributionAudit {
        h,
        box_bound,
        modulus,
        k,
        s,
        min_count: lo,
        max_count: hi,
        ratio,
        surjective: k > 0,
    })
}

/// Local factor of the multi-fiber reference at one prime.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalFactor {
    pub p: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub value: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub error_bound: BigRational,
    pub closed_points: usize,
    /// Whether the mod-p^2 jet map onto the degree <= r points is onto.
    pub jet_surjective: bool,
    /// Samples with a SingularPoint over this prime.
    pub singular_sections: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiFiberReport {
    pub n: usize,
    pub d: usize,
    pub box_bound: u64,
    pub prime_bound: u64,
    pub r: usize,
    pub s: u32,
    pub estimate: DensityEstimate,
    pub local_factors: Vec<LocalFactor>,
}

/// Proportion of integer sections of O(d) on P^{n-1}_Z, uniform in
/// [-B, B]^h, with no SingularPoint of degree <= r over any p <= P. The
/// reference is the product of the truncated local values at s = n + 1.
pub fn multi_fiber_experiment(
    n: usize,
    d: usize,
    box_bound: u64,
    prime_bound: u64,
    r: usize,
    samples: u64,
    seed: u64,
) -> Result<MultiFiberReport> {
    if n < 2 {
        return invalid("absolute dimension n must be >= 2");
    }
    if samples == 0 {
        return invalid("samples must be positive");
    }
    if box_bound > i64::MAX as u64 / 2 {
        return invalid("box bound too large");
    }
    let primes = primes_up_to(prime_bound);
    if primes.is_empty() {
        return invalid("prime bound below 2");
    }
    let width = 2 * box_bound + 1;
    if let Some(&p) = primes.iter().find(|&&p| p * p > width) {
        return invalid(format!("box [-{box_bound}, {box_bound}] does not cover Z/{p}^2"));
    }
    let scheme = ProjectiveScheme::projective_space(n - 1, None)?;
    let s = n as u32 + 1;
    let h = monomial_count(n - 1, d);
    let mut tables = Vec::with_capacity(primes.len());
    let mut value = BigRational::one();
    let mut error = BigRational::zero();
    let mut factors = Vec::with_capacity(primes.len());
    for &p in &primes {
        let counts = PointCountTable::projective_space(p, n - 1, r.max(1))?;
        let local = local_zeta_inverse(&counts, s, r, n)?;
        let table = JetTable::up_to_degree(&scheme, p, d, r)?;
        value *= &local.value;
        error += &local.error_bound;
        factors.push(LocalFactor {
            p,
            value: local.value,
            error_bound: local.error_bound,
            closed_points: table.len(),
            jet_surjective: table.certificate(JetMode::Arithmetic).surjective,
            singular_sections: 0,
        });
        tables.push(table);
    }
    let b = box_bound as i64;
    let tally: Vec<u64> = sampling::run(samples, seed, |rng, tally: &mut Vec<u64>| {
        if tally.is_empty() {
            tally.resize(primes.len() + 1, 0);
        }
        let coeffs: Vec<i64> = (0..h).map(|_| rng.gen_range(-b..=b)).collect();
        let mut c = vec![0u64; h];
        let mut good = true;
        for (i, table) in tables.iter().enumerate() {
            let q = table.prime() * table.prime();
            for (ck, &a) in c.iter_mut().zip(&coeffs) {
                *ck = residue(a, q);
            }
            if table.has_singular_point(&c) {
                tally[i + 1] += 1;
                good = false;
            }
        }
        tally[0] += good as u64;
    });
    for (f, &k) in factors.iter_mut().zip(&tally[1..]) {
        f.singular_sections = k;
    }
    let estimate = DensityEstimate::sampled(tally[0], samples, seed, value, error);
    Ok(MultiFiberReport {
        n,
        d,
        box_bound,
        prime_bound,
        r,
        s,
        estimate,
        local_factors: factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::parse_form;

    #[test]
    fn restriction_examples() {
        let sigma = IntegerSection::new(parse_form("X^2+5Y^2-Z^2", 2).unwrap(), BoxBound::Uniform(5.into())).unwrap();
        assert_eq!(sigma.restrict_mod(25).unwrap().to_string(), "X^2+5*Y^2+24*Z^2");
        assert!(sigma.restrict_mod(1).is_err());
        let zero = IntegerSection::new(HomogeneousForm::zero(2, 3), BoxBound::Uniform(0.into())).unwrap();
        assert!(zero.restrict_mod(2).unwrap().coeffs().iter().all(|&c| c == 0));
        let via4 = sigma.restrict_mod(4).unwrap().reduce_mod(2);
        assert_eq!(via4, sigma.restrict_mod(2).unwrap());
    }

    #[test]
    fn box_checks() {
        let f = parse_form("3*X+Y", 1).unwrap();
        assert!(IntegerSection::new(f.clone(), BoxBound::Uniform(2.into())).is_err());
        assert!(IntegerSection::new(f, BoxBound::Uniform(3.into())).is_ok());
        let g = parse_form("X^2+4*Y^2", 1).unwrap();
        assert!(IntegerSection::new(g.clone(), BoxBound::Height(2.into())).is_ok());
        assert!(IntegerSection::new(g, BoxBound::Height(1.into())).is_err());
    }

    #[test]
    fn audit_examples() {
        let a = equidistribution_audit(1, 7, 5).unwrap();
        assert_eq!(a.ratio, Some(BigRational::one()));
        let a = equidistribution_audit(1, 8, 5).unwrap();
        assert_eq!((a.min_count.clone(), a.max_count.clone()), (3u32.into(), 4u32.into()));
        assert_eq!(a.ratio, Some(BigRational::new(4.into(), 3.into())));
        let a = equidistribution_audit(3, 8, 5).unwrap();
        assert_eq!(a.ratio, Some(BigRational::new(64.into(), 27.into())));
        let a = equidistribution_audit(2, 1, 5).unwrap();
        assert!(!a.surjective);
        assert_eq!(a.ratio, None);
    }

    #[test]
    fn multi_fiber_rejects_narrow_boxes() {
        assert!(multi_fiber_experiment(2, 4, 3, 3, 1, 100, 1).is_err());
        assert!(multi_fiber_experiment(2, 4, 4, 3, 1, 100, 1).is_ok());
        assert!(multi_fiber_experiment(2, 4, 100, 3, 1, 0, 1).is_err());
    }

    #[test]
    fn multi_fiber_is_deterministic() {
        let a = multi_fiber_experiment(2, 5, 50, 5, 2, 3000, 9).unwrap();
        let b = multi_fiber_experiment(2, 5, 50, 5, 2, 3000, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.local_factors.len(), 3);
    }
}
