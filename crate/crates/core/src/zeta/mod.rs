//! Point-count tables, closed-point counts, exact truncated zeta products and
//! the error bounds that control them.

mod bounds;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use bounds::{riemann_zeta, verify_section3_bounds, BoundCheck, BoundReport};

use crate::error::{invalid, Error, Result};
use crate::ff::is_prime;
use crate::geom::{rational_points, ProjectiveScheme};

/// Largest bit size an exact truncated product may reach.
pub const MAX_PRODUCT_BITS: u64 = 1 << 24;

/// (N_1, ..., N_emax) with N_e = #X(F_{p^e}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCountTable {
    p: u64,
    counts: Vec<BigUint>,
}

impl PointCountTable {
    pub fn new(p: u64, counts: Vec<BigUint>) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        Ok(Self { p, counts })
    }

    pub fn from_u64(p: u64, counts: &[u64]) -> Result<Self> {
        Self::new(p, counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Counts for P^m over F_p: N_e = 1 + p^e + ... + p^{me}.
    pub fn projective_space(p: u64, m: usize, e_max: usize) -> Result<Self> {
        let counts = (1..=e_max)
            .map(|e| {
                let q = BigUint::from(p).pow(e as u32);
                (0..=m as u32).map(|i| q.pow(i)).sum()
            })
            .collect();
        Self::new(p, counts)
    }

    /// Counts by enumerating the fiber of `x` over p.
    pub fn from_scheme(x: &ProjectiveScheme, p: u64, e_max: usize) -> Result<Self> {
        let counts = (1..=e_max)
            .map(|e| rational_points(x, p, e).map(|pts| BigUint::from(pts.points.len())))
            .collect::<Result<_>>()?;
        Self::new(p, counts)
    }

    /// Closed-form counts for P^m, enumerated counts otherwise.
    pub fn for_fiber(x: &ProjectiveScheme, p: u64, e_max: usize) -> Result<Self> {
        if x.is_projective_space() {
            Self::projective_space(p, x.dim(), e_max)
        } else {
            Self::from_scheme(x, p, e_max)
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }
}

pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut sign = 1;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return 0;
            }
            sign = -sign;
        }
        f += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number a_e of closed points of each exact degree e, by Möbius inversion.
pub fn closed_point_counts(t: &PointCountTable) -> Result<Vec<BigUint>> {
    let mut out = Vec::with_capacity(t.depth());
    for e in 1..=t.depth() as u64 {
        let mut acc = BigInt::zero();
        for f in (1..=e).filter(|f| e % f == 0) {
            let mu = mobius(e / f);
            if mu != 0 {
                acc += BigInt::from(mu) * BigInt::from(t.counts[f as usize - 1].clone());
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(e));
        if !r.is_zero() || q.is_negative() {
            return Err(Error::InconsistentTable(format!(
                "degree-{e} closed point count {acc}/{e} is not a natural number"
            )));
        }
        out.push(q.to_biguint().expect("nonnegative"));
    }
    Ok(out)
}

/// The smallest c with N_e <= c p^{(n-1)e} on the table (0 for an empty table).
pub fn c0_estimate(t: &PointCountTable, n: usize) -> Result<BigRational> {
    if n < 1 {
        return invalid("absolute dimension must be >= 1");
    }
    let mut best = BigRational::zero();
    for (i, c) in t.counts.iter().enumerate() {
        let e = (i + 1) as u32;
        let den = BigInt::from(t.p).pow((n as u32 - 1) * e);
        let v = BigRational::new(BigInt::from(c.clone()), den);
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// Default truncation depth: the largest e with p^e <= 2^10, at least 1.
pub fn default_depth(p: u64) -> usize {
    let mut e = 1;
    while p.checked_pow(e as u32 + 1).is_some_and(|q| q <= 1 << 10) {
        e += 1;
    }
    e
}

fn rational_to_strings(v: &BigRational) -> (String, String) {
    (v.numer().to_string(), v.denom().to_string())
}

/// prod_{e <= r} (1 - p^{-se})^{a_e} and its tail bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaTruncation {
    pub p: u64,
    pub s: u32,
    pub r: usize,
    /// Absolute dimension used for the bound.
    pub n: usize,
    #[serde(skip)]
    pub value: BigRational,
    #[serde(skip)]
    pub error_bound: BigRational,
    #[serde(skip)]
    pub c0: BigRational,
    #[serde(serialize_with = "serialize_big_list")]
    pub a_e: Vec<BigUint>,
}

fn serialize_big_list<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl ZetaTruncation {
    pub fn value_f64(&self) -> f64 {
        ratio_f64(&self.value)
    }

    pub fn error_f64(&self) -> f64 {
        ratio_f64(&self.error_bound)
    }

    pub fn value_parts(&self) -> (String, String) {
        rational_to_strings(&self.value)
    }

    pub fn error_parts(&self) -> (String, String) {
        rational_to_strings(&self.error_bound)
    }
}

pub fn ratio_f64(v: &BigRational) -> f64 {
    // scale to keep both parts in f64 range
    let nb = v.numer().bits() as i64;
    let db = v.denom().bits() as i64;
    let shift = (nb.max(db) - 1000).max(0) as usize;
    let num = (v.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let den = (v.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    if den == 0.0 {
        // the value is tiny compared with the shift; fall back to logarithms
        let ln = |x: &BigInt| x.bits() as f64 * std::f64::consts::LN_2;
        return (ln(v.numer()) - ln(v.denom())).exp();
    }
    num / den
}

/// Tail bound 4 c0 p^{-(s-n+1)(r+1)} for a variety with c0 p^{(n-1)e} point
/// bound; equals 4 c0 p^{-2(r+1)} at s = n+1.
pub fn truncation_bound(c0: &BigRational, p: u64, s: u32, n: usize, r: usize) -> BigRational {
    let gap = s as usize + 1 - n;
    let den = BigInt::from(p).pow((gap * (r + 1)) as u32);
    c0 * BigRational::new(BigInt::from(4), den)
}

/// prod_{e <= r} (1 - p^{-se})^{a_e} for closed-point counts `a`, exactly.
pub fn truncated_product(a: &[BigUint], p: u64, s: u32, r: usize) -> Result<BigRational> {
    let mut bits = 0f64;
    for (i, ae) in a.iter().take(r).enumerate() {
        let e = (i + 1) as f64;
        bits += ae.to_f64().unwrap_or(f64::INFINITY) * s as f64 * e * (p as f64).log2();
    }
    if bits > MAX_PRODUCT_BITS as f64 {
        return Err(Error::BudgetExceeded(format!(
            "exact product to depth {r} at p = {p} needs ~{bits:.0} bits"
        )));
    }
    let pb = BigInt::from(p);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (i, ae) in a.iter().take(r).enumerate() {
        let e = (i + 1) as u32;
        let k = ae.to_u32().expect("bounded by the bit budget");
        if k == 0 {
            continue;
        }
        let q = pb.pow(s * e);
        num *= (&q - 1u32).pow(k);
        den *= q.pow(k);
    }
    // numerator factors are prime to p, so the fraction is already reduced
    Ok(BigRational::new_raw(num, den))
}

fn valuation(mut x: BigInt, l: u64) -> u64 {
    let lb = BigInt::from(l);
    let mut v = 0;
    while !x.is_zero() {
        let (q, r) = x.div_rem(&lb);
        if !r.is_zero() {
            break;
        }
        x = q;
        v += 1;
    }
    v
}

/// The product of local truncations in lowest terms. Each local value is
/// reduced with denominator p^k, so only primes in the list can cancel, and
/// their valuations in the numerators follow from the factors p^{se} - 1.
/// This avoids a gcd on numbers with millions of bits.
fn product_in_lowest_terms(locals: &[ZetaTruncation]) -> BigRational {
    let mut num = BigInt::one();
    for z in locals {
        num *= z.value.numer();
    }
    let mut den = BigInt::one();
    let mut divisor = BigInt::one();
    let mut shift = 0u64;
    for target in locals {
        let l = target.p;
        let v_den = point_weight(target);
        let mut v_num = 0u64;
        for z in locals.iter().filter(|z| z.p != l) {
            for (e, k) in truncated_counts(z) {
                let q = BigInt::from(z.p).pow(z.s * e) - 1u32;
                v_num += k * valuation(q, l);
            }
        }
        let m = v_num.min(v_den);
        if l == 2 {
            shift = m;
        } else {
            divisor *= BigInt::from(l).pow(m as u32);
        }
        den *= BigInt::from(l).pow((v_den - m) as u32);
    }
    num >>= shift as usize;
    if !divisor.is_one() {
        num /= divisor;
    }
    BigRational::new_raw(num, den)
}

/// (e, a_e) for the nonzero factors of a local truncation.
fn truncated_counts(z: &ZetaTruncation) -> impl Iterator<Item = (u32, u64)> + '_ {
    z.a_e.iter().take(z.r).enumerate().filter_map(|(i, ae)| {
        let k = ae.to_u64().expect("bounded by the bit budget");
        (k > 0).then_some((i as u32 + 1, k))
    })
}

/// The exponent k of the local denominator p^k = prod p^{s e a_e}.
fn point_weight(z: &ZetaTruncation) -> u64 {
    truncated_counts(z).map(|(e, k)| k * (z.s * e) as u64).sum()
}

/// Exact truncated inverse local zeta value at integer s for a fiber of
/// absolute dimension `n` (so the fiber has dimension n-1). Needs s >= n.
pub fn local_zeta_inverse(t: &PointCountTable, s: u32, r: usize, n: usize) -> Result<ZetaTruncation> {
    if n < 1 {
        return invalid("absolute dimension must be >= 1");
    }
    if (s as usize) < n {
        return invalid(format!("s = {s} is outside the convergence region (need s >= {n})"));
    }
    if r > t.depth() {
        return invalid(format!("r = {r} exceeds table depth {}", t.depth()));
    }
    let a = closed_point_counts(t)?;
    let value = truncated_product(&a, t.p, s, r)?;
    let c0 = c0_estimate(t, n)?;
    let error_bound = truncation_bound(&c0, t.p, s, n, r);
    Ok(ZetaTruncation {
        p: t.p,
        s,
        r,
        n,
        value,
        error_bound,
        c0,
        a_e: a,
    })
}

/// Product of local truncations over all primes <= R.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalZetaTruncation {
    pub s: u32,
    pub prime_bound: u64,
    pub value: BigRational,
    pub depths: Vec<(u64, usize)>,
    pub local_errors: BigRational,
    pub tail_error: BigRational,
    pub error_bound: BigRational,
    pub c0: BigRational,
}

/// prod_{p <= R} of the local truncations, with error
/// sum(local bounds) + 8 c0 value / R.
pub fn global_zeta_inverse(
    tables: &BTreeMap<u64, PointCountTable>,
    s: u32,
    prime_bound: u64,
    depth: impl Fn(u64) -> usize,
    n: usize,
) -> Result<GlobalZetaTruncation> {
    let primes = crate::ff::primes_up_to(prime_bound);
    if primes.is_empty() {
        return invalid("prime bound below 2");
    }
    let mut locals = Vec::with_capacity(primes.len());
    let mut local_errors = BigRational::zero();
    let mut c0 = BigRational::zero();
    let mut depths = Vec::new();
    for &p in &primes {
        let t = tables
            .get(&p)
            .ok_or_else(|| Error::InvalidInput(format!("no point-count table for p = {p}")))?;
        let r = depth(p).min(t.depth());
        let local = local_zeta_inverse(t, s, r, n)?;
        local_errors += &local.error_bound;
        if local.c0 > c0 {
            c0 = local.c0.clone();
        }
        depths.push((p, r));
        locals.push(local);
    }
    let value = product_in_lowest_terms(&locals);
    // value has huge terms at large R; an upper bound on it keeps the error small
    let scale = BigInt::one() << 64u32;
    let (q, rem) = (value.numer() * &scale).div_rem(value.denom());
    let value_up = BigRational::new(q + u32::from(!rem.is_zero()), scale);
    let tail_error = BigRational::from_integer(BigInt::from(8)) * &c0 * value_up
        / BigRational::from_integer(BigInt::from(prime_bound));
    Ok(GlobalZetaTruncation {
        s,
        prime_bound,
        error_bound: &local_errors + &tail_error,
        value,
        depths,
        local_errors,
        tail_error,
        c0,
    })
}

/// Tables for P^m over every prime <= R, at the default depth.
pub fn projective_tables(m: usize, prime_bound: u64) -> Result<BTreeMap<u64, PointCountTable>> {
    crate::ff::primes_up_to(prime_bound)
        .into_iter()
        .map(|p| Ok((p, PointCountTable::projective_space(p, m, default_depth(p))?)))
        .collect()
}

/// Tables for Spec Z (one closed point per fiber), depth `depth` everywhere.
pub fn spec_z_tables(prime_bound: u64, depth: usize) -> Result<BTreeMap<u64, PointCountTable>> {
    crate::ff::primes_up_to(prime_bound)
        .into_iter()
        .map(|p| Ok((p, PointCountTable::from_u64(p, &vec![1; depth])?)))
        .collect()
}

/// prod_{i=0..m} (1 - p^{i-s}), the exact inverse local zeta value of P^m.
pub fn projective_local_inverse(p: u64, m: usize, s: u32) -> BigRational {
    let mut v = BigRational::one();
    for i in 0..=m as u32 {
        let q = BigInt::from(p).pow(s - i);
        v *= BigRational::new(&q - 1u32, q);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn closed_point_count_examples() {
        let t = PointCountTable::from_u64(2, &[3, 5]).unwrap();
        assert_eq!(closed_point_counts(&t).unwrap(), vec![3u32.into(), 1u32.into()]);
        let t = PointCountTable::from_u64(2, &[3, 5, 9]).unwrap();
        let a: Vec<BigUint> = vec![3u32.into(), 1u32.into(), 2u32.into()];
        assert_eq!(closed_point_counts(&t).unwrap(), a);
        let t = PointCountTable::from_u64(2, &[7]).unwrap();
        assert_eq!(closed_point_counts(&t).unwrap(), vec![BigUint::from(7u32)]);
        let bad = PointCountTable::from_u64(2, &[3, 4]).unwrap();
        assert!(matches!(closed_point_counts(&bad), Err(Error::InconsistentTable(_))));
        let bad = PointCountTable::from_u64(2, &[5, 3]).unwrap();
        assert!(closed_point_counts(&bad).is_err());
    }

    #[test]
    fn c0_examples() {
        let p1 = PointCountTable::projective_space(2, 1, 6).unwrap();
        assert_eq!(c0_estimate(&p1, 2).unwrap(), q(3, 2));
        let empty = PointCountTable::from_u64(3, &[0, 0, 0]).unwrap();
        assert_eq!(c0_estimate(&empty, 2).unwrap(), q(0, 1));
        let p2 = PointCountTable::projective_space(3, 2, 4).unwrap();
        assert_eq!(c0_estimate(&p2, 3).unwrap(), q(13, 9));
    }

    #[test]
    fn local_examples() {
        let p1 = PointCountTable::projective_space(2, 1, 4).unwrap();
        assert_eq!(local_zeta_inverse(&p1, 2, 1, 2).unwrap().value, q(27, 64));
        assert_eq!(local_zeta_inverse(&p1, 2, 2, 2).unwrap().value, q(405, 1024));
        assert_eq!(local_zeta_inverse(&p1, 2, 0, 2).unwrap().value, q(1, 1));
        assert!(local_zeta_inverse(&p1, 2, 5, 2).is_err());
        assert!(local_zeta_inverse(&p1, 1, 1, 2).is_err());
        // 4 (3/2) 2^{-2*4} at s = n+1
        let t = local_zeta_inverse(&p1, 3, 3, 2).unwrap();
        assert_eq!(t.error_bound, q(6, 256));
    }

    #[test]
    fn cli_zeta_example() {
        let p1 = PointCountTable::projective_space(2, 1, 4).unwrap();
        let t = local_zeta_inverse(&p1, 2, 4, 2).unwrap();
        // (3/4)^3 (15/16) (63/64)^2 (255/256)^3
        let expected = q(27, 64) * q(15, 16) * q(63, 64).pow(2) * q(255, 256).pow(3);
        assert_eq!(t.value, expected);
    }

    #[test]
    fn global_product_matches_gcd_reduction() {
        for (m, bound, s) in [(1, 13, 2), (1, 30, 3), (2, 11, 3), (2, 7, 4)] {
            let tables = projective_tables(m, bound).unwrap();
            let g = global_zeta_inverse(&tables, s, bound, |_| 2, m + 1).unwrap();
            let mut naive = BigRational::one();
            for (p, t) in &tables {
                naive *= local_zeta_inverse(t, s, 2.min(t.depth()), m + 1).unwrap().value;
                assert!(g.depths.iter().any(|d| d.0 == *p));
            }
            assert_eq!(g.value, naive, "P^{m}, R={bound}, s={s}");
            assert!(g.value.numer().gcd(g.value.denom()).is_one());
        }
    }

    #[test]
    fn global_examples() {
        let tables = projective_tables(1, 7).unwrap();
        let g = global_zeta_inverse(&tables, 2, 2, |_| 1, 2).unwrap();
        assert_eq!(g.value, q(27, 64));
        let spec = spec_z_tables(1000, 12).unwrap();
        let g = global_zeta_inverse(&spec, 2, 1000, |_| 12, 1).unwrap();
        assert!((ratio_f64(&g.value) - 0.60800).abs() < 5e-5);
        assert!(global_zeta_inverse(&BTreeMap::new(), 2, 3, |_| 1, 2).is_err());
    }

    #[test]
    fn mobius_values() {
        let v: Vec<i64> = (1..=10).map(mobius).collect();
        assert_eq!(v, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    #[test]
    fn depth_defaults() {
        assert_eq!(default_depth(2), 10);
        assert_eq!(default_depth(31), 2);
        assert_eq!(default_depth(37), 1);
        assert_eq!(default_depth(2003), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mobius_round_trip(p in prop::sample::select(vec![2u64, 3, 5, 7]), m in 0usize..3, depth in 1usize..7) {
            let t = PointCountTable::projective_space(p, m, depth).unwrap();
            let a = closed_point_counts(&t).unwrap();
            for e in 1..=depth {
                let total: BigUint = (1..=e)
                    .filter(|f| e % f == 0)
                    .map(|f| BigUint::from(f) * &a[f - 1])
                    .sum();
                prop_assert_eq!(&total, &t.counts()[e - 1]);
            }
        }

        #[test]
        fn truncation_monotone(p in prop::sample::select(vec![2u64, 3, 5]), m in 0usize..3, r in 0usize..3) {
            let n = m + 1;
            let s = n as u32 + 1;
            let t = PointCountTable::projective_space(p, m, 5).unwrap();
            let lo = local_zeta_inverse(&t, s, r, n).unwrap();
            let hi = local_zeta_inverse(&t, s, r + 1, n).unwrap();
            prop_assert!(hi.value <= lo.value);
            prop_assert!(lo.value > BigRational::zero());
            let qv = BigInt::from(p).pow(s * (r as u32 + 1));
            let k = hi.a_e[r].to_u32().unwrap();
            let factor = BigRational::new(&qv - 1u32, qv).pow(k as i32);
            prop_assert_eq!(&hi.value, &(&lo.value * factor));
            // stays within the bound of the closed form
            let exact = projective_local_inverse(p, m, s);
            let gap = &lo.value - &exact;
            prop_assert!(gap >= BigRational::zero());
            prop_assert!(gap <= lo.error_bound);
        }
    }
}
