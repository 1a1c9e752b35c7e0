use std::collections::BTreeMap;

use num_bigint::{BigInt, RandBigInt};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::monic::{dedekind_with_disc, maximality_scan_with_primes, MonicPoly, Verdict};
use crate::error::{invalid, Error, Result};
use crate::fiber::{serialize_rational, DensityEstimate, EstimateMode, JetTable};
use crate::ff::primes_up_to;
use crate::geom::{Coefficient, ProjectiveScheme};
use crate::sampling;
use crate::zeta::{default_depth, global_zeta_inverse, spec_z_tables};

/// Largest prime used for the fiber cross-check unless configured.
pub const DEFAULT_CROSS_CHECK_BOUND: u64 = 13;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BswConfig {
    pub d: usize,
    /// Height bound R: |a_i| <= R^i.
    pub height_bound: u64,
    /// Trial-division bound T.
    pub trial_bound: u64,
    pub samples: u64,
    pub seed: u64,
    /// Cross-check Dedekind against the mod-p^2 point classification for
    /// p <= min(T, this); 0 disables it.
    pub cross_check_bound: u64,
}

impl BswConfig {
    pub fn new(d: usize, height_bound: u64, trial_bound: u64, samples: u64, seed: u64) -> Self {
        Self {
            d,
            height_bound,
            trial_bound,
            samples,
            seed,
            cross_check_bound: DEFAULT_CROSS_CHECK_BOUND,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerdictHistogram {
    pub maximal: u64,
    pub maximal_up_to_bound: u64,
    pub not_maximal: u64,
    pub degenerate: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BswReport {
    pub config: BswConfig,
    pub estimate: DensityEstimate,
    pub verdicts: VerdictHistogram,
    /// Samples found non-maximal at each prime.
    pub failures_by_prime: BTreeMap<u64, u64>,
    pub cross_check_primes: Vec<u64>,
    /// (polynomial, prime) pairs compared between Dedekind and the fiber
    /// classification; all agreed.
    pub cross_checked_pairs: u64,
    /// Truncated Euler product prod_{p <= T} (1 - p^{-2}) and its bounds.
    #[serde(serialize_with = "serialize_rational")]
    pub truncated_reference: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub tail_bound: BigRational,
    /// 1/zeta(2), the limit.
    pub limit: f64,
    /// mean - 1/zeta(2).
    pub bias_vs_limit: f64,
}

/// prod_{p <= T} (1 - p^{-2}) as a truncated global zeta value over Spec Z,
/// with its error bound (local truncations plus the 8 c0 / T tail).
pub fn euler_product_reference(trial_bound: u64) -> Result<(BigRational, BigRational)> {
    let tables = spec_z_tables(trial_bound, 10)?;
    let g = global_zeta_inverse(&tables, 2, trial_bound, default_depth, 1)?;
    Ok((g.value, g.error_bound))
}

const INV_ZETA2: f64 = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);

struct CrossCheck {
    tables: Vec<JetTable>,
}

impl CrossCheck {
    fn new(d: usize, bound: u64) -> Result<Self> {
        let p1 = ProjectiveScheme::projective_space(1, None)?;
        let tables = primes_up_to(bound)
            .into_iter()
            .map(|p| JetTable::up_to_degree(&p1, p, d, d))
            .collect::<Result<_>>()?;
        Ok(Self { tables })
    }

    fn primes(&self) -> Vec<u64> {
        self.tables.iter().map(|t| t.prime()).collect()
    }

    /// Compare at every prime; returns the number of pairs checked.
    fn check(&self, f: &MonicPoly, disc: &BigInt) -> Result<u64> {
        let full = f.full_coeffs();
        let mut c = vec![0u64; full.len()];
        for t in &self.tables {
            let p = t.prime();
            for (ck, a) in c.iter_mut().zip(&full) {
                *ck = a.residue(p * p);
            }
            let geometric = !t.has_singular_point(&c);
            let dedekind = dedekind_with_disc(f, p, disc)?;
            if geometric != dedekind {
                return Err(Error::Invariant(format!(
                    "{f} at p = {p}: Dedekind says {dedekind}, point classification says {geometric}"
                )));
            }
        }
        Ok(self.tables.len() as u64)
    }
}

#[derive(Default)]
struct Tally {
    hits: u64,
    hist: VerdictHistogram,
    failures: BTreeMap<u64, u64>,
    pairs: u64,
    error: Option<Error>,
}

impl sampling::Tally for Tally {
    fn merge(&mut self, o: Self) {
        self.hits += o.hits;
        self.hist.maximal += o.hist.maximal;
        self.hist.maximal_up_to_bound += o.hist.maximal_up_to_bound;
        self.hist.not_maximal += o.hist.not_maximal;
        self.hist.degenerate += o.hist.degenerate;
        for (p, k) in o.failures {
            *self.failures.entry(p).or_default() += k;
        }
        self.pairs += o.pairs;
        if self.error.is_none() {
            self.error = o.error;
        }
    }
}

impl Tally {
    fn record(&mut self, f: &MonicPoly, t: u64, primes: &[u64], cross: Option<&CrossCheck>) {
        let v = maximality_scan_with_primes(f, t, primes);
        match v.verdict {
            Verdict::MaximalUpTo(_) => {
                self.hits += 1;
                if v.unconditional {
                    self.hist.maximal += 1;
                } else {
                    self.hist.maximal_up_to_bound += 1;
                }
            }
            Verdict::NotMaximalAt(p) => {
                self.hist.not_maximal += 1;
                *self.failures.entry(p).or_default() += 1;
            }
            Verdict::DegenerateDiscriminantZero => self.hist.degenerate += 1,
        }
        if v.verdict == Verdict::DegenerateDiscriminantZero || self.error.is_some() {
            return;
        }
        if let Some(cross) = cross {
            match cross.check(f, &f.discriminant()) {
                Ok(k) => self.pairs += k,
                Err(e) => self.error = Some(e),
            }
        }
    }
}

fn validate(cfg: &BswConfig) -> Result<()> {
    if cfg.d < 2 {
        return invalid("d must be >= 2");
    }
    if cfg.samples == 0 {
        return invalid("samples must be positive");
    }
    if cfg.height_bound == 0 {
        return invalid("height bound must be positive");
    }
    if cfg.trial_bound < 2 {
        return invalid("trial bound must be >= 2");
    }
    Ok(())
}

fn finish(cfg: BswConfig, tally: Tally, estimate: DensityEstimate, cross: Option<&CrossCheck>) -> Result<BswReport> {
    if let Some(e) = tally.error {
        return Err(e);
    }
    let (reference, tail) = (estimate.reference_value.clone(), estimate.reference_error.clone());
    let mean = estimate.mean;
    Ok(BswReport {
        config: cfg,
        estimate,
        verdicts: tally.hist,
        failures_by_prime: tally.failures,
        cross_check_primes: cross.map(|c| c.primes()).unwrap_or_default(),
        cross_checked_pairs: tally.pairs,
        truncated_reference: reference,
        tail_bound: tail,
        limit: INV_ZETA2,
        bias_vs_limit: mean - INV_ZETA2,
    })
}

fn cross_check(cfg: &BswConfig) -> Result<Option<CrossCheck>> {
    let bound = cfg.cross_check_bound.min(cfg.trial_bound);
    if bound < 2 {
        return Ok(None);
    }
    CrossCheck::new(cfg.d, bound).map(Some)
}

/// A uniform monic polynomial with |a_i| <= R^i.
pub fn height_ball_sample<G: rand::Rng + ?Sized>(rng: &mut G, d: usize, height_bound: u64) -> MonicPoly {
    let r = BigInt::from(height_bound);
    let mut b = BigInt::from(1u32);
    let mut a = Vec::with_capacity(d);
    for _ in 0..d {
        b *= &r;
        a.push(rng.gen_bigint_range(&-&b, &(&b + 1u32)));
    }
    MonicPoly::new(a)
}

/// Sample monic degree-d polynomials uniformly from the height ball
/// |a_i| <= R^i and report the proportion whose order Z[x]/(f) is maximal at
/// every prime up to T.
pub fn bsw_experiment(d: usize, height_bound: u64, trial_bound: u64, samples: u64, seed: u64) -> Result<BswReport> {
    bsw_experiment_with(BswConfig::new(d, height_bound, trial_bound, samples, seed))
}

pub fn bsw_experiment_with(cfg: BswConfig) -> Result<BswReport> {
    validate(&cfg)?;
    let primes = primes_up_to(cfg.trial_bound);
    let cross = cross_check(&cfg)?;
    let tally: Tally = sampling::run(cfg.samples, cfg.seed, |rng, tally: &mut Tally| {
        let f = height_ball_sample(rng, cfg.d, cfg.height_bound);
        tally.record(&f, cfg.trial_bound, &primes, cross.as_ref());
    });
    let (reference, error) = euler_product_reference(cfg.trial_bound)?;
    let estimate = DensityEstimate::sampled(tally.hits, cfg.samples, cfg.seed, reference, error);
    finish(cfg, tally, estimate, cross.as_ref())
}

/// Every monic polynomial in the height ball, counted exactly.
pub fn bsw_exhaustive(d: usize, height_bound: u64, trial_bound: u64, cross_check_bound: u64) -> Result<BswReport> {
    let mut cfg = BswConfig::new(d, height_bound, trial_bound, 1, 0);
    cfg.cross_check_bound = cross_check_bound;
    validate(&cfg)?;
    let widths: Vec<u64> = (1..=d as u32)
        .map(|i| {
            height_bound
                .checked_pow(i)
                .and_then(|b| b.checked_mul(2))
                .map(|w| w + 1)
                .ok_or_else(|| Error::BudgetExceeded("height ball too large".into()))
        })
        .collect::<Result<_>>()?;
    let total = widths
        .iter()
        .try_fold(1u64, |acc, &w| acc.checked_mul(w))
        .filter(|&t| t <= crate::fiber::EXHAUSTIVE_BUDGET)
        .ok_or_else(|| Error::BudgetExceeded("height ball exceeds the exhaustive budget".into()))?;
    cfg.samples = total;
    let primes = primes_up_to(trial_bound);
    let cross = cross_check(&cfg)?;
    let tally = (0..total)
        .into_par_iter()
        .fold(Tally::default, |mut tally, mut idx| {
            let a: Vec<BigInt> = widths
                .iter()
                .map(|&w| {
                    let v = (idx % w) as i64 - (w / 2) as i64;
                    idx /= w;
                    BigInt::from(v)
                })
                .collect();
            tally.record(&MonicPoly::new(a), trial_bound, &primes, cross.as_ref());
            tally
        })
        .reduce(Tally::default, |mut a, b| {
            sampling::Tally::merge(&mut a, b);
            a
        });
    let (reference, error) = euler_product_reference(trial_bound)?;
    let estimate = DensityEstimate {
        mode: EstimateMode::Exact,
        hits: tally.hits,
        total,
        mean: tally.hits as f64 / total as f64,
        seed: None,
        ci_halfwidth: 0.0,
        reference_value: reference,
        reference_error: error,
        certificate: None,
        exact_equality: None,
        rescue_count: 0,
    };
    finish(cfg, tally, estimate, cross.as_ref())
}

/// Outcome of comparing Dedekind's criterion with the mod-p^2 classification
/// of the points of div(F) on P^1 over every prime up to a bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub polynomials: u64,
    pub pairs: u64,
    pub disagreements: u64,
    pub non_maximal_pairs: u64,
    pub first_disagreement: Option<String>,
}

/// Draw `count` seeded monic polynomials of degree d with |a_i| <= bound and
/// nonzero discriminant, and compare the two regularity tests at every
/// p <= prime_bound, over closed points of degree <= d.
pub fn dedekind_agreement(d: usize, coeff_bound: i64, count: u64, prime_bound: u64, seed: u64) -> Result<AgreementReport> {
    use rand::Rng;
    if d < 1 || coeff_bound < 0 {
        return invalid("need d >= 1 and a nonnegative bound");
    }
    let mut rng = sampling::chunk_rng(seed, 0);
    let mut polys = Vec::with_capacity(count as usize);
    while (polys.len() as u64) < count {
        let f = MonicPoly::from_i64(&(0..d).map(|_| rng.gen_range(-coeff_bound..=coeff_bound)).collect::<Vec<_>>());
        let disc = f.discriminant();
        if !Zero::is_zero(&disc) {
            polys.push((f, disc));
        }
    }
    let p1 = ProjectiveScheme::projective_space(1, None)?;
    let mut report = AgreementReport {
        polynomials: count,
        pairs: 0,
        disagreements: 0,
        non_maximal_pairs: 0,
        first_disagreement: None,
    };
    for p in primes_up_to(prime_bound) {
        let table = JetTable::up_to_degree(&p1, p, d, d)?;
        let outcomes: Vec<(bool, bool)> = polys
            .par_iter()
            .map(|(f, disc)| {
                let c: Vec<u64> = f.full_coeffs().iter().map(|a| a.residue(p * p)).collect();
                Ok((dedekind_with_disc(f, p, disc)?, !table.has_singular_point(&c)))
            })
            .collect::<Result<_>>()?;
        for ((f, _), (ded, geo)) in polys.iter().zip(outcomes) {
            report.pairs += 1;
            report.non_maximal_pairs += (!ded) as u64;
            if ded != geo {
                report.disagreements += 1;
                report
                    .first_disagreement
                    .get_or_insert_with(|| format!("{f} at p = {p}: Dedekind {ded}, points {geo}"));
            }
        }
    }
    Ok(report)
}
