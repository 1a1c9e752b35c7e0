use serde::Serialize;

use super::{c0_estimate, mobius, ratio_f64, PointCountTable};
use crate::error::{invalid, Result};
use crate::ff::primes_up_to;

/// One inequality evaluated at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub check: &'static str,
    /// Dimension of the P^m fiber, if the check concerns one.
    pub fiber_dim: Option<usize>,
    pub p: u64,
    pub e: Option<usize>,
    pub r: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
    pub violations: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Riemann zeta at an integer k >= 2 (Euler-Maclaurin, double precision).
pub fn riemann_zeta(k: u32) -> f64 {
    assert!(k >= 2, "zeta(k) diverges for k < 2");
    let n = 40.0f64;
    let kf = k as f64;
    let mut sum: f64 = (1..40).map(|j| (j as f64).powf(-kf)).sum();
    sum += n.powf(1.0 - kf) / (kf - 1.0) + 0.5 * n.powf(-kf);
    // B_{2i} / (2i)!
    let coeffs = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0];
    let mut rising = kf; // k (k+1) ... (k+2i-2)
    for (i, c) in coeffs.iter().enumerate() {
        let j = 2 * i as i32 + 1;
        sum += c * rising * n.powf(-kf - j as f64);
        rising *= (kf + j as f64) * (kf + j as f64 + 1.0);
    }
    sum
}

/// -ln(1 - x) for small x > 0.
fn neg_log1m(x: f64) -> f64 {
    -(-x).ln_1p()
}

/// N_e for P^m over F_p in floating point.
fn pm_count(p: u64, m: usize, e: usize) -> f64 {
    (0..=m).map(|i| (p as f64).powi((i * e) as i32)).sum()
}

/// a_e * -ln(1 - p^{-se}) for P^m, combined inside the Möbius sum so no
/// huge intermediate appears.
fn tail_term(p: u64, m: usize, s: u32, e: usize) -> f64 {
    let g = neg_log1m((p as f64).powi(-((s as usize * e) as i32)));
    let mut acc = 0.0;
    for f in (1..=e).filter(|f| e % f == 0) {
        let mu = mobius((e / f) as u64);
        if mu != 0 {
            acc += mu as f64 * pm_count(p, m, f) * g;
        }
    }
    acc / e as f64
}

/// Evaluates the logarithm inequality, the fiber bound on log zeta, the
/// truncation bound and the bound on the Euler product over p <= R, for
/// P^m fibers (m in `fiber_dims`) over every prime in `primes`, with
/// e <= `e_max` and r <= `r_max`. The exponent is s = m+2 throughout
/// (absolute dimension plus one). c0 is taken from counts up to `e_max`.
pub fn verify_section3_bounds(
    primes: &[u64],
    e_max: usize,
    r_max: usize,
    fiber_dims: &[usize],
) -> Result<BoundReport> {
    if primes.is_empty() || e_max == 0 {
        return invalid("empty grid");
    }
    let mut checks = Vec::new();
    for &p in primes {
        for e in 1..=e_max {
            let x = (p as f64).powi(-(e as i32));
            let lhs = neg_log1m(x);
            let rhs = 2.0 * x;
            checks.push(BoundCheck {
                check: "log",
                fiber_dim: None,
                p,
                e: Some(e),
                r: None,
                lhs,
                rhs,
                holds: lhs < rhs,
            });
        }
    }
    for &m in fiber_dims {
        let n = m + 1;
        let s = n as u32 + 1;
        let c0_at = |p: u64| -> Result<f64> {
            let t = PointCountTable::projective_space(p, m, e_max)?;
            Ok(ratio_f64(&c0_estimate(&t, n)?))
        };
        for &p in primes {
            let c0 = c0_at(p)?;
            let log_zeta: f64 = (0..=m)
                .map(|i| neg_log1m((p as f64).powi(i as i32 - s as i32)))
                .sum();
            let rhs = 4.0 * c0 * (p as f64).powi(-2);
            checks.push(BoundCheck {
                check: "fiber-log-zeta",
                fiber_dim: Some(m),
                p,
                e: None,
                r: None,
                lhs: log_zeta,
                rhs,
                holds: log_zeta > 0.0 && log_zeta <= rhs,
            });
            let log_closed = -log_zeta;
            for r in 1..=r_max {
                let log_trunc: f64 = -(1..=r).map(|e| tail_term(p, m, s, e)).sum::<f64>();
                // the part of the product beyond degree r, summed until negligible
                let mut tail = 0.0;
                for e in r + 1..r + 200 {
                    let t = tail_term(p, m, s, e);
                    tail += t;
                    if t < tail * 1e-18 {
                        break;
                    }
                }
                debug_assert!((log_trunc - tail - log_closed).abs() < 1e-12);
                let gap = -log_trunc.exp() * (-tail).exp_m1();
                let rhs = 4.0 * c0 * (p as f64).powi(-2 * (r as i32 + 1));
                checks.push(BoundCheck {
                    check: "truncation",
                    fiber_dim: Some(m),
                    p,
                    e: None,
                    r: Some(r),
                    lhs: gap,
                    rhs,
                    holds: gap >= 0.0 && gap <= rhs,
                });
            }
        }
        // Euler product over p <= R against zeta_X(s)^{-1} = prod_i zeta(s-i)^{-1}
        let log_full: f64 = -(0..=m).map(|i| riemann_zeta(s - i as u32).ln()).sum::<f64>();
        for &bound in primes {
            let mut log_partial = 0.0;
            let mut c0 = 0.0f64;
            for q in primes_up_to(bound) {
                log_partial -= (0..=m)
                    .map(|i| neg_log1m((q as f64).powi(i as i32 - s as i32)))
                    .sum::<f64>();
                c0 = c0.max(c0_at(q)?);
            }
            let gap = log_partial.exp() * -(log_full - log_partial).exp_m1();
            let rhs = 8.0 * c0 * log_full.exp() / bound as f64;
            checks.push(BoundCheck {
                check: "global",
                fiber_dim: Some(m),
                p: bound,
                e: None,
                r: None,
                lhs: gap,
                rhs,
                holds: gap >= 0.0 && gap <= rhs,
            });
        }
    }
    let violations = checks.iter().filter(|c| !c.holds).cloned().collect();
    Ok(BoundReport { checks, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_values() {
        assert!((riemann_zeta(2) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        assert!((riemann_zeta(4) - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((riemann_zeta(3) - 1.202_056_903_159_594_2).abs() < 1e-14);
    }

    #[test]
    fn log_examples() {
        let rep = verify_section3_bounds(&[2, 5], 3, 1, &[]).unwrap();
        let at = |p, e| rep.checks.iter().find(|c| c.p == p && c.e == Some(e)).unwrap().clone();
        let c = at(2, 1);
        assert!((c.lhs - 0.693_147).abs() < 1e-6 && c.rhs == 1.0 && c.holds);
        let c = at(5, 3);
        assert!((c.lhs - 0.008_032).abs() < 1e-6 && (c.rhs - 0.016).abs() < 1e-12);
    }

    #[test]
    fn truncation_gap_matches_exact() {
        // P^1 over F_2 at s = 3, r = 2: exact rationals against the float gap
        let t = PointCountTable::projective_space(2, 1, 2).unwrap();
        let trunc = super::super::local_zeta_inverse(&t, 3, 2, 2).unwrap();
        let exact = super::super::projective_local_inverse(2, 1, 3);
        let gap = ratio_f64(&(&trunc.value - &exact));
        let rep = verify_section3_bounds(&[2], 2, 2, &[1]).unwrap();
        let c = rep
            .checks
            .iter()
            .find(|c| c.check == "truncation" && c.r == Some(2))
            .unwrap();
        assert!((c.lhs - gap).abs() < 1e-15 * gap.max(1e-300) + 1e-18);
    }

    #[test]
    fn full_grid_passes() {
        let rep = verify_section3_bounds(&[2, 3, 5, 7, 11], 10, 10, &[1, 2]).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
    }
}
