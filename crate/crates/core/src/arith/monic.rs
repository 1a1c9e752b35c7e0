use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::section::{BoxBound, IntegerSection};
use crate::error::{invalid, Result};
use crate::ff::{is_prime, poly, primes_up_to};
use crate::geom::HomogeneousForm;

/// x^d + a_1 x^{d-1} + ... + a_d.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonicPoly {
    a: Vec<BigInt>,
}

impl MonicPoly {
    /// From (a_1, ..., a_d).
    pub fn new(a: Vec<BigInt>) -> Self {
        Self { a }
    }

    pub fn from_i64(a: &[i64]) -> Self {
        Self::new(a.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn degree(&self) -> usize {
        self.a.len()
    }

    /// (a_1, ..., a_d).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.a
    }

    /// All coefficients, leading 1 first.
    pub fn full_coeffs(&self) -> Vec<BigInt> {
        std::iter::once(BigInt::one()).chain(self.a.iter().cloned()).collect()
    }

    /// Reduction mod p, constant term first.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let mut out: Vec<u64> = self
            .full_coeffs()
            .iter()
            .rev()
            .map(|c| c.mod_floor(&pb).to_u64().expect("reduced below p"))
            .collect();
        poly::trim(&mut out);
        out
    }

    /// Exact test H(f) <= R, i.e. |a_i| <= R^i for every i.
    pub fn height_at_most(&self, bound: &BigRational) -> bool {
        if bound.is_negative() {
            return false;
        }
        let (num, den) = (bound.numer(), bound.denom());
        self.a.iter().enumerate().all(|(i, ai)| {
            let k = i as u32 + 1;
            ai.abs() * den.pow(k) <= num.pow(k)
        })
    }

    /// max |a_i|^{1/i}, for display.
    pub fn height(&self) -> f64 {
        self.a
            .iter()
            .enumerate()
            .map(|(i, ai)| ai.abs().to_f64().unwrap_or(f64::INFINITY).powf(1.0 / (i as f64 + 1.0)))
            .fold(0.0, f64::max)
    }

    /// (-1)^{d(d-1)/2} Res(f, f').
    pub fn discriminant(&self) -> BigInt {
        let d = self.degree();
        if d == 0 {
            return BigInt::one();
        }
        let f = self.full_coeffs();
        let df: Vec<BigInt> = f[..d]
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigInt::from(d - i))
            .collect();
        let res = sylvester_resultant(&f, &df);
        if (d * (d - 1) / 2) % 2 == 1 {
            -res
        } else {
            res
        }
    }

    /// F(X, Y) = X^d + a_1 X^{d-1} Y + ... + a_d Y^d on P^1, with the height
    /// box |a_i| <= R^i for the smallest integer R containing f.
    pub fn homogenize(&self) -> IntegerSection {
        let form = HomogeneousForm::new(1, self.degree(), self.full_coeffs())
            .expect("d + 1 coefficients");
        let r = self
            .a
            .iter()
            .enumerate()
            .map(|(i, ai)| {
                let k = i as u32 + 1;
                let mut r = ai.abs().nth_root(k);
                if r.pow(k) < ai.abs() {
                    r += 1;
                }
                r
            })
            .max()
            .unwrap_or_else(BigInt::zero);
        IntegerSection::new(form, BoxBound::Height(r)).expect("bound chosen to fit")
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        write!(f, "x^{d}")?;
        for (i, a) in self.a.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let k = d - i - 1;
            let sign = if a.is_negative() { '-' } else { '+' };
            let mag = a.abs();
            let coef = if mag.is_one() && k > 0 { String::new() } else { mag.to_string() };
            let star = if !coef.is_empty() && k > 0 { "*" } else { "" };
            match k {
                0 => write!(f, "{sign}{mag}")?,
                1 => write!(f, "{sign}{coef}{star}x")?,
                _ => write!(f, "{sign}{coef}{star}x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Resultant of two polynomials (leading coefficient first) via a
/// fraction-free Bareiss determinant of the Sylvester matrix.
pub fn sylvester_resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut a = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().enumerate() {
            a[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().enumerate() {
            a[n + i][i + j] = c.clone();
        }
    }
    bareiss_determinant(a)
}

pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Dedekind's criterion: is Z[x]/(f) maximal at p?
pub fn dedekind_p_maximal(f: &MonicPoly, p: u64) -> Result<bool> {
    let disc = f.discriminant();
    if disc.is_zero() {
        return invalid(format!("{f} has discriminant 0"));
    }
    dedekind_with_disc(f, p, &disc)
}

pub(crate) fn dedekind_with_disc(f: &MonicPoly, p: u64, disc: &BigInt) -> Result<bool> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if !(disc % BigInt::from(p * p)).is_zero() {
        return Ok(true);
    }
    let fbar = f.reduce_mod(p);
    let g = poly::radical(&fbar, p);
    let h = poly::divrem(&fbar, &g, p).0;
    // F1 = (g h - f) / p over Z, with g, h lifted to [0, p)
    let gh = int_mul(&g, &h);
    let full: Vec<BigInt> = f.full_coeffs().into_iter().rev().collect();
    let pb = BigInt::from(p);
    let len = gh.len().max(full.len());
    let mut f1 = Vec::with_capacity(len);
    for i in 0..len {
        let a = gh.get(i).cloned().unwrap_or_default();
        let b = full.get(i).cloned().unwrap_or_default();
        let diff = a - b;
        debug_assert!((&diff % &pb).is_zero());
        let q = diff / &pb;
        f1.push(q.mod_floor(&pb).to_u64().expect("reduced below p"));
    }
    poly::trim(&mut f1);
    let c = poly::gcd(&poly::gcd(&f1, &g, p), &h, p);
    Ok(poly::degree(&c) == Some(0))
}

fn int_mul(f: &[u64], g: &[u64]) -> Vec<BigInt> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            out[i + j] += BigInt::from(a) * BigInt::from(b);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Maximal at every prime up to the bound (and everywhere when
    /// `unconditional`).
    MaximalUpTo(u64),
    NotMaximalAt(u64),
    DegenerateDiscriminantZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalityVerdict {
    pub verdict: Verdict,
    /// The discriminant was factored completely, so the verdict holds at
    /// every prime.
    pub unconditional: bool,
    pub checked_primes: String,
}

impl MaximalityVerdict {
    /// Maximal at all examined primes.
    pub fn is_maximal(&self) -> bool {
        matches!(self.verdict, Verdict::MaximalUpTo(_))
    }
}

/// Trial-divide disc(f) by the primes up to `trial_bound` and run Dedekind
/// wherever p^2 | disc. The cofactor left over is certified squarefree when
/// it is 1, below T^2 (a prime), or below T^3 and not a square; a cofactor
/// q^2 with q prime is checked at q.
pub fn maximality_scan(f: &MonicPoly, trial_bound: u64) -> MaximalityVerdict {
    maximality_scan_with_primes(f, trial_bound, &primes_up_to(trial_bound))
}

pub(crate) fn maximality_scan_with_primes(f: &MonicPoly, t: u64, primes: &[u64]) -> MaximalityVerdict {
    let disc = f.discriminant();
    if disc.is_zero() {
        return MaximalityVerdict {
            verdict: Verdict::DegenerateDiscriminantZero,
            unconditional: true,
            checked_primes: "none".into(),
        };
    }
    let mut cof = disc.abs();
    for &p in primes {
        let pb = BigInt::from(p);
        let mut k = 0;
        while (&cof % &pb).is_zero() {
            cof /= &pb;
            k += 1;
        }
        if k >= 2 && !dedekind_with_disc(f, p, &disc).expect("p is prime") {
            return MaximalityVerdict {
                verdict: Verdict::NotMaximalAt(p),
                unconditional: true,
                checked_primes: format!("p <= {t}"),
            };
        }
    }
    let tb = BigInt::from(t);
    let t2 = &tb * &tb;
    let mut unconditional = cof.is_one() || cof < t2 || (cof < &t2 * &tb && !is_square(&cof));
    if !unconditional && cof < &t2 * &t2 && is_square(&cof) {
        // q^2 with q prime (q > T and q^2 < T^4 leave no room for more factors)
        let q = cof.sqrt();
        if let Some(q) = q.to_u64().filter(|&q| is_prime(q)) {
            if !dedekind_with_disc(f, q, &disc).expect("q is prime") {
                return MaximalityVerdict {
                    verdict: Verdict::NotMaximalAt(q),
                    unconditional: true,
                    checked_primes: format!("p <= {t} and {q}"),
                };
            }
            unconditional = true;
        }
    }
    MaximalityVerdict {
        verdict: Verdict::MaximalUpTo(t),
        unconditional,
        checked_primes: if unconditional {
            "all".into()
        } else {
            format!("p <= {t}")
        },
    }
}

fn is_square(n: &BigInt) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(MonicPoly::from_i64(&[-1, -1]).discriminant(), BigInt::from(5));
        assert_eq!(MonicPoly::from_i64(&[0, -5]).discriminant(), BigInt::from(20));
        assert_eq!(MonicPoly::from_i64(&[0, 0]).discriminant(), BigInt::zero());
        // x^3 + a x + b: -4a^3 - 27b^2
        assert_eq!(MonicPoly::from_i64(&[0, 2, 3]).discriminant(), BigInt::from(-32 - 243));
        // x^3 - x = x(x-1)(x+1): product of squared root differences 1*1*4
        assert_eq!(MonicPoly::from_i64(&[0, -1, 0]).discriminant(), BigInt::from(4));
    }

    #[test]
    fn quadratic_discriminant_matches_closed_form() {
        for b in -6i64..=6 {
            for c in -6i64..=6 {
                let f = MonicPoly::from_i64(&[b, c]);
                assert_eq!(f.discriminant(), BigInt::from(b * b - 4 * c));
            }
        }
    }

    #[test]
    fn height_examples() {
        let f = MonicPoly::from_i64(&[0, 4]);
        assert!(f.height_at_most(&q(2, 1)));
        assert!(!f.height_at_most(&q(19, 10)));
        assert_eq!(MonicPoly::from_i64(&[0, 0, 0]).height(), 0.0);
        let f = MonicPoly::from_i64(&[3, 9]);
        assert!((f.height() - 3.0).abs() < 1e-12);
        assert!(f.height_at_most(&q(3, 1)));
        assert!(!f.height_at_most(&q(299, 100)));
    }

    #[test]
    fn homogenize_examples() {
        assert_eq!(MonicPoly::from_i64(&[-1, -1]).homogenize().form().to_string(), "X^2-X*Y-Y^2");
        assert_eq!(MonicPoly::from_i64(&[0, 0]).homogenize().form().to_string(), "X^2");
        assert_eq!(MonicPoly::from_i64(&[0, 0, 2]).homogenize().form().to_string(), "X^3+2*Y^3");
    }

    #[test]
    fn dedekind_examples() {
        assert!(!dedekind_p_maximal(&MonicPoly::from_i64(&[0, -5]), 2).unwrap());
        assert!(dedekind_p_maximal(&MonicPoly::from_i64(&[0, -5]), 5).unwrap());
        for p in [2, 3, 5, 7, 11] {
            assert!(dedekind_p_maximal(&MonicPoly::from_i64(&[-1, -1]), p).unwrap());
        }
        assert!(dedekind_p_maximal(&MonicPoly::from_i64(&[0, 1]), 2).unwrap());
        // x^2 + 3 is not maximal at 2: (1 + sqrt(-3))/2 is integral
        assert!(!dedekind_p_maximal(&MonicPoly::from_i64(&[0, 3]), 2).unwrap());
        // x^2 - 8 has index 2
        assert!(!dedekind_p_maximal(&MonicPoly::from_i64(&[0, -8]), 2).unwrap());
        assert!(dedekind_p_maximal(&MonicPoly::from_i64(&[0, 0]), 2).is_err());
    }

    #[test]
    fn scan_examples() {
        let v = maximality_scan(&MonicPoly::from_i64(&[0, -5]), 10);
        assert_eq!(v.verdict, Verdict::NotMaximalAt(2));
        let v = maximality_scan(&MonicPoly::from_i64(&[-1, -1]), 10);
        assert_eq!(v.verdict, Verdict::MaximalUpTo(10));
        assert!(v.unconditional);
        let v = maximality_scan(&MonicPoly::from_i64(&[0, 0]), 10);
        assert_eq!(v.verdict, Verdict::DegenerateDiscriminantZero);
        // disc = -4 * 13^2: not maximal at 13, found past the trial bound
        let v = maximality_scan(&MonicPoly::from_i64(&[0, 169]), 10);
        assert_eq!(v.verdict, Verdict::NotMaximalAt(13));
        // Eisenstein at 2; the cofactor 101*103*107 is past T^3 and stays uncertified
        let v = maximality_scan(&MonicPoly::from_i64(&[0, -2 * 101 * 103 * 107]), 10);
        assert_eq!(v.verdict, Verdict::MaximalUpTo(10));
        assert!(!v.unconditional);
    }

    #[test]
    fn display() {
        assert_eq!(MonicPoly::from_i64(&[-1, -1]).to_string(), "x^2-x-1");
        assert_eq!(MonicPoly::from_i64(&[0, 3, -2]).to_string(), "x^3+3*x-2");
    }
}
