use std::fmt;

use super::poly;
use super::{is_prime, Field, Ring};
use crate::error::{invalid, Error, Result};

/// Largest supported field size p^e.
pub const MAX_FIELD_SIZE: u64 = 1 << 24;

/// Upper bound on the extension degree (reached only for p = 2).
pub const MAX_DEGREE: usize = 24;

/// An element of F_{p^e}, packed as the integer sum c_i p^i of its
/// coefficients in the power basis 1, T, ..., T^{e-1}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(pub u64);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({})", self.0)
    }
}

/// The field F_p[T]/(m(T)) with m the lexicographically smallest monic
/// irreducible of degree e.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtField {
    p: u64,
    e: usize,
    modulus: Vec<u64>,
    size: u64,
    /// Column k holds the coordinates of (T^k)^p.
    frobenius: Vec<Vec<u64>>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.e, self.modulus)
    }
}

/// Lexicographically smallest monic irreducible of degree `e` over F_p, with
/// coefficients compared from the constant term up.
pub fn find_irreducible(p: u64, e: usize) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if e == 0 {
        return invalid("extension degree must be >= 1");
    }
    check_size(p, e)?;
    let mut coeffs = vec![0u64; e];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return Ok(f);
        }
        // Odometer with the constant term as the most significant digit.
        let mut i = e;
        loop {
            if i == 0 {
                return Err(Error::Invariant(format!(
                    "no irreducible of degree {e} over F_{p}"
                )));
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

fn check_size(p: u64, e: usize) -> Result<u64> {
    let mut size: u64 = 1;
    for _ in 0..e {
        size = size
            .checked_mul(p)
            .filter(|&s| s <= MAX_FIELD_SIZE)
            .ok_or_else(|| Error::BudgetExceeded(format!("{p}^{e} exceeds 2^24")))?;
    }
    Ok(size)
}

impl ExtField {
    pub fn new(p: u64, e: usize) -> Result<Self> {
        let modulus = find_irreducible(p, e)?;
        Self::with_modulus(p, modulus)
    }

    /// Build from an explicit monic modulus, which must be irreducible.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        let e = poly::degree(&modulus).unwrap_or(0);
        if e == 0 || modulus[e] != 1 || modulus.len() != e + 1 {
            return invalid("modulus must be monic of degree >= 1");
        }
        let size = check_size(p, e)?;
        if !poly::is_irreducible(&modulus, p) {
            return invalid(format!("{modulus:?} is reducible over F_{p}"));
        }
        let mut field = Self {
            p,
            e,
            modulus,
            size,
            frobenius: Vec::new(),
        };
        field.frobenius = (0..e)
            .map(|k| {
                let t_k = field.monomial(k);
                field.unpack(field.pow(t_k, p)).to_vec()
            })
            .collect();
        Ok(field)
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// T^k reduced into the field.
    pub fn monomial(&self, k: usize) -> Fq {
        let t = if self.e == 1 {
            // T = -m_0 in F_p[T]/(T + m_0)
            Fq((self.p - self.modulus[0]) % self.p)
        } else {
            Fq(self.p)
        };
        self.pow(t, k as u64)
    }

    /// Power-basis coordinates, padded to `MAX_DEGREE`.
    pub fn unpack(&self, a: Fq) -> [u64; MAX_DEGREE] {
        let mut out = [0u64; MAX_DEGREE];
        let mut v = a.0;
        for c in out.iter_mut().take(self.e) {
            *c = v % self.p;
            v /= self.p;
        }
        out
    }

    pub fn coords(&self, a: Fq) -> Vec<u64> {
        self.unpack(a)[..self.e].to_vec()
    }

    pub fn pack(&self, coords: &[u64]) -> Fq {
        let mut v = 0u64;
        for &c in coords[..self.e].iter().rev() {
            v = v * self.p + c % self.p;
        }
        Fq(v)
    }

    /// Every element, in packed order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.size).map(Fq)
    }

    /// The embedded copy of F_p.
    pub fn is_in_prime_field(&self, a: Fq) -> bool {
        a.0 < self.p
    }

    /// x -> x^p, applied as a precomputed F_p-linear map.
    pub fn frobenius(&self, a: Fq) -> Fq {
        if self.e == 1 {
            return a;
        }
        let c = self.unpack(a);
        let mut out = [0u64; MAX_DEGREE];
        for (k, col) in self.frobenius.iter().enumerate() {
            if c[k] == 0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(col) {
                *o = (*o + c[k] * v) % self.p;
            }
        }
        self.pack(&out)
    }

    /// x -> x^{p^k}.
    pub fn frobenius_pow(&self, a: Fq, k: usize) -> Fq {
        (0..k % self.e.max(1)).fold(a, |x, _| self.frobenius(x))
    }

    /// Scalar multiple by an element of F_p.
    pub fn scale(&self, a: Fq, s: u64) -> Fq {
        let s = s % self.p;
        if self.e == 1 {
            return Fq(a.0 * s % self.p);
        }
        let mut c = self.unpack(a);
        for v in c.iter_mut().take(self.e) {
            *v = *v * s % self.p;
        }
        self.pack(&c)
    }
}

impl Ring for ExtField {
    type Elem = Fq;

    fn zero(&self) -> Fq {
        Fq(0)
    }

    fn one(&self) -> Fq {
        Fq(1)
    }

    fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.e == 1 {
            let s = a.0 + b.0;
            return Fq(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return Fq(a.0 ^ b.0);
        }
        let (x, y) = (self.unpack(a), self.unpack(b));
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..self.e {
            let s = x[i] + y[i];
            out[i] = if s >= self.p { s - self.p } else { s };
        }
        self.pack(&out)
    }

    fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    fn neg(&self, a: Fq) -> Fq {
        if self.p == 2 {
            return a;
        }
        if self.e == 1 {
            return Fq((self.p - a.0) % self.p);
        }
        let mut x = self.unpack(a);
        for v in x.iter_mut().take(self.e) {
            *v = (self.p - *v) % self.p;
        }
        self.pack(&x)
    }

    fn mul(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p;
        if self.e == 1 {
            return Fq(poly::mul_mod(a.0, b.0, p));
        }
        let (x, y) = (self.unpack(a), self.unpack(b));
        let e = self.e;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            if x[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..e {
                let m = self.modulus[j];
                if m != 0 {
                    prod[k - e + j] = (prod[k - e + j] + (p - c) * m) % p;
                }
            }
        }
        self.pack(&prod[..e])
    }

    fn from_int(&self, v: i64) -> Fq {
        Fq(super::residue(v, self.p))
    }

    fn characteristic(&self) -> u64 {
        self.p
    }
}

impl Field for ExtField {
    fn inv(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            None
        } else {
            Some(self.pow(a, self.size - 2))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force irreducibility: no monic factor of degree 1..=e/2.
    fn irreducible_by_search(f: &[u64], p: u64) -> bool {
        let e = f.len() - 1;
        for k in 1..=e / 2 {
            let count = p.pow(k as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(k + 1);
                let mut v = idx;
                for _ in 0..k {
                    g.push(v % p);
                    v /= p;
                }
                g.push(1);
                if poly::rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn find_irreducible_examples() {
        assert_eq!(find_irreducible(2, 1).unwrap(), vec![0, 1]);
        assert_eq!(find_irreducible(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(find_irreducible(5, 1).unwrap(), vec![0, 1]);
        assert!(find_irreducible(4, 2).is_err());
        assert!(matches!(
            find_irreducible(2, 25),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn find_irreducible_is_smallest_and_irreducible() {
        for &(p, e) in &[(2u64, 3usize), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2), (2, 6)] {
            let f = find_irreducible(p, e).unwrap();
            assert!(irreducible_by_search(&f, p), "{p} {e}");
            // every candidate ordered before f is reducible
            let rank = |g: &[u64]| g[..e].iter().fold(0u64, |acc, &c| acc * p + c);
            let target = rank(&f);
            for idx in 0..target {
                let mut g = vec![0u64; e];
                let mut v = idx;
                for i in (0..e).rev() {
                    g[i] = v % p;
                    v /= p;
                }
                g.push(1);
                assert!(!irreducible_by_search(&g, p));
            }
        }
    }

    #[test]
    fn frobenius_on_f4() {
        let f4 = ExtField::new(2, 2).unwrap();
        let t = f4.monomial(1);
        assert_eq!(f4.frobenius(Fq(0)), Fq(0));
        assert_eq!(f4.frobenius(Fq(1)), Fq(1));
        // T^2 = T + 1
        assert_eq!(f4.frobenius(t), f4.add(t, f4.one()));
    }

    #[test]
    fn field_identity_exhaustive() {
        for &(p, e) in &[(2u64, 1usize), (2, 4), (3, 3), (5, 2), (7, 2), (2, 8), (13, 2)] {
            let f = ExtField::new(p, e).unwrap();
            for x in f.elements() {
                assert_eq!(f.pow(x, f.size()), x);
                assert_eq!(f.frobenius_pow(x, e), x);
                assert_eq!(f.frobenius(x), f.pow(x, p));
                if x.0 != 0 {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
                }
            }
        }
    }

    #[test]
    fn prime_field_monomial() {
        let f = ExtField::new(5, 1).unwrap();
        // modulus T, so T = 0
        assert_eq!(f.monomial(1), Fq(0));
        assert_eq!(f.monomial(0), Fq(1));
    }
}
