use std::fmt;

use super::ext::{ExtField, Fq, MAX_DEGREE};
use super::{Field, Ring};
use crate::error::{Error, Result};

/// An element of GR(p^2, e), packed as sum c_i (p^2)^i with c_i in Z/p^2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gr(pub u64);

impl fmt::Debug for Gr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gr({})", self.0)
    }
}

/// The Galois ring (Z/p^2)[T]/(M(T)), where M is the coefficientwise lift of
/// the modulus of the residue field.
#[derive(Clone, Debug)]
pub struct GaloisRing {
    p: u64,
    q2: u64,
    e: usize,
    modulus: Vec<u64>,
    residue: ExtField,
}

impl GaloisRing {
    /// GR(p^2, e) over the given residue field. Packed elements must fit in
    /// 62 bits.
    pub fn over(residue: &ExtField) -> Result<Self> {
        let p = residue.characteristic();
        let e = residue.degree();
        let q2 = p * p;
        let bits = (q2 as f64).log2() * e as f64;
        if bits > 62.0 {
            return Err(Error::BudgetExceeded(format!(
                "GR({p}^2, {e}) does not fit packed arithmetic"
            )));
        }
        Ok(Self {
            p,
            q2,
            e,
            modulus: residue.modulus().to_vec(),
            residue: residue.clone(),
        })
    }

    pub fn new(p: u64, e: usize) -> Result<Self> {
        Self::over(&ExtField::new(p, e)?)
    }

    pub fn characteristic_prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn residue_field(&self) -> &ExtField {
        &self.residue
    }

    /// Number of elements, p^{2e}, if it fits in u64.
    pub fn size(&self) -> Option<u64> {
        self.q2.checked_pow(self.e as u32)
    }

    pub fn unpack(&self, a: Gr) -> [u64; MAX_DEGREE] {
        let mut out = [0u64; MAX_DEGREE];
        let mut v = a.0;
        for c in out.iter_mut().take(self.e) {
            *c = v % self.q2;
            v /= self.q2;
        }
        out
    }

    pub fn pack(&self, coords: &[u64]) -> Gr {
        let mut v = 0u64;
        for &c in coords[..self.e].iter().rev() {
            v = v * self.q2 + c % self.q2;
        }
        Gr(v)
    }

    /// Reduction modulo p onto the residue field.
    pub fn reduce(&self, a: Gr) -> Fq {
        let c = self.unpack(a);
        let digits: Vec<u64> = c[..self.e].iter().map(|v| v % self.p).collect();
        self.residue.pack(&digits)
    }

    /// Coefficientwise lift with representatives in {0, ..., p-1}.
    pub fn lift(&self, a: Fq) -> Gr {
        let c = self.residue.unpack(a);
        self.pack(&c[..self.e])
    }

    /// For `a` divisible by p, the residue of a/p.
    pub fn div_p(&self, a: Gr) -> Option<Fq> {
        let c = self.unpack(a);
        if c[..self.e].iter().any(|v| v % self.p != 0) {
            return None;
        }
        let digits: Vec<u64> = c[..self.e].iter().map(|v| v / self.p).collect();
        Some(self.residue.pack(&digits))
    }

    /// p * lift(a).
    pub fn times_p(&self, a: Fq) -> Gr {
        let c = self.residue.unpack(a);
        let digits: Vec<u64> = c[..self.e].iter().map(|v| v * self.p).collect();
        self.pack(&digits)
    }

    pub fn is_unit(&self, a: Gr) -> bool {
        self.reduce(a).0 != 0
    }

    /// Inverse of a unit via one Newton step from the residue-field inverse.
    pub fn inv(&self, a: Gr) -> Option<Gr> {
        let r = self.residue.inv(self.reduce(a))?;
        let y = self.lift(r);
        let two_minus = self.sub(self.from_int(2), self.mul(a, y));
        Some(self.mul(y, two_minus))
    }

    /// Coordinates in (Z/p^2)^e.
    pub fn coords(&self, a: Gr) -> Vec<u64> {
        self.unpack(a)[..self.e].to_vec()
    }
}

impl Ring for GaloisRing {
    type Elem = Gr;

    fn zero(&self) -> Gr {
        Gr(0)
    }

    fn one(&self) -> Gr {
        Gr(1)
    }

    fn add(&self, a: Gr, b: Gr) -> Gr {
        let (x, y) = (self.unpack(a), self.unpack(b));
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..self.e {
            out[i] = (x[i] + y[i]) % self.q2;
        }
        self.pack(&out)
    }

    fn sub(&self, a: Gr, b: Gr) -> Gr {
        self.add(a, self.neg(b))
    }

    fn neg(&self, a: Gr) -> Gr {
        let mut x = self.unpack(a);
        for v in x.iter_mut().take(self.e) {
            *v = (self.q2 - *v) % self.q2;
        }
        self.pack(&x)
    }

    fn mul(&self, a: Gr, b: Gr) -> Gr {
        let m = self.q2;
        let e = self.e;
        let (x, y) = (self.unpack(a), self.unpack(b));
        let mul = |u: u64, v: u64| ((u as u128 * v as u128) % m as u128) as u64;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            if x[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + mul(x[i], y[j])) % m;
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..e {
                let mj = self.modulus[j];
                if mj != 0 {
                    prod[k - e + j] = (prod[k - e + j] + mul(m - c, mj)) % m;
                }
            }
        }
        self.pack(&prod[..e])
    }

    fn from_int(&self, v: i64) -> Gr {
        Gr(super::residue(v, self.q2))
    }

    fn characteristic(&self) -> u64 {
        self.q2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_are_nonzero_reductions_exhaustive() {
        for &(p, e) in &[(2u64, 1usize), (2, 2), (2, 4), (3, 2), (5, 2), (2, 8), (7, 2)] {
            let gr = GaloisRing::new(p, e).unwrap();
            let size = gr.size().unwrap();
            assert!(size <= 1 << 16);
            for v in 0..size {
                let a = Gr(v);
                let inv = gr.inv(a);
                assert_eq!(inv.is_some(), gr.is_unit(a));
                if let Some(b) = inv {
                    assert_eq!(gr.mul(a, b), gr.one());
                }
            }
        }
    }

    #[test]
    fn non_units_have_no_inverse_small() {
        // Brute force in GR(4, 2): a is invertible iff some b has ab = 1.
        let gr = GaloisRing::new(2, 2).unwrap();
        for a in 0..16 {
            let invertible = (0..16).any(|b| gr.mul(Gr(a), Gr(b)) == gr.one());
            assert_eq!(invertible, gr.is_unit(Gr(a)));
        }
    }

    #[test]
    fn reduction_is_ring_map() {
        let gr = GaloisRing::new(3, 2).unwrap();
        let f = gr.residue_field().clone();
        for a in 0..81 {
            for b in 0..81 {
                let (a, b) = (Gr(a), Gr(b));
                assert_eq!(gr.reduce(gr.mul(a, b)), f.mul(gr.reduce(a), gr.reduce(b)));
                assert_eq!(gr.reduce(gr.add(a, b)), f.add(gr.reduce(a), gr.reduce(b)));
            }
        }
    }

    #[test]
    fn lift_and_divide() {
        let gr = GaloisRing::new(5, 1).unwrap();
        assert_eq!(gr.div_p(Gr(10)), Some(Fq(2)));
        assert_eq!(gr.div_p(Gr(11)), None);
        assert_eq!(gr.times_p(Fq(3)), Gr(15));
        assert_eq!(gr.reduce(gr.lift(Fq(4))), Fq(4));
    }
}
