use super::Ring;
use crate::error::{invalid, Result};

/// The ring Z/N for 2 <= N < 2^62.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Zmod {
    n: u64,
}

impl Zmod {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 || n >= 1 << 62 {
            return invalid(format!("modulus {n} out of range [2, 2^62)"));
        }
        Ok(Self { n })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn reduce(&self, v: u64) -> u64 {
        v % self.n
    }
}

impl Ring for Zmod {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.n
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.n as u128) as u64
    }

    fn from_int(&self, v: i64) -> u64 {
        super::residue(v, self.n)
    }

    fn characteristic(&self) -> u64 {
        self.n
    }
}
