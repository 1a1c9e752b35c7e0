//! Exact arithmetic over Z/N, F_{p^e} and the Galois rings GR(p^2, e), with
//! the linear algebra the jet maps need.

mod ext;
mod galois_ring;
mod linalg;
pub mod poly;
mod zmod;

use std::fmt::Debug;
use std::hash::Hash;

pub use ext::{find_irreducible, ExtField, Fq, MAX_DEGREE, MAX_FIELD_SIZE};
pub use galois_ring::{GaloisRing, Gr};
pub use linalg::{kernel_basis, kernel_size_mod_p2, matrix_rank, p2_image_length, solve, RingMatrix};
pub use zmod::Zmod;

/// A commutative ring whose elements are small `Copy` handles interpreted
/// relative to the ring object.
pub trait Ring {
    type Elem: Copy + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;

    /// Image of an integer under the structure map Z -> R.
    fn from_int(&self, v: i64) -> Self::Elem;

    /// The N with Z/N -> R injective (p for fields, p^2 for Galois rings).
    fn characteristic(&self) -> u64;

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    fn pow(&self, a: Self::Elem, mut k: u64) -> Self::Elem {
        let mut base = a;
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
}

/// Deterministic primality by trial division (all moduli here are below 2^32).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3u64;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

/// All primes `<= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

/// Canonical residue of a signed integer modulo `m`.
pub fn residue(v: i64, m: u64) -> u64 {
    v.rem_euclid(m as i64) as u64
}
