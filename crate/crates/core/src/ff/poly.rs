//! Dense univariate polynomials over F_p, coefficients stored constant term
//! first. Used for field moduli, squarefree tests and Dedekind's criterion.

/// Drop trailing zero coefficients.
pub fn trim(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(mut a: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        k >>= 1;
    }
    acc
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn add(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| (f.get(i).copied().unwrap_or(0) + g.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut out);
    out
}

pub fn sub(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| (f.get(i).copied().unwrap_or(0) + p - g.get(i).copied().unwrap_or(0) % p) % p)
        .collect();
    trim(&mut out);
    out
}

pub fn mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `f` by nonzero `g`.
pub fn divrem(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dg = degree(g).expect("division by zero polynomial");
    let lead_inv = inv_mod(g[dg], p);
    let mut r: Vec<u64> = f.to_vec();
    trim(&mut r);
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - dg];
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - dg;
        q[shift] = c;
        for (j, &b) in g[..=dg].iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mul_mod(c, b, p)) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    divrem(f, g, p).1
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(&a, p)
}

pub fn make_monic(f: &[u64], p: u64) -> Vec<u64> {
    match degree(f) {
        None => Vec::new(),
        Some(d) => {
            let li = inv_mod(f[d], p);
            f[..=d].iter().map(|&c| mul_mod(c, li, p)).collect()
        }
    }
}

pub fn derivative(f: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
        .collect();
    trim(&mut out);
    out
}

/// `base^k mod m` in F_p[x]/(m).
pub fn powmod(base: &[u64], mut k: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while k > 0 {
        if k & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        k >>= 1;
    }
    acc
}

/// Ben-Or irreducibility test for a polynomial of degree >= 1.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let Some(d) = degree(f) else { return false };
    if d == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for _ in 0..d / 2 {
        xp = powmod(&xp, p as u128, f, p);
        let g = gcd(f, &sub(&xp, &x, p), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Squarefree over F_p: gcd(f, f') is constant. The zero polynomial is not squarefree.
pub fn is_squarefree(f: &[u64], p: u64) -> bool {
    match degree(f) {
        None => false,
        Some(0) => true,
        Some(_) => degree(&gcd(f, &derivative(f, p), p)) == Some(0),
    }
}

/// Radical (product of the distinct monic irreducible factors) of a nonzero
/// polynomial.
pub fn radical(f: &[u64], p: u64) -> Vec<u64> {
    let f = make_monic(f, p);
    let Some(d) = degree(&f) else {
        return Vec::new();
    };
    if d == 0 {
        return vec![1];
    }
    let df = derivative(&f, p);
    if df.is_empty() {
        // f = g(x^p) = h^p with h_i = g_i^{1/p} = g_i over F_p.
        let h: Vec<u64> = f.iter().step_by(p as usize).copied().collect();
        return radical(&h, p);
    }
    let c = gcd(&f, &df, p);
    // f / c carries every factor whose multiplicity is prime to p; the
    // remaining factors live in c.
    let w = divrem(&f, &c, p).0;
    let rc = radical(&c, p);
    let combined = mul(&w, &rc, p);
    let g = gcd(&w, &rc, p);
    make_monic(&divrem(&combined, &g, p).0, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let p = 7;
        let f = vec![3, 0, 5, 1, 6];
        let g = vec![2, 1, 1];
        let (q, r) = divrem(&f, &g, p);
        assert_eq!(add(&mul(&q, &g, p), &r, p), f);
        assert!(degree(&r).map_or(true, |d| d < 2));
    }

    #[test]
    fn irreducibility_small_cases() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(!is_irreducible(&[0, 0, 1], 5));
        assert!(is_irreducible(&[2, 0, 1], 5));
    }

    #[test]
    fn radical_cases() {
        let p = 2;
        // (x+1)^2 = x^2 + 1 over F_2.
        assert_eq!(radical(&[1, 0, 1], p), vec![1, 1]);
        // x^2 (x+1)^3
        let f = mul(&[0, 0, 1], &mul(&[1, 1], &mul(&[1, 1], &[1, 1], p), p), p);
        assert_eq!(radical(&f, p), vec![0, 1, 1]);
        let p = 3;
        // (x+1)^3 (x+2) -> (x+1)(x+2)
        let f = mul(&mul(&mul(&[1, 1], &[1, 1], p), &[1, 1], p), &[2, 1], p);
        assert_eq!(radical(&f, p), mul(&[1, 1], &[2, 1], p));
    }

    #[test]
    fn squarefree_cases() {
        assert!(is_squarefree(&[0, 1, 1], 2));
        assert!(!is_squarefree(&[1, 0, 1], 2));
        assert!(is_squarefree(&[5], 7));
        assert!(!is_squarefree(&[], 7));
    }
}
