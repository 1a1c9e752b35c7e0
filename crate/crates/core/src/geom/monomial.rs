/// Exponent vector of a monomial X_0^{a_0} ... X_n^{a_n}.
pub type Exponents = Vec<u32>;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of degree-d monomials in n+1 variables, binomial(n+d, n).
pub fn monomial_count(n: usize, d: usize) -> usize {
    binomial((n + d) as u64, n as u64) as usize
}

/// All degree-d monomials in X_0..X_n in graded-lex order with X_0 highest:
/// exponent vectors sorted descending lexicographically.
///
/// This order indexes every coefficient vector in the crate and in the file
/// formats.
pub fn monomial_basis(n: usize, d: usize) -> Vec<Exponents> {
    let mut out = Vec::with_capacity(monomial_count(n, d));
    let mut current = vec![0u32; n + 1];
    fill(0, d as u32, &mut current, &mut out);
    out
}

fn fill(pos: usize, remaining: u32, current: &mut Exponents, out: &mut Vec<Exponents>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.clone());
        return;
    }
    for a in (0..=remaining).rev() {
        current[pos] = a;
        fill(pos + 1, remaining - a, current, out);
    }
    current[pos] = 0;
}

/// Position of an exponent vector in [`monomial_basis`].
pub fn monomial_index(exps: &[u32]) -> usize {
    let n = exps.len() - 1;
    let mut remaining: u32 = exps.iter().sum();
    let mut index = 0usize;
    for (pos, &a) in exps.iter().enumerate().take(n) {
        let vars_after = n - pos; // variables X_{pos+1}..X_n, minus one for the binomial
        // monomials whose exponent at `pos` exceeds `a`
        for b in (a + 1)..=remaining {
            index += monomial_count(vars_after - 1, (remaining - b) as usize);
        }
        remaining -= a;
    }
    index
}
