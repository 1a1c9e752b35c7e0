use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::monomial::{monomial_basis, monomial_count, monomial_index, Exponents};
use crate::error::{invalid, Error, Result};
use crate::ff::Ring;

/// Integer-like coefficient types that embed into every ring of the crate.
pub trait Coefficient: Clone + fmt::Debug + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplication by a small natural number (formal derivatives).
    fn scale(&self, k: u64) -> Self;
    fn add(&self, other: &Self) -> Self;
    /// Image in Z/m, as a canonical residue.
    fn residue(&self, m: u64) -> u64;
    fn to_bigint(&self) -> BigInt;
}

impl Coefficient for i64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn scale(&self, k: u64) -> Self {
        self * k as i64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn residue(&self, m: u64) -> u64 {
        crate::ff::residue(*self, m)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coefficient for u64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn scale(&self, k: u64) -> Self {
        self * k
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn residue(&self, m: u64) -> u64 {
        self % m
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coefficient for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn scale(&self, k: u64) -> Self {
        self * BigInt::from(k)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn residue(&self, m: u64) -> u64 {
        self.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// A degree-d form in X_0..X_n, coefficients indexed by [`monomial_basis`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousForm<C> {
    n: usize,
    d: usize,
    coeffs: Vec<C>,
}

impl<C: Coefficient> HomogeneousForm<C> {
    pub fn new(n: usize, d: usize, coeffs: Vec<C>) -> Result<Self> {
        if n < 1 {
            return invalid("ambient dimension n must be >= 1");
        }
        let expected = monomial_count(n, d);
        if coeffs.len() != expected {
            return invalid(format!(
                "degree-{d} form on P^{n} needs {expected} coefficients, got {}",
                coeffs.len()
            ));
        }
        Ok(Self { n, d, coeffs })
    }

    pub fn zero(n: usize, d: usize) -> Self {
        Self {
            n,
            d,
            coeffs: vec![C::zero(); monomial_count(n, d)],
        }
    }

    /// Build from (exponent vector, coefficient) terms; repeated monomials add up.
    pub fn from_terms(n: usize, d: usize, terms: &[(Exponents, C)]) -> Result<Self> {
        let mut form = Self::zero(n, d);
        for (exps, c) in terms {
            if exps.len() != n + 1 {
                return invalid(format!("exponent vector {exps:?} has wrong length for P^{n}"));
            }
            if exps.iter().sum::<u32>() as usize != d {
                return invalid(format!("monomial {exps:?} is not of degree {d}"));
            }
            let i = monomial_index(exps);
            form.coeffs[i] = form.coeffs[i].add(c);
        }
        Ok(form)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn monomials(&self) -> Vec<Exponents> {
        monomial_basis(self.n, self.d)
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> Vec<(Exponents, C)> {
        self.monomials()
            .into_iter()
            .zip(self.coeffs.iter().cloned())
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> HomogeneousForm<D> {
        HomogeneousForm {
            n: self.n,
            d: self.d,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Coefficientwise reduction to Z/m.
    pub fn reduce_mod(&self, m: u64) -> HomogeneousForm<u64> {
        self.map_coeffs(|c| c.residue(m))
    }

    /// Formal partial derivative in X_i; degree d-1 (the zero form when d = 0).
    pub fn partial_derivative(&self, i: usize) -> HomogeneousForm<C> {
        assert!(i <= self.n, "variable index out of range");
        if self.d == 0 {
            return Self::zero(self.n, 0);
        }
        let mut out = Self::zero(self.n, self.d - 1);
        for (exps, c) in self.monomials().iter().zip(&self.coeffs) {
            let a = exps[i];
            if a == 0 || c.is_zero() {
                continue;
            }
            let mut e = exps.clone();
            e[i] -= 1;
            let k = monomial_index(&e);
            out.coeffs[k] = out.coeffs[k].add(&c.scale(a as u64));
        }
        out
    }

    /// X_i * F, of degree d+1.
    pub fn times_variable(&self, i: usize) -> HomogeneousForm<C> {
        let mut out = Self::zero(self.n, self.d + 1);
        for (exps, c) in self.monomials().iter().zip(&self.coeffs) {
            let mut e = exps.clone();
            e[i] += 1;
            let k = monomial_index(&e);
            out.coeffs[k] = out.coeffs[k].add(c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.d != other.d {
            return invalid("forms of different shape");
        }
        Ok(Self {
            n: self.n,
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn scale(&self, k: u64) -> Self {
        self.map_coeffs(|c| c.scale(k))
    }

    /// Evaluate at a coordinate tuple in any ring; coefficients embed through Z.
    pub fn eval<R: Ring>(&self, ring: &R, point: &[R::Elem]) -> Result<R::Elem> {
        if point.len() != self.n + 1 {
            return Err(Error::RingMismatch(format!(
                "point has {} coordinates, form lives on P^{}",
                point.len(),
                self.n
            )));
        }
        let powers = power_table(ring, point, self.d);
        let m = ring.characteristic();
        let mut acc = ring.zero();
        for (exps, c) in self.monomials().iter().zip(&self.coeffs) {
            let r = c.residue(m);
            if r == 0 {
                continue;
            }
            let mono = monomial_value(ring, &powers, exps);
            acc = ring.add(acc, ring.mul(ring.from_int(r as i64), mono));
        }
        Ok(acc)
    }
}

/// x_i^k for all i and 0 <= k <= d.
pub(crate) fn power_table<R: Ring>(ring: &R, point: &[R::Elem], d: usize) -> Vec<Vec<R::Elem>> {
    point
        .iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(d + 1);
            let mut acc = ring.one();
            for _ in 0..=d {
                row.push(acc);
                acc = ring.mul(acc, x);
            }
            row
        })
        .collect()
}

pub(crate) fn monomial_value<R: Ring>(ring: &R, powers: &[Vec<R::Elem>], exps: &[u32]) -> R::Elem {
    exps.iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .fold(ring.one(), |acc, (i, &a)| ring.mul(acc, powers[i][a as usize]))
}

fn variable_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["X", "Y", "Z", "W"][..=n].iter().map(|s| s.to_string()).collect()
    } else {
        (0..=n).map(|i| format!("X{i}")).collect()
    }
}

impl<C: Coefficient> fmt::Display for HomogeneousForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = variable_names(self.n);
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (exps, c)) in terms.iter().enumerate() {
            let c = c.to_bigint();
            let negative = c.is_negative();
            if k > 0 {
                write!(f, "{}", if negative { "-" } else { "+" })?;
            } else if negative {
                write!(f, "-")?;
            }
            let abs = c.abs();
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], a)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Parse a polynomial string such as `X^2+5*Y^2-Z^2` into an integer form on
/// P^n. Variables are `X, Y, Z, W` (for n <= 3) or `X0 .. Xn` / `x0 .. xn`.
/// `*` is optional between a coefficient and the first variable.
pub fn parse_form(input: &str, n: usize) -> Result<HomogeneousForm<BigInt>> {
    let mut parser = Parser {
        chars: input.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
        n,
    };
    let terms = parser.expression()?;
    if terms.is_empty() {
        return invalid("empty polynomial");
    }
    let d = terms[0].0.iter().sum::<u32>() as usize;
    HomogeneousForm::from_terms(n, d, &terms)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error<T>(&self, what: &str) -> Result<T> {
        invalid(format!("cannot parse polynomial at position {}: {what}", self.pos))
    }

    fn expression(&mut self) -> Result<Vec<(Exponents, BigInt)>> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -1
            }
            Some('+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let (exps, c) = self.term()?;
            terms.push((exps, c * sign));
            match self.peek() {
                None => break,
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                Some(_) => return self.error("expected + or -"),
            }
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(Exponents, BigInt)> {
        let mut coeff = BigInt::one();
        let mut exps = vec![0u32; self.n + 1];
        let mut first = true;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff *= self.number()?;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let v = self.variable()?;
                    let power = if self.peek() == Some('^') {
                        self.pos += 1;
                        self.number()?
                            .to_u32()
                            .ok_or_else(|| Error::InvalidInput("exponent too large".into()))?
                    } else {
                        1
                    };
                    exps[v] += power;
                }
                _ => {
                    if first {
                        return self.error("expected a term");
                    }
                    return self.error("dangling '*'");
                }
            }
            first = false;
            match self.peek() {
                Some('*') => self.pos += 1,
                Some(c) if c.is_ascii_alphabetic() => {}
                _ => break,
            }
        }
        Ok((exps, coeff))
    }

    fn number(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<BigInt>()
            .or_else(|_| self.error("expected a number"))
    }

    fn variable(&mut self) -> Result<usize> {
        let c = self.peek().unwrap();
        self.pos += 1;
        let indexed = matches!(self.peek(), Some(d) if d.is_ascii_digit());
        let index = if (c == 'X' || c == 'x') && indexed {
            let start = self.pos;
            while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                self.pos += 1;
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            s.parse::<usize>().or_else(|_| self.error("bad variable index"))?
        } else {
            match c {
                'X' => 0,
                'Y' => 1,
                'Z' => 2,
                'W' => 3,
                _ => return self.error(&format!("unknown variable {c}")),
            }
        };
        if index > self.n {
            return self.error(&format!("variable index {index} exceeds n = {}", self.n));
        }
        Ok(index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{ExtField, Fq, Zmod};

    fn conic() -> HomogeneousForm<BigInt> {
        parse_form("X^2+5Y^2-Z^2", 2).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let f = conic();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.to_string(), "X^2+5*Y^2-Z^2");
        assert_eq!(parse_form("X*Y", 1).unwrap().to_string(), "X*Y");
        assert_eq!(parse_form("x0^2 - 3*x1*x2", 2).unwrap().to_string(), "X^2-3*Y*Z");
        assert!(parse_form("X^2+Y", 1).is_err());
        assert!(parse_form("X+Q", 1).is_err());
        assert!(parse_form("X*", 1).is_err());
        assert!(parse_form("Z", 1).is_err());
    }

    #[test]
    fn eval_examples() {
        let f = conic();
        let z25 = Zmod::new(25).unwrap();
        assert_eq!(f.eval(&z25, &[0, 1, 0]).unwrap(), 5);
        assert_eq!(f.eval(&z25, &[0, 0, 0]).unwrap(), 0);
        let f2 = ExtField::prime_field(2).unwrap();
        let xy = parse_form("X*Y", 1).unwrap();
        assert_eq!(xy.eval(&f2, &[Fq(1), Fq(1)]).unwrap(), Fq(1));
        assert!(matches!(xy.eval(&f2, &[Fq(1)]), Err(Error::RingMismatch(_))));
        let constant = HomogeneousForm::new(1, 0, vec![BigInt::from(3)]).unwrap();
        assert_eq!(constant.eval(&z25, &[0, 0]).unwrap(), 3);
    }

    #[test]
    fn partial_examples() {
        let f = conic();
        assert_eq!(f.partial_derivative(0).to_string(), "2*X");
        assert_eq!(f.partial_derivative(1).to_string(), "10*Y");
        let sq = parse_form("X^2", 1).unwrap().reduce_mod(2);
        assert!(sq.partial_derivative(0).reduce_mod(2).terms().is_empty());
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(HomogeneousForm::new(2, 2, vec![0i64; 5]).is_err());
        assert!(HomogeneousForm::<i64>::from_terms(1, 2, &[(vec![1, 0], 1)]).is_err());
    }
}
