use num_bigint::BigUint;

use super::Field;

/// A dense row-major matrix over some ring's element type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy> RingMatrix<E> {
    pub fn new(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Self { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let r = rows.len();
        let data: Vec<E> = rows.into_iter().flatten().collect();
        Self::new(r, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> E {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn echelon<F: Field>(field: &F, m: &mut RingMatrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(pr) = (row..m.rows).find(|&r| !field.is_zero(m.get(r, col))) else {
            continue;
        };
        m.swap_rows(row, pr);
        let inv = field.inv(m.get(row, col)).expect("nonzero pivot");
        for c in col..m.cols {
            let v = field.mul(m.get(row, c), inv);
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col);
            if field.is_zero(factor) {
                continue;
            }
            for c in col..m.cols {
                let v = field.sub(m.get(r, c), field.mul(factor, m.get(row, c)));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank over a field by Gaussian elimination.
pub fn matrix_rank<F: Field>(field: &F, m: &RingMatrix<F::Elem>) -> usize {
    let mut work = m.clone();
    echelon(field, &mut work).len()
}

/// A basis of the right kernel {x : Mx = 0}.
pub fn kernel_basis<F: Field>(field: &F, m: &RingMatrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut work = m.clone();
    let pivots = echelon(field, &mut work);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); m.cols];
            v[f] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(work.get(r, f));
            }
            v
        })
        .collect()
}

/// One solution of Mx = b, or `None` if the system is inconsistent.
pub fn solve<F: Field>(field: &F, m: &RingMatrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(b.len(), m.rows, "right-hand side has wrong length");
    let cols = m.cols + 1;
    let mut aug = RingMatrix::filled(m.rows, cols, field.zero());
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug.set(r, c, m.get(r, c));
        }
        aug.set(r, m.cols, b[r]);
    }
    let pivots = echelon(field, &mut aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![field.zero(); m.cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.get(r, m.cols);
    }
    Some(x)
}

/// log_p of the size of the image of M : (Z/p^2)^cols -> (Z/p^2)^rows.
///
/// Unit pivots are eliminated first; what remains is divisible by p, and its
/// quotient by p is ranked over F_p. The image is then
/// (Z/p^2)^{units} x (pZ/p^2)^{rank}.
pub fn p2_image_length(p: u64, m: &RingMatrix<u64>) -> usize {
    let q = p * p;
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % q as u128) as u64;
    let mut work = m.clone();
    for v in work.data.iter_mut() {
        *v %= q;
    }
    let mut used_rows = vec![false; work.rows];
    let mut used_cols = vec![false; work.cols];
    let mut units = 0usize;
    loop {
        let mut found = None;
        'search: for r in 0..work.rows {
            if used_rows[r] {
                continue;
            }
            for c in 0..work.cols {
                if !used_cols[c] && work.get(r, c) % p != 0 {
                    found = Some((r, c));
                    break 'search;
                }
            }
        }
        let Some((pr, pc)) = found else { break };
        let inv = unit_inverse(work.get(pr, pc), p);
        for c in 0..work.cols {
            let v = mulm(work.get(pr, c), inv);
            work.set(pr, c, v);
        }
        for r in 0..work.rows {
            if r == pr {
                continue;
            }
            let f = work.get(r, pc);
            if f == 0 {
                continue;
            }
            for c in 0..work.cols {
                let v = (work.get(r, c) + q - mulm(f, work.get(pr, c))) % q;
                work.set(r, c, v);
            }
        }
        used_rows[pr] = true;
        used_cols[pc] = true;
        units += 1;
    }
    // Remaining block is divisible by p; rank its quotient over F_p.
    let rest_rows: Vec<usize> = (0..work.rows).filter(|&r| !used_rows[r]).collect();
    let rest_cols: Vec<usize> = (0..work.cols).filter(|&c| !used_cols[c]).collect();
    let fp = super::ExtField::prime_field(p).expect("prime");
    let data = rest_rows
        .iter()
        .flat_map(|&r| rest_cols.iter().map(move |&c| (r, c)))
        .map(|(r, c)| super::Fq(work.get(r, c) / p))
        .collect();
    let reduced = RingMatrix::new(rest_rows.len(), rest_cols.len(), data);
    2 * units + matrix_rank(&fp, &reduced)
}

fn unit_inverse(a: u64, p: u64) -> u64 {
    let q = p * p;
    let r = super::poly::inv_mod(a % p, p);
    // Newton: y (2 - a y) mod p^2
    let ay = (a as u128 * r as u128 % q as u128) as u64;
    let t = (2 + q - ay) % q;
    (r as u128 * t as u128 % q as u128) as u64
}

/// Exact number of solutions of Mx = 0 over Z/p^2.
pub fn kernel_size_mod_p2(p: u64, m: &RingMatrix<u64>) -> BigUint {
    let image = p2_image_length(p, m);
    BigUint::from(p).pow((2 * m.cols - image) as u32)
}
