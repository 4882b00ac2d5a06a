//! Dense exact rational matrices with fraction-free kernels.
//!
//! Null spaces are computed by clearing denominators row-wise and running
//! Bareiss (fraction-free) elimination over the integers, so "kernel" means
//! kernel: there is no tolerance anywhere.

use crate::ratio::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        QMatrix { rows: r, cols: c, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Rat) {
        if !v.is_zero() {
            let cur = self.get(i, j).clone();
            self.set(i, j, cur + v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Matrix product, skipping zero entries (our matrices are sparse).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    /// Matrix · column vector.
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![Rat::zero(); self.rows];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_zero() && !v[k].is_zero() {
                    out[i] += a * &v[k];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product (tensor-product action matrices).
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&QMatrix]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            for i in 0..b.rows {
                for j in 0..cols {
                    out.set(r0 + i, j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
        }
        out
    }

    /// Submatrix addressed by row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Basis of the right null space, returned as the columns of a matrix.
    /// Fraction-free: each row is scaled to integers and eliminated Bareiss
    /// style before the rational back-substitution.
    pub fn null_space(&self) -> QMatrix {
        let (echelon, pivot_cols) = self.integer_echelon();
        let pivots: Vec<usize> = pivot_cols.clone();
        let free_cols: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis_cols: Vec<Vec<Rat>> = Vec::with_capacity(free_cols.len());
        for &fc in &free_cols {
            let mut v = vec![Rat::zero(); self.cols];
            v[fc] = Rat::one();
            // Back-substitute from the last pivot row upward.
            for r in (0..pivots.len()).rev() {
                let pc = pivots[r];
                let mut s = Rat::zero();
                for c in (pc + 1)..self.cols {
                    let e = &echelon[r][c];
                    if !e.is_zero() && !v[c].is_zero() {
                        s += Rat::from_integer(e.clone()) * &v[c];
                    }
                }
                let piv = Rat::from_integer(echelon[r][pc].clone());
                v[pc] = -s / piv;
            }
            basis_cols.push(v);
        }
        let mut out = QMatrix::zeros(self.cols, basis_cols.len());
        for (j, col) in basis_cols.iter().enumerate() {
            for i in 0..self.cols {
                out.set(i, j, col[i].clone());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.integer_echelon().1.len()
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rat> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.push(b[i].clone());
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            let p = a[col][col].clone();
            for j in col..=n {
                a[col][j] = &a[col][j] / &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in col..=n {
                        let s = &a[col][j] * &f;
                        a[r][j] = &a[r][j] - s;
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[n].clone()).collect())
    }

    /// Row echelon form over the integers via Bareiss elimination.
    /// Returns the echelon rows (nonzero ones) and their pivot columns.
    fn integer_echelon(&self) -> (Vec<Vec<BigInt>>, Vec<usize>) {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    lcm = lcm.lcm(self.get(i, j).denom());
                }
                (0..self.cols)
                    .map(|j| {
                        let r = self.get(i, j);
                        r.numer() * (&lcm / r.denom())
                    })
                    .collect()
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            for i in (r + 1)..m.len() {
                for j in (c + 1)..self.cols {
                    let t = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                    let (q, rem) = t.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    m[i][j] = q;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            pivot_cols.push(c);
            r += 1;
            if r == m.len() {
                break;
            }
        }
        m.truncate(r);
        (m, pivot_cols)
    }
}

impl std::fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| crate::ratio::format_rat(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Incrementally maintained row space in reduced echelon form. Used for
/// exact span bookkeeping (isotypic closures, greedy basis selection).
#[derive(Clone, Default)]
pub struct RowSpan {
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl RowSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the span; inserts the remainder if nonzero.
    /// Returns true when the rank grew.
    pub fn insert(&mut self, mut v: Vec<Rat>) -> bool {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = v[p].clone();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x /= &lead;
            }
        }
        // Keep earlier rows reduced against the new pivot.
        for (row, &rp) in self.rows.iter_mut().zip(&self.pivots) {
            let _ = rp;
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    pub fn basis_rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }
}
