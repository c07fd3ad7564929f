//! Dense linear algebra over `F_p` for small primes.

use alloc::vec;
use alloc::vec::Vec;

/// Row-major dense matrix with entries in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    cols: usize,
    rows: Vec<Vec<u32>>,
}

fn inverse(a: u32, p: u32) -> u32 {
    // p is tiny; brute force is fine
    (1..p).find(|b| (a * b) % p == 1).expect("nonzero element of a field")
}

impl FpMatrix {
    pub fn new(p: u32, cols: usize) -> Self {
        FpMatrix {
            p,
            cols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(p: u32, cols: usize, rows: Vec<Vec<u32>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                r.into_iter().map(|x| x % p).collect()
            })
            .collect();
        FpMatrix { p, cols, rows }
    }

    /// Push a row of integer entries, reducing them mod p.
    pub fn push_row_i64(&mut self, row: &[i64]) {
        assert_eq!(row.len(), self.cols);
        let p = self.p as i64;
        self.rows
            .push(row.iter().map(|x| x.rem_euclid(p) as u32).collect());
    }

    pub fn push_row(&mut self, row: Vec<u32>) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row.into_iter().map(|x| x % self.p).collect());
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Reduced row echelon form; returns the nonzero rows and their pivot columns.
    pub fn echelon(&self) -> (Vec<Vec<u32>>, Vec<usize>) {
        let p = self.p;
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(i) = (r..m.len()).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, i);
            let inv = inverse(m[r][c], p);
            for x in m[r].iter_mut() {
                *x = (*x * inv) % p;
            }
            let pivot_row = m[r].clone();
            for (k, row) in m.iter_mut().enumerate() {
                if k != r && row[c] != 0 {
                    let f = row[c];
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x = (*x + p * p - f * y) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.len() {
                break;
            }
        }
        m.truncate(r);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of `{a : a · M = 0}` (combinations of rows that vanish).
    pub fn left_kernel(&self) -> Vec<Vec<u32>> {
        let n = self.rows.len();
        let p = self.p;
        let mut aug = FpMatrix::new(p, self.cols + n);
        for (i, row) in self.rows.iter().enumerate() {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u32::from(i == j)));
            aug.push_row(r);
        }
        let (ech, pivots) = aug.echelon();
        ech.into_iter()
            .zip(pivots)
            .filter(|(_, c)| *c >= self.cols)
            .map(|(row, _)| row[self.cols..].to_vec())
            .collect()
    }
}

/// A subspace of `F_p^n` kept in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    p: u32,
    dim: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, ambient: usize) -> Self {
        Subspace {
            p,
            dim: ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Subspace {
            p,
            dim: ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn spanned_by(p: u32, ambient: usize, vectors: Vec<Vec<u32>>) -> Self {
        let m = FpMatrix::from_rows(p, ambient, vectors);
        let (basis, pivots) = m.echelon();
        Subspace {
            p,
            dim: ambient,
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    /// Reduce `v` against the echelon basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut v: Vec<u32> = v.iter().map(|x| x % p).collect();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let f = v[c];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + p * p - f * y) % p;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Subspace::spanned_by(self.p, self.dim, vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_mod_p() {
        let m = FpMatrix::from_rows(2, 3, vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let m = FpMatrix::from_rows(3, 3, vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn left_kernel_vanishes() {
        let m = FpMatrix::from_rows(2, 3, vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        let k = m.left_kernel();
        assert_eq!(k.len(), 1);
        for a in &k {
            for c in 0..3 {
                let s: u32 = (0..3).map(|r| a[r] * m.rows()[r][c]).sum();
                assert_eq!(s % 2, 0);
            }
        }
    }

    #[test]
    fn subspace_membership() {
        let s = Subspace::spanned_by(5, 3, vec![vec![1, 2, 0], vec![0, 0, 3]]);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[2, 4, 1]));
        assert!(!s.contains(&[0, 1, 0]));
        assert!(Subspace::full(5, 3).contains_subspace(&s));
    }
}
