//! Integer lattices: Hermite echelon bases, exact solving and Smith normal form.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `row_a -= k * row_b`.
fn axpy(a: &mut [i128], k: i128, b: &[i128]) -> Result<()> {
    if k == 0 {
        return Ok(());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x = sub(*x, mul(k, *y)?)?;
    }
    Ok(())
}

/// Dense integer matrix whose rows generate a lattice in `Z^cols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    cols: usize,
    rows: Vec<Vec<i128>>,
}

/// Row echelon basis of a lattice: every pivot is positive and the entries above
/// a pivot are reduced into `0..pivot`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    cols: usize,
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

/// Smith form data: the nonzero invariant factors `d_1 | d_2 | ...` and a
/// unimodular column transform `Q` with `U·A·Q = diag(d)` for some unimodular `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub invariants: Vec<i128>,
    pub col_transform: Vec<Vec<i128>>,
}

impl IntMatrix {
    pub fn new(cols: usize) -> Self {
        IntMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<i128>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        IntMatrix { cols, rows }
    }

    pub fn push_row(&mut self, row: Vec<i128>) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<i128>] {
        &self.rows
    }

    pub fn hermite(&self) -> Result<Echelon> {
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.len() {
                break;
            }
            loop {
                let best = (r..m.len())
                    .filter(|&i| m[i][c] != 0)
                    .min_by_key(|&i| m[i][c].abs());
                let Some(i) = best else { break };
                m.swap(r, i);
                let mut done = true;
                for k in r + 1..m.len() {
                    if m[k][c] != 0 {
                        let q = m[k][c].div_euclid(m[r][c]);
                        let (head, tail) = m.split_at_mut(k);
                        axpy(&mut tail[0], q, &head[r])?;
                        if m[k][c] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if m[r][c] == 0 {
                continue;
            }
            if m[r][c] < 0 {
                for x in m[r].iter_mut() {
                    *x = -*x;
                }
            }
            let piv = m[r][c];
            for k in 0..r {
                let q = m[k][c].div_euclid(piv);
                let (head, tail) = m.split_at_mut(r);
                axpy(&mut head[k], q, &tail[0])?;
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        Ok(Echelon {
            cols: self.cols,
            rows: m,
            pivots,
        })
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.hermite()?.rank())
    }

    pub fn smith(&self) -> Result<Smith> {
        let nr = self.rows.len();
        let nc = self.cols;
        let mut a = self.rows.clone();
        let mut q: Vec<Vec<i128>> = (0..nc)
            .map(|i| (0..nc).map(|j| i128::from(i == j)).collect())
            .collect();
        let swap_cols = |a: &mut Vec<Vec<i128>>, q: &mut Vec<Vec<i128>>, i: usize, j: usize| {
            for row in a.iter_mut() {
                row.swap(i, j);
            }
            for row in q.iter_mut() {
                row.swap(i, j);
            }
        };
        // col_j -= k * col_t, mirrored on Q
        let col_axpy = |a: &mut Vec<Vec<i128>>,
                        q: &mut Vec<Vec<i128>>,
                        j: usize,
                        k: i128,
                        t: usize|
         -> Result<()> {
            for row in a.iter_mut().chain(q.iter_mut()) {
                row[j] = sub(row[j], mul(k, row[t])?)?;
            }
            Ok(())
        };

        let mut invariants = Vec::new();
        let mut t = 0;
        while t < nr.min(nc) {
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            swap_cols(&mut a, &mut q, t, bj);
            loop {
                let mut changed = false;
                for i in t + 1..nr {
                    if a[i][t] != 0 {
                        let k = a[i][t].div_euclid(a[t][t]);
                        let (head, tail) = a.split_at_mut(i);
                        axpy(&mut tail[0], k, &head[t])?;
                        if a[i][t] != 0 {
                            a.swap(t, i);
                            changed = true;
                        }
                    }
                }
                for j in t + 1..nc {
                    if a[t][j] != 0 {
                        let k = a[t][j].div_euclid(a[t][t]);
                        col_axpy(&mut a, &mut q, j, k, t)?;
                        if a[t][j] != 0 {
                            swap_cols(&mut a, &mut q, t, j);
                            changed = true;
                        }
                    }
                }
                if changed {
                    continue;
                }
                let piv = a[t][t];
                let bad = (t + 1..nr).find(|&i| a[i][t + 1..].iter().any(|x| x % piv != 0));
                match bad {
                    Some(i) => {
                        let (head, tail) = a.split_at_mut(i);
                        for (x, y) in head[t].iter_mut().zip(&tail[0]) {
                            *x = x.checked_add(*y).ok_or(Error::Overflow)?;
                        }
                    }
                    None => break,
                }
            }
            if a[t][t] < 0 {
                for row in a.iter_mut().chain(q.iter_mut()) {
                    row[t] = -row[t];
                }
            }
            invariants.push(a[t][t]);
            t += 1;
        }
        Ok(Smith {
            invariants,
            col_transform: q,
        })
    }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i128>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Find `z` and `c > 0` with `z · B = c · x` and `c` minimal, or `None` when
    /// `x` is not in the rational span of the basis.
    pub fn solve(&self, x: &[i128]) -> Result<Option<(Vec<i128>, i128)>> {
        assert_eq!(x.len(), self.cols);
        let mut residual = x.to_vec();
        let mut c: i128 = 1;
        let mut z = vec![0i128; self.rows.len()];
        for (i, (row, &j)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let piv = row[j];
            let val = residual[j];
            if val % piv != 0 {
                let f = piv / gcd(val, piv);
                for r in residual.iter_mut() {
                    *r = mul(*r, f)?;
                }
                for w in z.iter_mut() {
                    *w = mul(*w, f)?;
                }
                c = mul(c, f)?;
            }
            let k = residual[j] / piv;
            z[i] = k;
            axpy(&mut residual, k, row)?;
        }
        if residual.iter().any(|&r| r != 0) {
            return Ok(None);
        }
        let g = z.iter().fold(c, |g, &w| gcd(g, w));
        let sign = if c < 0 { -1 } else { 1 };
        Ok(Some((
            z.into_iter().map(|w| sign * w / g).collect(),
            sign * c / g,
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_of_simple_lattice() {
        let m = IntMatrix::from_rows(2, vec![vec![4, 6], vec![6, 9], vec![2, 3]]);
        let h = m.hermite().unwrap();
        assert_eq!(h.rows(), &[vec![2, 3]]);
        let m = IntMatrix::from_rows(2, vec![vec![2, 0], vec![0, 3], vec![1, 1]]);
        let h = m.hermite().unwrap();
        assert_eq!(h.rank(), 2);
        assert_eq!(h.rows()[0][0], 1);
    }

    #[test]
    fn smith_invariants() {
        let m = IntMatrix::from_rows(3, vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(m.smith().unwrap().invariants, vec![2, 6, 12]);
        let m = IntMatrix::from_rows(2, vec![vec![0, 0], vec![0, 0]]);
        assert!(m.smith().unwrap().invariants.is_empty());
        let m = IntMatrix::from_rows(2, vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(m.smith().unwrap().invariants, vec![1, 6]);
    }

    #[test]
    fn smith_transform_diagonalises_row_space() {
        let rows = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let m = IntMatrix::from_rows(3, rows.clone());
        let s = m.smith().unwrap();
        // every row times Q has i-th coordinate divisible by d_i
        for r in &rows {
            for (j, d) in s.invariants.iter().enumerate() {
                let w: i128 = (0..3).map(|k| r[k] * s.col_transform[k][j]).sum();
                assert_eq!(w % d, 0);
            }
        }
    }

    #[test]
    fn solve_with_denominator() {
        let m = IntMatrix::from_rows(2, vec![vec![3, 0], vec![0, 2]]);
        let h = m.hermite().unwrap();
        let (z, c) = h.solve(&[1, 1]).unwrap().unwrap();
        assert_eq!(c, 6);
        let back: Vec<i128> = (0..2)
            .map(|j| z.iter().zip(h.rows()).map(|(a, r)| a * r[j]).sum())
            .collect();
        assert_eq!(back, vec![6, 6]);
        let m = IntMatrix::from_rows(2, vec![vec![1, 1]]);
        assert_eq!(m.hermite().unwrap().solve(&[1, 0]).unwrap(), None);
    }
}
