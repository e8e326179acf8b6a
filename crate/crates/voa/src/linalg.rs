//! Dense exact linear algebra over Q(i), sized for desk-scale checks.

use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = Scalar::one()
                .checked_div(self.get(row, col))
                .expect("pivot nonzero");
            for j in col..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for j in col..self.cols {
                    let v = self.get(r, j) - &(&factor * self.get(row, j));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Exact determinant by fraction-free-ish Gaussian elimination
    /// (square matrices only).
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                m.swap_rows(col, p);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det = &det * &pivot;
            let inv = Scalar::one().checked_div(&pivot).expect("nonzero pivot");
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col) * &inv;
                for j in col..n {
                    let v = m.get(r, j) - &(&factor * m.get(col, j));
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    /// Solves `self * x = rhs` exactly. Returns `None` when inconsistent;
    /// free variables are set to zero.
    pub fn solve(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, rhs[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the rhs column: inconsistent
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.get(row, self.cols).clone();
        }
        Some(x)
    }
}

/// Incremental exact span: rows are added one at a time; tracks rank.
pub struct Span {
    cols: usize,
    rows: Vec<Vec<Scalar>>, // in echelon form, leading entries normalized
    leads: Vec<usize>,
}

impl Span {
    pub fn new(cols: usize) -> Self {
        Span {
            cols,
            rows: Vec::new(),
            leads: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the span; returns the residual.
    pub fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (row, &lead) in self.rows.iter().zip(&self.leads) {
            if v[lead].is_zero() {
                continue;
            }
            let factor = v[lead].clone();
            for j in lead..self.cols {
                v[j] = &v[j] - &(&factor * &row[j]);
            }
        }
        v
    }

    /// Adds a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let mut r = self.reduce(v);
        let Some(lead) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Scalar::one().checked_div(&r[lead]).expect("nonzero lead");
        for x in r.iter_mut() {
            *x = &*x * &inv;
        }
        self.rows.push(r);
        self.leads.push(lead);
        // keep rows sorted by lead for cheaper reduction
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.leads[i]);
        let rows = order.iter().map(|&i| self.rows[i].clone()).collect();
        let leads = order.iter().map(|&i| self.leads[i]).collect();
        self.rows = rows;
        self.leads = leads;
        true
    }

    pub fn contains(&self, v: Vec<Scalar>) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn det_and_solve() {
        let m = Matrix::from_rows(vec![
            vec![s(1), s(1), s(0)],
            vec![s(0), s(1), s(1)],
            vec![Scalar::from_ratio(1, 2), s(0), Scalar::from_ratio(1, 3)],
        ]);
        assert_eq!(m.det(), Scalar::from_ratio(5, 6));
        let x = m.solve(&[s(1), s(0), s(0)]).unwrap();
        // check m x = rhs
        let mut prod = vec![Scalar::zero(); 3];
        for i in 0..3 {
            for (j, xj) in x.iter().enumerate() {
                prod[i] = &prod[i] + &(m.get(i, j) * xj);
            }
        }
        assert_eq!(prod, vec![s(1), s(0), s(0)]);
    }

    #[test]
    fn inconsistent_system() {
        let m = Matrix::from_rows(vec![vec![s(1), s(1)], vec![s(2), s(2)]]);
        assert!(m.solve(&[s(1), s(3)]).is_none());
        assert!(m.solve(&[s(1), s(2)]).is_some());
    }

    #[test]
    fn span_rank() {
        let mut sp = Span::new(3);
        assert!(sp.insert(vec![s(1), s(2), s(3)]));
        assert!(!sp.insert(vec![s(2), s(4), s(6)]));
        assert!(sp.insert(vec![s(0), s(1), s(0)]));
        assert_eq!(sp.rank(), 2);
        assert!(sp.contains(vec![s(1), s(3), s(3)]));
        assert!(!sp.contains(vec![s(0), s(0), s(1)]));
    }
}
