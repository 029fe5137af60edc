use std::fmt;

use serde::{Deserialize, Serialize};

use super::Field;
use crate::error::{Error, Result};

/// Dense row-major matrix over a prime field. The field is passed to each
/// arithmetic operation rather than stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

/// Outcome of [`linear_solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Solved {
        particular: Vec<u32>,
        kernel: Vec<Vec<u32>>,
        rank: usize,
    },
    NoSolution {
        rank: usize,
    },
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from raw row-major entries, checking shape and range.
    pub fn from_data(rows: usize, cols: usize, data: Vec<u32>, field: Field) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Construction(format!(
                "matrix {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&x| x >= field.q()) {
            return Err(Error::Construction(format!(
                "entry {bad} is not a residue mod {}",
                field.q()
            )));
        }
        Ok(FqMatrix { rows, cols, data })
    }

    /// Builds from a list of rows. An empty list gives a `0 x cols` matrix,
    /// so the column count must be supplied for that case.
    pub fn from_rows(rows: &[Vec<u32>], cols: usize, field: Field) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Construction(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        let data = rows.iter().flatten().copied().collect();
        Self::from_data(rows.len(), cols, data, field)
    }

    pub fn from_columns(rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, &x) in col.iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: u32) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn mul(&self, other: &FqMatrix, field: Field) -> FqMatrix {
        assert_eq!(
            self.cols, other.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let q = field.q();
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = (out.data[idx] + a * other.get(k, c)) % q;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32], field: Field) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &FqMatrix, field: Field) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| field.add(a, b))
            .collect();
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &FqMatrix, field: Field) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| field.sub(a, b))
            .collect();
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: u32, field: Field) -> FqMatrix {
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| field.mul(a, s)).collect(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_block(&self, start: usize, end: usize) -> FqMatrix {
        FqMatrix {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self, field: Field) -> (FqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = field.inv(m.get(row, col)).expect("nonzero pivot");
            for c in 0..m.cols {
                let v = field.mul(m.get(row, c), inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let v = field.sub(m.get(r, c), field.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, field: Field) -> usize {
        self.rref(field).1.len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn kernel_basis(&self, field: Field) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Kernel basis as the columns of a `cols x k` matrix.
    pub fn kernel_matrix(&self, field: Field) -> FqMatrix {
        FqMatrix::from_columns(self.cols, &self.kernel_basis(field))
    }

    /// Echelon basis of the column space, as the columns of a
    /// `rows x rank` matrix.
    pub fn column_space(&self, field: Field) -> FqMatrix {
        let (r, pivots) = self.transpose().rref(field);
        r.row_block(0, pivots.len()).transpose()
    }

    pub fn is_invertible(&self, field: Field) -> bool {
        self.rows == self.cols && self.rank(field) == self.rows
    }

    pub fn inverse(&self, field: Field) -> Option<FqMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&FqMatrix::identity(n)).rref(field);
        if (0..n).any(|i| pivots.get(i) != Some(&i)) {
            return None;
        }
        let mut inv = FqMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Extends the independent columns of `self` (an `n x k` matrix) to a
    /// basis of `F_q^n` by appending standard vectors in index order, keeping
    /// each one that is independent of everything before it. Returns only
    /// the appended columns.
    pub fn complement_columns(&self, field: Field) -> FqMatrix {
        let n = self.rows;
        let mut current = self.clone();
        let mut rank = current.rank(field);
        let mut added = Vec::new();
        for i in 0..n {
            if rank == n {
                break;
            }
            let mut e = vec![0; n];
            e[i] = 1;
            let trial = current.hstack(&FqMatrix::from_columns(n, &[e.clone()]));
            let r = trial.rank(field);
            if r > rank {
                current = trial;
                rank = r;
                added.push(e);
            }
        }
        FqMatrix::from_columns(n, &added)
    }
}

/// Solves `a * x = b`. Returns one particular solution and a kernel basis
/// when the system is consistent.
pub fn linear_solve(a: &FqMatrix, b: &[u32], field: Field) -> Result<Solution> {
    if b.len() != a.rows() {
        return Err(Error::Contract(format!(
            "right-hand side has length {} but matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let augmented = a.hstack(&FqMatrix::from_columns(a.rows(), &[b.to_vec()]));
    let (r, pivots) = augmented.rref(field);
    let rank = pivots.iter().filter(|&&p| p < a.cols()).count();
    if pivots.contains(&a.cols()) {
        return Ok(Solution::NoSolution { rank });
    }
    let mut particular = vec![0; a.cols()];
    for (i, &p) in pivots.iter().enumerate() {
        particular[p] = r.get(i, a.cols());
    }
    let solution = Solution::Solved {
        particular,
        kernel: a.kernel_basis(field),
        rank,
    };
    #[cfg(debug_assertions)]
    if let Solution::Solved { particular, .. } = &solution {
        debug_assert_eq!(a.mul_vec(particular, field), b, "linear_solve substitution check");
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn solve_examples() {
        let f2 = f(2);
        let id = FqMatrix::identity(2);
        assert_eq!(
            linear_solve(&id, &[1, 0], f2).unwrap(),
            Solution::Solved {
                particular: vec![1, 0],
                kernel: vec![],
                rank: 2
            }
        );
        let zero = FqMatrix::zeros(2, 2);
        match linear_solve(&zero, &[0, 0], f2).unwrap() {
            Solution::Solved { kernel, rank, .. } => {
                assert_eq!(kernel.len(), 2);
                assert_eq!(rank, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            linear_solve(&zero, &[1, 0], f2).unwrap(),
            Solution::NoSolution { rank: 0 }
        );
        assert!(matches!(
            linear_solve(&zero, &[1, 0, 0], f2),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn construction_checks() {
        assert!(FqMatrix::from_rows(&[vec![0, 3]], 2, f(3)).is_err());
        assert!(FqMatrix::from_rows(&[vec![0, 1], vec![1]], 2, f(3)).is_err());
        let empty = FqMatrix::from_rows(&[], 3, f(3)).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 3));
    }

    #[test]
    fn inverse_and_complement() {
        let f3 = f(3);
        let m = FqMatrix::from_rows(&[vec![1, 2], vec![0, 1]], 2, f3).unwrap();
        let inv = m.inverse(f3).unwrap();
        assert_eq!(m.mul(&inv, f3), FqMatrix::identity(2));
        let singular = FqMatrix::from_rows(&[vec![1, 2], vec![2, 1]], 2, f3).unwrap();
        assert!(singular.inverse(f3).is_none());
        assert!(FqMatrix::identity(0).inverse(f3).is_some());

        let u = FqMatrix::from_columns(3, &[vec![1, 1, 0]]);
        let w = u.complement_columns(f3);
        assert_eq!(w, FqMatrix::from_columns(3, &[vec![1, 0, 0], vec![0, 0, 1]]));
        assert!(u.hstack(&w).is_invertible(f3));
    }

    #[test]
    fn column_space_is_echelon() {
        let f2 = f(2);
        let m = FqMatrix::from_rows(&[vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 0]], 3, f2).unwrap();
        let cs = m.column_space(f2);
        assert_eq!(cs, FqMatrix::from_columns(3, &[vec![1, 1, 0]]));
    }

    fn matrix_strategy(q: u32) -> impl Strategy<Value = FqMatrix> {
        (0usize..5, 0usize..5).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..q, r * c)
                .prop_map(move |data| FqMatrix::from_data(r, c, data, Field::new(q).unwrap()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(m in matrix_strategy(3)) {
            let f3 = f(3);
            let kernel = m.kernel_basis(f3);
            prop_assert_eq!(kernel.len() + m.rank(f3), m.cols());
            for v in &kernel {
                prop_assert!(m.mul_vec(v, f3).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn solve_substitutes(m in matrix_strategy(5), seed in any::<u64>()) {
            let f5 = f(5);
            // build a consistent right-hand side from a random x
            let x: Vec<u32> = (0..m.cols()).map(|i| ((seed >> (i * 3)) % 5) as u32).collect();
            let b = m.mul_vec(&x, f5);
            match linear_solve(&m, &b, f5).unwrap() {
                Solution::Solved { particular, .. } => prop_assert_eq!(m.mul_vec(&particular, f5), b),
                Solution::NoSolution { .. } => prop_assert!(false, "consistent system reported unsolvable"),
            }
        }

        #[test]
        fn rank_is_transpose_invariant(m in matrix_strategy(2)) {
            let f2 = f(2);
            prop_assert_eq!(m.rank(f2), m.transpose().rank(f2));
        }
    }
}
