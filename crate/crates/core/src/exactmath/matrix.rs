//! Dense matrices over an exact field.

use std::fmt;
use std::ops::{Index, IndexMut};

use super::{ExactError, Scalar};

/// Row-major dense matrix. The `zero` element fixes the field context so
/// empty matrices still know which field they live over.
#[derive(Clone, PartialEq)]
pub struct Matrix<T: Scalar> {
    rows: usize,
    cols: usize,
    zero: T,
    data: Vec<T>,
}

/// Column order used while choosing pivots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    LeftToRight,
    RightToLeft,
}

/// Outcome of [`rank_and_solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct RankSolve<T: Scalar> {
    pub rank: usize,
    /// One solution of `A x = b`, or `None` if the system is inconsistent.
    pub solution: Option<Vec<T>>,
    /// Basis of the right kernel of `A`.
    pub kernel: Vec<Vec<T>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, zero: &T) -> Self {
        Matrix {
            rows,
            cols,
            zero: zero.zero_like(),
            data: vec![zero.zero_like(); rows * cols],
        }
    }

    pub fn identity(n: usize, zero: &T) -> Self {
        let mut m = Self::zeros(n, n, zero);
        for i in 0..n {
            m[(i, i)] = zero.one_like();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>, zero: &T) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            zero: zero.zero_like(),
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, zero: &T, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            zero: zero.zero_like(),
            data,
        }
    }

    /// Matrix with the given vectors as columns.
    pub fn from_columns(cols: &[Vec<T>], rows: usize, zero: &T) -> Self {
        Self::from_fn(rows, cols.len(), zero, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn zero_elem(&self) -> &T {
        &self.zero
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, zero: &U, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            zero: zero.zero_like(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Scalar, E>(&self, zero: &U, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            zero: zero.zero_like(),
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.zero, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    fn check_same_shape(&self, rhs: &Self) -> Result<(), ExactError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, ExactError> {
        self.check_same_shape(rhs)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            zero: self.zero.clone(),
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, ExactError> {
        self.check_same_shape(rhs)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            zero: self.zero.clone(),
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols, &self.zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let t = a.mul(b);
                        out[(i, j)].add_assign(&t);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sum; panics on shape mismatch.
    pub fn add(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("matrix shape mismatch")
    }

    /// Difference; panics on shape mismatch.
    pub fn sub(&self, rhs: &Self) -> Self {
        self.try_sub(rhs).expect("matrix shape mismatch")
    }

    /// Product; panics on shape mismatch.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("matrix shape mismatch")
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            zero: self.zero.clone(),
            data: self.data.iter().map(|x| x.mul(s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            zero: self.zero.clone(),
            data: self.data.iter().map(|x| x.neg()).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.zero.clone();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        let mut acc = self.zero.clone();
        for i in 0..self.rows {
            acc.add_assign(&self[(i, i)]);
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows, &self.zero);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows + rhs.rows, self.cols + rhs.cols, &self.zero);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..rhs.rows {
            for j in 0..rhs.cols {
                out[(self.rows + i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        out
    }

    /// Kronecker product.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, &self.zero, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)].mul(&rhs[(i % rhs.rows, j % rhs.cols)])
        })
    }

    pub fn sub_matrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, &self.zero, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Reduced row echelon form and pivot columns (in the order found).
    pub fn rref_with(&self, order: PivotOrder) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        let col_iter: Vec<usize> = match order {
            PivotOrder::LeftToRight => (0..self.cols).collect(),
            PivotOrder::RightToLeft => (0..self.cols).rev().collect(),
        };
        for c in col_iter {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in 0..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = m[(r, j)].mul(&inv);
                }
            }
            let prow: Vec<T> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for (j, pv) in prow.iter().enumerate() {
                    if !pv.is_zero() {
                        m[(i, j)].sub_mul_assign(&f, pv);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        self.rref_with(PivotOrder::LeftToRight)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank computed with both pivot orders; the two must agree.
    pub fn rank_cross_checked(&self) -> usize {
        let a = self.rref_with(PivotOrder::LeftToRight).1.len();
        let b = self.rref_with(PivotOrder::RightToLeft).1.len();
        assert_eq!(a, b, "rank differs between pivot orders");
        a
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// One solution of `A x = b`, if any.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        rank_and_solve(self, b).ok()?.solution
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n, &self.zero);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.zero.one_like();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.sub_matrix(0, n, n, n))
    }

    pub fn det(&self) -> T {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.zero.one_like();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return self.zero.clone();
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let piv = m[(c, c)].clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].mul(&inv);
                for j in c..n {
                    let pv = m[(c, j)].clone();
                    m[(i, j)].sub_mul_assign(&f, &pv);
                }
            }
        }
        det
    }
}

fn kernel_from_rref<T: Scalar>(r: &Matrix<T>, pivots: &[usize]) -> Vec<Vec<T>> {
    let mut is_pivot = vec![None; r.cols];
    for (row, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(row);
    }
    let mut basis = Vec::new();
    for free in 0..r.cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![r.zero.clone(); r.cols];
        v[free] = r.zero.one_like();
        for (c, row) in is_pivot.iter().enumerate() {
            if let Some(row) = row {
                v[c] = r[(*row, free)].neg();
            }
        }
        basis.push(v);
    }
    basis
}

/// Rank of `A`, one solution of `A x = b` (if consistent) and a kernel basis.
pub fn rank_and_solve<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<RankSolve<T>, ExactError> {
    if b.len() != a.rows {
        return Err(ExactError::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows
        )));
    }
    let n = a.cols;
    let mut aug = Matrix::zeros(a.rows, n + 1, &a.zero);
    for i in 0..a.rows {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let (r, pivots) = aug.rref();
    let consistent = pivots.last() != Some(&n);
    let a_pivots: Vec<usize> = pivots.iter().copied().filter(|&c| c < n).collect();
    let solution = consistent.then(|| {
        let mut x = vec![a.zero.clone(); n];
        for (row, &c) in a_pivots.iter().enumerate() {
            x[c] = r[(row, n)].clone();
        }
        x
    });
    let ra = r.sub_matrix(0, 0, r.rows, n);
    Ok(RankSolve {
        rank: a_pivots.len(),
        solution,
        kernel: kernel_from_rref(&ra, &a_pivots),
    })
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{CycScalar, CyclotomicField, Fp};

    #[test]
    fn rank_one_cyclotomic_matrix() {
        let f = CyclotomicField::get(3).unwrap();
        let one = CycScalar::from_int(&f, 1);
        let z = CycScalar::zeta_pow(&f, 1);
        let z2 = CycScalar::zeta_pow(&f, 2);
        let m = Matrix::from_rows(vec![vec![one.clone(), z.clone()], vec![z2.clone(), one.clone()]], &one);
        // the 2x2 determinant is the only minor that can vanish
        let cofactor = one.mul(&one).sub(&z.mul(&z2));
        assert!(cofactor.is_zero());
        assert_eq!(m.det(), cofactor);
        assert_eq!(m.rank_cross_checked(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_inverse_det() {
        let p = 1_000_003;
        let e = |v: i64| Fp::new(v, p);
        let a = Matrix::from_rows(
            vec![vec![e(2), e(1), e(0)], vec![e(1), e(3), e(1)], vec![e(0), e(1), e(4)]],
            &e(0),
        );
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert_eq!(a.det(), e(2 * 11 - 4));
        let b = vec![e(1), e(2), e(3)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let sing = Matrix::from_rows(vec![vec![e(1), e(2)], vec![e(2), e(4)]], &e(0));
        let rs = rank_and_solve(&sing, &[e(1), e(0)]).unwrap();
        assert_eq!(rs.rank, 1);
        assert!(rs.solution.is_none());
        assert_eq!(rs.kernel.len(), 1);
        assert!(sing.inverse().is_none());
        assert!(rank_and_solve(&sing, &[e(1)]).is_err());
    }

    #[test]
    fn pow_and_kron() {
        let p = 97;
        let e = |v: i64| Fp::new(v, p);
        let a = Matrix::from_rows(vec![vec![e(1), e(1)], vec![e(0), e(1)]], &e(0));
        assert_eq!(a.pow(5)[(0, 1)], e(5));
        let k = a.kron(&Matrix::identity(2, &e(0)));
        assert_eq!(k.rows(), 4);
        assert_eq!(k[(0, 2)], e(1));
        assert_eq!(k.trace(), e(4));
    }
}
