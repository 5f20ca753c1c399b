//! Dense matrices over [`Scalar`] with the handful of factorizations the
//! geometry needs: Gauss-Jordan inverse, reduced row-echelon nullspace and
//! an LDLᵀ split for positive-definiteness tests.
//!
//! Pivoting follows the entry kind: exact columns take the first nonzero
//! entry so results are deterministic, float columns take the largest
//! magnitude.

use crate::algebra::Vector;
use crate::error::{Error, Result};
use crate::scalar::{Engine, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, found: bad.len() });
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect())
    }

    pub fn diagonal(values: &[Scalar]) -> Self {
        let mut m = Matrix::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let s = (0..self.cols).map(|k| self.get(i, k) * rhs.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        v.check_dim(self.cols)?;
        Ok(Vector::new(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&Scalar::int(-1))
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.add(&rhs.neg())
    }

    pub fn cast(&self, engine: &Engine) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| engine.cast(x)).collect() }
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(Scalar::is_exact)
    }

    pub fn approx_eq(&self, rhs: &Matrix, engine: &Engine) -> bool {
        (self.rows, self.cols) == (rhs.rows, rhs.cols)
            && self.data.iter().zip(&rhs.data).all(|(a, b)| engine.approx_eq(a, b))
    }

    pub fn is_symmetric(&self, engine: &Engine) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..i).all(|j| engine.approx_eq(self.get(i, j), self.get(j, i))))
    }

    fn pivot_row(&self, col: usize, from: usize, engine: &Engine) -> Option<usize> {
        let candidates = from..self.rows;
        if (from..self.rows).all(|r| self.get(r, col).is_exact()) {
            return candidates.into_iter().find(|&r| !self.get(r, col).is_exact_zero());
        }
        candidates
            .filter(|&r| !engine.is_zero(self.get(r, col)))
            .max_by(|&a, &b| {
                self.get(a, col)
                    .to_f64()
                    .abs()
                    .total_cmp(&self.get(b, col).to_f64().abs())
                    .then(b.cmp(&a))
            })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduced row-echelon form with unit pivots, plus the pivot columns.
    pub fn rref(&self, engine: &Engine) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = m.pivot_row(col, row, engine) else {
                for r in row..m.rows {
                    m.set(r, col, Scalar::zero());
                }
                continue;
            };
            m.swap_rows(row, p);
            let inv = Scalar::one() / m.get(row, col);
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            m.set(row, col, Scalar::one());
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_exact_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in col..m.cols {
                    let v = m.get(r, j) - &(&factor * m.get(row, j));
                    m.set(r, j, v);
                }
                m.set(r, col, Scalar::zero());
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Canonical nullspace basis: one vector per free column, with that
    /// free variable set to 1 and the other free variables 0.
    pub fn nullspace(&self, engine: &Engine) -> Vec<Vector> {
        let (r, pivots) = self.rref(engine);
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut x = vec![Scalar::zero(); self.cols];
                x[free] = Scalar::one();
                for (prow, &pcol) in pivots.iter().enumerate() {
                    x[pcol] = -r.get(prow, free);
                }
                Vector::new(x)
            })
            .collect()
    }

    pub fn rank(&self, engine: &Engine) -> usize {
        self.rref(engine).1.len()
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self, engine: &Engine) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, pivots) = aug.rref(engine);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// `self = L D Lᵀ` without pivoting, for symmetric input. `None` if a
    /// pivot vanishes before the end.
    pub fn ldl(&self, engine: &Engine) -> Option<(Matrix, Vec<Scalar>)> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut l = Matrix::identity(n);
        let mut d: Vec<Scalar> = Vec::with_capacity(n);
        for j in 0..n {
            let dj = self.get(j, j) - &(0..j).map(|k| l.get(j, k).square() * &d[k]).sum::<Scalar>();
            if engine.is_zero(&dj) {
                return None;
            }
            for i in j + 1..n {
                let s: Scalar = (0..j).map(|k| l.get(i, k) * l.get(j, k) * &d[k]).sum();
                l.set(i, j, (self.get(i, j) - &s) / &dj);
            }
            d.push(dj);
        }
        Some((l, d))
    }

    /// Symmetric with all leading principal minors positive.
    pub fn is_positive_definite(&self, engine: &Engine) -> bool {
        self.is_symmetric(engine)
            && self
                .ldl(engine)
                .is_some_and(|(_, d)| d.iter().all(|x| engine.is_positive(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_rational_matrix() {
        let e = Engine::exact();
        let m = Matrix::from_ints(&[&[2, 1], &[1, 1]]).unwrap();
        let inv = m.inverse(&e).unwrap();
        assert_eq!(inv, Matrix::from_ints(&[&[1, -1], &[-1, 2]]).unwrap());
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = Matrix::from_ints(&[&[1, 2], &[2, 4]]).unwrap();
        assert!(m.inverse(&Engine::exact()).is_none());
        assert!(m.cast(&Engine::float()).inverse(&Engine::float()).is_none());
    }

    #[test]
    fn nullspace_is_canonical() {
        // x + 2y - z = 0 has free variables y, z.
        let m = Matrix::from_ints(&[&[1, 2, -1], &[2, 4, -2]]).unwrap();
        let basis = m.nullspace(&Engine::exact());
        assert_eq!(basis, vec![Vector::from_ints(&[-2, 1, 0]), Vector::from_ints(&[1, 0, 1])]);
        for v in &basis {
            assert!(m.apply(v).unwrap().is_zero(&Engine::exact()));
        }
    }

    #[test]
    fn full_rank_has_empty_nullspace() {
        let m = Matrix::from_ints(&[&[0, 1], &[1, 0], &[1, 1]]).unwrap();
        assert!(m.nullspace(&Engine::exact()).is_empty());
        assert_eq!(m.rank(&Engine::exact()), 2);
    }

    #[test]
    fn ldl_reconstructs() {
        let e = Engine::exact();
        let g = Matrix::from_ints(&[&[4, 2, 0], &[2, 3, 1], &[0, 1, 2]]).unwrap();
        let (l, d) = g.ldl(&e).unwrap();
        let back = l.mul(&Matrix::diagonal(&d)).unwrap().mul(&l.transpose()).unwrap();
        assert_eq!(back, g);
        assert!(g.is_positive_definite(&e));
        let indefinite = Matrix::from_ints(&[&[1, 2], &[2, 1]]).unwrap();
        assert!(!indefinite.is_positive_definite(&e));
    }
}
