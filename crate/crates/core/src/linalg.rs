//! Dense exact linear algebra over a [`Field`].
//!
//! Elimination is fraction-free (Bareiss): every division performed during
//! forward elimination is exact, which keeps intermediate rational entries
//! from swelling.

use std::fmt;

use thiserror::Error;

use crate::scalars::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix shapes {0:?} and {1:?} are incompatible")]
    Shape((usize, usize), (usize, usize)),
    #[error("matrix is singular")]
    Singular,
}

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(
                (self.rows, self.cols),
                (other.rows, other.cols),
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a.clone() * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        (e.clone() - F::one()).is_negligible()
                    } else {
                        e.is_negligible()
                    }
                })
            })
    }

    /// Fraction-free row echelon form. Returns the pivot columns and the
    /// final leading pivot; the determinant of a square matrix is that pivot
    /// times the sign of the row swaps.
    fn bareiss(&mut self) -> (Vec<usize>, F, bool) {
        let mut pivots = Vec::new();
        let mut prev = F::one();
        let mut negate = false;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = self.pick_pivot(r, c) else { continue };
            if p != r {
                self.swap_rows(p, r);
                negate = !negate;
            }
            let piv = self[(r, c)].clone();
            let prev_inv = prev.inv().expect("nonzero previous pivot");
            for i in r + 1..self.rows {
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = (piv.clone() * &self[(i, j)] - f.clone() * &self[(r, j)]) * &prev_inv;
                    self[(i, j)] = v;
                }
                // rows before the pivot column were zero already, keep them so
                for j in 0..c {
                    self[(i, j)] = F::zero();
                }
            }
            // entries left of c in later rows are untouched zeros; columns
            // skipped earlier still need the fraction-free scaling
            for i in r + 1..self.rows {
                self[(i, c)] = F::zero();
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (pivots, prev, negate)
    }

    fn pick_pivot(&self, from: usize, c: usize) -> Option<usize> {
        if F::is_exact() {
            (from..self.rows).find(|&i| !self[(i, c)].is_zero())
        } else {
            (from..self.rows)
                .filter(|&i| !self[(i, c)].is_negligible())
                .max_by(|&a, &b| {
                    self[(a, c)]
                        .to_f64()
                        .abs()
                        .total_cmp(&self[(b, c)].to_f64().abs())
                })
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        if !F::is_exact() {
            return self.clone().rref().1.len();
        }
        self.clone().bareiss().0.len()
    }

    pub fn determinant(&self) -> Result<F, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape((self.rows, self.cols), (self.cols, self.rows)));
        }
        if self.rows == 0 {
            return Ok(F::one());
        }
        if !F::is_exact() {
            // partial pivoting with plain Gaussian elimination
            let mut m = self.clone();
            let mut det = F::one();
            for c in 0..m.cols {
                let Some(p) = m.pick_pivot(c, c) else {
                    return Ok(F::zero());
                };
                if p != c {
                    m.swap_rows(p, c);
                    det = -det;
                }
                let piv = m[(c, c)].clone();
                let inv = piv.inv().expect("pivot");
                for i in c + 1..m.rows {
                    let f = m[(i, c)].clone() * &inv;
                    for j in c..m.cols {
                        let v = m[(i, j)].clone() - f.clone() * &m[(c, j)];
                        m[(i, j)] = v;
                    }
                }
                det *= &piv;
            }
            return Ok(det);
        }
        let mut m = self.clone();
        let (pivots, last, negate) = m.bareiss();
        if pivots.len() < self.rows {
            return Ok(F::zero());
        }
        Ok(if negate { -last } else { last })
    }

    /// Reduced row echelon form (field divisions) and its pivot columns.
    pub fn rref(mut self) -> (Matrix<F>, Vec<usize>) {
        let pivots = if F::is_exact() {
            self.bareiss().0
        } else {
            self.gauss_partial()
        };
        // normalize pivots and clear above
        for (r, &c) in pivots.iter().enumerate() {
            let inv = self[(r, c)].inv().expect("pivot");
            for j in c..self.cols {
                let v = self[(r, j)].clone() * &inv;
                self[(r, j)] = v;
            }
            for i in 0..r {
                let f = self[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self[(i, j)].clone() - f.clone() * &self[(r, j)];
                    self[(i, j)] = v;
                }
            }
        }
        (self, pivots)
    }

    fn gauss_partial(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = self.pick_pivot(r, c) else {
                for i in r..self.rows {
                    self[(i, c)] = F::zero();
                }
                continue;
            };
            self.swap_rows(p, r);
            let inv = self[(r, c)].inv().expect("pivot");
            for i in r + 1..self.rows {
                let f = self[(i, c)].clone() * &inv;
                for j in c..self.cols {
                    let v = self[(i, j)].clone() - f.clone() * &self[(r, j)];
                    self[(i, j)] = v;
                }
                self[(i, c)] = F::zero();
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of `{ v : A v = 0 }`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.clone().rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Matrix<F>, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape((self.rows, self.cols), (self.cols, self.rows)));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = F::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Solve `A x = b` for square nonsingular `A`.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>, LinalgError> {
        Ok(self.inverse()?.mul_vec(b))
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|x| format!("{x:?}"))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x.clone() * y);
        }
    }
    acc
}
