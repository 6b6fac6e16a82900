//! Small dense complex matrices: pivoted elimination and power iteration.
//!
//! Every system in this crate is at most a few dozen unknowns, so nothing
//! here is blocked or cache-tuned.

use std::ops::{Index, IndexMut};

use crate::error::{RecoveryError, Result};
use crate::sequence::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        CMatrix::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        CMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| C64::new(v, 0.0)).collect())
            .collect();
        CMatrix::from_rows(&rows)
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

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|v| v.im == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// LU factorization with scaled partial pivoting. Each candidate pivot is
    /// measured against the largest entry of its own row, so systems whose
    /// rows differ by many orders of magnitude are not mistaken for singular.
    pub fn lu(&self) -> Result<LuFactors> {
        assert!(self.is_square(), "LU of a non-square matrix");
        let n = self.rows;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut scale: Vec<f64> = (0..n)
            .map(|i| self.row(i).iter().map(|v| v.norm()).fold(0.0, f64::max))
            .collect();
        let mut sign = 1.0;
        let threshold = n.max(1) as f64 * f64::EPSILON;

        for col in 0..n {
            let (pivot_row, pivot_rel) = (col..n)
                .map(|r| {
                    let rel = if scale[r] > 0.0 { lu[(r, col)].norm() / scale[r] } else { 0.0 };
                    (r, rel)
                })
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_rel <= threshold {
                return Err(RecoveryError::SingularSystem {
                    dim: n,
                    column: col,
                    pivot: lu[(pivot_row, col)].norm(),
                });
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.data.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
                scale.swap(col, pivot_row);
                sign = -sign;
            }
            let pivot = lu[(col, col)];
            for r in col + 1..n {
                let factor = lu[(r, col)] / pivot;
                lu[(r, col)] = factor;
                if factor == ZERO {
                    continue;
                }
                for j in col + 1..n {
                    let u = lu[(col, j)];
                    lu[(r, j)] -= factor * u;
                }
            }
        }
        Ok(LuFactors { lu, perm, sign })
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        Ok(self.lu()?.solve(b))
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        self.lu().map(|f| f.inverse())
    }

    pub fn determinant(&self) -> C64 {
        match self.lu() {
            Ok(f) => f.determinant(),
            Err(_) => ZERO,
        }
    }

    /// Largest singular value, from the eigenvalues of `SᴴS`.
    pub fn spectral_norm(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        if self.rows == 1 && self.cols == 1 {
            return self[(0, 0)].norm();
        }
        let gram = self.adjoint().mul(self);
        hermitian_eigenvalues(&gram).last().copied().unwrap_or(0.0).max(0.0).sqrt()
    }

    /// `‖S‖₂ · ‖S⁻¹‖₂`.
    pub fn condition_number(&self) -> Result<f64> {
        let inv = self.inverse()?;
        Ok(self.spectral_norm() * inv.spectral_norm())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Packed `L\U` factors and the row permutation.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: CMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl LuFactors {
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let acc = x[i] - (0..i).map(|j| row[j] * x[j]).sum::<C64>();
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let acc = x[i] - (i + 1..n).map(|j| row[j] * x[j]).sum::<C64>();
            x[i] = acc / row[i];
        }
        x
    }

    pub fn inverse(&self) -> CMatrix {
        let n = self.lu.rows;
        let mut inv = CMatrix::zeros(n, n);
        let mut e = vec![ZERO; n];
        for j in 0..n {
            e.fill(ZERO);
            e[j] = ONE;
            for (i, v) in self.solve(&e).into_iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        inv
    }

    pub fn determinant(&self) -> C64 {
        let n = self.lu.rows;
        (0..n).map(|i| self.lu[(i, i)]).product::<C64>() * self.sign
    }
}

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi rotations.
/// Only the upper triangle is read.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    assert!(h.is_square());
    let n = h.rows;
    let mut a = CMatrix::from_fn(n, n, |i, j| if i <= j { h[(i, j)] } else { h[(j, i)].conj() });
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let scale: f64 = a.data.iter().map(|c| c.norm_sqr()).sum();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off <= scale * f64::EPSILON * f64::EPSILON {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let e = apq / r;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                // A ← Uᴴ A U with U = [[c, s], [−s ē, c ē]] on rows/columns p, q.
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * c - akq * e.conj() * s;
                    a[(k, q)] = akp * s + akq * e.conj() * c;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = apk * c - aqk * e * s;
                    a[(q, k)] = apk * s + aqk * e * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// `‖Sx − b‖₂`.
pub fn residual_norm(s: &CMatrix, x: &[C64], b: &[C64]) -> f64 {
    s.mul_vec(x)
        .iter()
        .zip(b)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
