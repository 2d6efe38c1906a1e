use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// |row><col| of the given dimension.
    pub fn projector(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.data[row * dim + col] = ONE;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m.data[c * self.dim + r] = self.get(r, c).conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        let n = self.dim;
        let mut m = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    m.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        Ok(m)
    }

    pub fn add(&self, other: &Matrix) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        Ok(Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() })
    }

    /// Kronecker product `self ⊗ other`; `self` acts on the more significant factor.
    pub fn kron(&self, other: &Matrix) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut out = Self::zeros(dim);
        for r1 in 0..n {
            for c1 in 0..n {
                let a = self.get(r1, c1);
                if a == ZERO {
                    continue;
                }
                for r2 in 0..m {
                    for c2 in 0..m {
                        out.data[(r1 * m + r2) * dim + c1 * m + c2] = a * other.get(r2, c2);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim).map(|r| (0..self.dim).map(|c| self.data[r * self.dim + c] * v[c]).sum()).collect()
    }

    /// Largest entry of |U†U − I|.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.adjoint().mul(self).expect("square");
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let target = if r == c { ONE } else { ZERO };
                worst = worst.max((prod.get(r, c) - target).norm());
            }
        }
        worst
    }
}

/// Standard single- and two-qubit operators.
pub mod ops {
    use super::*;

    pub fn pauli_x() -> Matrix {
        Matrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn pauli_z() -> Matrix {
        Matrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    pub fn hadamard() -> Matrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Matrix::from_real(&[&[h, h], &[h, -h]]).unwrap()
    }

    /// Real rotation [[cos, −sin], [sin, cos]].
    pub fn rotation(theta: f64) -> Matrix {
        let (s, c) = theta.sin_cos();
        Matrix::from_real(&[&[c, -s], &[s, c]]).unwrap()
    }

    /// X^bit.
    pub fn x_power(bit: u8) -> Matrix {
        if bit & 1 == 1 {
            pauli_x()
        } else {
            Matrix::identity(2)
        }
    }

    /// Z^bit.
    pub fn z_power(bit: u8) -> Matrix {
        if bit & 1 == 1 {
            pauli_z()
        } else {
            Matrix::identity(2)
        }
    }

    /// CNOT with the first (more significant) qubit as control.
    pub fn cnot() -> Matrix {
        Matrix::projector(2, 0, 0).kron(&Matrix::identity(2)).add(&Matrix::projector(2, 1, 1).kron(&pauli_x())).unwrap()
    }

    /// `Σ_k op_k ⊗ |k><k|` over a `selector_dim`-level control that is the
    /// less significant factor; levels not listed get the identity.
    pub fn controlled_by_level(selector_dim: usize, ops: &[(usize, Matrix)]) -> Matrix {
        let target_dim = ops.first().map(|(_, m)| m.dim()).unwrap_or(2);
        let mut out = Matrix::zeros(target_dim * selector_dim);
        for level in 0..selector_dim {
            let op = ops
                .iter()
                .find(|(k, _)| *k == level)
                .map(|(_, m)| m.clone())
                .unwrap_or_else(|| Matrix::identity(target_dim));
            out = out.add(&op.kron(&Matrix::projector(selector_dim, level, level))).unwrap();
        }
        out
    }

    /// Permutation matrix sending basis state `i` to `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Matrix {
        let n = perm.len();
        let mut m = Matrix::zeros(n);
        for (i, &j) in perm.iter().enumerate() {
            m.set(j, i, ONE);
        }
        m
    }
}
