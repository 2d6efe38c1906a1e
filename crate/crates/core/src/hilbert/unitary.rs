use super::matrix::{ops, Matrix};
use super::state::TOLERANCE;
use crate::error::{Error, Result};

/// A unitary acting on one or more named subsystems. With several targets the
/// matrix acts on their Kronecker product in the listed order.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    matrix: Matrix,
    targets: Vec<String>,
}

impl LocalUnitary {
    pub fn new(matrix: Matrix, targets: &[&str]) -> Result<Self> {
        let deviation = matrix.unitarity_deviation();
        if deviation > TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        if targets.is_empty() {
            return Err(Error::InvalidArgument("unitary needs at least one target".into()));
        }
        Ok(Self { matrix, targets: targets.iter().map(|t| t.to_string()).collect() })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn targets(&self) -> &[String] {
        &self.targets
    }

    pub fn pauli_x(target: &str) -> Self {
        Self::known(ops::pauli_x(), target)
    }

    pub fn pauli_z(target: &str) -> Self {
        Self::known(ops::pauli_z(), target)
    }

    pub fn hadamard(target: &str) -> Self {
        Self::known(ops::hadamard(), target)
    }

    pub fn rotation(target: &str, theta: f64) -> Self {
        Self::known(ops::rotation(theta), target)
    }

    fn known(matrix: Matrix, target: &str) -> Self {
        Self { matrix, targets: vec![target.to_string()] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unitary() {
        let m = Matrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(LocalUnitary::new(m, &["a"]), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn accepts_rotation() {
        assert!(LocalUnitary::new(ops::rotation(0.123), &["e"]).is_ok());
    }
}
