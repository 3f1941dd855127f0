//! Hermitian operators together with expectation values and variances.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QslError, Result};
use crate::state::StateVector;

/// Elementwise Hermiticity tolerance applied at construction.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Imaginary residue accepted when reading off a real expectation value.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;
/// Negative variance residue clamped to zero; anything below is an error.
pub const VARIANCE_RESIDUE_TOL: f64 = -1e-12;

/// A dense Hermitian matrix in energy units (hbar = 1).
///
/// The stored matrix is symmetrized as (O + O^H)/2 so downstream eigensolves
/// stay well-posed.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Validates Hermiticity within [`HERMITICITY_TOL`] and stores the
    /// symmetrized matrix.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(QslError::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        if entries.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(QslError::NonFinite { context: "operator entries" });
        }
        let adj = entries.adjoint();
        let deviation = (&entries - &adj).amax();
        if deviation > HERMITICITY_TOL {
            return Err(QslError::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(entries))
    }

    /// Symmetrizes (O + O^H)/2 without a Hermiticity check. The result is
    /// exactly Hermitian; intended for matrices Hermitian up to a known
    /// discretization residue (finite differences, commutator assembly).
    pub fn symmetrized(entries: DMatrix<Complex64>) -> Self {
        let adj = entries.adjoint();
        let sym = (entries + adj).scale(0.5);
        Self { entries: sym }
    }

    pub fn zero(dim: usize) -> Self {
        Self { entries: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// O |psi>.
    pub fn apply(&self, psi: &StateVector) -> Result<nalgebra::DVector<Complex64>> {
        self.check_dim(psi)?;
        Ok(&self.entries * psi.vector())
    }

    /// Largest absolute entry of O - P; a cheap operator distance.
    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        (&self.entries - &other.entries).amax()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    fn check_dim(&self, psi: &StateVector) -> Result<()> {
        if self.dim() != psi.dim() {
            return Err(QslError::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        Ok(())
    }
}

impl std::ops::Add<&HermitianOperator> for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator { entries: &self.entries + &rhs.entries }
    }
}

impl std::ops::Sub<&HermitianOperator> for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator { entries: &self.entries - &rhs.entries }
    }
}

impl std::ops::Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, rhs: f64) -> HermitianOperator {
        HermitianOperator { entries: self.entries.scale(rhs) }
    }
}

/// <psi|O|psi> as a real number.
///
/// The imaginary residue must stay below [`IMAG_RESIDUE_TOL`]; a larger
/// residue signals a non-Hermitian operator and is reported as an error.
pub fn expectation(op: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    let w = op.apply(psi)?;
    let val = psi.vector().dotc(&w);
    if val.im.abs() > IMAG_RESIDUE_TOL * val.re.abs().max(1.0) {
        return Err(QslError::ImaginaryResidue { residue: val.im });
    }
    Ok(val.re)
}

/// Standard deviation sqrt(<O^2> - <O>^2) in the given state.
///
/// A tiny negative radicand (above [`VARIANCE_RESIDUE_TOL`]) is clamped to
/// zero; anything lower is reported as a numerical inconsistency.
pub fn variance(op: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    let w = op.apply(psi)?;
    let mean = psi.vector().dotc(&w);
    if mean.im.abs() > IMAG_RESIDUE_TOL * mean.re.abs().max(1.0) {
        return Err(QslError::ImaginaryResidue { residue: mean.im });
    }
    // <O^2> = |O psi|^2 for Hermitian O, which is exactly real.
    let second = w.norm_squared();
    let s2 = second - mean.re * mean.re;
    if s2 < VARIANCE_RESIDUE_TOL {
        return Err(QslError::NegativeVariance { value: s2 });
    }
    Ok(s2.max(0.0).sqrt())
}

/// sqrt(<O^2>); an upper bound for [`variance`] that needs no mean.
pub fn rms_bound(op: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    let w = op.apply(psi)?;
    Ok(w.norm())
}
