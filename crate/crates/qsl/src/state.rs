//! Pure states and the fidelity angle.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{QslError, Result};

/// Norm deviation accepted at construction time.
pub const NORM_TOL: f64 = 1e-9;
/// Norm deviation accepted by operations taking already-built states.
pub const OP_NORM_TOL: f64 = 1e-6;

/// A normalized pure state of dimension >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: DVector<Complex64>,
}

impl StateVector {
    /// Builds a state from amplitudes, requiring unit norm within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let amps = DVector::from_vec(amplitudes);
        Self::from_vector(amps)
    }

    pub fn from_vector(amps: DVector<Complex64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(QslError::InvalidParameter(format!(
                "state dimension must be >= 2, got {}",
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QslError::NonFinite { context: "state amplitudes" });
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QslError::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Builds a state from arbitrary non-zero amplitudes, rescaling to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut amps = DVector::from_vec(amplitudes);
        let norm = amps.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(QslError::NotNormalized { norm });
        }
        amps /= Complex64::new(norm, 0.0);
        Self::from_vector(amps)
    }

    /// Computational basis state |k> of the given dimension.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(QslError::InvalidParameter(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![Complex64::ZERO; dim];
        amps[k] = Complex64::ONE;
        Self::new(amps)
    }

    /// Uniform superposition (1/sqrt(dim)) * (1, 1, ..., 1).
    pub fn uniform(dim: usize) -> Result<Self> {
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self::new(vec![a; dim])
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn vector(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amps[k]
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_dims(self, other)?;
        Ok(self.amps.dotc(&other.amps))
    }

    /// |<self|other>|, clamped into [0, 1].
    pub fn overlap_magnitude(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm().min(1.0))
    }
}

fn check_dims(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(QslError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

fn check_op_norm(s: &StateVector) -> Result<()> {
    let norm = s.norm();
    if (norm - 1.0).abs() > OP_NORM_TOL {
        return Err(QslError::NotNormalized { norm });
    }
    Ok(())
}

/// An angle in radians. Fidelity angles live in [0, pi/2]; raw bound values
/// are plain `f64` and may leave that range.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    /// Fidelity angle from an overlap magnitude; the magnitude is clamped into
    /// [0, 1] before the arccos so floating-point overshoot cannot produce NaN.
    pub fn from_overlap_magnitude(overlap: f64) -> Self {
        Angle(overlap.clamp(0.0, 1.0).acos())
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Fidelity angle arccos |<a|b>| between two normalized states.
///
/// Symmetric in its arguments and invariant under global phases.
pub fn fidelity_angle(a: &StateVector, b: &StateVector) -> Result<Angle> {
    check_dims(a, b)?;
    check_op_norm(a)?;
    check_op_norm(b)?;
    Ok(Angle::from_overlap_magnitude(a.overlap_magnitude(b)?))
}
