//! Time-dependent Hermitian generators of Schroedinger dynamics.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::operator::HermitianOperator;

type EvalFn = dyn Fn(f64) -> DMatrix<Complex64> + Send + Sync;

/// A mapping t -> H(t). Evaluation validates Hermiticity and finiteness, so a
/// misbehaving closure surfaces as an error instead of corrupting dynamics.
#[derive(Clone)]
pub struct TimeDependentGenerator {
    dim: usize,
    label: String,
    eval: Arc<EvalFn>,
}

impl TimeDependentGenerator {
    pub fn new(
        dim: usize,
        label: impl Into<String>,
        eval: impl Fn(f64) -> DMatrix<Complex64> + Send + Sync + 'static,
    ) -> Self {
        Self { dim, label: label.into(), eval: Arc::new(eval) }
    }

    /// Generator that is constant in time.
    pub fn constant(op: HermitianOperator, label: impl Into<String>) -> Self {
        let dim = op.dim();
        let m = op.matrix().clone();
        Self::new(dim, label, move |_| m.clone())
    }

    /// The zero generator (free frame).
    pub fn zero(dim: usize) -> Self {
        Self::new(dim, "zero", move |_| DMatrix::zeros(dim, dim))
    }

    /// Pointwise sum of two generators of equal dimension.
    pub fn sum(&self, other: &Self, label: impl Into<String>) -> Self {
        assert_eq!(self.dim, other.dim, "generator dimensions must agree");
        let a = self.eval.clone();
        let b = other.eval.clone();
        Self::new(self.dim, label, move |t| a(t) + b(t))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluate(&self, t: f64) -> Result<HermitianOperator> {
        HermitianOperator::new((self.eval)(t))
    }

    /// Raw matrix without the Hermiticity check; used by inner loops that
    /// assemble validated combinations themselves.
    pub(crate) fn evaluate_raw(&self, t: f64) -> DMatrix<Complex64> {
        (self.eval)(t)
    }
}

impl fmt::Debug for TimeDependentGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeDependentGenerator")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::QslError;

    #[test]
    fn evaluation_validates_hermiticity() {
        let gen = TimeDependentGenerator::new(2, "broken", |t| {
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(t, 0.0),
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(-t, 0.0),
                ],
            )
        });
        assert!(matches!(gen.evaluate(1.0), Err(QslError::NotHermitian { .. })));
    }

    #[test]
    fn evaluation_rejects_non_finite_entries() {
        let gen = TimeDependentGenerator::new(2, "nan", |_| {
            DMatrix::from_element(2, 2, Complex64::new(f64::NAN, 0.0))
        });
        assert!(matches!(gen.evaluate(0.0), Err(QslError::NonFinite { .. })));
    }

    #[test]
    fn sum_adds_pointwise() {
        let a = TimeDependentGenerator::constant(HermitianOperator::identity(2), "id");
        let b = TimeDependentGenerator::constant(&HermitianOperator::identity(2) * 2.0, "2id");
        let s = a.sum(&b, "3id");
        let m = s.evaluate(0.3).unwrap();
        assert!((m.matrix()[(0, 0)].re - 3.0).abs() < 1e-15);
    }
}
