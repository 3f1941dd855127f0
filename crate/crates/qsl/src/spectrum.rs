//! Eigensystems of Hermitian operators with a fixed phase convention.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QslError, Result};
use crate::operator::HermitianOperator;
use crate::state::StateVector;

const ORTHONORMALITY_TOL: f64 = 1e-10;
const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Eigenvalues sorted ascending with orthonormal, phase-fixed eigenvectors.
///
/// Phase convention: the largest-magnitude component of each eigenvector is
/// made real positive (ties resolved toward the lowest index).
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<StateVector>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[StateVector] {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Smallest gap between adjacent (sorted) eigenvalues.
    pub fn min_gap(&self) -> f64 {
        self.eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the eigenvector with the largest overlap magnitude with `psi`.
    pub fn closest_eigenvector(&self, psi: &StateVector) -> Result<(usize, f64)> {
        let mut best = 0;
        let mut best_ov = 0.0;
        for (k, v) in self.eigenvectors.iter().enumerate() {
            let ov = v.overlap_magnitude(psi)?;
            if ov > best_ov {
                best = k;
                best_ov = ov;
            }
        }
        Ok((best, best_ov))
    }
}

/// Full eigendecomposition of a Hermitian operator.
pub fn eigensystem(op: &HermitianOperator) -> Result<Spectrum> {
    let dim = op.dim();
    let se = op.matrix().clone().symmetric_eigen();

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[a]
            .partial_cmp(&se.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut eigenvalues = Vec::with_capacity(dim);
    let mut eigenvectors = Vec::with_capacity(dim);
    for &k in &order {
        let ev = se.eigenvalues[k];
        if !ev.is_finite() {
            return Err(QslError::EigensolveFailed("non-finite eigenvalue".into()));
        }
        let mut v: DVector<Complex64> = se.eigenvectors.column(k).into_owned();
        fix_phase(&mut v);
        eigenvalues.push(ev);
        eigenvectors.push(StateVector::from_vector(v)?);
    }

    validate(op, &eigenvalues, &eigenvectors)?;
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// Rotates the global phase so the largest-magnitude component is real
/// positive; the first maximal component wins on exact ties.
fn fix_phase(v: &mut DVector<Complex64>) {
    let mut best = 0;
    let mut best_mag = v[0].norm();
    for i in 1..v.len() {
        let m = v[i].norm();
        if m > best_mag {
            best = i;
            best_mag = m;
        }
    }
    if best_mag > 0.0 {
        let phase = v[best].conj() / Complex64::new(best_mag, 0.0);
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

fn validate(
    op: &HermitianOperator,
    eigenvalues: &[f64],
    eigenvectors: &[StateVector],
) -> Result<()> {
    let dim = op.dim();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let ov = eigenvectors[i].inner(eigenvectors[j])?.norm();
            if ov > ORTHONORMALITY_TOL {
                return Err(QslError::EigensolveFailed(format!(
                    "eigenvectors {i} and {j} overlap by {ov:.3e}"
                )));
            }
        }
    }
    let mut rec = DMatrix::<Complex64>::zeros(dim, dim);
    for (ev, v) in eigenvalues.iter().zip(eigenvectors) {
        let col = v.vector();
        rec += (col * col.adjoint()).scale(*ev);
    }
    let err = (op.matrix() - rec).norm();
    if err > RECONSTRUCTION_TOL * op.frobenius_norm().max(1.0) {
        return Err(QslError::EigensolveFailed(format!(
            "spectral reconstruction error {err:.3e}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix_has_sorted_basis_spectrum() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        );
        let s = eigensystem(&HermitianOperator::new(m).unwrap()).unwrap();
        assert_eq!(s.eigenvalues(), &[-1.0, 2.0]);
        assert!((s.eigenvectors()[0].amplitude(1).re - 1.0).abs() < 1e-14);
        assert!((s.eigenvectors()[1].amplitude(0).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn flip_matrix_eigensystem() {
        let delta = 0.8;
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(delta, 0.0), c(delta, 0.0), c(0.0, 0.0)],
        );
        let s = eigensystem(&HermitianOperator::new(m).unwrap()).unwrap();
        assert!((s.eigenvalues()[0] + delta).abs() < 1e-14);
        assert!((s.eigenvalues()[1] - delta).abs() < 1e-14);
        // Ground state is (1, -1)/sqrt2 up to phase; the convention makes the
        // largest-magnitude component (the first) real positive.
        let g = &s.eigenvectors()[0];
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g.amplitude(0).re - inv_sqrt2).abs() < 1e-12);
        assert!((g.amplitude(1).re + inv_sqrt2).abs() < 1e-12);
    }

    #[test]
    fn projector_complement_spectrum() {
        // A0 (1 - |+><+|): lowest eigenvalue 0 with eigenvector |+>.
        let n = 6;
        let plus = StateVector::uniform(n).unwrap();
        let proj = plus.vector() * plus.vector().adjoint();
        let m = DMatrix::identity(n, n) - proj;
        let s = eigensystem(&HermitianOperator::new(m).unwrap()).unwrap();
        assert!(s.eigenvalues()[0].abs() < 1e-12);
        let ov = s.eigenvectors()[0].overlap_magnitude(&plus).unwrap();
        assert!(ov > 1.0 - 1e-12);
        for ev in &s.eigenvalues()[1..] {
            assert!((ev - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let dim = 5;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = c(next(), next());
            }
        }
        let h = HermitianOperator::symmetrized(m);
        let s = eigensystem(&h).unwrap();
        // validate() already checks orthonormality and reconstruction; spot
        // check the ordering here.
        for w in s.eigenvalues().windows(2) {
            assert!(w[0] <= w[1]);
        }
    }
}
