use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DriveEnvelope, KerrModel};
use crate::operators::{matrix_exponential, CMatrix, CVector, StateVector};

fn require_constant(model: &KerrModel) -> Result<()> {
    match model.envelope {
        DriveEnvelope::Constant => Ok(()),
        _ => Err(Error::Unsupported(
            "continuous propagation needs a constant envelope; use the kicked engine".into(),
        )),
    }
}

fn require_dim(model: &KerrModel, psi0: &StateVector) -> Result<()> {
    if psi0.dim() != model.dim {
        return Err(Error::DimensionMismatch { expected: model.dim, found: psi0.dim() });
    }
    Ok(())
}

/// `exp(-i H t)|psi0>` for the constant-envelope Hamiltonian.
pub fn evolve_unitary(model: &KerrModel, psi0: &StateVector, t: f64) -> Result<StateVector> {
    require_constant(model)?;
    require_dim(model, psi0)?;
    if !t.is_finite() {
        return Err(Error::NonFinite("evolution time"));
    }
    let u = matrix_exponential(&model.hamiltonian()?, Complex64::new(0.0, -t))?;
    u.apply_unitary(psi0)
}

/// Spectral propagator of a time-independent Hamiltonian, diagonalized once
/// and reused across a time grid.
#[derive(Debug, Clone)]
pub struct Propagator {
    energies: Vec<f64>,
    vectors: CMatrix,
}

impl Propagator {
    pub fn new(model: &KerrModel) -> Result<Self> {
        require_constant(model)?;
        let (energies, vectors) = model.hamiltonian()?.hermitian_eigen();
        Ok(Self { energies, vectors })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `V exp(-i E t) V^dagger psi0`.
    pub fn evolve(&self, psi0: &StateVector, t: f64) -> Result<StateVector> {
        if psi0.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi0.dim() });
        }
        let mut c: CVector = self.vectors.adjoint() * psi0.amplitudes();
        for (ci, &e) in c.iter_mut().zip(&self.energies) {
            *ci *= Complex64::from_polar(1.0, -e * t);
        }
        Ok(StateVector::from_normalized(&self.vectors * c))
    }
}

/// States at each time in `times`, all propagated from `psi0` at `t = 0`.
pub fn evolve_continuous(model: &KerrModel, psi0: &StateVector, times: &[f64]) -> Result<Vec<StateVector>> {
    require_dim(model, psi0)?;
    let prop = Propagator::new(model)?;
    times.iter().map(|&t| prop.evolve(psi0, t)).collect()
}
