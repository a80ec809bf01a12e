//! Dense linear algebra on a truncated Fock space.
//!
//! Everything here is small (dimensions of a few tens at most), so all
//! matrices are stored densely and Hermitian exponentials go through a full
//! eigendecomposition. A scaling-and-squaring Taylor series is kept around as
//! an independent route for cross-checks and for non-normal generators.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance used to decide whether a generator is (anti-)Hermitian, relative
/// to its largest entry.
const HERMITIAN_TOL: f64 = 1e-12;

/// Pure state over the Fock levels `|0>, ..., |dim - 1>`.
///
/// Amplitudes are always normalized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amp: CVector,
}

impl StateVector {
    /// Builds a state from raw amplitudes, normalizing them.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        Self::from_vector(CVector::from_vec(amps))
    }

    pub fn from_vector(amp: CVector) -> Result<Self> {
        if amp.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if amp.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let norm = amp.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero-norm amplitude vector".into()));
        }
        Ok(Self { amp: amp.unscale(norm) })
    }

    /// Fock state `|n>` in a space of dimension `dim`.
    pub fn fock(dim: usize, n: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if n >= dim {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("level {n} does not exist in dimension {dim}"),
            });
        }
        let mut amp = CVector::zeros(dim);
        amp[n] = ONE;
        Ok(Self { amp })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::fock(dim, 0)
    }

    /// Wraps an amplitude vector that is already normalized (the image of a
    /// normalized state under a unitary).
    pub(crate) fn from_normalized(amp: CVector) -> Self {
        debug_assert!(!amp.is_empty());
        Self { amp }
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amp
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amp.get(n).copied().unwrap_or(ZERO)
    }

    pub fn norm(&self) -> f64 {
        self.amp.norm()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amp.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `<self|other>`, zero-padding the shorter vector.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Zero-pads the state into a larger space.
    pub fn embed(&self, dim: usize) -> Result<StateVector> {
        if dim < self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: dim });
        }
        let mut amp = CVector::zeros(dim);
        amp.rows_mut(0, self.dim()).copy_from(&self.amp);
        Ok(Self { amp })
    }
}

/// Dense square complex matrix acting on the truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    m: CMatrix,
}

impl Operator {
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("operator entries"));
        }
        Ok(Self { m })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { m: CMatrix::zeros(dim, dim) })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { m: CMatrix::identity(dim, dim) })
    }

    /// Diagonal operator with real entries.
    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        check_dim(entries.len())?;
        let d = CVector::from_iterator(entries.len(), entries.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::from_matrix(CMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn adjoint(&self) -> Operator {
        Operator { m: self.m.adjoint() }
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator { m: &self.m * factor }
    }

    /// Largest entry of `|m - m^dagger|`.
    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(&self.m - self.m.adjoint()))
    }

    /// Largest entry of `|m m^dagger - 1|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        max_abs(&(&self.m * self.m.adjoint() - CMatrix::identity(n, n)))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    /// Plain matrix-vector product on raw amplitudes.
    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(&self.m * v)
    }

    /// Applies a unitary to a state. The result keeps the input normalization,
    /// so the caller is responsible for passing an actual unitary.
    pub fn apply_unitary(&self, psi: &StateVector) -> Result<StateVector> {
        self.apply(psi.amplitudes()).map(StateVector::from_normalized)
    }

    /// `U rho U^dagger`.
    pub fn conjugate(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: rho.dim() });
        }
        Ok(DensityMatrix::from_raw(&self.m * rho.matrix() * self.m.adjoint()))
    }

    /// Eigendecomposition of a Hermitian operator: real eigenvalues in
    /// ascending order together with the matching orthonormal eigenvectors
    /// as columns.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, CMatrix) {
        hermitian_eigen(&self.m)
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        Operator { m: &self.m * &rhs.m }
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        Operator { m: &self.m + &rhs.m }
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        Operator { m: &self.m - &rhs.m }
    }
}

/// Mixed state on the truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: CMatrix,
}

impl DensityMatrix {
    pub const TRACE_TOL: f64 = 1e-10;
    pub const HERMITIAN_TOL: f64 = 1e-10;
    pub const POSITIVITY_TOL: f64 = 1e-8;

    /// Validates trace, Hermiticity and positivity before accepting `rho`.
    pub fn new(rho: CMatrix) -> Result<Self> {
        if rho.nrows() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if !rho.is_square() {
            return Err(Error::DimensionMismatch { expected: rho.nrows(), found: rho.ncols() });
        }
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("density matrix"));
        }
        let dm = Self { rho };
        let tr = dm.trace();
        if (tr - ONE).norm() > Self::TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} differs from 1")));
        }
        let herm = dm.hermiticity_error();
        if herm > Self::HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (error {herm:e})")));
        }
        let min_eig = dm.min_eigenvalue();
        if min_eig < -Self::POSITIVITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(dm)
    }

    /// `|psi><psi|`.
    pub fn pure(psi: &StateVector) -> Self {
        let v = psi.amplitudes();
        Self { rho: v * v.adjoint() }
    }

    pub(crate) fn from_raw(rho: CMatrix) -> Self {
        Self { rho }
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    /// Diagonal populations `<n|rho|n>`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.rho.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(&self.rho - self.rho.adjoint()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let (vals, _) = hermitian_eigen(&self.rho);
        vals.first().copied().unwrap_or(0.0)
    }

    /// `<psi|rho|psi>` for a pure reference state.
    pub fn fidelity_with(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        let v = psi.amplitudes();
        Ok((v.adjoint() * &self.rho * v)[(0, 0)].re.clamp(0.0, 1.0))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::InvalidDimension(0))
    } else {
        Ok(())
    }
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Annihilation operator with `m[n-1][n] = sqrt(n)`.
pub fn annihilation(dim: usize) -> Result<Operator> {
    check_dim(dim)?;
    let mut m = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    Ok(Operator { m })
}

pub fn creation(dim: usize) -> Result<Operator> {
    Ok(annihilation(dim)?.adjoint())
}

/// `diag(0, 1, ..., dim - 1)`.
pub fn number(dim: usize) -> Result<Operator> {
    check_dim(dim)?;
    Operator::diagonal(&(0..dim).map(|n| n as f64).collect::<Vec<_>>())
}

fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    // Symmetrize so round-off in the upper triangle cannot leak in.
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// `exp(scale * h)`.
///
/// Hermitian and anti-Hermitian generators are exponentiated through an
/// eigendecomposition; anything else falls back to the Taylor series.
pub fn matrix_exponential(h: &Operator, scale: Complex64) -> Result<Operator> {
    if !scale.re.is_finite() || !scale.im.is_finite() {
        return Err(Error::NonFinite("exponent scale"));
    }
    let m = h.matrix();
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("generator entries"));
    }
    let tol = HERMITIAN_TOL * max_abs(m).max(1.0);
    if max_abs(&(m - m.adjoint())) <= tol {
        Ok(Operator { m: spectral_exp(m, scale) })
    } else if max_abs(&(m + m.adjoint())) <= tol {
        // h = -i K with K = i h Hermitian.
        Ok(Operator { m: spectral_exp(&(m * I), -I * scale) })
    } else {
        matrix_exponential_series(h, scale)
    }
}

fn spectral_exp(herm: &CMatrix, scale: Complex64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(herm);
    let phases = CVector::from_iterator(vals.len(), vals.iter().map(|&l| (scale * l).exp()));
    let mut scaled = vecs.clone();
    for (mut col, p) in scaled.column_iter_mut().zip(phases.iter()) {
        col *= *p;
    }
    scaled * vecs.adjoint()
}

/// `exp(scale * h)` by scaling and squaring of a truncated Taylor series.
///
/// Works for any square matrix; used as the cross-check for the spectral
/// route and for non-normal generators.
pub fn matrix_exponential_series(h: &Operator, scale: Complex64) -> Result<Operator> {
    if !scale.re.is_finite() || !scale.im.is_finite() {
        return Err(Error::NonFinite("exponent scale"));
    }
    let a = h.matrix() * scale;
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("generator entries"));
    }
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|c| a.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    while norm1 / 2f64.powi(squarings as i32) > 0.5 {
        squarings += 1;
    }
    let a = a.unscale(2f64.powi(squarings as i32));

    let mut sum = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=60 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        sum += &term;
        if max_abs(&term) <= f64::EPSILON * 1e-3 * max_abs(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(Operator { m: sum })
}

/// `|<a|b>|^2` for normalized states; states of different dimension are
/// compared by zero-padding the smaller one.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::InvalidState("zero-norm state in fidelity".into()));
    }
    let overlap = a.inner(b).norm_sqr() / (na * na * nb * nb);
    Ok(overlap.clamp(0.0, 1.0))
}

pub fn probabilities(a: &StateVector) -> Vec<f64> {
    a.probabilities()
}
