//! Adaptive Dormand-Prince 5(4) integration of the amplitude and Lindblad
//! equations.
//!
//! These integrate the equations of motion term by term in the Fock basis,
//! independently of the spectral propagators and of the closed-form
//! dissipative map, so they can referee both.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{kerr_level, DriveEnvelope, DriveKind, KerrModel};
use crate::operators::{CMatrix, CVector, DensityMatrix, StateVector};

/// Error control for the integrator: a step is accepted when every component
/// satisfies `|err| <= atol + rtol * |y|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12 }
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `dy/dt = f(t, y)` from `t0` to `t1`.
pub fn integrate<F>(mut f: F, y0: CVector, t0: f64, t1: f64, tol: Tolerances) -> Result<CVector>
where
    F: FnMut(f64, &CVector) -> CVector,
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * (span.abs() * 1e-3).min(1e-2);
    let mut k: Vec<CVector> = Vec::with_capacity(7);
    let mut first = f(t, &y);

    while (t1 - t) * dir > 0.0 {
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        k.clear();
        k.push(first.clone());
        for stage in 1..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage][j];
                if a != 0.0 {
                    ys.axpy(Complex64::new(h * a, 0.0), kj, Complex64::new(1.0, 0.0));
                }
            }
            k.push(f(t + C[stage] * h, &ys));
        }
        let mut y5 = y.clone();
        let mut err = CVector::zeros(y.len());
        for (i, ki) in k.iter().enumerate() {
            if B5[i] != 0.0 {
                y5.axpy(Complex64::new(h * B5[i], 0.0), ki, Complex64::new(1.0, 0.0));
            }
            let e = B5[i] - B4[i];
            if e != 0.0 {
                err.axpy(Complex64::new(h * e, 0.0), ki, Complex64::new(1.0, 0.0));
            }
        }
        let err_norm = err
            .iter()
            .zip(y.iter().zip(y5.iter()))
            .map(|(e, (a, b))| e.norm() / (tol.atol + tol.rtol * a.norm().max(b.norm())))
            .fold(0.0, f64::max);

        if err_norm <= 1.0 {
            t += h;
            y = y5;
            // First-same-as-last: the seventh stage is f at the new point.
            first = k[6].clone();
        }
        let factor = if err_norm == 0.0 { 5.0 } else { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::IntegrationFailure { t, step: h });
        }
        if y.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("integrator state"));
        }
    }
    Ok(y)
}

/// Amplitudes integrated in an enlarged space and truncated back to the
/// model dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    /// `C_0, ..., C_{dim-1}` (not renormalized).
    pub amplitudes: CVector,
    /// Norm of the discarded amplitudes on levels `dim..dim_big`.
    pub tail_norm: f64,
}

impl OracleSolution {
    pub fn state(&self) -> Result<StateVector> {
        StateVector::from_vector(self.amplitudes.clone())
    }
}

/// Integrates `i dC_n/dt = E_n C_n + eps * (couplings)` for a constant drive
/// in `dim_big` levels and truncates the result to `model.dim`.
pub fn ode_oracle(model: &KerrModel, psi0: &StateVector, t: f64, dim_big: usize) -> Result<OracleSolution> {
    ode_oracle_with(model, psi0, t, dim_big, Tolerances::default())
}

pub fn ode_oracle_with(
    model: &KerrModel,
    psi0: &StateVector,
    t: f64,
    dim_big: usize,
    tol: Tolerances,
) -> Result<OracleSolution> {
    if model.envelope != DriveEnvelope::Constant {
        return Err(Error::Unsupported("the amplitude oracle integrates a constant drive only".into()));
    }
    if psi0.dim() != model.dim {
        return Err(Error::DimensionMismatch { expected: model.dim, found: psi0.dim() });
    }
    if dim_big < model.dim {
        return Err(Error::InvalidParameter {
            name: "dim_big",
            reason: format!("{dim_big} is smaller than the model dimension {}", model.dim),
        });
    }
    let energies: Vec<f64> = (0..dim_big).map(|n| kerr_level(model.order, model.chi, n)).collect();
    let eps = model.eps;
    let drive = model.drive;
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |_t: f64, c: &CVector| -> CVector {
        CVector::from_fn(dim_big, |n, _| {
            let mut acc = c[n] * energies[n];
            match drive {
                DriveKind::Linear => {
                    if n >= 1 {
                        acc += c[n - 1] * (eps * (n as f64).sqrt());
                    }
                    if n + 1 < dim_big {
                        acc += c[n + 1] * (eps * ((n + 1) as f64).sqrt());
                    }
                }
                DriveKind::Parametric => {
                    if n >= 2 {
                        acc += c[n - 2] * (eps * ((n * (n - 1)) as f64).sqrt());
                    }
                    if n + 2 < dim_big {
                        acc += c[n + 2] * (eps * (((n + 1) * (n + 2)) as f64).sqrt());
                    }
                }
            }
            acc * minus_i
        })
    };
    let y0 = psi0.embed(dim_big)?.amplitudes().clone();
    let y = integrate(rhs, y0, 0.0, t, tol)?;
    let amplitudes = y.rows(0, model.dim).into_owned();
    let tail_norm = y.rows(model.dim, dim_big - model.dim).norm();
    Ok(OracleSolution { amplitudes, tail_norm })
}

/// Integrates the damped two-photon Kerr master equation for a time `t`.
pub fn lindblad_oracle(rho0: &DensityMatrix, chi: f64, gamma: f64, t: f64, tol: Tolerances) -> Result<CMatrix> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidDamping(gamma));
    }
    let dim = rho0.dim();
    let a = CMatrix::from_fn(dim, dim, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let ad = a.adjoint();
    let n_op = &ad * &a;
    let h = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::new(0.5 * chi * (r as f64) * (r as f64 - 1.0), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |_t: f64, y: &CVector| -> CVector {
        let rho = CMatrix::from_column_slice(dim, dim, y.as_slice());
        let comm = &h * &rho - &rho * &h;
        let jump = &a * &rho * &ad * Complex64::new(2.0, 0.0) - &n_op * &rho - &rho * &n_op;
        let d = comm * minus_i + jump * Complex64::new(0.5 * gamma, 0.0);
        CVector::from_column_slice(d.as_slice())
    };
    let y0 = CVector::from_column_slice(rho0.matrix().as_slice());
    let y = integrate(rhs, y0, 0.0, t, tol)?;
    Ok(CMatrix::from_column_slice(dim, dim, y.as_slice()))
}
