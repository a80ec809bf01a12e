//! Exact damped-Kerr evolution between delta kicks.
//!
//! Between pulses the cavity obeys
//! `d rho/dt = -i [(chi/2) a^dagger^2 a^2, rho] + (gamma/2)(2 a rho a^dagger - a^dagger a rho - rho a^dagger a)`,
//! which has a closed-form solution in the Fock basis.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::KerrModel;
use crate::operators::{CMatrix, DensityMatrix};

use super::kicked::{check_envelope, kick_operators};
use super::{KickSchedule, SimulationResult};

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    for k in 1..=n {
        out.push(out[k - 1] + (k as f64).ln());
    }
    out
}

/// Evolves `rho` over one inter-pulse interval `period` with the exact
/// damped-Kerr map.
///
/// With `kappa = gamma/chi`, `theta = chi T`, `d = p - q` and
/// `g = exp(-kappa theta - i theta d)`:
///
/// `<p|rho'|q> = e^{i theta d / 2} g^{(p+q)/2} / sqrt(p! q!)
///   * sum_{n >= p} <n|rho|n-d> sqrt(n! (n-d)!) / (n-p)! * [(1-g) / (1 + i d / kappa)]^{n-p}`.
///
/// Only `p >= q` is evaluated; the rest follows from Hermiticity. `gamma = 0`
/// reduces to the unitary Kerr phase.
pub fn damped_kerr_step(rho: &DensityMatrix, chi: f64, gamma: f64, period: f64) -> Result<DensityMatrix> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidDamping(gamma));
    }
    if !(chi.is_finite() && chi > 0.0) {
        return Err(Error::InvalidParameter { name: "chi", reason: format!("must be positive, got {chi}") });
    }
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidParameter { name: "period", reason: format!("must be positive, got {period}") });
    }
    let dim = rho.dim();
    let src = rho.matrix();
    let lnf = ln_factorials(dim);
    let kappa = gamma / chi;
    let theta = chi * period;

    let mut out = CMatrix::zeros(dim, dim);
    for p in 0..dim {
        for q in 0..=p {
            let d = p - q;
            let df = d as f64;
            let ln_g = Complex64::new(-kappa * theta, -theta * df);
            let g = ln_g.exp();
            // (1 - g) / (1 + i delta) with delta = d / kappa, written so that
            // kappa = 0 is the exact limit.
            let ratio = if d == 0 { 1.0 - g } else { (1.0 - g) * kappa / Complex64::new(kappa, df) };
            let prefactor = Complex64::new(0.0, 0.5 * theta * df).exp() * (ln_g * (0.5 * (p + q) as f64)).exp();

            let mut sum = Complex64::new(0.0, 0.0);
            let mut power = Complex64::new(1.0, 0.0);
            for n in p..dim {
                let ln_c = 0.5 * (lnf[n] + lnf[n - d] - lnf[p] - lnf[q]) - lnf[n - p];
                sum += src[(n, n - d)] * power * ln_c.exp();
                power *= ratio;
            }
            let value = prefactor * sum;
            out[(p, q)] = value;
            out[(q, p)] = value.conj();
        }
    }
    Ok(DensityMatrix::from_raw(out))
}

/// Density matrices after `0, 1, ..., n` periods of damped free evolution
/// followed by a unitary kick.
pub fn kicked_dissipative_states(
    model: &KerrModel,
    rho0: &DensityMatrix,
    gamma: f64,
    schedule: &KickSchedule,
) -> Result<Vec<DensityMatrix>> {
    check_envelope(model, schedule)?;
    if model.order != 2 {
        return Err(Error::Unsupported(format!(
            "the damped-Kerr map covers the two-photon Kerr term only (order {})",
            model.order
        )));
    }
    if rho0.dim() != model.dim {
        return Err(Error::DimensionMismatch { expected: model.dim, found: rho0.dim() });
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidDamping(gamma));
    }
    let (_, kick) = kick_operators(model, schedule.period)?;
    let mut out = Vec::with_capacity(schedule.n_pulses + 1);
    out.push(rho0.clone());
    for _ in 0..schedule.n_pulses {
        let damped = damped_kerr_step(out.last().unwrap(), model.chi, gamma, schedule.period)?;
        out.push(kick.conjugate(&damped)?);
    }
    Ok(out)
}

pub fn evolve_kicked_dissipative(
    model: &KerrModel,
    rho0: &DensityMatrix,
    gamma: f64,
    schedule: &KickSchedule,
) -> Result<SimulationResult> {
    let states = kicked_dissipative_states(model, rho0, gamma, schedule)?;
    Ok(SimulationResult::from_density_matrices(schedule.times(), &states))
}
