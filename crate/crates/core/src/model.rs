//! Hamiltonians and drive envelopes of the driven Kerr oscillator.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{annihilation, creation, Operator};

/// Drive strengths above this fraction of the nonlinearity leave the
/// perturbative regime the closed forms rely on.
pub const WEAK_DRIVE_RATIO: f64 = 0.2;

/// Distance from an exact pole of the `B` series treated as resonant.
const RESONANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriveKind {
    /// `eps (a^dagger + a)`.
    Linear,
    /// `eps (a^dagger^2 + a^2)`.
    Parametric,
}

/// Time dependence `f(t)` multiplying the drive term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriveEnvelope {
    /// `f(t) = 1`.
    Constant,
    /// `f(t) = sum_k delta(t - k T)`.
    DeltaTrain { period: f64 },
    /// One period of a real envelope sampled at `t_j = j T / M`,
    /// `j = 0..M`, interpreted as its trigonometric interpolant.
    PeriodicTabulated { period: f64, samples: Vec<f64> },
}

impl DriveEnvelope {
    pub fn validate(&self) -> Result<()> {
        match self {
            DriveEnvelope::Constant => Ok(()),
            DriveEnvelope::DeltaTrain { period } => check_period(*period),
            DriveEnvelope::PeriodicTabulated { period, samples } => {
                check_period(*period)?;
                if samples.len() < 2 {
                    return Err(Error::InvalidParameter {
                        name: "samples",
                        reason: format!("need at least 2 samples, got {}", samples.len()),
                    });
                }
                if samples.iter().any(|s| !s.is_finite()) {
                    return Err(Error::NonFinite("envelope samples"));
                }
                Ok(())
            }
        }
    }

    /// Declared period, if the envelope has one.
    pub fn period(&self) -> Option<f64> {
        match self {
            DriveEnvelope::Constant => None,
            DriveEnvelope::DeltaTrain { period } | DriveEnvelope::PeriodicTabulated { period, .. } => {
                Some(*period)
            }
        }
    }

    /// Views the envelope as periodic. A constant envelope has no intrinsic
    /// period, so `period` must be supplied for it; periodic variants ignore
    /// the argument and use their own.
    pub fn periodic(&self, period: Option<f64>) -> Result<PeriodicEnvelope<'_>> {
        self.validate()?;
        let period = self.period().or(period).ok_or(Error::MissingPeriod)?;
        check_period(period)?;
        Ok(PeriodicEnvelope { envelope: self, period })
    }
}

fn check_period(period: f64) -> Result<()> {
    if period.is_finite() && period > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "period", reason: format!("must be positive, got {period}") })
    }
}

/// An envelope together with the period used for its Fourier series.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicEnvelope<'a> {
    envelope: &'a DriveEnvelope,
    period: f64,
}

impl PeriodicEnvelope<'_> {
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn envelope(&self) -> &DriveEnvelope {
        self.envelope
    }

    /// Largest `|n|` with a nonzero coefficient, when finite.
    fn bandwidth(&self) -> Option<i64> {
        match self.envelope {
            DriveEnvelope::Constant => Some(0),
            DriveEnvelope::DeltaTrain { .. } => None,
            DriveEnvelope::PeriodicTabulated { samples, .. } => Some(samples.len() as i64 / 2),
        }
    }
}

/// Full description of the driven oscillator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KerrModel {
    /// Simulation truncation dimension.
    pub dim: usize,
    /// Nonlinearity order `N`.
    pub order: usize,
    pub chi: f64,
    pub eps: f64,
    pub drive: DriveKind,
    pub envelope: DriveEnvelope,
}

impl KerrModel {
    /// Default headroom above the resonant manifold.
    pub const DEFAULT_BUFFER: usize = 3;

    pub fn new(
        dim: usize,
        order: usize,
        chi: f64,
        eps: f64,
        drive: DriveKind,
        envelope: DriveEnvelope,
    ) -> Result<Self> {
        let model = Self { dim, order, chi, eps, drive, envelope };
        model.validate()?;
        if !model.is_weak_drive() {
            log::warn!(
                "eps/chi = {:.3} exceeds {WEAK_DRIVE_RATIO}; perturbative closed forms will be inaccurate",
                eps / chi
            );
        }
        Ok(model)
    }

    /// Model truncated at `order + 3` levels.
    pub fn with_default_dim(
        order: usize,
        chi: f64,
        eps: f64,
        drive: DriveKind,
        envelope: DriveEnvelope,
    ) -> Result<Self> {
        Self::new(order + Self::DEFAULT_BUFFER, order, chi, eps, drive, envelope)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if self.order == 0 {
            return Err(Error::InvalidParameter { name: "order", reason: "must be at least 1".into() });
        }
        if !(self.chi.is_finite() && self.chi > 0.0) {
            return Err(Error::InvalidParameter { name: "chi", reason: format!("must be positive, got {}", self.chi) });
        }
        if !(self.eps.is_finite() && self.eps >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "eps",
                reason: format!("must be non-negative, got {}", self.eps),
            });
        }
        self.envelope.validate()
    }

    pub fn is_weak_drive(&self) -> bool {
        self.eps / self.chi <= WEAK_DRIVE_RATIO
    }

    /// Whether the truncation leaves room to observe leakage out of the
    /// resonant manifold.
    pub fn resolves_leakage(&self) -> bool {
        self.dim >= self.order + 2
    }

    pub fn kerr(&self) -> Result<Operator> {
        kerr_hamiltonian(self.order, self.chi, self.dim)
    }

    pub fn drive_operator(&self) -> Result<Operator> {
        drive_hamiltonian(self.drive, self.eps, self.dim)
    }

    /// Total Hamiltonian for a constant envelope.
    pub fn hamiltonian(&self) -> Result<Operator> {
        Ok(&self.kerr()? + &self.drive_operator()?)
    }
}

/// Kerr energy `(chi / N) n (n-1) ... (n-N+1)` of level `n`.
pub fn kerr_level(order: usize, chi: f64, n: usize) -> f64 {
    if n < order {
        return 0.0;
    }
    let falling: f64 = (n + 1 - order..=n).map(|k| k as f64).product();
    chi / order as f64 * falling
}

/// `(chi / N) (a^dagger)^N a^N`, diagonal in the Fock basis.
pub fn kerr_hamiltonian(order: usize, chi: f64, dim: usize) -> Result<Operator> {
    if order == 0 {
        return Err(Error::InvalidParameter { name: "order", reason: "must be at least 1".into() });
    }
    if dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Operator::diagonal(&(0..dim).map(|n| kerr_level(order, chi, n)).collect::<Vec<_>>())
}

pub fn drive_hamiltonian(kind: DriveKind, eps: f64, dim: usize) -> Result<Operator> {
    let a = annihilation(dim)?;
    let ad = creation(dim)?;
    let generator = match kind {
        DriveKind::Linear => &ad + &a,
        DriveKind::Parametric => &(&ad * &ad) + &(&a * &a),
    };
    Ok(generator.scale(Complex64::new(eps, 0.0)))
}

/// `Theta(t) = eps * integral_0^t f`.
///
/// Delta pulses sit at `t = kT` for `k = 0, 1, ...`, each contributing `eps`;
/// the pulse at `t = 0` counts as soon as `t >= 0`.
pub fn pulse_area(env: &DriveEnvelope, eps: f64, t: f64) -> Result<f64> {
    env.validate()?;
    if t < 0.0 {
        return Ok(0.0);
    }
    let integral = match env {
        DriveEnvelope::Constant => t,
        DriveEnvelope::DeltaTrain { period } => ((t / period) * (1.0 + 1e-12)).floor() + 1.0,
        DriveEnvelope::PeriodicTabulated { period, samples } => {
            let p = env.periodic(None)?;
            let band = samples.len() as i64 / 2;
            let mut acc = fourier_coefficient(&p, 0).re * t;
            for n in 1..=band {
                let w = 2.0 * PI * n as f64 / period;
                let phase = Complex64::new(0.0, w * t).exp() - 1.0;
                // c_{-n} = conj(c_n); the pair contributes twice the real part.
                let term = fourier_coefficient(&p, n) * phase / Complex64::new(0.0, w);
                acc += 2.0 * term.re;
            }
            acc / period
        }
    };
    Ok(eps * integral)
}

/// `c_n = integral_0^T f(t) exp(-2 pi i n t / T) dt`.
///
/// A delta at the integration boundary contributes its full weight, so a
/// delta train has `c_n = 1` for every `n`.
pub fn fourier_coefficient(env: &PeriodicEnvelope<'_>, n: i64) -> Complex64 {
    let period = env.period;
    match env.envelope {
        DriveEnvelope::Constant => {
            if n == 0 {
                Complex64::new(period, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        DriveEnvelope::DeltaTrain { .. } => Complex64::new(1.0, 0.0),
        DriveEnvelope::PeriodicTabulated { samples, .. } => {
            let m = samples.len() as i64;
            let half = m / 2;
            if n.abs() > half {
                return Complex64::new(0.0, 0.0);
            }
            let dft: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, &f)| {
                    let angle = -2.0 * PI * (n * j as i64).rem_euclid(m) as f64 / m as f64;
                    Complex64::from_polar(f, angle)
                })
                .sum();
            // The Nyquist term of an even-length grid is split between +-M/2.
            let weight = if m % 2 == 0 && n.abs() == half { 0.5 } else { 1.0 };
            dft * (weight * period / m as f64)
        }
    }
}

/// `a = T chi (N-1)! / (2 pi)`.
pub fn resonance_parameter(period: f64, order: usize, chi: f64) -> f64 {
    let fact: f64 = (1..order).map(|k| k as f64).product();
    period * chi * fact / (2.0 * PI)
}

/// `B = (1 / 2 pi) sum_n c_n / (n + a)`, summed symmetrically in `n`.
pub fn b_coefficient(env: &PeriodicEnvelope<'_>, order: usize, chi: f64) -> Result<Complex64> {
    if order == 0 {
        return Err(Error::InvalidParameter { name: "order", reason: "must be at least 1".into() });
    }
    let a = resonance_parameter(env.period, order, chi);
    if !a.is_finite() {
        return Err(Error::NonFinite("resonance parameter"));
    }
    let nearest = a.round();
    if (a - nearest).abs() < RESONANCE_TOL {
        let n = -(nearest as i64);
        if fourier_coefficient(env, n).norm() > 0.0 {
            return Err(Error::Resonance { a, n });
        }
    }
    let sum = match env.bandwidth() {
        Some(band) => {
            // Band-limited: the series is a finite sum.
            let mut acc = fourier_coefficient(env, 0) / a;
            for n in 1..=band {
                acc += fourier_coefficient(env, n) / (n as f64 + a)
                    + fourier_coefficient(env, -n) / (a - n as f64);
            }
            acc
        }
        // Unit coefficients: the symmetric sum of 1/(n + a) is pi cot(pi a),
        // the reflection formula psi(1 - a) - psi(a).
        None => Complex64::new(PI / (PI * a).tan(), 0.0),
    };
    Ok(sum / (2.0 * PI))
}
