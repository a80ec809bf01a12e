use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DriveEnvelope, KerrModel};
use crate::operators::{matrix_exponential, Operator, StateVector};

use super::SimulationResult;

/// Delta pulses every `period`, `n_pulses` of them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickSchedule {
    pub period: f64,
    pub n_pulses: usize,
}

impl KickSchedule {
    pub fn new(period: f64, n_pulses: usize) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParameter { name: "period", reason: format!("must be positive, got {period}") });
        }
        Ok(Self { period, n_pulses })
    }

    /// Schedule matching a model's delta-train envelope.
    pub fn from_model(model: &KerrModel, n_pulses: usize) -> Result<Self> {
        match model.envelope {
            DriveEnvelope::DeltaTrain { period } => Self::new(period, n_pulses),
            _ => Err(Error::Unsupported("kicked evolution needs a delta-train envelope".into())),
        }
    }

    /// Sample times `0, T, ..., n T`.
    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_pulses).map(|k| k as f64 * self.period).collect()
    }
}

pub(crate) fn check_envelope(model: &KerrModel, schedule: &KickSchedule) -> Result<()> {
    match model.envelope {
        DriveEnvelope::DeltaTrain { period } if (period - schedule.period).abs() <= 1e-12 * period => Ok(()),
        DriveEnvelope::DeltaTrain { period } => Err(Error::InvalidParameter {
            name: "period",
            reason: format!("schedule period {} differs from envelope period {period}", schedule.period),
        }),
        _ => Err(Error::Unsupported("kicked evolution needs a delta-train envelope".into())),
    }
}

/// Free Kerr propagator over one period and the instantaneous kick.
pub fn kick_operators(model: &KerrModel, period: f64) -> Result<(Operator, Operator)> {
    let free = matrix_exponential(&model.kerr()?, Complex64::new(0.0, -period))?;
    let kick = matrix_exponential(&model.drive_operator()?, Complex64::new(0.0, -1.0))?;
    Ok((free, kick))
}

/// States after `0, 1, ..., n` periods; each period is free evolution
/// followed by a kick.
pub fn kicked_states(model: &KerrModel, psi0: &StateVector, schedule: &KickSchedule) -> Result<Vec<StateVector>> {
    check_envelope(model, schedule)?;
    if psi0.dim() != model.dim {
        return Err(Error::DimensionMismatch { expected: model.dim, found: psi0.dim() });
    }
    let (free, kick) = kick_operators(model, schedule.period)?;
    let period_op = &kick * &free;
    let mut out = Vec::with_capacity(schedule.n_pulses + 1);
    out.push(psi0.clone());
    for _ in 0..schedule.n_pulses {
        let next = period_op.apply_unitary(out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

pub fn evolve_kicked(model: &KerrModel, psi0: &StateVector, schedule: &KickSchedule) -> Result<SimulationResult> {
    let states = kicked_states(model, psi0, schedule)?;
    Ok(SimulationResult::from_states(schedule.times(), &states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{pulse_area, DriveKind};
    use crate::operators::max_abs;
    use std::f64::consts::PI;

    fn model(dim: usize, order: usize, eps: f64, period: f64) -> KerrModel {
        KerrModel::new(dim, order, 1.0, eps, DriveKind::Linear, DriveEnvelope::DeltaTrain { period }).unwrap()
    }

    #[test]
    fn free_step_is_identity_at_4pi() {
        let m = model(7, 2, 0.1, 4.0 * PI);
        let (free, kick) = kick_operators(&m, 4.0 * PI).unwrap();
        assert!(free.unitarity_error() < 1e-10 && kick.unitarity_error() < 1e-10);
        let id = Operator::identity(7).unwrap();
        assert!(max_abs((&free - &id).matrix()) < 1e-12);
    }

    #[test]
    fn kick_vanishes_for_zero_drive() {
        let m = model(5, 2, 0.0, 1.0);
        let (_, kick) = kick_operators(&m, 1.0).unwrap();
        assert!(max_abs((&kick - &Operator::identity(5).unwrap()).matrix()) < 1e-15);
    }

    #[test]
    fn two_level_kick_matrix() {
        let eps = 0.37;
        let m = model(2, 2, eps, 1.0);
        let (_, kick) = kick_operators(&m, 1.0).unwrap();
        let k = kick.matrix();
        assert!((k[(0, 0)] - eps.cos()).norm() < 1e-14);
        assert!((k[(0, 1)] - Complex64::new(0.0, -eps.sin())).norm() < 1e-14);
        assert!((k[(1, 0)] - Complex64::new(0.0, -eps.sin())).norm() < 1e-14);
        assert!((k[(1, 1)] - eps.cos()).norm() < 1e-14);
    }

    #[test]
    fn zero_pulses_returns_initial_state() {
        let m = model(5, 2, 0.1, PI);
        let psi0 = StateVector::vacuum(5).unwrap();
        let res = evolve_kicked(&m, &psi0, &KickSchedule::new(PI, 0).unwrap()).unwrap();
        assert_eq!(res.times, vec![0.0]);
        assert_eq!(res.probs[0], psi0.probabilities());
    }

    #[test]
    fn resonant_kicks_compose_like_rabi() {
        let eps = PI / 50.0;
        let period = 4.0 * PI;
        let m = model(2, 2, eps, period);
        let sched = KickSchedule::new(period, 60).unwrap();
        let res = evolve_kicked(&m, &StateVector::vacuum(2).unwrap(), &sched).unwrap();
        for (k, row) in res.probs.iter().enumerate() {
            assert!((row[1] - (k as f64 * eps).sin().powi(2)).abs() < 1e-10);
            // Area delivered by the k kicks that precede the sample at kT.
            let theta = pulse_area(&m.envelope, eps, k as f64 * period - 1e-9).unwrap();
            assert!((theta - k as f64 * eps).abs() < 1e-15);
        }
    }

    #[test]
    fn kicked_norm_preserved() {
        let m = model(6, 3, 0.2, 1.1);
        let states = kicked_states(&m, &StateVector::vacuum(6).unwrap(), &KickSchedule::new(1.1, 500).unwrap()).unwrap();
        assert!(states.iter().all(|s| (s.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn envelope_must_match() {
        let m = model(5, 2, 0.1, PI);
        let psi0 = StateVector::vacuum(5).unwrap();
        assert!(evolve_kicked(&m, &psi0, &KickSchedule::new(2.0, 3).unwrap()).is_err());
        let mut c = m.clone();
        c.envelope = DriveEnvelope::Constant;
        assert!(matches!(evolve_kicked(&c, &psi0, &KickSchedule::new(PI, 3).unwrap()), Err(Error::Unsupported(_))));
        assert!(KickSchedule::new(0.0, 3).is_err());
    }

    #[test]
    fn parametric_kicks_keep_parity() {
        let mut m = model(8, 3, 0.1, 0.9);
        m.drive = DriveKind::Parametric;
        let states = kicked_states(&m, &StateVector::vacuum(8).unwrap(), &KickSchedule::new(0.9, 100).unwrap()).unwrap();
        for s in &states {
            let odd: f64 = s.probabilities().iter().skip(1).step_by(2).sum();
            assert!(odd < 1e-24);
        }
    }
}
