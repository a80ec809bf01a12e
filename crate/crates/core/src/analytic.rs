//! Perturbative closed forms and the finite-dimensional target states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{b_coefficient, fourier_coefficient, PeriodicEnvelope, WEAK_DRIVE_RATIO};
use crate::operators::{annihilation, creation, matrix_exponential, CMatrix, CVector, Operator, StateVector};

pub const MAX_HERMITE_ORDER: usize = 30;

/// Rabi amplitudes `(cos theta, -i sin theta)` for pulse area `theta`,
/// phased so that `C_0(0) = 1`.
pub fn two_level_amplitudes(theta: f64) -> StateVector {
    StateVector::from_normalized(CVector::from_vec(vec![
        Complex64::new(theta.cos(), 0.0),
        Complex64::new(0.0, -theta.sin()),
    ]))
}

/// Closed-form three-level amplitudes under a constant drive.
pub fn three_level_amplitudes(eps: f64, t: f64) -> StateVector {
    let w = 3f64.sqrt() * eps * t;
    StateVector::from_normalized(CVector::from_vec(vec![
        Complex64::new((2.0 + w.cos()) / 3.0, 0.0),
        Complex64::new(0.0, -w.sin() / 3f64.sqrt()),
        Complex64::new(2f64.sqrt() / 3.0 * (w.cos() - 1.0), 0.0),
    ]))
}

/// Probabilists' Hermite polynomial `He_n(x)` by the three-term recurrence
/// `He_{k+1} = x He_k - k He_{k-1}`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `He_0(x), ..., He_n(x)`.
fn hermite_table(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for k in 1..n {
        out.push(x * out[k] - k as f64 * out[k - 1]);
    }
    out
}

/// Roots of `He_N` in ascending order.
///
/// Computed as the eigenvalues of the Jacobi matrix with off-diagonal
/// entries `sqrt(1), ..., sqrt(N-1)`.
pub fn hermite_roots(order: usize) -> Result<Vec<f64>> {
    if order == 0 || order > MAX_HERMITE_ORDER {
        return Err(Error::UnsupportedOrder(order));
    }
    let mut diag = vec![0.0; order];
    let mut off: Vec<f64> = (1..order).map(|k| (k as f64).sqrt()).collect();
    off.push(0.0);
    tridiagonal_eigenvalues(&mut diag, &mut off)?;
    diag.sort_by(f64::total_cmp);
    // The spectrum is symmetric about zero.
    let roots = (0..order).map(|m| 0.5 * (diag[m] - diag[order - 1 - m])).collect();
    Ok(roots)
}

/// Eigenvalues of a real symmetric tridiagonal matrix by the implicit QL
/// algorithm with Wilkinson shifts. `diag` is overwritten with the
/// eigenvalues; `off[i]` couples rows `i` and `i + 1` (last entry unused).
fn tridiagonal_eigenvalues(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::EigenFailure);
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Amplitudes of the evolved state at `t = kT` in the `N`-level manifold,
/// plus the order-`eps` leak into level `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentCoefficients {
    pub order: usize,
    /// `C_0, ..., C_{N-1}`.
    pub coeffs: Vec<Complex64>,
    /// `C_N`; the state carries `eps * C_N` on level `N`.
    pub leak: Complex64,
    pub eps: f64,
    /// Allowed deviation of `sum |C_n|^2` from 1.
    pub norm_tolerance: f64,
}

impl CoherentCoefficients {
    pub fn probabilities(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn norm_defect(&self) -> f64 {
        (self.probabilities().iter().sum::<f64>() - 1.0).abs()
    }

    /// Leak amplitude as it appears on level `N`.
    pub fn leak_amplitude(&self) -> Complex64 {
        self.leak * self.eps
    }

    /// The manifold state `sum_n C_n |n>`.
    pub fn state(&self) -> Result<StateVector> {
        StateVector::new(self.coeffs.clone())
    }
}

/// Closed-form superposition coefficients after `k` drive periods.
///
/// `C_n = (-1)^n / sqrt(n!) * sum_m w_m exp(i k x_m eps c_0) He_n(x_m)` with
/// `x_m` the roots of `He_N` and `w_m = (N-1)! / (N He_{N-1}(x_m)^2)`;
/// the leak is `C_N = sqrt(N) B C_{N-1}`.
pub fn coherent_coefficients(
    order: usize,
    eps: f64,
    chi: f64,
    env: &PeriodicEnvelope<'_>,
    k: u64,
) -> Result<CoherentCoefficients> {
    if eps / chi > WEAK_DRIVE_RATIO {
        log::warn!("coherent_coefficients outside the weak-drive regime (eps/chi = {:.3})", eps / chi);
    }
    let roots = hermite_roots(order)?;
    let c0 = fourier_coefficient(env, 0).re;
    let fact: f64 = (1..order).map(|j| j as f64).product();

    let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
    for &x in &roots {
        let table = hermite_table(order - 1, x);
        let weight = fact / (order as f64 * table[order - 1].powi(2));
        let phase = Complex64::from_polar(weight, k as f64 * x * eps * c0);
        for (n, c) in coeffs.iter_mut().enumerate() {
            *c += phase * table[n];
        }
    }
    let mut n_fact = 1.0;
    for (n, c) in coeffs.iter_mut().enumerate() {
        if n > 0 {
            n_fact *= n as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        *c *= sign / n_fact.sqrt();
    }

    let b = b_coefficient(env, order, chi)?;
    let leak = (order as f64).sqrt() * b * coeffs[order - 1];
    Ok(CoherentCoefficients {
        order,
        coeffs,
        leak,
        eps,
        norm_tolerance: (eps * eps).max(1e-12),
    })
}

fn check_truncation(s: usize) -> Result<()> {
    if s == 0 {
        Err(Error::InvalidParameter { name: "s", reason: "truncation must be at least 1".into() })
    } else {
        Ok(())
    }
}

/// `exp(alpha a_s^dagger - alpha^* a_s)|0>` in `s + 1` dimensions.
pub fn fd_coherent_state(alpha: Complex64, s: usize) -> Result<StateVector> {
    check_truncation(s)?;
    let dim = s + 1;
    let generator = &creation(dim)?.scale(alpha) - &annihilation(dim)?.scale(alpha.conj());
    displaced_vacuum(&generator)
}

/// `exp[(xi/2) a_s^dagger^2 - (xi^*/2) a_s^2]|0>` in `s + 1` dimensions.
pub fn fd_squeezed_vacuum(xi: Complex64, s: usize) -> Result<StateVector> {
    check_truncation(s)?;
    let dim = s + 1;
    let (a, ad) = (annihilation(dim)?, creation(dim)?);
    let generator = &(&ad * &ad).scale(xi * 0.5) - &(&a * &a).scale(xi.conj() * 0.5);
    displaced_vacuum(&generator)
}

fn displaced_vacuum(generator: &Operator) -> Result<StateVector> {
    let u = matrix_exponential(generator, Complex64::new(1.0, 0.0))?;
    StateVector::from_vector(u.matrix().column(0).into_owned())
}

/// Even-level amplitudes of the parametrically driven oscillator.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezedCoefficients {
    pub s: usize,
    /// `Int(s / 2)`.
    pub sigma: usize,
    /// `C_{2n}` for `n = 0..=sigma`.
    pub coeffs: Vec<Complex64>,
    /// `C_{2 sigma + 2}`; the state carries `eps * C_{2 sigma + 2}`.
    pub leak: Complex64,
    pub eps: f64,
    pub norm_tolerance: f64,
}

impl SqueezedCoefficients {
    /// Probabilities on levels `0..=s`; odd levels are always zero.
    pub fn probabilities(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.s + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            p[2 * n] = c.norm_sqr();
        }
        p
    }

    pub fn leak_amplitude(&self) -> Complex64 {
        self.leak * self.eps
    }

    /// The manifold state spread over the even levels of `s + 1` dimensions.
    pub fn state(&self) -> Result<StateVector> {
        let mut amp = vec![Complex64::new(0.0, 0.0); self.s + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            amp[2 * n] = *c;
        }
        StateVector::new(amp)
    }
}

/// Closed-form even-level amplitudes at time `t` under a constant
/// parametric drive.
///
/// The degenerate even manifold `|0>, |2>, ..., |2 sigma>` is coupled by
/// `<2n+2| a^dagger^2 |2n> = sqrt((2n+1)(2n+2))`; the amplitudes are the
/// vacuum column of `exp(-i eps t M)` for that tridiagonal `M`, evaluated
/// through its spectrum.
pub fn squeezed_coefficients(s: usize, eps: f64, t: f64) -> Result<SqueezedCoefficients> {
    check_truncation(s)?;
    let sigma = s / 2;
    let size = sigma + 1;
    let m = Operator::from_matrix(CMatrix::from_fn(size, size, |r, c| {
        if r.abs_diff(c) == 1 {
            let n = r.min(c);
            Complex64::new((((2 * n + 1) * (2 * n + 2)) as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))?;
    let (vals, vecs) = m.hermitian_eigen();
    let coeffs: Vec<Complex64> = (0..size)
        .map(|n| {
            vals.iter()
                .enumerate()
                .map(|(j, &lambda)| {
                    vecs[(n, j)] * vecs[(0, j)].conj() * Complex64::from_polar(1.0, -eps * t * lambda)
                })
                .sum()
        })
        .collect();
    let top = ((2 * sigma + 1) * (2 * sigma + 2)) as f64;
    let leak = coeffs[sigma] * (2f64.powi(-(sigma as i32) - 1) * top.sqrt());
    Ok(SqueezedCoefficients { s, sigma, coeffs, leak, eps, norm_tolerance: (eps * eps).max(1e-12) })
}
