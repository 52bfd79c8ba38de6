//! Static (continuous-observation) spectrum, its strong-dissipation
//! asymptotics, and the equivalent pulsed-measurement decay rate.
//!
//! With constant loss the eigenvalues are
//! `lambda_pm = -i gamma0 +- sqrt(J0^2 - gamma0^2)`: one shared decay
//! rate `2 gamma0` below the exceptional point at `gamma0 = J0`, and a
//! slow/fast pair `2 (gamma0 -+ sqrt(gamma0^2 - J0^2))` above it.

use crate::error::{Error, Result};
use crate::floquet::Phase;
use crate::model::{DriveProtocol, StaticParams, SystemParams};
use crate::numerics::C64;

/// Spectrum of the static lossy Hamiltonian.
#[derive(Clone, Copy, Debug)]
pub struct StaticSpectrum {
    /// `lambda_pm = -i gamma0 +- sqrt(J0^2 - gamma0^2)` (principal root).
    pub lambda_plus: C64,
    pub lambda_minus: C64,
    /// Decay rates `-2 Im lambda`, ascending. Their sum is `4 gamma0`;
    /// in the broken phase their product is `4 J0^2`.
    pub gamma0_slow: f64,
    pub gamma0_fast: f64,
    pub phase: Phase,
}

/// Pulsed-measurement parameters: Rabi frequency, decay rate of the
/// monitored level, pulse duration and pulse spacing.
#[derive(Clone, Copy, Debug)]
pub struct MeasurementParams {
    omega_r: f64,
    gamma_c: f64,
    t_p: f64,
    delta_t: f64,
}

impl MeasurementParams {
    pub fn new(omega_r: f64, gamma_c: f64, t_p: f64, delta_t: f64) -> Result<Self> {
        for (v, name) in [
            (omega_r, "omega_r"),
            (gamma_c, "gamma_c"),
            (t_p, "t_p"),
            (delta_t, "delta_t"),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite("MeasurementParams"));
            }
            if v <= 0.0 {
                return Err(Error::InvalidArgument(format!("{name} = {v} must be > 0")));
            }
        }
        Ok(MeasurementParams {
            omega_r,
            gamma_c,
            t_p,
            delta_t,
        })
    }

    pub fn omega_r(&self) -> f64 {
        self.omega_r
    }
    pub fn gamma_c(&self) -> f64 {
        self.gamma_c
    }
    pub fn t_p(&self) -> f64 {
        self.t_p
    }
    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }
}

/// Eigenvalues and decay rates under constant dissipation.
///
/// Below the exceptional point both rates equal `2 gamma0` exactly; the
/// point `gamma0 = J0` itself is labeled EP. Above it the slow rate is
/// evaluated as `2 J0^2 / (gamma0 + sqrt(gamma0^2 - J0^2))`, the
/// cancellation-free form of `2 (gamma0 - sqrt(...))`.
pub fn static_spectrum(p: &StaticParams) -> StaticSpectrum {
    let g0 = p.gamma0();
    let j0 = p.j0();
    let root = C64::new(j0 * j0 - g0 * g0, 0.0).sqrt();
    let lambda_plus = C64::new(0.0, -g0) + root;
    let lambda_minus = C64::new(0.0, -g0) - root;

    if g0 <= j0 {
        StaticSpectrum {
            lambda_plus,
            lambda_minus,
            gamma0_slow: 2.0 * g0,
            gamma0_fast: 2.0 * g0,
            phase: if g0 == j0 { Phase::Ep } else { Phase::Pts },
        }
    } else {
        let r = (g0 * g0 - j0 * j0).sqrt();
        StaticSpectrum {
            lambda_plus,
            lambda_minus,
            gamma0_slow: 2.0 * j0 * j0 / (g0 + r),
            gamma0_fast: 2.0 * (g0 + r),
            phase: Phase::Ptb,
        }
    }
}

/// Strong-dissipation limits `(J0^2/gamma0, 4 gamma0)` of the slow and
/// fast rates. Defined only in the broken phase.
pub fn static_asymptotics(p: &StaticParams) -> Result<(f64, f64)> {
    if p.gamma0() <= p.j0() {
        return Err(Error::Domain(format!(
            "asymptotics need gamma0 > j0 (got gamma0 = {}, j0 = {})",
            p.gamma0(),
            p.j0()
        )));
    }
    Ok((p.j0() * p.j0() / p.gamma0(), 4.0 * p.gamma0()))
}

/// Decay rate of the modulated system in the projective limit
/// (`gamma0 >> J0`, short off-segments):
/// `Gamma = (J0^2/gamma0)(tau1/T) + J0^2 tau2^2 / T` with
/// `tau2 = T - tau1`. The caller is responsible for being in that
/// regime; at `gamma0 = 0` the first term is infinite.
pub fn projective_limit_rate(sys: &SystemParams, drive: &DriveProtocol) -> f64 {
    let j0 = sys.j0();
    let t = drive.period();
    let tau2 = drive.tau2();
    (j0 * j0 / drive.gamma0()) * (drive.tau1() / t) + j0 * j0 * (tau2 * tau2 / t)
}

/// Decay rate under repeated finite-duration measurements:
/// `1/tau = (omega_R^2/gamma_c) t_p/(t_p + dt) + (omega_R^2/4) dt^2/(t_p + dt)`.
///
/// Equals [`projective_limit_rate`] under `omega_R = 2 J0`,
/// `gamma_c = 4 gamma0`, `t_p = tau1`, `dt = tau2`.
pub fn measurement_decay_rate(m: &MeasurementParams) -> f64 {
    let w2 = m.omega_r * m.omega_r;
    let cycle = m.t_p + m.delta_t;
    (w2 / m.gamma_c) * (m.t_p / cycle) + (w2 / 4.0) * (m.delta_t * m.delta_t / cycle)
}
