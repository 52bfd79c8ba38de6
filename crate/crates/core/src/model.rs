//! Parameter records and Hamiltonian builders.
//!
//! Basis convention: `|up> = (1, 0)^T`, `|down> = (0, 1)^T`. The lossy
//! Hamiltonian is `H_L = -J0 sx - 2i gamma |down><down|`, which splits
//! into a global loss and a balanced gain-loss part,
//! `H_L = -i gamma I + H_PT` with `H_PT = i gamma sz - J0 sx`.

use crate::error::{Error, Result};
use crate::numerics::{C64, Mat2};

/// Static system data: the coupling rate `J0 > 0`.
#[derive(Clone, Copy, Debug)]
pub struct SystemParams {
    j0: f64,
}

impl SystemParams {
    pub fn new(j0: f64) -> Result<Self> {
        if !j0.is_finite() {
            return Err(Error::NonFinite("SystemParams: j0"));
        }
        if j0 <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "j0 = {j0} must be > 0"
            )));
        }
        Ok(SystemParams { j0 })
    }

    pub fn j0(&self) -> f64 {
        self.j0
    }
}

/// Square-wave dissipation: amplitude `gamma0` on for `tau1`, off for
/// the remainder of each period `T`. Pulse boundaries are half-open,
/// `gamma(t) = gamma0` for `t mod T` in `[0, tau1)`.
///
/// The drive is stored as `(gamma0, tau1, T)`; the modulation frequency
/// `omega = 2 pi / T` is an accessor so sweeps convert exactly once.
#[derive(Clone, Copy, Debug)]
pub struct DriveProtocol {
    gamma0: f64,
    tau1: f64,
    period: f64,
}

impl DriveProtocol {
    pub fn new(gamma0: f64, tau1: f64, period: f64) -> Result<Self> {
        for (v, name) in [(gamma0, "gamma0"), (tau1, "tau1"), (period, "period")] {
            if !v.is_finite() {
                return Err(Error::NonFinite(match name {
                    "gamma0" => "DriveProtocol: gamma0",
                    "tau1" => "DriveProtocol: tau1",
                    _ => "DriveProtocol: period",
                }));
            }
        }
        if gamma0 < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "gamma0 = {gamma0} must be >= 0"
            )));
        }
        if tau1 <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tau1 = {tau1} must be > 0"
            )));
        }
        if period <= tau1 {
            return Err(Error::InvalidArgument(format!(
                "period = {period} must exceed tau1 = {tau1}"
            )));
        }
        Ok(DriveProtocol {
            gamma0,
            tau1,
            period,
        })
    }

    /// Build from the modulation frequency `omega = 2 pi / T`.
    pub fn from_omega(gamma0: f64, tau1: f64, omega: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "omega = {omega} must be > 0"
            )));
        }
        DriveProtocol::new(gamma0, tau1, std::f64::consts::TAU / omega)
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Off segment length `tau2 = T - tau1`.
    pub fn tau2(&self) -> f64 {
        self.period - self.tau1
    }

    pub fn omega(&self) -> f64 {
        std::f64::consts::TAU / self.period
    }
}

/// Constant-dissipation parameters for the static (continuous
/// observation) analysis.
#[derive(Clone, Copy, Debug)]
pub struct StaticParams {
    gamma0: f64,
    j0: f64,
}

impl StaticParams {
    pub fn new(gamma0: f64, j0: f64) -> Result<Self> {
        if !gamma0.is_finite() || !j0.is_finite() {
            return Err(Error::NonFinite("StaticParams"));
        }
        if gamma0 < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "gamma0 = {gamma0} must be >= 0"
            )));
        }
        if j0 <= 0.0 {
            return Err(Error::InvalidArgument(format!("j0 = {j0} must be > 0")));
        }
        Ok(StaticParams { gamma0, j0 })
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn j0(&self) -> f64 {
        self.j0
    }
}

/// Instantaneous dissipation rate of the square-wave protocol.
pub fn gamma_of_t(drive: &DriveProtocol, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::NonFinite("gamma_of_t: t"));
    }
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("t = {t} must be >= 0")));
    }
    let phase = t % drive.period;
    Ok(if phase < drive.tau1 { drive.gamma0 } else { 0.0 })
}

/// Balanced gain-loss Hamiltonian `H_PT = i gamma sz - J0 sx`:
/// diagonal `(+i gamma, -i gamma)`, off-diagonal `-J0`. Traceless by
/// construction and PT invariant under `sx . conj(.) . sx`.
pub fn build_h_pt(sys: &SystemParams, gamma: f64) -> Mat2 {
    let j = C64::new(-sys.j0, 0.0);
    Mat2::new(C64::new(0.0, gamma), j, j, C64::new(0.0, -gamma))
}

/// Lossy Hamiltonian `H_L = -i gamma I + H_PT
///                        = -J0 sx - 2i gamma |down><down|`.
pub fn build_h_l(sys: &SystemParams, gamma: f64) -> Mat2 {
    let j = C64::new(-sys.j0, 0.0);
    Mat2::new(C64::ZERO, j, j, C64::new(0.0, -2.0 * gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_wave_branches() {
        let d = DriveProtocol::new(2.0, 0.1, 1.0).unwrap();
        assert_eq!(gamma_of_t(&d, 0.05).unwrap(), 2.0);
        assert_eq!(gamma_of_t(&d, 0.5).unwrap(), 0.0);
        // periodicity
        assert_eq!(gamma_of_t(&d, 1.05).unwrap(), 2.0);
        assert!(gamma_of_t(&d, -0.1).is_err());
    }

    #[test]
    fn drive_invariants_enforced() {
        assert!(DriveProtocol::new(-1.0, 0.1, 1.0).is_err());
        assert!(DriveProtocol::new(1.0, 0.0, 1.0).is_err());
        assert!(DriveProtocol::new(1.0, 1.0, 1.0).is_err());
        assert!(SystemParams::new(0.0).is_err());
        assert!(SystemParams::new(f64::NAN).is_err());
    }

    #[test]
    fn h_pt_is_traceless_and_pt_invariant() {
        let sys = SystemParams::new(1.3).unwrap();
        let h = build_h_pt(&sys, 0.7);
        assert_eq!(h.trace(), C64::ZERO);
        // sx . conj(H) . sx == H, entrywise
        let c = Mat2::new(
            h.a22.conj(),
            h.a21.conj(),
            h.a12.conj(),
            h.a11.conj(),
        );
        assert!(c.max_abs_diff(&h) < 1e-15);
    }

    #[test]
    fn lossless_limit_is_hermitian_coupling() {
        let sys = SystemParams::new(2.0).unwrap();
        let h = build_h_pt(&sys, 0.0);
        assert!(h.max_abs_diff(&build_h_l(&sys, 0.0)) == 0.0);
        assert_eq!(h.a12, C64::new(-2.0, 0.0));
        assert_eq!(h.a11, C64::ZERO);
    }

    #[test]
    fn h_l_entrywise() {
        let sys = SystemParams::new(1.0).unwrap();
        let h = build_h_l(&sys, 1.0);
        assert_eq!(h.a11, C64::ZERO);
        assert_eq!(h.a22, C64::new(0.0, -2.0));
        assert_eq!(h.a12, C64::new(-1.0, 0.0));
        assert_eq!(h.a21, C64::new(-1.0, 0.0));
        assert_eq!(h.trace(), C64::new(0.0, -2.0));

        // H_L - H_PT = -i gamma I exactly
        let g = 0.5;
        let diff = build_h_l(&sys, g) - build_h_pt(&sys, g);
        assert!(diff.max_abs_diff(&Mat2::diag(C64::new(0.0, -g), C64::new(0.0, -g))) == 0.0);
    }
}
