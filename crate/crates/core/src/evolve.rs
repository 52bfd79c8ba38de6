//! Time-domain propagation and lifetime extraction.
//!
//! Within each constant-dissipation segment the propagator is the exact
//! 2x2 exponential, so `propagate` carries no time-discretization error;
//! `rk4_reference` integrates the same equation of motion with a classic
//! fourth-order stepper as an independent cross-check. `fit_lifetime`
//! reads the late-time decay rate off the stroboscopic (period-boundary)
//! samples, where the intra-period micromotion drops out.

use crate::error::{Error, Result};
use crate::model::{build_h_l, DriveProtocol, SystemParams};
use crate::numerics::{mat2_exp, C64, Mat2};

/// Two-level amplitude pair in the `{|up>, |down>}` basis.
#[derive(Clone, Copy, Debug)]
pub struct StateVec {
    pub up: C64,
    pub down: C64,
}

impl StateVec {
    pub const UP: StateVec = StateVec {
        up: C64::ONE,
        down: C64::ZERO,
    };

    pub const DOWN: StateVec = StateVec {
        up: C64::ZERO,
        down: C64::ONE,
    };

    pub fn new(up: C64, down: C64) -> Self {
        StateVec { up, down }
    }

    /// Survival probability `|up|^2 + |down|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.up.re.is_finite()
            && self.up.im.is_finite()
            && self.down.re.is_finite()
            && self.down.im.is_finite()
    }

    fn apply(m: &Mat2, v: &StateVec) -> StateVec {
        let out = *m * [v.up, v.down];
        StateVec::new(out[0], out[1])
    }
}

/// Sampled evolution. `norms` are survival probabilities; `strobe`
/// indexes the samples sitting on period boundaries `t = n T`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVec>,
    pub norms: Vec<f64>,
    pub period: f64,
    pub strobe: Vec<usize>,
}

impl Trajectory {
    /// `(t, survival probability)` at the period boundaries.
    pub fn stroboscopic(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.strobe.iter().map(|&i| (self.times[i], self.norms[i]))
    }
}

fn check_initial_state(psi0: &StateVec) -> Result<()> {
    if !psi0.is_finite() {
        return Err(Error::NonFinite("propagate: psi0"));
    }
    if (psi0.norm_sqr() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "psi0 must be normalized (|psi0|^2 = {})",
            psi0.norm_sqr()
        )));
    }
    Ok(())
}

/// Piecewise-exact evolution under the square-wave drive, sampled on a
/// uniform grid of `samples_per_period` points per period (plus the
/// final point `t = n_periods T`). Exact up to floating point.
pub fn propagate(
    sys: &SystemParams,
    drive: &DriveProtocol,
    psi0: StateVec,
    n_periods: usize,
    samples_per_period: usize,
) -> Result<Trajectory> {
    check_initial_state(&psi0)?;
    if n_periods < 1 {
        return Err(Error::InvalidArgument(
            "n_periods must be >= 1".to_string(),
        ));
    }
    if samples_per_period < 2 {
        return Err(Error::InvalidArgument(
            "samples_per_period must be >= 2".to_string(),
        ));
    }

    let t_period = drive.period();
    let tau1 = drive.tau1();
    let dt = t_period / samples_per_period as f64;
    let h_on = build_h_l(sys, drive.gamma0());
    let h_off = build_h_l(sys, 0.0);
    let u_on = mat2_exp(h_on, tau1)?;
    let u_period = mat2_exp(h_off, drive.tau2())? * u_on;

    // Within-period sample propagators; offsets repeat every period.
    let partials: Vec<Mat2> = (0..samples_per_period)
        .map(|j| {
            let s = j as f64 * dt;
            if j == 0 {
                Ok(Mat2::IDENTITY)
            } else if s < tau1 {
                mat2_exp(h_on, s)
            } else {
                Ok(mat2_exp(h_off, s - tau1)? * u_on)
            }
        })
        .collect::<Result<_>>()?;

    let total = n_periods * samples_per_period + 1;
    let mut times = Vec::with_capacity(total);
    let mut states = Vec::with_capacity(total);
    let mut norms = Vec::with_capacity(total);
    let mut strobe = Vec::with_capacity(n_periods + 1);

    let mut psi = psi0;
    for p in 0..n_periods {
        for (j, partial) in partials.iter().enumerate() {
            let k = p * samples_per_period + j;
            if j == 0 {
                strobe.push(k);
            }
            let state = StateVec::apply(partial, &psi);
            times.push(k as f64 * dt);
            norms.push(state.norm_sqr());
            states.push(state);
        }
        psi = StateVec::apply(&u_period, &psi);
    }
    strobe.push(times.len());
    times.push((n_periods * samples_per_period) as f64 * dt);
    norms.push(psi.norm_sqr());
    states.push(psi);

    Ok(Trajectory {
        times,
        states,
        norms,
        period: t_period,
        strobe,
    })
}

/// Classic RK4 integration of `i dpsi/dt = H_L(t) psi` with steps
/// aligned to the pulse edges, recorded at every step. Serves as an
/// independent oracle for `propagate`; agreement is O(dt^4).
pub fn rk4_reference(
    sys: &SystemParams,
    drive: &DriveProtocol,
    psi0: StateVec,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    check_initial_state(&psi0)?;
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t_final = {t_final} must be > 0"
        )));
    }
    let tau1 = drive.tau1();
    let tau2 = drive.tau2();
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt = {dt} must be > 0")));
    }
    if dt > tau1 / 10.0 {
        return Err(Error::InvalidArgument(format!(
            "dt = {dt} must be <= tau1/10 = {}",
            tau1 / 10.0
        )));
    }
    if dt > tau2 / 10.0 {
        return Err(Error::InvalidArgument(format!(
            "dt = {dt} must be <= (T - tau1)/10 = {}",
            tau2 / 10.0
        )));
    }

    let t_period = drive.period();
    let h_on = build_h_l(sys, drive.gamma0());
    let h_off = build_h_l(sys, 0.0);
    let deriv = |h: &Mat2, v: &StateVec| -> StateVec {
        let hv = *h * [v.up, v.down];
        StateVec::new(-C64::I * hv[0], -C64::I * hv[1])
    };

    let mut times = vec![0.0];
    let mut states = vec![psi0];
    let mut norms = vec![psi0.norm_sqr()];
    let mut strobe = vec![0usize];
    let mut psi = psi0;

    // integrate one constant-H segment of length `seg` starting at `t0`
    let integrate = |psi: &mut StateVec,
                         h: &Mat2,
                         t0: f64,
                         seg: f64,
                         times: &mut Vec<f64>,
                         states: &mut Vec<StateVec>,
                         norms: &mut Vec<f64>| {
        let n = (seg / dt).ceil().max(1.0) as usize;
        let h_step = seg / n as f64;
        for i in 1..=n {
            let k1 = deriv(h, psi);
            let mid1 = StateVec::new(
                psi.up + 0.5 * h_step * k1.up,
                psi.down + 0.5 * h_step * k1.down,
            );
            let k2 = deriv(h, &mid1);
            let mid2 = StateVec::new(
                psi.up + 0.5 * h_step * k2.up,
                psi.down + 0.5 * h_step * k2.down,
            );
            let k3 = deriv(h, &mid2);
            let end = StateVec::new(psi.up + h_step * k3.up, psi.down + h_step * k3.down);
            let k4 = deriv(h, &end);
            *psi = StateVec::new(
                psi.up + h_step / 6.0 * (k1.up + 2.0 * k2.up + 2.0 * k3.up + k4.up),
                psi.down + h_step / 6.0 * (k1.down + 2.0 * k2.down + 2.0 * k3.down + k4.down),
            );
            times.push(t0 + i as f64 * h_step);
            states.push(*psi);
            norms.push(psi.norm_sqr());
        }
    };

    // final times within 1e-9 T of a period boundary count as that boundary
    let n_full = ((t_final + 1e-9 * t_period) / t_period).floor() as usize;
    for p in 0..n_full {
        let t0 = p as f64 * t_period;
        integrate(&mut psi, &h_on, t0, tau1, &mut times, &mut states, &mut norms);
        integrate(
            &mut psi,
            &h_off,
            t0 + tau1,
            tau2,
            &mut times,
            &mut states,
            &mut norms,
        );
        // pin the boundary sample to an exact multiple of T
        *times.last_mut().unwrap() = (p + 1) as f64 * t_period;
        strobe.push(times.len() - 1);
    }
    let remainder = t_final - n_full as f64 * t_period;
    if remainder > 1e-9 * t_period {
        let t0 = n_full as f64 * t_period;
        let seg1 = remainder.min(tau1);
        integrate(&mut psi, &h_on, t0, seg1, &mut times, &mut states, &mut norms);
        if remainder > tau1 {
            integrate(
                &mut psi,
                &h_off,
                t0 + tau1,
                remainder - tau1,
                &mut times,
                &mut states,
                &mut norms,
            );
        }
    }

    Ok(Trajectory {
        times,
        states,
        norms,
        period: t_period,
        strobe,
    })
}

/// Result of a lifetime fit: survival probability `~ e^{-gamma t}`.
#[derive(Clone, Copy, Debug)]
pub struct LifetimeFit {
    pub gamma: f64,
    /// RMS residual of `ln(norm)` against the fitted line.
    pub residual: f64,
}

/// Least-squares slope of `ln(norm)` vs `t` over the retained late-time
/// window, using stroboscopic samples only. `discard_fraction` of the
/// stroboscopic samples is dropped from the front so the fast mode has
/// died out; 0.5 is a sensible default.
pub fn fit_lifetime(traj: &Trajectory, discard_fraction: f64) -> Result<LifetimeFit> {
    if !(0.0..0.9).contains(&discard_fraction) {
        return Err(Error::InvalidArgument(format!(
            "discard_fraction = {discard_fraction} must be in [0, 0.9)"
        )));
    }
    let all: Vec<(f64, f64)> = traj.stroboscopic().collect();
    let skip = (all.len() as f64 * discard_fraction).floor() as usize;
    let window: Vec<(f64, f64)> = all[skip..]
        .iter()
        .take_while(|(_, n)| *n > 1e-300)
        .copied()
        .collect();
    if window.len() < 10 {
        return Err(Error::FitFailed(format!(
            "late-time window has {} usable stroboscopic samples (needs >= 10); \
             total {}, discarded {}, first underflow cut the rest",
            window.len(),
            all.len(),
            skip
        )));
    }

    let n = window.len() as f64;
    let t_mean = window.iter().map(|(t, _)| t).sum::<f64>() / n;
    let y_mean = window.iter().map(|(_, p)| p.ln()).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, p) in &window {
        num += (t - t_mean) * (p.ln() - y_mean);
        den += (t - t_mean) * (t - t_mean);
    }
    if den == 0.0 {
        return Err(Error::FitFailed(
            "degenerate time window (all samples at one time)".to_string(),
        ));
    }
    let slope = num / den;
    let mut ss = 0.0;
    for (t, p) in &window {
        let r = p.ln() - y_mean - slope * (t - t_mean);
        ss += r * r;
    }
    Ok(LifetimeFit {
        gamma: slope.abs(),
        residual: (ss / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{floquet_spectrum, monodromy_numeric};
    use approx::assert_relative_eq;

    fn sys() -> SystemParams {
        SystemParams::new(1.0).unwrap()
    }

    #[test]
    fn rejects_bad_inputs() {
        let d = DriveProtocol::new(1.0, 0.3, 1.0).unwrap();
        let bad = StateVec::new(C64::new(0.5, 0.0), C64::ZERO);
        assert!(propagate(&sys(), &d, bad, 10, 4).is_err());
        assert!(propagate(&sys(), &d, StateVec::UP, 0, 4).is_err());
        assert!(propagate(&sys(), &d, StateVec::UP, 10, 1).is_err());
        assert!(rk4_reference(&sys(), &d, StateVec::UP, 5.0, 0.05).is_err()); // dt > tau1/10
    }

    #[test]
    fn lossless_norm_is_conserved() {
        let d = DriveProtocol::new(0.0, 0.3, 1.0).unwrap();
        let tr = propagate(&sys(), &d, StateVec::UP, 100, 8).unwrap();
        for n in &tr.norms {
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn isolated_lossy_level_decays_at_4gamma() {
        // J0 ~ 0, psi0 = |down>: survival = e^{-4 gamma0 * on-time}
        let s = SystemParams::new(1e-12).unwrap();
        let d = DriveProtocol::new(2.0, 0.25, 1.0).unwrap();
        let tr = propagate(&s, &d, StateVec::DOWN, 3, 8).unwrap();
        for (i, (&t, &n)) in tr.times.iter().zip(&tr.norms).enumerate() {
            let full = (t / 1.0).floor();
            let frac = (t - full).min(0.25);
            let on_time = full * 0.25 + frac;
            assert!(
                (n - (-4.0 * 2.0 * on_time).exp()).abs() < 1e-9,
                "sample {i} at t = {t}"
            );
        }
    }

    #[test]
    fn stroboscopic_states_follow_the_monodromy() {
        let d = DriveProtocol::new(1.5, 0.2, 0.9).unwrap();
        let tr = propagate(&sys(), &d, StateVec::UP, 12, 5).unwrap();
        let gp = monodromy_numeric(&sys(), &d, false);
        let mut psi = [StateVec::UP.up, StateVec::UP.down];
        for (k, (t, n)) in tr.stroboscopic().enumerate() {
            assert_relative_eq!(t, k as f64 * d.period(), max_relative = 1e-12);
            let expect = psi[0].norm_sqr() + psi[1].norm_sqr();
            assert!((n - expect).abs() < 1e-11 * expect.max(1e-30), "period {k}");
            psi = gp * psi;
        }
    }

    #[test]
    fn norms_never_increase() {
        for g0 in [0.0, 0.4, 3.0, 200.0] {
            let d = DriveProtocol::new(g0, 0.01, 0.5).unwrap();
            let tr = propagate(&sys(), &d, StateVec::UP, 50, 7).unwrap();
            for w in tr.norms.windows(2) {
                assert!(w[1] <= w[0] + 1e-12);
            }
        }
    }

    #[test]
    fn rk4_matches_exact_propagation() {
        let d = DriveProtocol::new(0.5, 0.3, 1.0).unwrap();
        let exact = propagate(&sys(), &d, StateVec::UP, 20, 2).unwrap();
        let rk = rk4_reference(&sys(), &d, StateVec::UP, 20.0, 0.003).unwrap();
        let exact_strobe: Vec<f64> = exact.stroboscopic().map(|(_, n)| n).collect();
        let rk_strobe: Vec<f64> = rk.stroboscopic().map(|(_, n)| n).collect();
        assert_eq!(exact_strobe.len(), rk_strobe.len());
        let dev = exact_strobe
            .iter()
            .zip(&rk_strobe)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dev < 1e-8, "max strobe deviation {dev:.2e}");
    }

    #[test]
    fn rk4_is_fourth_order() {
        let d = DriveProtocol::new(2.0, 0.3, 1.0).unwrap();
        let exact = propagate(&sys(), &d, StateVec::UP, 10, 2).unwrap();
        let exact_final = *exact.norms.last().unwrap();
        let mut errs = Vec::new();
        for dt in [0.025, 0.0125] {
            let rk = rk4_reference(&sys(), &d, StateVec::UP, 10.0, dt).unwrap();
            let (_, n) = rk.stroboscopic().last().unwrap();
            errs.push((n - exact_final).abs() / exact_final);
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(
            (3.7..=4.3).contains(&order),
            "measured order {order:.2} from errors {errs:?}"
        );
    }

    #[test]
    fn rk4_norm_drift_without_loss() {
        let d = DriveProtocol::new(0.0, 0.3, 1.0).unwrap();
        let rk = rk4_reference(&sys(), &d, StateVec::UP, 20.0, 0.01).unwrap();
        for n in &rk.norms {
            assert!((n - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fit_recovers_exact_exponential() {
        let times: Vec<f64> = (0..40).map(|k| k as f64 * 0.7).collect();
        let norms: Vec<f64> = times.iter().map(|t| (-3.0 * t).exp()).collect();
        let tr = Trajectory {
            states: vec![StateVec::UP; times.len()],
            strobe: (0..times.len()).collect(),
            period: 0.7,
            times,
            norms,
        };
        let fit = fit_lifetime(&tr, 0.25).unwrap();
        assert_relative_eq!(fit.gamma, 3.0, epsilon = 1e-10);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn fit_window_too_short_is_an_error() {
        let times: Vec<f64> = (0..8).map(|k| k as f64).collect();
        let norms = vec![0.5; 8];
        let tr = Trajectory {
            states: vec![StateVec::UP; 8],
            strobe: (0..8).collect(),
            period: 1.0,
            times,
            norms,
        };
        match fit_lifetime(&tr, 0.0) {
            Err(Error::FitFailed(msg)) => assert!(msg.contains("stroboscopic")),
            other => panic!("expected FitFailed, got {other:?}"),
        }
        assert!(fit_lifetime(&tr, 0.95).is_err());
    }

    #[test]
    fn late_time_fit_matches_slow_mode_in_broken_phase() {
        let d = DriveProtocol::from_omega(200.0, 0.01, 2.6).unwrap();
        let f = floquet_spectrum(&sys(), &d);
        let tr = propagate(&sys(), &d, StateVec::UP, 100, 4).unwrap();
        let fit = fit_lifetime(&tr, 0.5).unwrap();
        assert!((fit.gamma - f.gamma_slow).abs() / f.gamma_slow < 0.02);
    }

    #[test]
    fn stroboscopic_fit_handles_symmetric_phase() {
        let d = DriveProtocol::from_omega(200.0, 0.01, 1.33).unwrap();
        let f = floquet_spectrum(&sys(), &d);
        let tr = propagate(&sys(), &d, StateVec::UP, 100, 4).unwrap();
        let fit = fit_lifetime(&tr, 0.5).unwrap();
        assert!((fit.gamma - f.gamma_slow).abs() / f.gamma_slow < 0.02);
    }

    #[test]
    fn mode_overlap_controls_the_fitted_rate() {
        // start in the slow eigenvector of G'(T): fit matches gamma_slow tightly
        let d = DriveProtocol::from_omega(200.0, 0.01, 2.0).unwrap();
        let gp = monodromy_numeric(&sys(), &d, false);
        let eig = crate::numerics::eig2(&gp).unwrap();
        let f = floquet_spectrum(&sys(), &d);
        // eig.values[0] is the dominant (slow) multiplier
        let v = eig.vectors[0];
        let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        let psi0 = StateVec::new(v[0] / norm, v[1] / norm);
        let tr = propagate(&sys(), &d, psi0, 60, 4).unwrap();
        let fit = fit_lifetime(&tr, 0.2).unwrap();
        assert!((fit.gamma - f.gamma_slow).abs() / f.gamma_slow < 0.02);
    }
}
