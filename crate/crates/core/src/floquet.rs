//! Analytic Floquet spectrum of the square-wave-modulated system.
//!
//! Over one period the balanced propagator factorizes into two constant
//! pieces, `G(T) = e^{-i H_PT(0) tau2} e^{-i H_PT(gamma0) tau1}`, and
//! its eigenvalues have the closed form
//!
//! ```text
//! Lambda_pm = c1 c2 - (J0/e0) s1 s2
//!             +- sqrt[ (gamma0/e0 s1)^2 - (c1 s2 + (J0/e0) s1 c2)^2 ]
//! ```
//!
//! with `c1 = cosh(e0 tau1)`, `s1 = sinh(e0 tau1)`, `c2 = cos(J0 tau2)`,
//! `s2 = sin(J0 tau2)` and `e0 = sqrt(gamma0^2 - J0^2)` (imaginary below
//! the static exceptional point). Quasienergies follow from the lossy
//! propagator `G'(T) = e^{-gamma0 tau1} G(T)` as
//! `eps_pm = -i gamma0 tau1 / T + i ln(Lambda_pm) / T`, and the decay
//! rates are `Gamma = -2 Im eps`.
//!
//! Internally every quantity is evaluated with the growing factor
//! `e^{e0 tau1}` pulled out, so rates, `mu` and phase labels stay finite
//! far beyond the point where `cosh` overflows; only the raw `Lambda`
//! fields can saturate to infinity, at `|Lambda| > ~1.8e308`.

use crate::error::Result;
use crate::model::{build_h_l, build_h_pt, DriveProtocol, SystemParams};
use crate::numerics::{mat2_exp, C64, Mat2};

/// PT-symmetry classification of a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    /// Symmetric: the two modes share one decay rate.
    Pts,
    /// Broken: distinct slow and fast decay rates.
    Ptb,
    /// Within the exceptional-point tolerance band.
    Ep,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Pts => "PTS",
            Phase::Ptb => "PTB",
            Phase::Ep => "EP",
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The raw ingredients of the closed form. `c1`, `s1` grow like
/// `e^{|e0| tau1} / 2` and overflow for `|e0 tau1| > ~709`; the spectrum
/// functions below do not go through them.
#[derive(Clone, Copy, Debug)]
pub struct FloquetAux {
    pub c1: C64,
    pub c2: C64,
    pub s1: C64,
    pub s2: C64,
    pub eps0: C64,
}

/// One-parameter-point Floquet data.
#[derive(Clone, Copy, Debug)]
pub struct FloquetSpectrum {
    /// Eigenvalues of the balanced monodromy `G(T)`, ordered by
    /// descending modulus (in PTS the pair is complex conjugate with
    /// unit modulus and the order is a fixed convention). Their
    /// product is 1.
    pub lambda_plus: C64,
    pub lambda_minus: C64,
    /// Quasienergies matching `lambda_plus` / `lambda_minus`; real parts
    /// folded into `(-pi/T, pi/T]`.
    pub eps_plus: C64,
    pub eps_minus: C64,
    /// Decay rates `-2 Im eps`, sorted ascending. Their sum is
    /// `4 gamma0 tau1 / T`.
    pub gamma_slow: f64,
    pub gamma_fast: f64,
    /// Symmetry-breaking degree `| |e^{-i eps_+ T}| - |e^{-i eps_- T}| |`.
    pub mu: f64,
    pub phase: Phase,
}

/// Scaled pieces: everything divided by the growing factor `e^x`,
/// `x = e0 tau1` with `Re x >= 0`.
struct Scaled {
    x: C64,
    /// `(1 + e^{-2x})/2 = e^{-x} c1`
    c1s: C64,
    c2: C64,
    /// dominant scaled root `e^{-x} (m + sigma sqrt(D))`, sigma picked
    /// for the larger modulus
    big: C64,
    /// `e^{2i Im x} e^{-2x} D = e^{-2 Re x} D`: the discriminant under a
    /// positive rescaling, so its real part carries the true sign. (For
    /// `gamma0 < J0` the factor `e^{-2x}` is a pure phase and would
    /// otherwise rotate the sign away.)
    disc_oriented: C64,
    /// `|e^{-2x}|`
    em_norm: f64,
}

fn scaled(sys: &SystemParams, drive: &DriveProtocol, flip_eps0: bool) -> Scaled {
    let j0 = sys.j0();
    let g0 = drive.gamma0();
    let tau1 = drive.tau1();
    let tau2 = drive.tau2();

    let mut eps0 = C64::new(g0 * g0 - j0 * j0, 0.0).sqrt();
    if flip_eps0 {
        eps0 = -eps0;
    }
    // All observables are even in eps0; normalize so Re x >= 0 and the
    // factored exponential never grows.
    let mut x = eps0 * tau1;
    if x.re < 0.0 || (x.re == 0.0 && x.im < 0.0) {
        x = -x;
        eps0 = -eps0;
    }
    let em = (-2.0 * x).exp();

    let c1s = (C64::ONE + em) * 0.5;
    // e^{-x} s1 / eps0, with the series limit tau1 sinh(x)/x at the
    // degenerate line gamma0 = J0 (threshold 1e-6, truncation < 1e-19).
    let rs = if x.norm() < 1e-6 {
        let x2 = x * x;
        (-x).exp() * tau1 * (C64::ONE + x2 / 6.0 + x2 * x2 / 120.0)
    } else {
        (C64::ONE - em) * 0.5 / eps0
    };

    let c2 = C64::new((j0 * tau2).cos(), 0.0);
    let s2 = C64::new((j0 * tau2).sin(), 0.0);

    let m = c1s * c2 - j0 * rs * s2;
    let b = c1s * s2 + j0 * rs * c2;
    let disc = (g0 * rs) * (g0 * rs) - b * b;

    let mut s = disc.sqrt();
    if (m.conj() * s).re < 0.0 {
        s = -s;
    }

    Scaled {
        x,
        c1s,
        c2,
        big: m + s,
        disc_oriented: C64::new(0.0, 2.0 * x.im).exp() * disc,
        em_norm: em.norm(),
    }
}

/// Fold an angle into `[-pi, pi)`.
fn wrap_angle(a: f64) -> f64 {
    let mut a = a % std::f64::consts::TAU;
    if a >= std::f64::consts::PI {
        a -= std::f64::consts::TAU;
    } else if a < -std::f64::consts::PI {
        a += std::f64::consts::TAU;
    }
    a
}

/// The closed-form parameters `c1, c2, s1, s2, eps0` as written.
pub fn floquet_aux(sys: &SystemParams, drive: &DriveProtocol) -> FloquetAux {
    let j0 = sys.j0();
    let g0 = drive.gamma0();
    let eps0 = C64::new(g0 * g0 - j0 * j0, 0.0).sqrt();
    let x = eps0 * drive.tau1();
    FloquetAux {
        c1: x.cosh(),
        c2: C64::new((j0 * drive.tau2()).cos(), 0.0),
        s1: x.sinh(),
        s2: C64::new((j0 * drive.tau2()).sin(), 0.0),
        eps0,
    }
}

/// Eigenvalues `Lambda_pm` of the balanced monodromy `G(T)`, ordered by
/// descending modulus. The subdominant root is recovered from
/// `Lambda_+ Lambda_- = 1` (det G = 1), which keeps it accurate when the
/// pair spans hundreds of orders of magnitude.
pub fn lambda_eigenvalues(sys: &SystemParams, drive: &DriveProtocol) -> (C64, C64) {
    let sc = scaled(sys, drive, false);
    (sc.x.exp() * sc.big, (-sc.x).exp() / sc.big)
}

/// One-period propagator, composed numerically from two closed-form
/// exponentials: balanced `G(T)` from `H_PT`, or lossy `G'(T)` from
/// `H_L`. The two differ exactly by the scalar `e^{-gamma0 tau1}`.
pub fn monodromy_numeric(sys: &SystemParams, drive: &DriveProtocol, balanced: bool) -> Mat2 {
    let (h_on, h_off) = if balanced {
        (build_h_pt(sys, drive.gamma0()), build_h_pt(sys, 0.0))
    } else {
        (build_h_l(sys, drive.gamma0()), build_h_l(sys, 0.0))
    };
    let u_on = mat2_exp(h_on, drive.tau1()).expect("finite Hamiltonian");
    let u_off = mat2_exp(h_off, drive.tau2()).expect("finite Hamiltonian");
    u_off * u_on
}

/// Discriminant under the square root in the closed form, rescaled by
/// the positive factor `e^{-2 Re(e0 tau1)}`: same sign and zeros as the
/// bare discriminant, but finite for arbitrarily strong pulses.
/// Negative real part means PTS, positive means PTB.
pub fn symmetry_discriminant(sys: &SystemParams, drive: &DriveProtocol) -> C64 {
    scaled(sys, drive, false).disc_oriented
}

fn spectrum_from_scaled(drive: &DriveProtocol, sc: &Scaled) -> FloquetSpectrum {
    let t = drive.period();
    let g0t1 = drive.gamma0() * drive.tau1();

    let big_norm = sc.big.norm();
    let ln_big = big_norm.ln() + sc.x.re; // ln |Lambda_+|
    let arg_big = wrap_angle(sc.big.arg() + sc.x.im);

    let lambda_plus = sc.x.exp() * sc.big;
    let lambda_minus = (-sc.x).exp() / sc.big;

    // eps = -i g0 tau1 / T + i ln(Lambda) / T, principal log with the
    // real part folded into (-pi/T, pi/T].
    let eps_plus = C64::new(-arg_big / t, (ln_big - g0t1) / t);
    let arg_small = wrap_angle(-arg_big);
    let eps_minus = C64::new(-arg_small / t, (-ln_big - g0t1) / t);

    let gamma_plus = 2.0 * (g0t1 - ln_big) / t;
    let gamma_minus = 2.0 * (g0t1 + ln_big) / t;
    let (gamma_slow, gamma_fast) = if gamma_plus <= gamma_minus {
        (gamma_plus, gamma_minus)
    } else {
        (gamma_minus, gamma_plus)
    };

    // mu = e^{-g0 tau1} (|Lambda_+| - |Lambda_-|), assembled from logs
    // so strong pulses cannot overflow.
    let mu = ((sc.x.re - g0t1).exp() * big_norm - (-sc.x.re - g0t1).exp() / big_norm).abs();

    // EP band: |D| < 1e-9 (1 + |c1 c2|^2), rescaled by |e^{-2x}|.
    let tol = 1e-9 * (sc.em_norm + (sc.c1s * sc.c2).norm_sqr());
    let phase = if sc.disc_oriented.re > tol {
        Phase::Ptb
    } else if sc.disc_oriented.re < -tol {
        Phase::Pts
    } else {
        Phase::Ep
    };

    FloquetSpectrum {
        lambda_plus,
        lambda_minus,
        eps_plus,
        eps_minus,
        gamma_slow,
        gamma_fast,
        mu,
        phase,
    }
}

/// Full Floquet spectrum at one parameter point.
pub fn floquet_spectrum(sys: &SystemParams, drive: &DriveProtocol) -> FloquetSpectrum {
    spectrum_from_scaled(drive, &scaled(sys, drive, false))
}

/// As [`floquet_spectrum`] but forcing the opposite sign of the complex
/// root `e0`; physical outputs must not change. Exposed for tests.
#[doc(hidden)]
pub fn floquet_spectrum_flipped_branch(
    sys: &SystemParams,
    drive: &DriveProtocol,
) -> FloquetSpectrum {
    spectrum_from_scaled(drive, &scaled(sys, drive, true))
}

/// Convenience wrapper building the drive from `omega = 2 pi / T`.
pub fn floquet_spectrum_at_omega(
    sys: &SystemParams,
    gamma0: f64,
    tau1: f64,
    omega: f64,
) -> Result<FloquetSpectrum> {
    let drive = DriveProtocol::from_omega(gamma0, tau1, omega)?;
    Ok(floquet_spectrum(sys, &drive))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    fn sys(j0: f64) -> SystemParams {
        SystemParams::new(j0).unwrap()
    }

    #[test]
    fn lossless_drive_gives_unimodular_pair() {
        let s = sys(1.0);
        let d = DriveProtocol::new(0.0, 0.3, 2.0).unwrap();
        let (lp, lm) = lambda_eigenvalues(&s, &d);
        // gamma0 = 0: Lambda = e^{+-i J0 T}
        let expected = (C64::I * d.period()).exp();
        assert!((lp - expected).norm().min((lp - expected.conj()).norm()) < 1e-12);
        assert_relative_eq!(lp.norm(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(lm.norm(), 1.0, epsilon = 1e-12);

        let f = floquet_spectrum(&s, &d);
        assert_eq!(f.phase, Phase::Pts);
        assert!(f.gamma_slow.abs() < 1e-12 && f.gamma_fast.abs() < 1e-12);
        assert!(f.mu < 1e-12);
    }

    #[test]
    fn decoupled_levels_give_real_pair() {
        // J0 -> 0 is outside SystemParams' domain, so take it tiny: the
        // closed form continuously approaches Lambda = e^{+-gamma0 tau1}.
        let s = sys(1e-13);
        let d = DriveProtocol::new(1.5, 0.4, 1.0).unwrap();
        let (lp, lm) = lambda_eigenvalues(&s, &d);
        assert_relative_eq!(lp.re, (1.5f64 * 0.4).exp(), max_relative = 1e-9);
        assert_relative_eq!(lm.re, (-1.5f64 * 0.4).exp(), max_relative = 1e-9);

        let f = floquet_spectrum(&s, &d);
        assert_eq!(f.phase, Phase::Ptb);
        assert!(f.gamma_slow.abs() < 1e-9);
        assert_relative_eq!(
            f.gamma_fast,
            4.0 * 1.5 * 0.4 / 1.0,
            max_relative = 1e-9
        );
        assert!(f.mu > 0.0);
    }

    #[test]
    fn unimodular_product_anywhere() {
        let s = sys(1.0);
        for (g0, tau1, t) in [
            (0.3, 0.2, 1.7),
            (5.0, 0.05, 0.9),
            (200.0, 0.01, std::f64::consts::PI),
            (1.0, 0.3, 2.0), // degenerate line gamma0 = J0
        ] {
            let d = DriveProtocol::new(g0, tau1, t).unwrap();
            let (lp, lm) = lambda_eigenvalues(&s, &d);
            assert!((lp * lm - C64::ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn matches_numeric_monodromy_at_strong_dissipation() {
        let s = sys(1.0);
        let d = DriveProtocol::from_omega(200.0, 0.01, 2.6).unwrap();
        let (lp, lm) = lambda_eigenvalues(&s, &d);
        let eig = crate::numerics::eig2(&monodromy_numeric(&s, &d, true)).unwrap();
        let e1 = (eig.values[0] - lp).norm() / lp.norm();
        let e2 = (eig.values[1] - lm).norm() / lm.norm();
        assert!(e1 < 1e-8 && e2 < 1e-8, "e1 = {e1:.2e}, e2 = {e2:.2e}");
    }

    #[test]
    fn lossy_monodromy_is_scaled_balanced() {
        let s = sys(1.0);
        let d = DriveProtocol::new(3.0, 0.2, 1.1).unwrap();
        let g = monodromy_numeric(&s, &d, true);
        let gp = monodromy_numeric(&s, &d, false);
        let scale = C64::new(-(3.0 * 0.2f64), 0.0).exp();
        assert!(gp.max_abs_diff(&(g * scale)) < 1e-12);

        let det = gp.det();
        let expected = (-2.0 * 3.0 * 0.2f64).exp();
        assert!((det - C64::new(expected, 0.0)).norm() / expected < 1e-10);
    }

    #[test]
    fn unitary_monodromy_without_loss() {
        let s = sys(1.0);
        let d = DriveProtocol::new(0.0, 0.3, 1.7).unwrap();
        let g = monodromy_numeric(&s, &d, true);
        let prod = g * g.conj_transpose();
        assert!(prod.max_abs_diff(&Mat2::IDENTITY) < 1e-12);
    }

    #[test]
    fn pts_rates_coincide_at_half_loss() {
        // Mid-PTS stretch of the strong-dissipation sweep.
        let s = sys(1.0);
        let d = DriveProtocol::from_omega(200.0, 0.01, 1.33).unwrap();
        let f = floquet_spectrum(&s, &d);
        assert_eq!(f.phase, Phase::Pts);
        let expected = 2.0 * 200.0 * 0.01 / d.period();
        assert_relative_eq!(f.gamma_slow, expected, max_relative = 1e-9);
        assert_relative_eq!(f.gamma_fast, expected, max_relative = 1e-9);
    }

    #[test]
    fn ptb_at_first_resonance() {
        let s = sys(1.0);
        let d = DriveProtocol::from_omega(200.0, 0.01, 2.0).unwrap();
        let f = floquet_spectrum(&s, &d);
        assert_eq!(f.phase, Phase::Ptb);
        assert!(f.gamma_slow < f.gamma_fast);
        assert!(f.mu > 0.1);
    }

    #[test]
    fn rate_sum_and_trace_identities() {
        let s = sys(1.0);
        for (g0, tau1, omega) in [(0.7, 0.3, 1.9), (30.0, 0.05, 0.77), (200.0, 0.01, 2.0)] {
            let d = DriveProtocol::from_omega(g0, tau1, omega).unwrap();
            let f = floquet_spectrum(&s, &d);
            let sum = 4.0 * g0 * tau1 / d.period();
            assert_relative_eq!(f.gamma_slow + f.gamma_fast, sum, max_relative = 1e-9);

            let aux = floquet_aux(&s, &d);
            let trace = 2.0 * (aux.c1 * aux.c2 - sys(1.0).j0() / aux.eps0 * aux.s1 * aux.s2);
            let (lp, lm) = lambda_eigenvalues(&s, &d);
            assert!((lp + lm - trace).norm() < 1e-10 * (1.0 + trace.norm()));
        }
    }

    #[test]
    fn aux_hyperbolic_and_circular_identities() {
        let s = sys(1.0);
        let d = DriveProtocol::new(4.0, 0.3, 1.9).unwrap();
        let a = floquet_aux(&s, &d);
        assert!((a.c1 * a.c1 - a.s1 * a.s1 - C64::ONE).norm() < 1e-10);
        assert!((a.c2 * a.c2 + a.s2 * a.s2 - C64::ONE).norm() < 1e-10);
    }

    #[test]
    fn branch_flip_leaves_observables_alone() {
        let s = sys(1.0);
        for omega in [0.45, 0.8, 1.33, 2.0, 3.1] {
            let d = DriveProtocol::from_omega(7.0, 0.12, omega).unwrap();
            let a = floquet_spectrum(&s, &d);
            let b = floquet_spectrum_flipped_branch(&s, &d);
            assert!((a.gamma_slow - b.gamma_slow).abs() < 1e-10);
            assert!((a.gamma_fast - b.gamma_fast).abs() < 1e-10);
            assert!((a.mu - b.mu).abs() < 1e-10);
            assert_eq!(a.phase, b.phase);
        }
    }

    #[test]
    fn mu_factorizes_the_global_loss() {
        let s = sys(1.0);
        for omega in [0.5, 1.0, 1.33, 2.0] {
            let d = DriveProtocol::from_omega(20.0, 0.05, omega).unwrap();
            let f = floquet_spectrum(&s, &d);
            let direct =
                (-20.0 * 0.05f64).exp() * (f.lambda_plus.norm() - f.lambda_minus.norm()).abs();
            assert!((f.mu - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn quasienergy_real_part_is_folded() {
        let s = sys(1.0);
        let d = DriveProtocol::from_omega(3.0, 0.2, 0.9).unwrap();
        let f = floquet_spectrum(&s, &d);
        let bound = std::f64::consts::PI / d.period();
        for eps in [f.eps_plus, f.eps_minus] {
            assert!(eps.re > -bound - 1e-12 && eps.re <= bound + 1e-12);
        }
        // consistency: Gamma = -2 Im eps reproduces the sorted rates
        let mut rates = [-2.0 * f.eps_plus.im, -2.0 * f.eps_minus.im];
        rates.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(rates[0], f.gamma_slow, max_relative = 1e-12);
        assert_relative_eq!(rates[1], f.gamma_fast, max_relative = 1e-12);
    }

    #[test]
    fn overflow_safe_rates_for_huge_pulse_area() {
        // gamma0 tau1 = 1250: cosh overflows, the scaled path must not.
        let s = sys(1.0);
        let omega = 1.0;
        let t = TAU / omega;
        let d = DriveProtocol::new(200.0, t - 0.05, t).unwrap();
        let f = floquet_spectrum(&s, &d);
        assert!(f.gamma_slow.is_finite() && f.gamma_fast.is_finite());
        assert!(f.mu.is_finite());
        assert!(f.gamma_slow > 0.0);
    }
}
