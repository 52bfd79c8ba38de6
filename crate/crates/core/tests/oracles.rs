//! Independent-oracle cross-checks: a Taylor-series exponential, the
//! numerically diagonalized monodromy, and the strong-dissipation
//! closed forms are compared against the production paths they shadow.

use num_complex::Complex64 as C64;
use ptzeno::{
    build_h_l, eig2, floquet_spectrum, mat2_exp, monodromy_numeric, phase_diagram,
    projective_limit_rate, static_spectrum, DriveProtocol, Mat2, Phase, StaticParams,
    SystemParams,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// 30-term Taylor series for exp(-i m t); converges well below 1e-12
/// for the |entries| <= 2, |t| <= 0.7 regime it is used in.
fn expm_taylor(m: &Mat2, t: f64) -> Mat2 {
    let a = *m * (-C64::I * t);
    let mut term = Mat2::IDENTITY;
    let mut sum = Mat2::IDENTITY;
    for k in 1..=30 {
        term = term * a * C64::new(1.0 / k as f64, 0.0);
        sum = sum + term;
    }
    sum
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Mat2 {
    let mut e = || C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    Mat2::new(e(), e(), e(), e())
}

#[test]
fn matrix_exponential_matches_taylor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let m = random_matrix(&mut rng);
        let closed = mat2_exp(m, 0.7).unwrap();
        let oracle = expm_taylor(&m, 0.7);
        assert!(
            closed.max_abs_diff(&oracle) < 1e-12,
            "closed form vs Taylor differ by {:.2e}",
            closed.max_abs_diff(&oracle)
        );
    }
}

#[test]
fn phase_labels_agree_with_numeric_monodromy() {
    // random parameter grid; the numeric label comes from the modulus
    // gap of the diagonalized monodromy. Points inside a guard band
    // around the exceptional set are skipped, where any classifier is
    // free to disagree.
    let sys = SystemParams::new(1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0usize;
    for _ in 0..10_000 {
        let g0 = 10f64.powf(rng.random_range(-2.0..2.0));
        let tau1 = rng.random_range(0.01..0.3);
        let omega_tau1 = rng.random_range(0.05..6.0);
        let drive = DriveProtocol::from_omega(g0, tau1, omega_tau1 / tau1).unwrap();

        let f = floquet_spectrum(&sys, &drive);
        if f.phase == Phase::Ep {
            continue;
        }
        let eig = eig2(&monodromy_numeric(&sys, &drive, true)).unwrap();
        let gap = (eig.values[0].norm() - eig.values[1].norm()).abs();
        let scale = eig.values[0].norm().max(1.0);
        if gap < 1e-6 * scale && f.phase == Phase::Ptb {
            // numerically unresolvable splitting right at the boundary
            continue;
        }
        let numeric_label = if gap > 1e-9 * scale { Phase::Ptb } else { Phase::Pts };
        assert_eq!(
            f.phase, numeric_label,
            "phase disagreement at gamma0 = {g0}, tau1 = {tau1}, omega = {}",
            drive.omega()
        );
        checked += 1;
    }
    assert!(checked > 9_000, "only {checked} points actually compared");
}

#[test]
fn static_rates_match_diagonalizing_the_lossy_hamiltonian() {
    let sys = SystemParams::new(1.0).unwrap();
    for g0 in [0.0, 0.2, 0.9, 1.0, 1.1, 6.0, 120.0] {
        let s = static_spectrum(&StaticParams::new(g0, 1.0).unwrap());
        let eig = eig2(&build_h_l(&sys, g0)).unwrap();
        let mut rates = [-2.0 * eig.values[0].im, -2.0 * eig.values[1].im];
        rates.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(
            (rates[0] - s.gamma0_slow).abs() <= 1e-12 * (1.0 + s.gamma0_slow),
            "slow rate at gamma0 = {g0}"
        );
        assert!(
            (rates[1] - s.gamma0_fast).abs() <= 1e-12 * (1.0 + s.gamma0_fast),
            "fast rate at gamma0 = {g0}"
        );
    }
}

#[test]
fn slow_rate_approaches_the_projective_closed_form() {
    // strong dissipation with a short, fixed off-segment: the closed
    // form (J0^2/gamma0)(tau1/T) + J0^2 tau2^2 / T tracks the slow rate
    // within 5% across the figure's frequency range.
    let sys = SystemParams::new(1.0).unwrap();
    for tau2 in [0.05, 0.2] {
        for omega in [0.2, 0.5, 1.0, 2.0, 4.0] {
            let period = std::f64::consts::TAU / omega;
            let drive = DriveProtocol::new(200.0, period - tau2, period).unwrap();
            let f = floquet_spectrum(&sys, &drive);
            let proj = projective_limit_rate(&sys, &drive);
            let rel = (f.gamma_slow - proj).abs() / proj;
            assert!(
                rel < 0.05,
                "tau2 = {tau2}, omega = {omega}: deviation {rel:.3}"
            );
        }
    }
}

#[test]
fn slow_rate_limits_to_the_static_spectrum_at_full_duty() {
    // as the off-segment closes, the modulated slow rate approaches the
    // static slow rate 2(gamma0 - sqrt(gamma0^2 - J0^2))
    let sys = SystemParams::new(1.0).unwrap();
    let s = static_spectrum(&StaticParams::new(50.0, 1.0).unwrap());
    let period = 0.8;
    let drive = DriveProtocol::new(50.0, period - 1e-7, period).unwrap();
    let f = floquet_spectrum(&sys, &drive);
    assert!(
        (f.gamma_slow - s.gamma0_slow).abs() / s.gamma0_slow < 1e-3,
        "{} vs {}",
        f.gamma_slow,
        s.gamma0_slow
    );
}

#[test]
fn refined_phase_diagram_has_no_single_cell_islands() {
    // a PTB cell whose four neighbors are all PTS (or vice versa) would
    // be a discretization artifact; the wedges must stay connected at
    // 256x256
    let sys = SystemParams::new(1.0).unwrap();
    let pd = phase_diagram(&sys, 0.01, (0.0, 250.0), (0.45, 4.0), (256, 256)).unwrap();
    let ptb = |g: usize, w: usize| pd.phase_grid[g][w] == Phase::Ptb;
    for g in 1..255 {
        for w in 1..255 {
            if pd.phase_grid[g][w] == Phase::Ep {
                continue;
            }
            let here = ptb(g, w);
            let neighbors =
                [ptb(g - 1, w), ptb(g + 1, w), ptb(g, w - 1), ptb(g, w + 1)];
            assert!(
                neighbors.iter().any(|&n| n == here),
                "isolated {:?} cell at gamma0/J0 = {}, omega/J0 = {}",
                pd.phase_grid[g][w],
                pd.gamma0_axis[g],
                pd.omega_axis[w]
            );
        }
    }
}
