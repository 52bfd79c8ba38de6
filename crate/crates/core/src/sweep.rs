//! Frequency sweeps, phase diagrams, feature location and Zeno regime
//! segmentation.
//!
//! A sweep follows the fixed-pulse convention: `tau1` is held and the
//! period `T = 2 pi / omega` varies, so the admissible frequencies are
//! bounded by `omega < 2 pi / tau1` (see [`omega_ceiling`]).
//!
//! Inside each broken block the exceptional points are found by
//! bisecting the sign of the closed-form discriminant, and the
//! resonance is the frequency where one period holds an integer number
//! of half Rabi cycles, `sin(J0 T) = 0`, i.e. `omega_n = 2 J0 / n` -
//! independent of `tau1`. The minimum of the slow decay rate
//! (golden-section refined) identifies the harmonic index and is kept
//! as a diagnostic next to it.

use crate::error::{Error, Result};
use crate::floquet::{floquet_spectrum, symmetry_discriminant, FloquetSpectrum, Phase};
use crate::model::{DriveProtocol, SystemParams};
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Highest admissible modulation frequency for a pulse width `tau1`
/// (the pulse must fit inside the period).
pub fn omega_ceiling(tau1: f64) -> f64 {
    TAU / tau1
}

/// Floquet spectra along a frequency grid at fixed `gamma0`, `tau1`.
#[derive(Clone, Debug)]
pub struct OmegaSweep {
    sys: SystemParams,
    gamma0: f64,
    tau1: f64,
    pub omegas: Vec<f64>,
    pub spectra: Vec<FloquetSpectrum>,
}

impl OmegaSweep {
    pub fn sys(&self) -> &SystemParams {
        &self.sys
    }
    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }
    pub fn tau1(&self) -> f64 {
        self.tau1
    }
}

/// Phase diagram over a `(gamma0, omega)` grid; axes are stored
/// normalized to `J0`, `mu_grid[g][w]` matches `gamma0_axis[g]`,
/// `omega_axis[w]`.
#[derive(Clone, Debug)]
pub struct PhaseDiagram {
    pub gamma0_axis: Vec<f64>,
    pub omega_axis: Vec<f64>,
    pub mu_grid: Vec<Vec<f64>>,
    pub phase_grid: Vec<Vec<Phase>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureKind {
    /// Low-frequency exceptional point of a broken block.
    Lep,
    /// Resonance point (maximal symmetry breaking).
    Rp,
    /// High-frequency exceptional point.
    Hep,
}

impl FeatureKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeatureKind::Lep => "LEP",
            FeatureKind::Rp => "RP",
            FeatureKind::Hep => "HEP",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Feature {
    pub kind: FeatureKind,
    pub omega: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZenoLabel {
    /// Decay rate falls as the modulation frequency rises.
    Qze,
    /// Decay rate grows with the modulation frequency.
    Qaze,
}

impl ZenoLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ZenoLabel::Qze => "QZE",
            ZenoLabel::Qaze => "QAZE",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Segment {
    pub omega_lo: f64,
    pub omega_hi: f64,
    pub label: ZenoLabel,
    /// Set when the slope is not single-signed inside the segment or
    /// the label disagrees with the LEP - RP - HEP ordering.
    pub warning: Option<String>,
}

/// One broken block. Blocks cut off by the sweep boundary keep
/// `partial = true` and omit the missing features instead of
/// extrapolating them.
#[derive(Clone, Copy, Debug)]
pub struct PtbBlock {
    pub lep: Option<f64>,
    pub rp: Option<f64>,
    pub hep: Option<f64>,
    /// Location of the golden-section minimum of the slow decay rate;
    /// sits within `O(tau1)` of the resonance at strong dissipation.
    pub gamma_min_omega: Option<f64>,
    pub partial: bool,
}

/// Located features plus (after [`classify_zeno`]) the QZE/QAZE
/// segmentation tiling the swept range.
#[derive(Clone, Debug, Default)]
pub struct RegimeSegmentation {
    pub features: Vec<Feature>,
    pub segments: Vec<Segment>,
    pub blocks: Vec<PtbBlock>,
}

fn validate_sweep_bounds(gamma0: f64, tau1: f64, omega_range: (f64, f64)) -> Result<()> {
    let (lo, hi) = omega_range;
    if !(gamma0.is_finite() && gamma0 >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma0 = {gamma0} must be >= 0"
        )));
    }
    if !(tau1.is_finite() && tau1 > 0.0) {
        return Err(Error::InvalidArgument(format!("tau1 = {tau1} must be > 0")));
    }
    if !(lo.is_finite() && lo > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "omega_min = {lo} must be > 0"
        )));
    }
    if !(hi.is_finite() && hi > lo) {
        return Err(Error::InvalidArgument(format!(
            "omega_max = {hi} must exceed omega_min = {lo}"
        )));
    }
    if tau1 >= TAU / hi {
        return Err(Error::InvalidArgument(format!(
            "tau1 = {tau1} must be < 2*pi/omega_max = {} (pulse exceeds the period)",
            TAU / hi
        )));
    }
    Ok(())
}

/// Evaluate the Floquet spectrum on a uniform frequency grid
/// (`n_points` including both endpoints). Grid points are independent
/// and evaluated in parallel; the result is deterministic.
pub fn omega_sweep(
    sys: &SystemParams,
    gamma0: f64,
    tau1: f64,
    omega_range: (f64, f64),
    n_points: usize,
) -> Result<OmegaSweep> {
    validate_sweep_bounds(gamma0, tau1, omega_range)?;
    if n_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "n_points = {n_points} must be >= 2"
        )));
    }
    let (lo, hi) = omega_range;
    let step = (hi - lo) / (n_points - 1) as f64;
    let omegas: Vec<f64> = (0..n_points).map(|i| lo + i as f64 * step).collect();
    let spectra: Vec<FloquetSpectrum> = omegas
        .par_iter()
        .map(|&om| {
            let drive =
                DriveProtocol::from_omega(gamma0, tau1, om).expect("bounds validated above");
            floquet_spectrum(sys, &drive)
        })
        .collect();
    Ok(OmegaSweep {
        sys: *sys,
        gamma0,
        tau1,
        omegas,
        spectra,
    })
}

/// `mu` and phase labels over the full `(gamma0, omega)` grid; rows are
/// independent and computed in parallel.
pub fn phase_diagram(
    sys: &SystemParams,
    tau1: f64,
    gamma0_range: (f64, f64),
    omega_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<PhaseDiagram> {
    validate_sweep_bounds(gamma0_range.0.max(0.0), tau1, omega_range)?;
    let (glo, ghi) = gamma0_range;
    if !(glo.is_finite() && glo >= 0.0 && ghi > glo) {
        return Err(Error::InvalidArgument(format!(
            "gamma0 range ({glo}, {ghi}) must satisfy 0 <= min < max"
        )));
    }
    let (ng, nw) = resolution;
    if ng < 16 || nw < 16 {
        return Err(Error::InvalidArgument(format!(
            "resolution {ng}x{nw} must be at least 16 per axis"
        )));
    }
    let j0 = sys.j0();
    let gammas: Vec<f64> = (0..ng)
        .map(|i| glo + i as f64 * (ghi - glo) / (ng - 1) as f64)
        .collect();
    let (wlo, whi) = omega_range;
    let omegas: Vec<f64> = (0..nw)
        .map(|i| wlo + i as f64 * (whi - wlo) / (nw - 1) as f64)
        .collect();

    let rows: Vec<(Vec<f64>, Vec<Phase>)> = gammas
        .par_iter()
        .map(|&g0| {
            let mut mu_row = Vec::with_capacity(nw);
            let mut ph_row = Vec::with_capacity(nw);
            for &om in &omegas {
                let drive =
                    DriveProtocol::from_omega(g0, tau1, om).expect("bounds validated above");
                let f = floquet_spectrum(sys, &drive);
                mu_row.push(f.mu);
                ph_row.push(f.phase);
            }
            (mu_row, ph_row)
        })
        .collect();

    Ok(PhaseDiagram {
        gamma0_axis: gammas.iter().map(|g| g / j0).collect(),
        omega_axis: omegas.iter().map(|w| w / j0).collect(),
        mu_grid: rows.iter().map(|(m, _)| m.clone()).collect(),
        phase_grid: rows.into_iter().map(|(_, p)| p).collect(),
    })
}

/// Bisect the zero of `f` between `lo` and `hi` (`f` changes sign).
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> f64 {
    let f_lo_positive = f(lo) > 0.0;
    for _ in 0..max_iter {
        if hi - lo < tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == f_lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimum of `f` on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Locate exceptional points and resonances from a sweep.
///
/// Exceptional points come from bisecting the discriminant sign between
/// bracketing grid points; the resonance of each full block is the root
/// of `sin(J0 T) = 0` inside it, whose harmonic index is identified
/// from the golden-section minimum of the slow decay rate. A sweep with
/// no broken block yields an empty feature list.
pub fn locate_features(sweep: &OmegaSweep) -> RegimeSegmentation {
    let n = sweep.omegas.len();
    let j0 = sweep.sys.j0();
    let disc = |om: f64| -> f64 {
        let drive = DriveProtocol::from_omega(sweep.gamma0, sweep.tau1, om)
            .expect("omega inside validated sweep range");
        symmetry_discriminant(&sweep.sys, &drive).re
    };
    let slow = |om: f64| -> f64 {
        let drive = DriveProtocol::from_omega(sweep.gamma0, sweep.tau1, om)
            .expect("omega inside validated sweep range");
        floquet_spectrum(&sweep.sys, &drive).gamma_slow
    };

    let is_ptb: Vec<bool> = sweep.spectra.iter().map(|s| s.phase == Phase::Ptb).collect();
    let ep_tol = 1e-8 * j0;

    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if !is_ptb[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && is_ptb[i] {
            i += 1;
        }
        let end = i - 1;

        let lep = (start > 0)
            .then(|| bisect(&disc, sweep.omegas[start - 1], sweep.omegas[start], ep_tol, 60));
        let hep = (end + 1 < n)
            .then(|| bisect(&disc, sweep.omegas[end], sweep.omegas[end + 1], ep_tol, 60));
        let partial = lep.is_none() || hep.is_none();

        let mut gamma_min_omega = None;
        let mut rp = None;
        if let (Some(lep_v), Some(hep_v)) = (lep, hep) {
            let k_min = (start..=end)
                .min_by(|&a, &b| {
                    sweep.spectra[a]
                        .gamma_slow
                        .partial_cmp(&sweep.spectra[b].gamma_slow)
                        .unwrap()
                })
                .unwrap();
            let bracket_lo = if k_min > start {
                sweep.omegas[k_min - 1]
            } else {
                lep_v
            };
            let bracket_hi = if k_min < end {
                sweep.omegas[k_min + 1]
            } else {
                hep_v
            };
            let gm = golden_min(&slow, bracket_lo, bracket_hi, 1e-10 * j0);
            gamma_min_omega = Some(gm);

            // Resonance candidate omega_n = 2 J0 / n nearest the minimum;
            // refine sin(J0 T) = 0 by bisection so the value is computed,
            // not asserted.
            let harmonic = (2.0 * j0 / gm).round();
            rp = (harmonic >= 1.0)
                .then(|| 2.0 * j0 / harmonic)
                .filter(|c| *c > lep_v && *c < hep_v)
                .map(|c| {
                    let g = |om: f64| (TAU * j0 / om).sin();
                    let lo = (c * 0.999).max(lep_v);
                    let hi = (c * 1.001).min(hep_v);
                    if g(lo) * g(hi) < 0.0 {
                        bisect(g, lo, hi, 1e-12 * c, 100)
                    } else {
                        gm
                    }
                })
                .or(gamma_min_omega);
        }

        blocks.push(PtbBlock {
            lep,
            rp,
            hep,
            gamma_min_omega,
            partial,
        });
    }

    let mut features = Vec::new();
    for b in &blocks {
        if b.partial {
            continue;
        }
        if let (Some(lep), Some(rp), Some(hep)) = (b.lep, b.rp, b.hep) {
            features.push(Feature {
                kind: FeatureKind::Lep,
                omega: lep,
            });
            features.push(Feature {
                kind: FeatureKind::Rp,
                omega: rp,
            });
            features.push(Feature {
                kind: FeatureKind::Hep,
                omega: hep,
            });
        }
    }

    RegimeSegmentation {
        features,
        segments: Vec::new(),
        blocks,
    }
}

/// Expected label for a segment midpoint from the block geometry, when
/// the ordering applies.
fn expected_label(blocks: &[PtbBlock], mid: f64) -> Option<ZenoLabel> {
    for b in blocks {
        if b.partial {
            // inside a truncated block nothing is asserted
            let lo = b.lep.unwrap_or(f64::NEG_INFINITY);
            let hi = b.hep.unwrap_or(f64::INFINITY);
            if mid > lo && mid < hi {
                return None;
            }
            continue;
        }
        let (lep, rp, hep) = (b.lep.unwrap(), b.rp.unwrap(), b.hep.unwrap());
        if mid > lep && mid < rp {
            return Some(ZenoLabel::Qze);
        }
        if mid >= rp && mid < hep {
            return Some(ZenoLabel::Qaze);
        }
    }
    Some(ZenoLabel::Qaze) // symmetric stretches
}

/// Assign QZE/QAZE labels to the intervals between located features.
///
/// The sign of the finite-difference slope of the slow rate decides the
/// label; a sign only counts once it persists over three consecutive
/// grid points, which filters single-cell noise near cusps. Mixed
/// persistent signs, or a label violating the LEP - RP - HEP ordering,
/// attach a warning to the segment instead of being dropped.
pub fn classify_zeno(sweep: &OmegaSweep, features: &RegimeSegmentation) -> RegimeSegmentation {
    let omegas = &sweep.omegas;
    let n = omegas.len();
    let lo = omegas[0];
    let hi = omegas[n - 1];

    let mut bounds = vec![lo];
    for b in &features.blocks {
        for v in [b.lep, if b.partial { None } else { b.rp }, b.hep]
            .into_iter()
            .flatten()
        {
            if v > lo && v < hi {
                bounds.push(v);
            }
        }
    }
    bounds.push(hi);
    bounds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bounds.dedup();

    // centered-difference slope of the slow rate at each interior grid point
    let slope: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 {
                f64::NAN
            } else {
                (sweep.spectra[i + 1].gamma_slow - sweep.spectra[i - 1].gamma_slow)
                    / (omegas[i + 1] - omegas[i - 1])
            }
        })
        .collect();

    let mut segments = Vec::new();
    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        let idx: Vec<usize> = (1..n - 1)
            .filter(|&i| omegas[i] > a && omegas[i] < b)
            .collect();

        // persistent-sign counts (3-point noise guard)
        let mut neg = 0usize;
        let mut pos = 0usize;
        let mut run_sign = 0i8;
        let mut run_len = 0usize;
        let flush = |sign: i8, len: usize, neg: &mut usize, pos: &mut usize| {
            if len >= 3 {
                if sign < 0 {
                    *neg += len;
                } else if sign > 0 {
                    *pos += len;
                }
            }
        };
        for &i in &idx {
            let s = if slope[i] < 0.0 { -1 } else { 1 };
            if s == run_sign {
                run_len += 1;
            } else {
                flush(run_sign, run_len, &mut neg, &mut pos);
                run_sign = s;
                run_len = 1;
            }
        }
        flush(run_sign, run_len, &mut neg, &mut pos);

        let label = if neg + pos == 0 {
            // too few grid points: fall back to the endpoint trend
            let drive_a = DriveProtocol::from_omega(sweep.gamma0, sweep.tau1, a.max(lo))
                .expect("validated range");
            let drive_b = DriveProtocol::from_omega(sweep.gamma0, sweep.tau1, b.min(hi))
                .expect("validated range");
            let ga = floquet_spectrum(&sweep.sys, &drive_a).gamma_slow;
            let gb = floquet_spectrum(&sweep.sys, &drive_b).gamma_slow;
            if gb < ga {
                ZenoLabel::Qze
            } else {
                ZenoLabel::Qaze
            }
        } else if neg > pos {
            ZenoLabel::Qze
        } else {
            ZenoLabel::Qaze
        };

        let mut warning = None;
        if neg > 0 && pos > 0 {
            warning = Some(format!(
                "slope of gamma_slow changes sign inside ({a:.6}, {b:.6}): \
                 {neg} falling vs {pos} rising grid points"
            ));
        }
        if let Some(expect) = expected_label(&features.blocks, 0.5 * (a + b)) {
            if expect != label {
                let note = format!(
                    "label {} disagrees with the LEP-RP-HEP ordering (expected {})",
                    label.as_str(),
                    expect.as_str()
                );
                warning = Some(match warning {
                    Some(prev) => format!("{prev}; {note}"),
                    None => note,
                });
            }
        }

        segments.push(Segment {
            omega_lo: a,
            omega_hi: b,
            label,
            warning,
        });
    }

    RegimeSegmentation {
        features: features.features.clone(),
        segments,
        blocks: features.blocks.clone(),
    }
}
