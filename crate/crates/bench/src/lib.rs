//! Benchmark-only crate; see `benches/` for the criterion targets and
//! re-exported fixtures below.

use ptzeno::{DriveProtocol, SystemParams};

/// Strong-dissipation working point used across the benchmarks.
pub fn fig2_point() -> (SystemParams, DriveProtocol) {
    let sys = SystemParams::new(1.0).expect("valid coupling");
    let drive = DriveProtocol::from_omega(200.0, 0.01, 2.0).expect("valid drive");
    (sys, drive)
}
