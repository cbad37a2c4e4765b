//! Zeros of `z^{|n|/2} φ_n` and of paraorthogonal polynomials, the Blaschke
//! phase, and verifiers for the zero-location theorems.

mod phase;
mod report;
mod roots;
mod verify;

use serde::{Deserialize, Serialize};

pub use phase::{phase, phase_with_offset, PhaseReport, DEFAULT_GRID, ON_CIRCLE_EPS, WINDING_TOL};
pub use report::{classify, clusters, zero_report, zero_report_from, RootClass, RootCluster, RootInfo, ZeroReport};
pub use roots::{roots, MIN_LEADING};
pub use verify::{
    counterexample_scan, factorization_error, verify_para_theorems, verify_thm5_1, verify_thm5_2,
    CounterexampleReport, CounterexampleRow, ParaVerdict, Thm51Verdict, Thm52Verdict,
};

/// Numerical stand-ins for the exact statements being checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `||z| − 1|` below this counts as on the circle.
    pub tol_circle: f64,
    /// Required distance `1 − |z|` for roots counted strictly inside.
    pub disk_margin: f64,
    /// Smallest accepted pairwise distance between on-circle roots.
    pub min_gap: f64,
    /// Roots closer than this are merged into one cluster.
    pub cluster_radius: f64,
    /// Relative error allowed when rebuilding a polynomial from its roots.
    pub factorization: f64,
    /// Phase sampling grid.
    pub grid: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_circle: 1e-8,
            disk_margin: 1e-6,
            min_gap: 1e-6,
            cluster_radius: 1e-7,
            factorization: 1e-8,
            grid: DEFAULT_GRID,
        }
    }
}
