//! Multiple orthogonal polynomials on the unit circle.
//!
//! The crate builds measure systems on arcs of the unit circle, computes
//! their half-integer trigonometric moments, solves for the Laurent multiple
//! orthogonal polynomials `φ_n` and the Hermite–Padé polynomials `Φ_{n,m}`,
//! constructs paraorthogonal polynomials and checks where their zeros lie.

pub mod config;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod measure;
pub mod moments;
pub mod para;
pub mod presets;
pub mod quadrature;
mod serde_complex;
pub mod solver;
pub mod zeros;

pub use config::SystemDescription;
pub use error::{Error, Result};
pub use laurent::{Branch, HalfLaurentPoly, MultiIndex, OrdinaryPoly};
pub use measure::{
    make_angelesco_system, make_at_system, modify_system, Arc, Component, MeasureSystem,
    Modifier, PointMass, SystemTag, Weight,
};
pub use moments::{build_hp, build_hp_star, build_t, MomentMatrix};
pub use para::{build_para, para_residuals, trig_form, ParaPoly, TrigTerm};
pub use solver::{
    normality_scan, solve_hp, solve_hp_star, solve_phi, solve_phi_sharp, NormalityReport,
    ScanMode, ScanRow, SolveResult, Verdict,
};
pub use zeros::{
    counterexample_scan, phase, roots, verify_para_theorems, verify_thm5_1, verify_thm5_2,
    zero_report, PhaseReport, Tolerances, ZeroReport,
};
