use num_complex::Complex64;
use thiserror::Error;

use crate::solver::NormalityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid arc [{alpha}, {beta}]: {reason}")]
    InvalidArc { alpha: f64, beta: f64, reason: &'static str },

    #[error("arc [{alpha}, {beta}] crosses the branch cut at t0 = {t0}")]
    ArcCrossesBranchCut { alpha: f64, beta: f64, t0: f64 },

    #[error("arcs {first} and {second} have intersecting interiors")]
    OverlappingArcs { first: usize, second: usize },

    #[error("component {component} carries a point mass at the branch point e^(i t0) (theta = {theta})")]
    ForbiddenPointMass { component: usize, theta: f64 },

    #[error("point mass at theta = {theta} on component {component} is not on its arc")]
    MassOutsideArc { component: usize, theta: f64 },

    #[error("point mass {mass} at theta = {theta} must be positive and finite")]
    InvalidPointMass { theta: f64, mass: f64 },

    #[error("weight of component {component} is negative ({value}) at theta = {theta}")]
    NegativeWeight { component: usize, theta: f64, value: f64 },

    #[error("invalid weight parameters: {0}")]
    InvalidWeight(String),

    #[error("Christoffel point z0 = {z0} must satisfy 0 != |z0| != 1")]
    InvalidModifierPoint { z0: Complex64 },

    #[error("system needs {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },

    #[error("multi-index has {got} entries but the system has {expected} components")]
    IndexLength { expected: usize, got: usize },

    #[error("component index {index} out of range for a system with {r} components")]
    ComponentOutOfRange { index: usize, r: usize },

    #[error("the Chebyshev function set for |n| = 0 is empty")]
    EmptyFunctionSet,

    #[error("operation requires an AT system")]
    NotAtSystem,

    #[error("operation requires an Angelesco or AT system")]
    UntaggedSystem,

    #[error("cannot evaluate a half-integer power at z = 0")]
    ZeroArgument,

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("moment matrix for the zero index is empty (det T_0 = 1 by convention)")]
    EmptyIndex,

    #[error("index {what} is not normal: sigma ratio {:.3e}", report.ratio)]
    NonNormal { what: String, report: NormalityReport },

    #[error("tau = {tau} is not unimodular")]
    NonUnimodularTau { tau: Complex64 },

    #[error("polynomial is not tau-invariant (defect {defect:.3e})")]
    NotTauInvariant { defect: f64 },

    #[error("leading coefficient {lead:.3e} is too small for root finding")]
    DegenerateLeading { lead: f64 },

    #[error("root {root} lies on the unit circle; phase is undefined")]
    RootOnCircle { root: Complex64 },

    #[error("{theorem} violated: {evidence}")]
    TheoremViolated { theorem: String, evidence: String },

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("invalid system description: {0}")]
    ConfigParse(String),
}
