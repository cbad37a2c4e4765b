//! Systems of measures on the unit circle.
//!
//! Each component is an absolutely continuous part `scale · w(θ) dθ` on a
//! closed arc plus finitely many point masses. Angles are stored in the branch
//! window `[t0, t0 + 2π)`; arc endpoints may reach `t0 + 2π`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{Branch, MultiIndex};
use crate::moments::MomentCache;
use crate::quadrature;

/// Absolute tolerance for comparing angles at arc endpoints.
pub const ANGLE_TOL: f64 = 1e-14;

/// Grid size used when checking a weight for negative values.
const SIGN_CHECK_POINTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub alpha: f64,
    pub beta: f64,
}

impl Arc {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidArc { alpha, beta, reason: "endpoints must be finite" });
        }
        if alpha >= beta {
            return Err(Error::InvalidArc { alpha, beta, reason: "alpha must be below beta" });
        }
        if beta - alpha > TAU + ANGLE_TOL {
            return Err(Error::InvalidArc { alpha, beta, reason: "arc longer than 2π" });
        }
        Ok(Arc { alpha, beta })
    }

    pub fn full(t0: f64) -> Self {
        Arc { alpha: t0, beta: t0 + TAU }
    }

    pub fn length(&self) -> f64 {
        self.beta - self.alpha
    }

    /// Open interior test for an angle already placed in the branch window.
    pub fn contains_open(&self, theta: f64) -> bool {
        self.alpha < theta && theta < self.beta
    }

    pub fn contains_closed(&self, theta: f64) -> bool {
        self.alpha - ANGLE_TOL <= theta && theta <= self.beta + ANGLE_TOL
    }

    /// Rotates the arc by a multiple of 2π so it starts in `[t0, t0 + 2π)`.
    pub fn normalized(&self, t0: f64) -> Result<Arc> {
        let mut offset = (self.alpha - t0).rem_euclid(TAU);
        if offset >= TAU - ANGLE_TOL {
            offset = 0.0;
        }
        let alpha = t0 + offset;
        let beta = self.beta + (alpha - self.alpha);
        if beta > t0 + TAU + ANGLE_TOL {
            return Err(Error::ArcCrossesBranchCut { alpha: self.alpha, beta: self.beta, t0 });
        }
        Ok(Arc { alpha, beta: beta.min(t0 + TAU) })
    }
}

/// Weight function on an arc. The Christoffel variants wrap a base weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    Uniform,
    /// `x^gamma (1 - x)^delta` with `x = (θ - alpha)/(beta - alpha)`.
    Jacobi { gamma: f64, delta: f64 },
    /// `exp(lambda (θ - alpha))`.
    Exponential { lambda: f64 },
    /// `(1 - |a|²) / |1 - a e^{iθ}|²`.
    BernsteinSzego {
        #[serde(with = "crate::serde_complex")]
        a: Complex64,
    },
    /// `|e^{iθ} - z0|² · base`.
    ChristoffelPoint {
        #[serde(with = "crate::serde_complex")]
        z0: Complex64,
        base: Box<Weight>,
    },
    /// `4 sin²((θ - varphi)/2) · base`.
    ChristoffelSin2 { varphi: f64, base: Box<Weight> },
    /// `4 sin((θ - varphi1)/2) sin((θ - varphi2)/2) · base`; may change sign.
    ChristoffelSinprod { varphi1: f64, varphi2: f64, base: Box<Weight> },
}

impl Weight {
    pub fn validate(&self) -> Result<()> {
        match self {
            Weight::Uniform => Ok(()),
            Weight::Jacobi { gamma, delta } => {
                if *gamma >= 0.0 && *delta >= 0.0 && gamma.is_finite() && delta.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidWeight(format!(
                        "jacobi exponents must be finite and >= 0 (gamma = {gamma}, delta = {delta})"
                    )))
                }
            }
            Weight::Exponential { lambda } if lambda.is_finite() => Ok(()),
            Weight::Exponential { lambda } => {
                Err(Error::InvalidWeight(format!("exponential rate {lambda} is not finite")))
            }
            Weight::BernsteinSzego { a } => {
                if a.norm() < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidWeight(format!("Bernstein–Szegő parameter |{a}| >= 1")))
                }
            }
            Weight::ChristoffelPoint { z0, base } => {
                Modifier::Point { z0: *z0 }.validate()?;
                base.validate()
            }
            Weight::ChristoffelSin2 { base, .. } | Weight::ChristoffelSinprod { base, .. } => {
                base.validate()
            }
        }
    }

    pub fn eval(&self, theta: f64, arc: &Arc) -> f64 {
        match self {
            Weight::Uniform => 1.0,
            Weight::Jacobi { gamma, delta } => {
                let x = ((theta - arc.alpha) / arc.length()).clamp(0.0, 1.0);
                x.powf(*gamma) * (1.0 - x).powf(*delta)
            }
            Weight::Exponential { lambda } => (lambda * (theta - arc.alpha)).exp(),
            Weight::BernsteinSzego { a } => {
                let d = Complex64::new(1.0, 0.0) - a * Complex64::from_polar(1.0, theta);
                (1.0 - a.norm_sqr()) / d.norm_sqr()
            }
            Weight::ChristoffelPoint { z0, base } => {
                Modifier::Point { z0: *z0 }.eval(theta) * base.eval(theta, arc)
            }
            Weight::ChristoffelSin2 { varphi, base } => {
                Modifier::Sin2 { varphi: *varphi }.eval(theta) * base.eval(theta, arc)
            }
            Weight::ChristoffelSinprod { varphi1, varphi2, base } => {
                Modifier::SinProd { varphi1: *varphi1, varphi2: *varphi2 }.eval(theta)
                    * base.eval(theta, arc)
            }
        }
    }

    /// True for Jacobi factors with a non-integer exponent, whose endpoint
    /// behaviour defeats uniform Gauss–Legendre panels.
    pub fn has_endpoint_singularity(&self) -> bool {
        match self {
            Weight::Jacobi { gamma, delta } => gamma.fract() != 0.0 || delta.fract() != 0.0,
            Weight::ChristoffelPoint { base, .. }
            | Weight::ChristoffelSin2 { base, .. }
            | Weight::ChristoffelSinprod { base, .. } => base.has_endpoint_singularity(),
            _ => false,
        }
    }

    /// True unless the weight (or something it wraps) is a sin-product factor.
    pub fn is_sign_definite(&self) -> bool {
        match self {
            Weight::ChristoffelSinprod { .. } => false,
            Weight::ChristoffelPoint { base, .. } | Weight::ChristoffelSin2 { base, .. } => {
                base.is_sign_definite()
            }
            _ => true,
        }
    }
}

/// Christoffel-type factor applied to every component of a system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Modifier {
    /// `|e^{iθ} - z0|²`, `0 != |z0| != 1`.
    Point {
        #[serde(with = "crate::serde_complex")]
        z0: Complex64,
    },
    /// `4 sin²((θ - varphi)/2)`.
    Sin2 { varphi: f64 },
    /// `4 sin((θ - varphi1)/2) sin((θ - varphi2)/2)`.
    SinProd { varphi1: f64, varphi2: f64 },
}

impl Modifier {
    pub fn validate(&self) -> Result<()> {
        if let Modifier::Point { z0 } = self {
            let r = z0.norm();
            if !r.is_finite() || r <= ANGLE_TOL || (r - 1.0).abs() <= ANGLE_TOL {
                return Err(Error::InvalidModifierPoint { z0: *z0 });
            }
        }
        Ok(())
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match *self {
            Modifier::Point { z0 } => (Complex64::from_polar(1.0, theta) - z0).norm_sqr(),
            Modifier::Sin2 { varphi } => 4.0 * ((theta - varphi) / 2.0).sin().powi(2),
            Modifier::SinProd { varphi1, varphi2 } => {
                4.0 * ((theta - varphi1) / 2.0).sin() * ((theta - varphi2) / 2.0).sin()
            }
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        !matches!(self, Modifier::SinProd { .. })
    }

    pub fn wrap(&self, base: Weight) -> Weight {
        let base = Box::new(base);
        match *self {
            Modifier::Point { z0 } => Weight::ChristoffelPoint { z0, base },
            Modifier::Sin2 { varphi } => Weight::ChristoffelSin2 { varphi, base },
            Modifier::SinProd { varphi1, varphi2 } => {
                Weight::ChristoffelSinprod { varphi1, varphi2, base }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMass {
    pub theta: f64,
    pub mass: f64,
}

impl PointMass {
    pub fn new(theta: f64, mass: f64) -> Result<Self> {
        if !(theta.is_finite() && mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidPointMass { theta, mass });
        }
        Ok(PointMass { theta, mass })
    }
}

/// One measure `μ_j = scale · w(θ) dθ|_arc + Σ mass_k δ_{θ_k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub arc: Arc,
    pub weight: Weight,
    pub masses: Vec<PointMass>,
    pub scale: f64,
}

impl Component {
    pub fn density(&self, theta: f64) -> f64 {
        self.scale * self.weight.eval(theta, &self.arc)
    }

    /// `∫ f dμ_j` with panels sized for integrands oscillating at `abs_freq`.
    pub fn integrate<F>(&self, abs_freq: f64, panel_factor: usize, f: F) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        let panels = quadrature::panel_count(self.arc.length(), abs_freq) * panel_factor.max(1);
        let g = |t| f(t) * self.density(t);
        let ac = if self.weight.has_endpoint_singularity() {
            quadrature::integrate_graded(self.arc.alpha, self.arc.beta, panels, g)
        } else {
            quadrature::integrate(self.arc.alpha, self.arc.beta, panels, g)
        };
        self.masses.iter().fold(ac, |acc, m| acc + f(m.theta) * m.mass)
    }

    pub fn total_mass(&self) -> f64 {
        self.integrate(0.0, 1, |_| Complex64::new(1.0, 0.0)).re
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemTag {
    Angelesco,
    At,
    None,
}

/// A system `(μ_1, ..., μ_r)` with its branch origin `t0`.
///
/// Values are immutable after construction; the moment cache is interior
/// and shared safely between readers.
#[derive(Debug, Clone)]
pub struct MeasureSystem {
    t0: f64,
    tag: SystemTag,
    components: Vec<Component>,
    pub(crate) cache: MomentCache,
}

impl MeasureSystem {
    /// Untagged system from raw components. Arcs and masses are normalized
    /// into the branch window and validated.
    pub fn new(t0: f64, components: Vec<Component>) -> Result<Self> {
        Self::tagged(t0, SystemTag::None, components)
    }

    pub(crate) fn tagged(t0: f64, tag: SystemTag, components: Vec<Component>) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::ConfigParse(format!("t0 = {t0} is not finite")));
        }
        if components.is_empty() {
            return Err(Error::ComponentCount { expected: 1, got: 0 });
        }
        let branch = Branch::new(t0);
        let mut out = Vec::with_capacity(components.len());
        for (j, mut c) in components.into_iter().enumerate() {
            c.arc = Arc::new(c.arc.alpha, c.arc.beta)?.normalized(t0)?;
            c.weight.validate()?;
            if !(c.scale.is_finite() && c.scale > 0.0) {
                return Err(Error::InvalidWeight(format!("component {j} has scale {}", c.scale)));
            }
            for m in &mut c.masses {
                if !m.theta.is_finite() || !m.mass.is_finite() || m.mass == 0.0 {
                    return Err(Error::InvalidPointMass { theta: m.theta, mass: m.mass });
                }
                m.theta = snap_to_window(branch, m.theta, &c.arc);
            }
            check_sign(j, &c)?;
            out.push(c);
        }
        Ok(MeasureSystem { t0, tag, components: out, cache: MomentCache::default() })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn branch(&self) -> Branch {
        Branch::new(self.t0)
    }

    pub fn tag(&self) -> SystemTag {
        self.tag
    }

    pub fn r(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, j: usize) -> Result<&Component> {
        self.components
            .get(j)
            .ok_or(Error::ComponentOutOfRange { index: j, r: self.r() })
    }

    pub fn arcs(&self) -> Vec<Arc> {
        self.components.iter().map(|c| c.arc).collect()
    }

    pub fn check_index(&self, n: &MultiIndex) -> Result<()> {
        if n.r() != self.r() {
            return Err(Error::IndexLength { expected: self.r(), got: n.r() });
        }
        Ok(())
    }

    /// Rescales every component to unit total mass.
    pub fn normalized(&self) -> Result<Self> {
        let mut components = self.components.clone();
        for (j, c) in components.iter_mut().enumerate() {
            let total = c.total_mass();
            if !(total.is_finite() && total > 0.0) {
                return Err(Error::InvalidWeight(format!(
                    "component {j} has non-positive total mass {total}"
                )));
            }
            c.scale /= total;
            for m in &mut c.masses {
                m.mass /= total;
            }
        }
        Ok(MeasureSystem {
            t0: self.t0,
            tag: self.tag,
            components,
            cache: MomentCache::default(),
        })
    }
}

/// Places a point-mass angle in the window, preferring the arc's own
/// representative when it sits on the `t0 + 2π` endpoint.
fn snap_to_window(branch: Branch, theta: f64, arc: &Arc) -> f64 {
    let t = branch.normalize(theta);
    if !arc.contains_closed(t) && arc.contains_closed(t + TAU) {
        t + TAU
    } else {
        t
    }
}

fn check_sign(j: usize, c: &Component) -> Result<()> {
    let sign_definite = c.weight.is_sign_definite();
    for i in 0..=SIGN_CHECK_POINTS {
        let theta = c.arc.alpha + c.arc.length() * i as f64 / SIGN_CHECK_POINTS as f64;
        let v = c.weight.eval(theta, &c.arc);
        if !v.is_finite() || (sign_definite && v < 0.0) {
            return Err(Error::NegativeWeight { component: j, theta, value: v });
        }
    }
    if sign_definite {
        if let Some(m) = c.masses.iter().find(|m| m.mass < 0.0) {
            return Err(Error::InvalidPointMass { theta: m.theta, mass: m.mass });
        }
    }
    Ok(())
}

/// Angelesco system: pairwise interior-disjoint arcs, reordered so that they
/// appear in increasing angle from `t0`. The last component may not carry a
/// point mass at `e^{i t0}`.
pub fn make_angelesco_system(
    arcs: &[Arc],
    weights: &[Weight],
    masses: &[Vec<PointMass>],
    t0: f64,
) -> Result<MeasureSystem> {
    let r = arcs.len();
    if weights.len() != r {
        return Err(Error::ComponentCount { expected: r, got: weights.len() });
    }
    if !masses.is_empty() && masses.len() != r {
        return Err(Error::ComponentCount { expected: r, got: masses.len() });
    }
    let branch = Branch::new(t0);
    let mut parts = Vec::with_capacity(r);
    for j in 0..r {
        let arc = Arc::new(arcs[j].alpha, arcs[j].beta)?.normalized(t0)?;
        let ms = masses.get(j).cloned().unwrap_or_default();
        parts.push((j, arc, weights[j].clone(), ms));
    }
    parts.sort_by(|a, b| a.1.alpha.total_cmp(&b.1.alpha));
    for w in parts.windows(2) {
        if w[0].1.beta > w[1].1.alpha + ANGLE_TOL {
            return Err(Error::OverlappingArcs { first: w[0].0, second: w[1].0 });
        }
    }
    let (last_j, _, _, last_masses) = parts.last().unwrap();
    for m in last_masses {
        let t = branch.normalize(m.theta);
        if (t - t0).abs() <= ANGLE_TOL || (t0 + TAU - t).abs() <= ANGLE_TOL {
            return Err(Error::ForbiddenPointMass { component: *last_j, theta: m.theta });
        }
    }
    let mut components = Vec::with_capacity(r);
    for (j, arc, weight, ms) in parts {
        for m in &ms {
            PointMass::new(m.theta, m.mass)?;
            if !arc.contains_closed(snap_to_window(branch, m.theta, &arc)) {
                return Err(Error::MassOutsideArc { component: j, theta: m.theta });
            }
        }
        components.push(Component { arc, weight, masses: ms, scale: 1.0 });
    }
    MeasureSystem::tagged(t0, SystemTag::Angelesco, components)
}

/// AT system `dμ_j = w_j dμ` on a common arc with `t0 = alpha`. Base point
/// masses are shared; their mass on component `j` is scaled by `w_j`.
pub fn make_at_system(
    arc: Arc,
    weights: &[Weight],
    base_masses: &[PointMass],
) -> Result<MeasureSystem> {
    let arc = Arc::new(arc.alpha, arc.beta)?;
    let t0 = arc.alpha;
    for m in base_masses {
        PointMass::new(m.theta, m.mass)?;
        let t = snap_to_window(Branch::new(t0), m.theta, &arc);
        if !arc.contains_closed(t) {
            return Err(Error::MassOutsideArc { component: 0, theta: m.theta });
        }
    }
    let mut components = Vec::with_capacity(weights.len());
    for (j, w) in weights.iter().enumerate() {
        w.validate()?;
        let masses = base_masses
            .iter()
            .map(|m| {
                let t = snap_to_window(Branch::new(t0), m.theta, &arc);
                let v = w.eval(t, &arc);
                if !(v > 0.0) {
                    return Err(Error::NegativeWeight { component: j, theta: t, value: v });
                }
                Ok(PointMass { theta: t, mass: m.mass * v })
            })
            .collect::<Result<Vec<_>>>()?;
        components.push(Component { arc, weight: w.clone(), masses, scale: 1.0 });
    }
    MeasureSystem::tagged(t0, SystemTag::At, components)
}

/// Applies a Christoffel-type modifier to every component.
pub fn modify_system(system: &MeasureSystem, modifier: Modifier) -> Result<MeasureSystem> {
    modifier.validate()?;
    let components = system
        .components
        .iter()
        .map(|c| Component {
            arc: c.arc,
            weight: modifier.wrap(c.weight.clone()),
            masses: c
                .masses
                .iter()
                .map(|m| PointMass { theta: m.theta, mass: m.mass * modifier.eval(m.theta) })
                .filter(|m| m.mass != 0.0)
                .collect(),
            scale: c.scale,
        })
        .collect();
    let tag = if modifier.is_nonnegative() { system.tag } else { SystemTag::None };
    MeasureSystem::tagged(system.t0, tag, components)
}

/// Outcome of the randomized Chebyshev-determinant test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub n: MultiIndex,
    pub trials: usize,
    pub min_abs_det: f64,
    pub max_abs_det: f64,
    pub positive: usize,
    pub negative: usize,
    pub signs_agree: bool,
}

/// The function set `Trig_n(μ) = ∪_j Trig_{n_j}(w_j)` evaluated at `theta`.
pub fn trig_functions(system: &MeasureSystem, n: &MultiIndex, theta: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n.total());
    for (c, &m) in system.components.iter().zip(n.entries()) {
        if m == 0 {
            continue;
        }
        let w = c.density(theta);
        if m % 2 == 0 {
            for k in 1..=m / 2 {
                let f = (2 * k - 1) as f64 / 2.0 * theta;
                out.push(w * f.cos());
                out.push(w * f.sin());
            }
        } else {
            out.push(w);
            for k in 1..=(m - 1) / 2 {
                let f = k as f64 * theta;
                out.push(w * f.cos());
                out.push(w * f.sin());
            }
        }
    }
    out
}

/// Samples `trials` ordered tuples in the open arc and records the sign of
/// the generalized Vandermonde determinant. A falsifier only: agreement on
/// samples is evidence, not proof, of the Chebyshev property.
pub fn chebyshev_check(
    system: &MeasureSystem,
    n: &MultiIndex,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    system.check_index(n)?;
    if system.tag != SystemTag::At {
        return Err(Error::NotAtSystem);
    }
    let size = n.total();
    if size == 0 {
        return Err(Error::EmptyFunctionSet);
    }
    let arc = system.components[0].arc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport {
        n: n.clone(),
        trials,
        min_abs_det: f64::INFINITY,
        max_abs_det: 0.0,
        positive: 0,
        negative: 0,
        signs_agree: true,
    };
    for _ in 0..trials {
        let mut xs: Vec<f64> = (0..size)
            .map(|_| {
                let u: f64 = rng.gen_range(f64::EPSILON..1.0);
                arc.alpha + u * arc.length()
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        let mut w = DMatrix::<f64>::zeros(size, size);
        for (col, &x) in xs.iter().enumerate() {
            for (row, v) in trig_functions(system, n, x).into_iter().enumerate() {
                w[(row, col)] = v;
            }
        }
        let det = w.determinant();
        report.min_abs_det = report.min_abs_det.min(det.abs());
        report.max_abs_det = report.max_abs_det.max(det.abs());
        if det > 0.0 {
            report.positive += 1;
        } else if det < 0.0 {
            report.negative += 1;
        }
    }
    report.signs_agree = (report.positive == trials) || (report.negative == trials);
    Ok(report)
}
