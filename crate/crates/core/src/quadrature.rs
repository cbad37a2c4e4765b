//! Composite Gauss–Legendre quadrature on angular intervals.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Nodes per panel.
pub const NODES_PER_PANEL: usize = 32;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Tricomi initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// The shared 32-point rule.
    pub fn standard() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(NODES_PER_PANEL))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Number of panels so that no panel is longer than `π / (4(|freq| + 1))`.
pub fn panel_count(length: f64, abs_freq: f64) -> usize {
    let max_len = PI / (4.0 * (abs_freq + 1.0));
    ((length / max_len).ceil() as usize).max(1)
}

/// `∫_a^b f(θ) dθ` with `panels` equal panels of the 32-point rule.
pub fn integrate<F>(a: f64, b: f64, panels: usize, f: F) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let rule = GaussLegendre::standard();
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            acc += f(mid + 0.5 * h * x) * *w;
        }
        total += acc * (0.5 * h);
    }
    total
}

/// Levels of geometric refinement toward each endpoint.
pub const GRADING_LEVELS: usize = 16;
const GRADING_RATIO: f64 = 0.15;

/// Like [`integrate`], but the end panels are split geometrically toward
/// `a` and `b` so that algebraic endpoint singularities are resolved.
pub fn integrate_graded<F>(a: f64, b: f64, panels: usize, f: F) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let panels = panels.max(2);
    let h = (b - a) / panels as f64;
    let interior = if panels > 2 {
        integrate(a + h, b - h, panels - 2, &f)
    } else {
        Complex64::new(0.0, 0.0)
    };
    interior + graded_toward(a, a + h, &f, false) + graded_toward(b - h, b, &f, true)
}

/// Geometric subdivision of `[lo, hi]` clustering at `hi` if `at_hi`, else at `lo`.
fn graded_toward<F>(lo: f64, hi: f64, f: &F, at_hi: bool) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let len = hi - lo;
    let mut total = Complex64::new(0.0, 0.0);
    let mut outer = 1.0;
    for _ in 0..GRADING_LEVELS {
        let inner = outer * GRADING_RATIO;
        let (x0, x1) = if at_hi {
            (hi - outer * len, hi - inner * len)
        } else {
            (lo + inner * len, lo + outer * len)
        };
        total += integrate(x0, x1, 1, f);
        outer = inner;
    }
    let (x0, x1) = if at_hi { (hi - outer * len, hi) } else { (lo, lo + outer * len) };
    total + integrate(x0, x1, 1, f)
}
