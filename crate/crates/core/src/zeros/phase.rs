//! Continuous phase of the Blaschke product built from a root set.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GRID: usize = 4096;
/// Roots closer than this to the unit circle make the phase undefined.
pub const ON_CIRCLE_EPS: f64 = 1e-12;
/// Accepted distance of the raw winding from an integer.
pub const WINDING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub theta_grid: Vec<f64>,
    pub psi: Vec<f64>,
    /// `(Ψ(π−) − Ψ(−π)) / 2π`, rounded.
    pub winding: i64,
    /// Distance of the unrounded winding from `winding`.
    pub winding_defect: f64,
    /// Strict monotonicity of the sampled `Ψ`, in either direction.
    pub monotone: bool,
    pub increasing: bool,
    pub min_abs_derivative: f64,
}

/// `Ψ(θ) = θ + 2 Σ (−θ/2 + Arg(e^{iθ} − z_j))` on `grid_size` points of `[−π, π)`.
pub fn phase(roots: &[Complex64], grid_size: usize) -> Result<PhaseReport> {
    phase_with_offset(roots, grid_size, 1)
}

/// Same as [`phase`] with `offset · θ` in place of the leading `θ`; offset 0
/// gives the phase of `P / P*`.
pub fn phase_with_offset(roots: &[Complex64], grid_size: usize, offset: i64) -> Result<PhaseReport> {
    if let Some(z) = roots.iter().find(|z| (z.norm() - 1.0).abs() < ON_CIRCLE_EPS) {
        return Err(Error::RootOnCircle { root: *z });
    }
    let n = grid_size.max(2);
    let h = TAU / n as f64;
    let theta_grid: Vec<f64> = (0..n).map(|k| -PI + h * k as f64).collect();
    let mut psi = Vec::with_capacity(n);
    let mut current = offset as f64 * -PI
        + roots
            .iter()
            .map(|z| PI + 2.0 * (Complex64::from_polar(1.0, -PI) - z).arg())
            .sum::<f64>();
    psi.push(current);
    let mut diffs = Vec::with_capacity(n);
    for k in 0..n {
        let a = theta_grid[k];
        let b = if k + 1 < n { theta_grid[k + 1] } else { PI };
        let step = offset as f64 * (b - a)
            + roots.iter().map(|z| -(b - a) + 2.0 * arg_increment(*z, a, b, 0)).sum::<f64>();
        diffs.push(step / (b - a));
        current += step;
        if k + 1 < n {
            psi.push(current);
        }
    }
    let raw = (current - psi[0]) / TAU;
    let winding = raw.round() as i64;
    let increasing = diffs.iter().all(|d| *d > 0.0);
    let decreasing = diffs.iter().all(|d| *d < 0.0);
    Ok(PhaseReport {
        theta_grid,
        psi,
        winding,
        winding_defect: (raw - winding as f64).abs(),
        monotone: increasing || decreasing,
        increasing,
        min_abs_derivative: diffs.iter().map(|d| d.abs()).fold(f64::INFINITY, f64::min),
    })
}

/// Change of `Arg(e^{iθ} − z)` from `a` to `b`, bisecting while a single
/// step could be ambiguous.
fn arg_increment(z: Complex64, a: f64, b: f64, depth: u32) -> f64 {
    let d = ((Complex64::from_polar(1.0, b) - z) / (Complex64::from_polar(1.0, a) - z)).arg();
    if d.abs() < PI / 4.0 || depth >= 60 {
        return d;
    }
    let m = 0.5 * (a + b);
    arg_increment(z, a, m, depth + 1) + arg_increment(z, m, b, depth + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_roots_give_identity_phase() {
        let p = phase(&[], 64).unwrap();
        assert_eq!(p.winding, 1);
        assert!(p.monotone && p.increasing);
        for (t, v) in p.theta_grid.iter().zip(&p.psi) {
            assert!((t - v).abs() < 1e-14);
        }
    }

    #[test]
    fn single_roots() {
        assert_eq!(phase(&[c(0.5, 0.0)], DEFAULT_GRID).unwrap().winding, 2);
        assert_eq!(phase(&[c(2.0, 0.0)], DEFAULT_GRID).unwrap().winding, 0);
        assert!(matches!(phase(&[c(0.0, 1.0)], 16), Err(Error::RootOnCircle { .. })));
    }

    #[test]
    fn near_circle_roots_are_resolved() {
        // far below the grid spacing from the circle
        let inside = Complex64::from_polar(1.0 - 1e-9, 0.123);
        let outside = Complex64::from_polar(1.0 + 1e-9, -2.0);
        let p = phase(&[inside, outside], 256).unwrap();
        assert_eq!(p.winding, 1 + 1 - 1);
        assert!(p.winding_defect < 1e-9);
    }

    #[test]
    fn offset_zero_phase() {
        let p = phase_with_offset(&[c(0.2, 0.1), c(-0.4, 0.0), c(0.0, 0.5)], 512, 0).unwrap();
        assert_eq!(p.winding, 3);
        let p = phase_with_offset(&[c(3.0, 0.0), c(0.0, -2.0)], 512, 0).unwrap();
        assert_eq!(p.winding, -2);
        assert!(p.monotone && !p.increasing);
    }

    proptest! {
        #[test]
        fn winding_matches_argument_principle(
            raw in prop::collection::vec((0.0f64..3.0, 0.0f64..TAU), 0..8)
        ) {
            let roots: Vec<Complex64> = raw.iter().map(|&(r, t)| Complex64::from_polar(r, t)).collect();
            prop_assume!(roots.iter().all(|z| (z.norm() - 1.0).abs() > 1e-10));
            let inside = roots.iter().filter(|z| z.norm() < 1.0).count() as i64;
            let outside = roots.len() as i64 - inside;
            let p = phase(&roots, 1024).unwrap();
            prop_assert_eq!(p.winding, inside + 1 - outside);
            prop_assert!(p.winding_defect < WINDING_TOL);
            for w in p.psi.windows(2) {
                prop_assert!((w[1] - w[0]).abs() < PI * (2 * roots.len() + 1) as f64);
            }
        }
    }
}
