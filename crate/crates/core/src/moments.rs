//! Half-integer trigonometric moments and the moment matrices built from them.

use std::collections::HashMap;
use std::sync::RwLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::MultiIndex;
use crate::measure::{Component, MeasureSystem};

/// Per-component moments keyed by doubled frequency `2t`.
#[derive(Debug, Default)]
pub struct MomentCache {
    values: RwLock<HashMap<(usize, i64), Complex64>>,
}

impl Clone for MomentCache {
    fn clone(&self) -> Self {
        MomentCache { values: RwLock::new(self.values.read().unwrap().clone()) }
    }
}

impl MomentCache {
    fn get(&self, key: (usize, i64)) -> Option<Complex64> {
        self.values.read().unwrap().get(&key).copied()
    }

    fn insert(&self, key: (usize, i64), v: Complex64) {
        self.values.write().unwrap().insert(key, v);
    }

    /// Snapshot sorted by `(component, 2t)`.
    pub fn entries(&self) -> Vec<(usize, i64, Complex64)> {
        let mut out: Vec<_> = self
            .values
            .read()
            .unwrap()
            .iter()
            .map(|(&(j, t), &v)| (j, t, v))
            .collect();
        out.sort_by_key(|&(j, t, _)| (j, t));
        out
    }
}

/// `∫ e^{i t θ} dμ_j` with `t = two_t / 2`, θ in the branch window.
pub fn component_moment(c: &Component, two_t: i64, panel_factor: usize) -> Complex64 {
    let t = two_t as f64 / 2.0;
    c.integrate(t.abs(), panel_factor, |theta| Complex64::from_polar(1.0, t * theta))
}

impl MeasureSystem {
    /// Cached moment `m_j(t)`, `t = two_t / 2`.
    pub fn moment(&self, j: usize, two_t: i64) -> Result<Complex64> {
        if let Some(v) = self.cache.get((j, two_t)) {
            return Ok(v);
        }
        let v = self.moment_refined(j, two_t, 1)?;
        self.cache.insert((j, two_t), v);
        Ok(v)
    }

    /// Uncached moment with `panel_factor` times as many panels. Negative
    /// frequencies are conjugates of positive ones, exactly: every measure
    /// here is real, and the moment matrices rely on `m(-t) = conj m(t)`.
    pub fn moment_refined(&self, j: usize, two_t: i64, panel_factor: usize) -> Result<Complex64> {
        let v = component_moment(self.component(j)?, two_t.abs(), panel_factor);
        Ok(if two_t < 0 { v.conj() } else { v })
    }

    pub fn cached_moments(&self) -> Vec<(usize, i64, Complex64)> {
        self.cache.entries()
    }
}

/// Row label: component `j` and doubled row frequency `2s`, where the row
/// encodes `∫ (·) z^{s} dμ_j` (so `s = -p` for an orthogonality exponent `p`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowLabel {
    pub component: usize,
    pub two_s: i64,
}

/// Matrix with entry `m_j(q + s)` at row `(j, s)` and column `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrix {
    pub entries: DMatrix<Complex64>,
    pub rows: Vec<RowLabel>,
    /// Doubled column exponents `2q`.
    pub cols: Vec<i64>,
}

impl MomentMatrix {
    pub fn assemble(system: &MeasureSystem, rows: Vec<RowLabel>, cols: Vec<i64>) -> Result<Self> {
        let mut entries = DMatrix::zeros(rows.len(), cols.len());
        for (i, row) in rows.iter().enumerate() {
            for (k, &q) in cols.iter().enumerate() {
                entries[(i, k)] = system.moment(row.component, q + row.two_s)?;
            }
        }
        Ok(MomentMatrix { entries, rows, cols })
    }

    pub fn size(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    /// Largest entry magnitude.
    pub fn scale(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Rows of `T_n`: block `j` has `s = n_j/2, n_j/2 - 1, ..., -n_j/2 + 1`.
pub fn phi_rows(n: &MultiIndex) -> Vec<RowLabel> {
    n.entries()
        .iter()
        .enumerate()
        .flat_map(|(j, &nj)| {
            let nj = nj as i64;
            (0..nj).map(move |i| RowLabel { component: j, two_s: nj - 2 * i })
        })
        .collect()
}

/// Columns of `T_n`: `q = -|n|/2, ..., |n|/2 - 1`.
pub fn phi_cols(n: &MultiIndex) -> Vec<i64> {
    let t = n.total() as i64;
    (0..t).map(|i| -t + 2 * i).collect()
}

/// Rows for the Hermite–Padé relations `p = -m_j, ..., n_j - 1`, listed in
/// increasing `p`.
pub fn hp_rows(n: &MultiIndex, m: &MultiIndex) -> Vec<RowLabel> {
    window_rows(n, m, 0)
}

/// Rows for the starred relations `p = -m_j + 1, ..., n_j`.
pub fn hp_star_rows(n: &MultiIndex, m: &MultiIndex) -> Vec<RowLabel> {
    window_rows(n, m, 1)
}

fn window_rows(n: &MultiIndex, m: &MultiIndex, offset: i64) -> Vec<RowLabel> {
    n.entries()
        .iter()
        .zip(m.entries())
        .enumerate()
        .flat_map(|(j, (&nj, &mj))| {
            (-(mj as i64) + offset..nj as i64 + offset)
                .map(move |p| RowLabel { component: j, two_s: -2 * p })
        })
        .collect()
}

/// Integer exponents `lo..hi` (half-open) as doubled column labels.
pub fn integer_cols(lo: i64, hi: i64) -> Vec<i64> {
    (lo..hi).map(|p| 2 * p).collect()
}

/// The φ-moment matrix `T_n` (size `|n| × |n|`).
pub fn build_t(system: &MeasureSystem, n: &MultiIndex) -> Result<MomentMatrix> {
    system.check_index(n)?;
    if n.total() == 0 {
        return Err(Error::EmptyIndex);
    }
    MomentMatrix::assemble(system, phi_rows(n), phi_cols(n))
}

/// The Hermite–Padé matrix for `(n, m)`: columns `p' = -|m|, ..., |n| - 1`.
pub fn build_hp(system: &MeasureSystem, n: &MultiIndex, m: &MultiIndex) -> Result<MomentMatrix> {
    system.check_index(n)?;
    system.check_index(m)?;
    let (tn, tm) = (n.total() as i64, m.total() as i64);
    if tn + tm == 0 {
        return Err(Error::EmptyIndex);
    }
    MomentMatrix::assemble(system, hp_rows(n, m), integer_cols(-tm, tn))
}

/// The matrix of the starred problem: columns `p' = -|m| + 1, ..., |n|`.
pub fn build_hp_star(
    system: &MeasureSystem,
    n: &MultiIndex,
    m: &MultiIndex,
) -> Result<MomentMatrix> {
    system.check_index(n)?;
    system.check_index(m)?;
    let (tn, tm) = (n.total() as i64, m.total() as i64);
    if tn + tm == 0 {
        return Err(Error::EmptyIndex);
    }
    MomentMatrix::assemble(system, hp_star_rows(n, m), integer_cols(-tm + 1, tn + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use std::f64::consts::PI;

    #[test]
    fn lebesgue_moments() {
        let s = presets::lebesgue();
        let m0 = s.moment(0, 0).unwrap();
        assert!((m0 - 1.0).norm() < 1e-15);
        let half = s.moment(0, 1).unwrap();
        assert!((half - Complex64::new(0.0, 2.0 / PI)).norm() < 1e-15);
        for k in 1..6 {
            assert!(s.moment(0, 2 * k).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn moments_are_hermitian() {
        let s = presets::a2();
        for j in 0..2 {
            for t in 0..20 {
                let a = s.moment(j, t).unwrap();
                let b = s.moment(j, -t).unwrap();
                assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1e-300) + 1e-16);
            }
        }
    }

    #[test]
    fn cache_is_filled() {
        let s = presets::a2();
        s.moment(1, 3).unwrap();
        assert!(s.cached_moments().iter().any(|&(j, t, _)| j == 1 && t == 3));
        assert!(matches!(s.moment(2, 0), Err(Error::ComponentOutOfRange { .. })));
    }

    #[test]
    fn t_matrix_layout_for_lebesgue() {
        let s = presets::lebesgue();
        let t = build_t(&s, &MultiIndex::new(vec![2])).unwrap();
        assert_eq!(t.rows.iter().map(|r| r.two_s).collect::<Vec<_>>(), vec![2, 0]);
        assert_eq!(t.cols, vec![-2, 0]);
        let id = DMatrix::<Complex64>::identity(2, 2);
        assert!((t.entries - id).norm() < 1e-14);

        let t = build_t(&s, &MultiIndex::new(vec![1])).unwrap();
        assert_eq!(t.rows[0].two_s, 1);
        assert_eq!(t.cols, vec![-1]);
        assert!((t.entries[(0, 0)] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn t_matrix_layout_for_a2() {
        let s = presets::a2();
        let t = build_t(&s, &MultiIndex::new(vec![1, 1])).unwrap();
        // block j: s = 1/2, columns q = -1, 0
        for j in 0..2 {
            assert_eq!(t.entries[(j, 0)], s.moment(j, -1).unwrap());
            assert_eq!(t.entries[(j, 1)], s.moment(j, 1).unwrap());
        }
    }

    #[test]
    fn empty_index() {
        let s = presets::a2();
        assert!(matches!(build_t(&s, &MultiIndex::zeros(2)), Err(Error::EmptyIndex)));
        assert!(matches!(
            build_hp(&s, &MultiIndex::zeros(2), &MultiIndex::zeros(2)),
            Err(Error::EmptyIndex)
        ));
        assert!(matches!(
            build_t(&s, &MultiIndex::new(vec![1])),
            Err(Error::IndexLength { .. })
        ));
    }

    #[test]
    fn hp_with_zero_m_is_the_classical_matrix() {
        let s = presets::bernstein_szego(Complex64::new(0.5, 0.0));
        let n = MultiIndex::new(vec![3]);
        let hp = build_hp(&s, &n, &MultiIndex::zeros(1)).unwrap();
        // rows p = 0..n-1, columns 0..n-1, entry m(p' - p)
        for p in 0..3i64 {
            for q in 0..3i64 {
                let expect = s.moment(0, 2 * (q - p)).unwrap();
                assert_eq!(hp.entries[(p as usize, q as usize)], expect);
            }
        }
    }

    #[test]
    fn hp_diagonal_matches_t_of_double_index() {
        let s = presets::a2();
        for n in MultiIndex::grid(2, 2).into_iter().filter(|n| !n.is_zero()) {
            let hp = build_hp(&s, &n, &n).unwrap();
            let t = build_t(&s, &n.doubled()).unwrap();
            assert_eq!(hp.rows, t.rows);
            assert_eq!(hp.cols, t.cols);
            assert!((hp.entries - t.entries).norm() < 1e-12);
        }
    }
}
