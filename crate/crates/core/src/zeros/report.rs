//! Classification of polynomial zeros against the unit circle and the arcs
//! of a measure system.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::laurent::HalfLaurentPoly;
use crate::measure::MeasureSystem;

use super::roots::roots;
use super::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootClass {
    OnCircle,
    Inside,
    Outside,
}

impl RootClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RootClass::OnCircle => "on_circle",
            RootClass::Inside => "inside",
            RootClass::Outside => "outside",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootInfo {
    pub z: Complex64,
    pub modulus: f64,
    /// Argument in the system's branch window `[t0, t0 + 2π)`.
    pub arg: f64,
    pub class: RootClass,
    /// Open arc interior containing an on-circle root.
    pub arc: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub degree: usize,
    /// Doubled power of `z` factored out of the Laurent polynomial.
    pub two_shift: i64,
    pub tol_circle: f64,
    pub roots: Vec<RootInfo>,
    pub clusters: Vec<RootCluster>,
    pub on_circle: usize,
    pub in_disk: usize,
    pub out_disk: usize,
    pub per_arc: Vec<usize>,
    /// On-circle roots outside every open arc interior.
    pub outside_arcs: Vec<Complex64>,
    pub min_pairwise_gap: Option<f64>,
}

impl ZeroReport {
    pub fn values(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.z).collect()
    }

    pub fn max_modulus(&self) -> Option<f64> {
        self.roots.iter().map(|r| r.modulus).reduce(f64::max)
    }
}

/// Zeros of `z^{-two_min/2} p(z)`.
pub fn zero_report(system: &MeasureSystem, p: &HalfLaurentPoly, tol_circle: f64) -> Result<ZeroReport> {
    zero_report_from(system, p, p.two_min(), tol_circle)
}

/// Zeros of `z^{-two_base/2} p(z)` for a nominal support starting at
/// `two_base`, so that roots at the origin of trimmed coefficients count.
pub fn zero_report_from(
    system: &MeasureSystem,
    p: &HalfLaurentPoly,
    two_base: i64,
    tol_circle: f64,
) -> Result<ZeroReport> {
    let ordinary = p.to_ordinary_from(two_base)?;
    let found = roots(&ordinary.coeffs)?;
    Ok(classify(system, &found, ordinary.two_shift, tol_circle))
}

pub fn classify(system: &MeasureSystem, found: &[Complex64], two_shift: i64, tol_circle: f64) -> ZeroReport {
    let branch = system.branch();
    let arcs = system.arcs();
    let mut infos = Vec::with_capacity(found.len());
    let mut per_arc = vec![0; arcs.len()];
    let mut outside_arcs = Vec::new();
    for &z in found {
        let modulus = z.norm();
        let class = if (modulus - 1.0).abs() < tol_circle {
            RootClass::OnCircle
        } else if modulus < 1.0 {
            RootClass::Inside
        } else {
            RootClass::Outside
        };
        let arg = if z == Complex64::new(0.0, 0.0) { branch.t0 } else { branch.arg(z) };
        let mut arc = None;
        if class == RootClass::OnCircle {
            for (j, a) in arcs.iter().enumerate() {
                if a.contains_open(arg) {
                    per_arc[j] += 1;
                    arc.get_or_insert(j);
                }
            }
            if arc.is_none() {
                outside_arcs.push(z);
            }
        }
        infos.push(RootInfo { z, modulus, arg, class, arc });
    }
    let count = |c: RootClass| infos.iter().filter(|r| r.class == c).count();
    ZeroReport {
        degree: found.len(),
        two_shift,
        tol_circle,
        on_circle: count(RootClass::OnCircle),
        in_disk: count(RootClass::Inside),
        out_disk: count(RootClass::Outside),
        clusters: clusters(found, Tolerances::default().cluster_radius),
        min_pairwise_gap: min_gap(found),
        roots: infos,
        per_arc,
        outside_arcs,
    }
}

fn min_gap(zs: &[Complex64]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (i, a) in zs.iter().enumerate() {
        for b in &zs[i + 1..] {
            let d = (a - b).norm();
            best = Some(best.map_or(d, |v| v.min(d)));
        }
    }
    best
}

/// Single-linkage clusters of roots closer than `radius`.
pub fn clusters(zs: &[Complex64], radius: f64) -> Vec<RootCluster> {
    let n = zs.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (zs[i] - zs[j]).norm() < radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut label, i);
        match out.iter_mut().find(|c| c.0 == r) {
            Some(c) => {
                c.1 += zs[i];
                c.2 += 1;
            }
            None => out.push((r, zs[i], 1)),
        }
    }
    out.into_iter()
        .map(|(_, sum, k)| RootCluster { center: sum / k as f64, multiplicity: k })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::para::build_para;
    use crate::presets;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lebesgue_para_roots() {
        let x = HalfLaurentPoly::from_terms(&[(2, c(1.0, 0.0)), (-2, c(1.0, 0.0))]);
        let r = zero_report(&presets::lebesgue(), &x, 1e-8).unwrap();
        assert_eq!(r.degree, 2);
        assert_eq!(r.on_circle, 2);
        assert!((r.min_pairwise_gap.unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(r.per_arc, vec![2]);
    }

    #[test]
    fn bernstein_szego_phi_root() {
        let s = presets::bernstein_szego(c(0.5, 0.0));
        let phi = crate::solver::solve_phi(&s, &crate::MultiIndex::new(vec![1])).unwrap().poly;
        let r = zero_report(&s, &phi, 1e-8).unwrap();
        assert_eq!(r.in_disk, 1);
        assert!((r.roots[0].z - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn a2_para_22() {
        let s = presets::a2();
        let n = crate::MultiIndex::new(vec![2, 2]);
        let phi = crate::solver::solve_phi(&s, &n).unwrap().poly;
        let x = build_para(&phi, c(1.0, 0.0)).unwrap().x;
        let r = zero_report(&s, &x, 1e-8).unwrap();
        assert_eq!(r.degree, 5);
        assert_eq!(r.on_circle, 5);
        assert!(r.clusters.iter().all(|c| c.multiplicity == 1));
        assert!(r.per_arc.iter().all(|&k| k >= 2), "{:?}", r.per_arc);
        assert!(r.outside_arcs.len() <= 1);
    }

    #[test]
    fn classification_partitions() {
        let s = presets::a2();
        let zs = [c(0.2, 0.0), c(3.0, 0.0), Complex64::from_polar(1.0, 0.5), Complex64::from_polar(1.0, 1.6)];
        let r = classify(&s, &zs, 0, 1e-8);
        assert_eq!((r.in_disk, r.out_disk, r.on_circle), (1, 1, 2));
        assert_eq!(r.per_arc, vec![1, 0]);
        assert_eq!(r.outside_arcs.len(), 1);
        assert_eq!(r.roots[2].arc, Some(0));
    }

    #[test]
    fn clustering() {
        let zs = [c(0.5, 0.0), c(0.5 + 1e-9, 0.0), c(-0.5, 0.0)];
        let cl = clusters(&zs, 1e-7);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].multiplicity, 2);
    }
}
