//! Verifiers for the zero-location and normality theorems. Each returns a
//! verdict carrying the evidence; `ensure` turns a failed verdict into
//! [`Error::TheoremViolated`].

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::MultiIndex;
use crate::measure::{MeasureSystem, SystemTag};
use crate::para::build_para;
use crate::solver::{solve_hp, solve_phi, NormalityReport, Verdict};

use super::phase::{phase_with_offset, PhaseReport, WINDING_TOL};
use super::report::{zero_report_from, ZeroReport};
use super::roots::roots;
use super::Tolerances;

pub const THM_5_1: &str = "Thm 5.1 (z^{|n|/2} phi_n has |n| zeros in the open unit disk)";
pub const THM_4_4_6: &str =
    "Thms 4.4-4.6 (paraorthogonal zeros are simple, unimodular, at least n_j per arc, at most one outside the arcs)";
pub const THM_5_2: &str = "Thm 5.2 (the indices (n, n+e_j) and (n+e_j, n) are normal)";

const FACTORIZATION_POINTS: usize = 100;

fn require_tagged(system: &MeasureSystem) -> Result<()> {
    match system.tag() {
        SystemTag::Angelesco | SystemTag::At => Ok(()),
        SystemTag::None => Err(Error::UntaggedSystem),
    }
}

fn violation(theorem: &str, what: String, failures: &[String]) -> Error {
    Error::TheoremViolated {
        theorem: theorem.to_string(),
        evidence: format!("{what}: {}", failures.join("; ")),
    }
}

/// Phase facts kept in verdicts; the sampled curve itself is left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSummary {
    pub winding: i64,
    pub winding_defect: f64,
    pub monotone: bool,
    pub increasing: bool,
    pub min_abs_derivative: f64,
}

impl From<&PhaseReport> for PhaseSummary {
    fn from(p: &PhaseReport) -> Self {
        PhaseSummary {
            winding: p.winding,
            winding_defect: p.winding_defect,
            monotone: p.monotone,
            increasing: p.increasing,
            min_abs_derivative: p.min_abs_derivative,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thm51Verdict {
    pub n: MultiIndex,
    pub passed: bool,
    pub failures: Vec<String>,
    pub zeros: ZeroReport,
    pub phase: Option<PhaseSummary>,
    /// On-circle roots of `z^{(|n|+1)/2} X_n^(1)`, which a monotone phase
    /// must match one-to-one.
    pub companion_on_circle: Option<usize>,
}

impl Thm51Verdict {
    pub fn ensure(&self) -> Result<()> {
        if self.passed {
            Ok(())
        } else {
            Err(violation(THM_5_1, format!("n = {}", self.n), &self.failures))
        }
    }
}

pub fn verify_thm5_1(system: &MeasureSystem, n: &MultiIndex, tol: &Tolerances) -> Result<Thm51Verdict> {
    require_tagged(system)?;
    let phi = solve_phi(system, n)?.poly;
    let total = n.total();
    let zeros = zero_report_from(system, &phi, -(total as i64), tol.tol_circle)?;
    let mut failures = Vec::new();
    if zeros.degree != total {
        failures.push(format!("found {} roots, expected {total}", zeros.degree));
    }
    for r in &zeros.roots {
        if !(r.modulus < 1.0 - tol.disk_margin) {
            failures.push(format!("root {} has |z| = {:.12}", r.z, r.modulus));
        }
    }
    if zeros.in_disk != total {
        failures.push(format!("n_+ = {}, expected {total}", zeros.in_disk));
    }
    let phase = match phase_with_offset(&zeros.values(), tol.grid, 1) {
        Ok(p) => {
            let expected = total as i64 + 1;
            if p.winding != expected {
                failures.push(format!("winding {} != |n|+1 = {expected}", p.winding));
            }
            let principle = zeros.in_disk as i64 + 1 - (zeros.out_disk + zeros.on_circle) as i64;
            if p.winding != principle {
                failures.push(format!("winding {} != n_+ + 1 - n_- = {principle}", p.winding));
            }
            if p.winding_defect > WINDING_TOL {
                failures.push(format!("winding defect {:.3e}", p.winding_defect));
            }
            if !p.monotone {
                failures.push(format!(
                    "phase not strictly monotone (min |dPsi| = {:.3e})",
                    p.min_abs_derivative
                ));
            }
            Some(PhaseSummary::from(&p))
        }
        Err(Error::RootOnCircle { root }) => {
            failures.push(format!("root {root} on the unit circle"));
            None
        }
        Err(e) => return Err(e),
    };
    let companion = build_para(&phi, Complex64::new(1.0, 0.0))
        .and_then(|p| zero_report_from(system, &p.x, -(total as i64 + 1), tol.tol_circle))
        .ok()
        .map(|z| z.on_circle);
    if let (Some(p), Some(k)) = (&phase, companion) {
        if p.monotone && p.winding.unsigned_abs() as usize != k {
            failures.push(format!("|winding| {} != {k} unimodular companion roots", p.winding));
        }
    }
    Ok(Thm51Verdict {
        n: n.clone(),
        passed: failures.is_empty(),
        failures,
        zeros,
        phase,
        companion_on_circle: companion,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParaVerdict {
    pub n: MultiIndex,
    pub tau: Complex64,
    pub passed: bool,
    pub failures: Vec<String>,
    pub zeros: Option<ZeroReport>,
    pub factorization_error: Option<f64>,
}

impl ParaVerdict {
    pub fn ensure(&self) -> Result<()> {
        if self.passed {
            Ok(())
        } else {
            Err(violation(THM_4_4_6, format!("n = {}, tau = {}", self.n, self.tau), &self.failures))
        }
    }
}

/// Relative distance between `Σ coeffs[i] z^i` and the best multiple of
/// `Π (z − r)` at equispaced circle points.
pub fn factorization_error(coeffs: &[Complex64], rs: &[Complex64]) -> f64 {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    let samples: Vec<(Complex64, Complex64)> = (0..FACTORIZATION_POINTS)
        .map(|k| {
            let z = Complex64::from_polar(1.0, TAU * (k as f64 + 0.5) / FACTORIZATION_POINTS as f64);
            let p = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
            let q: Complex64 = rs.iter().map(|r| z - r).product();
            (p, q)
        })
        .collect();
    for (p, q) in &samples {
        num += q.conj() * p;
        den += q.norm_sqr();
    }
    let c = if den > 0.0 { num / den } else { Complex64::new(0.0, 0.0) };
    let scale = samples.iter().map(|(p, _)| p.norm()).fold(0.0, f64::max);
    let err = samples.iter().map(|(p, q)| (p - c * q).norm()).fold(0.0, f64::max);
    if scale > 0.0 {
        err / scale
    } else {
        f64::INFINITY
    }
}

fn para_verdict(
    system: &MeasureSystem,
    n: &MultiIndex,
    phi: &crate::laurent::HalfLaurentPoly,
    tau: Complex64,
    tol: &Tolerances,
) -> Result<ParaVerdict> {
    let p = build_para(phi, tau)?;
    let expected = n.total() + 1;
    let base = -(expected as i64);
    let mut failures = Vec::new();
    let zeros = match zero_report_from(system, &p.x, base, tol.tol_circle) {
        Ok(z) => Some(z),
        Err(Error::DegenerateLeading { lead }) => {
            failures.push(format!("degenerate leading coefficient {lead:.3e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let mut factorization = None;
    if let Some(z) = &zeros {
        if z.degree != expected {
            failures.push(format!("{} roots, expected {expected}", z.degree));
        }
        for r in z.roots.iter().filter(|r| (r.modulus - 1.0).abs() >= tol.tol_circle) {
            failures.push(format!("root {} off the circle: ||z|-1| = {:.3e}", r.z, (r.modulus - 1.0).abs()));
        }
        if let Some(gap) = z.min_pairwise_gap {
            if !(gap > tol.min_gap) {
                failures.push(format!("min pairwise gap {gap:.3e}"));
            }
        }
        if z.clusters.iter().any(|c| c.multiplicity > 1) {
            failures.push("multiple root cluster".to_string());
        }
        for (j, (&have, &need)) in z.per_arc.iter().zip(n.entries()).enumerate() {
            if have < need {
                failures.push(format!("arc {j} holds {have} roots, needs {need}"));
            }
        }
        if z.outside_arcs.len() + z.in_disk + z.out_disk > 1 {
            failures.push(format!(
                "{} roots outside the open arcs",
                z.outside_arcs.len() + z.in_disk + z.out_disk
            ));
        }
        let ordinary = p.x.to_ordinary_from(base)?;
        let err = factorization_error(&ordinary.coeffs, &z.values());
        if !(err < tol.factorization) {
            failures.push(format!("factorization relative error {err:.3e}"));
        }
        factorization = Some(err);
    }
    Ok(ParaVerdict {
        n: n.clone(),
        tau,
        passed: failures.is_empty(),
        failures,
        zeros,
        factorization_error: factorization,
    })
}

/// One verdict per `τ`, in the order given.
pub fn verify_para_theorems(
    system: &MeasureSystem,
    n: &MultiIndex,
    taus: &[Complex64],
    tol: &Tolerances,
) -> Result<Vec<ParaVerdict>> {
    require_tagged(system)?;
    for &t in taus {
        crate::para::check_tau(t)?;
    }
    let phi = solve_phi(system, n)?.poly;
    taus.par_iter().map(|&tau| para_verdict(system, n, &phi, tau, tol)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thm52Verdict {
    pub n: MultiIndex,
    pub m: MultiIndex,
    pub passed: bool,
    pub failures: Vec<String>,
    pub report: Option<NormalityReport>,
    pub degree: Option<usize>,
    pub in_disk: Option<usize>,
    pub out_disk: Option<usize>,
    pub phase: Option<PhaseSummary>,
    /// `2|n| + 1` for the smaller of the two indices.
    pub expected_degree: usize,
}

impl Thm52Verdict {
    pub fn ensure(&self) -> Result<()> {
        if self.passed {
            Ok(())
        } else {
            Err(violation(THM_5_2, format!("(n, m) = ({}, {})", self.n, self.m), &self.failures))
        }
    }
}

fn thm5_2_pair(system: &MeasureSystem, n: &MultiIndex, m: &MultiIndex, tol: &Tolerances) -> Result<Thm52Verdict> {
    let expected = n.total() + m.total();
    let mut v = Thm52Verdict {
        n: n.clone(),
        m: m.clone(),
        passed: false,
        failures: Vec::new(),
        report: None,
        degree: None,
        in_disk: None,
        out_disk: None,
        phase: None,
        expected_degree: expected,
    };
    let solved = match solve_hp(system, n, m) {
        Ok(s) => s,
        Err(Error::NonNormal { report, .. }) => {
            v.failures.push(format!("non-normal: sigma ratio {:.3e}", report.ratio));
            v.report = Some(report);
            return Ok(v);
        }
        Err(e) => return Err(e),
    };
    if solved.report.verdict != Verdict::Normal {
        v.failures.push(format!(
            "verdict {} (sigma ratio {:.3e})",
            solved.report.verdict.as_str(),
            solved.report.ratio
        ));
    }
    v.report = Some(solved.report.clone());
    let ordinary = solved.poly.to_ordinary_from(-2 * m.total() as i64)?;
    let rs = roots(&ordinary.coeffs)?;
    v.degree = Some(rs.len());
    if rs.len() != expected {
        v.failures.push(format!("degree {} != {expected}", rs.len()));
    }
    let inside = rs.iter().filter(|z| z.norm() < 1.0).count();
    v.in_disk = Some(inside);
    v.out_disk = Some(rs.len() - inside);
    match phase_with_offset(&rs, tol.grid, 0) {
        Ok(p) => {
            if p.winding.unsigned_abs() as usize != expected {
                v.failures.push(format!("winding {} != ±{expected}", p.winding));
            }
            if !p.monotone {
                v.failures.push("phase not strictly monotone".to_string());
            }
            v.phase = Some(PhaseSummary::from(&p));
        }
        Err(Error::RootOnCircle { root }) => v.failures.push(format!("root {root} on the unit circle")),
        Err(e) => return Err(e),
    }
    v.passed = v.failures.is_empty();
    Ok(v)
}

/// Checks `(n, n+e_j)` and `(n+e_j, n)` for every `n ∈ {0..max_index}^r`.
pub fn verify_thm5_2(system: &MeasureSystem, max_index: usize, tol: &Tolerances) -> Result<Vec<Thm52Verdict>> {
    require_tagged(system)?;
    let mut pairs = Vec::new();
    for n in MultiIndex::grid(system.r(), max_index) {
        for j in 0..system.r() {
            let up = n.plus_unit(j);
            pairs.push((n.clone(), up.clone()));
            pairs.push((up, n.clone()));
        }
    }
    pairs.par_iter().map(|(n, m)| thm5_2_pair(system, n, m, tol)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleRow {
    pub system: String,
    pub n: MultiIndex,
    pub verdict: Verdict,
    pub max_abs_root: Option<f64>,
    pub exceeds_unit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub max_index: usize,
    pub rows: Vec<CounterexampleRow>,
    /// Rows with a root of modulus above `1 + 1e-8`.
    pub findings: Vec<CounterexampleRow>,
}

/// Largest root modulus of `Φ_{n,0}` over each system and nonzero
/// `n ∈ {0..max_index}^r`.
pub fn counterexample_scan(catalog: &[(String, MeasureSystem)], max_index: usize) -> Result<CounterexampleReport> {
    let jobs: Vec<(&String, &MeasureSystem, MultiIndex)> = catalog
        .iter()
        .flat_map(|(name, s)| {
            MultiIndex::grid(s.r(), max_index)
                .into_iter()
                .filter(|n| !n.is_zero())
                .map(move |n| (name, s, n))
        })
        .collect();
    let rows: Vec<CounterexampleRow> = jobs
        .par_iter()
        .map(|(name, s, n)| -> Result<CounterexampleRow> {
            let zero = MultiIndex::zeros(s.r());
            match solve_hp(s, n, &zero) {
                Ok(sol) => {
                    let ordinary = sol.poly.to_ordinary_from(0)?;
                    let rs = roots(&ordinary.coeffs)?;
                    let max = rs.iter().map(|z| z.norm()).fold(0.0, f64::max);
                    Ok(CounterexampleRow {
                        system: name.to_string(),
                        n: n.clone(),
                        verdict: sol.report.verdict,
                        max_abs_root: Some(max),
                        exceeds_unit: max > 1.0 + 1e-8,
                    })
                }
                Err(Error::NonNormal { report, .. }) => Ok(CounterexampleRow {
                    system: name.to_string(),
                    n: n.clone(),
                    verdict: report.verdict,
                    max_abs_root: None,
                    exceeds_unit: false,
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let findings = rows.iter().filter(|r| r.exceeds_unit).cloned().collect();
    Ok(CounterexampleReport { max_index, rows, findings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::para::{equispaced_taus, sweep_taus};
    use crate::presets;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn thm5_1_examples() {
        let tol = Tolerances::default();
        let v = verify_thm5_1(&presets::a2(), &MultiIndex::new(vec![2, 1]), &tol).unwrap();
        assert!(v.passed, "{:?}", v.failures);
        assert_eq!(v.zeros.in_disk, 3);
        let v = verify_thm5_1(&presets::at2(), &MultiIndex::new(vec![1, 1]), &tol).unwrap();
        assert!(v.passed, "{:?}", v.failures);
        assert_eq!(v.zeros.in_disk, 2);
        let v = verify_thm5_1(&presets::lebesgue(), &MultiIndex::new(vec![3]), &tol).unwrap();
        assert!(v.passed, "{:?}", v.failures);
        assert!(v.zeros.roots.iter().all(|r| r.modulus < 1e-4));
    }

    #[test]
    fn untagged_systems_are_rejected() {
        let s = crate::measure::modify_system(
            &presets::a2(),
            crate::measure::Modifier::SinProd { varphi1: 1.5, varphi2: 4.0 },
        )
        .unwrap();
        assert!(matches!(
            verify_thm5_1(&s, &MultiIndex::new(vec![1, 1]), &Tolerances::default()),
            Err(Error::UntaggedSystem)
        ));
    }

    #[test]
    fn para_examples() {
        let tol = Tolerances::default();
        let taus = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
        for v in verify_para_theorems(&presets::a2(), &MultiIndex::new(vec![2, 2]), &taus, &tol).unwrap() {
            assert!(v.passed, "{:?}", v.failures);
        }
        for v in verify_para_theorems(&presets::at2(), &MultiIndex::new(vec![2, 1]), &equispaced_taus(8), &tol)
            .unwrap()
        {
            assert!(v.passed, "{:?}", v.failures);
        }
        let v = verify_para_theorems(&presets::lebesgue(), &MultiIndex::new(vec![1]), &[c(1.0, 0.0)], &tol).unwrap();
        assert!(v[0].passed);
        let z = v[0].zeros.as_ref().unwrap();
        assert_eq!(z.on_circle, 2);
    }

    #[test]
    fn forced_tolerance_failure() {
        let tol = Tolerances { tol_circle: 1e-20, ..Tolerances::default() };
        let v = verify_para_theorems(&presets::a2(), &MultiIndex::new(vec![1, 1]), &sweep_taus(4), &tol).unwrap();
        assert!(v.iter().any(|v| !v.passed));
        let err = v.iter().find(|v| !v.passed).unwrap().ensure().unwrap_err();
        assert!(matches!(err, Error::TheoremViolated { .. }));
    }

    #[test]
    fn thm5_2_examples() {
        let tol = Tolerances::default();
        let v = verify_thm5_2(&presets::a2(), 2, &tol).unwrap();
        assert_eq!(v.len(), 9 * 4);
        for x in &v {
            assert!(x.passed, "({}, {}): {:?}", x.n, x.m, x.failures);
        }
        for x in verify_thm5_2(&presets::at2(), 1, &tol).unwrap() {
            assert!(x.passed, "({}, {}): {:?}", x.n, x.m, x.failures);
        }
    }

    #[test]
    fn factorization_of_exact_product() {
        let rs = [c(0.5, 0.0), c(0.0, 1.0)];
        // 2(z - 0.5)(z - i)
        let coeffs = [c(0.0, 1.0), c(-1.0, -2.0), c(2.0, 0.0)];
        assert!(factorization_error(&coeffs, &rs) < 1e-15);
        assert!(factorization_error(&coeffs, &[c(0.4, 0.0), c(0.0, 1.0)]) > 1e-3);
    }

    #[test]
    fn counterexample_scan_shapes() {
        let empty = counterexample_scan(&[], 3).unwrap();
        assert!(empty.rows.is_empty());
        let leb = vec![("SYS-LEB".to_string(), presets::lebesgue())];
        let r = counterexample_scan(&leb, 4).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert!(r.rows.iter().all(|row| row.max_abs_root.unwrap() <= 1.0));
        assert!(r.findings.is_empty());
    }
}
