//! Monic solves for `φ_n`, `Φ_{n,m}` and `Φ*_{n,m}` with a conditioning
//! report attached to every answer.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{HalfLaurentPoly, MultiIndex};
use crate::linalg;
use crate::measure::MeasureSystem;
use crate::moments::{build_hp, build_hp_star, build_t, MomentMatrix, RowLabel};

/// Sigma ratio above which an index is declared normal.
pub const NORMAL_RATIO: f64 = 1e-10;
/// Sigma ratio below which an index is declared non-normal.
pub const NON_NORMAL_RATIO: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Normal,
    NonNormal,
    Borderline,
}

impl Verdict {
    pub fn from_ratio(ratio: f64) -> Self {
        if ratio > NORMAL_RATIO {
            Verdict::Normal
        } else if ratio < NON_NORMAL_RATIO {
            Verdict::NonNormal
        } else {
            Verdict::Borderline
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Normal => "normal",
            Verdict::NonNormal => "non_normal",
            Verdict::Borderline => "borderline",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub ratio: f64,
    pub verdict: Verdict,
    pub det_sign_available: bool,
    #[serde(default)]
    pub det: Option<Complex64>,
}

impl NormalityReport {
    /// The empty matrix of the zero index: normal, `det = 1`.
    pub fn trivial() -> Self {
        NormalityReport {
            sigma_min: 1.0,
            sigma_max: 1.0,
            ratio: 1.0,
            verdict: Verdict::Normal,
            det_sign_available: true,
            det: Some(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn of(matrix: &MomentMatrix) -> Self {
        let (sigma_min, sigma_max) = linalg::extreme_singular_values(&matrix.entries);
        let ratio = if sigma_max > 0.0 { sigma_min / sigma_max } else { 0.0 };
        let det = linalg::determinant(&matrix.entries);
        let finite = det.re.is_finite() && det.im.is_finite();
        NormalityReport {
            sigma_min,
            sigma_max,
            ratio,
            verdict: Verdict::from_ratio(ratio),
            det_sign_available: finite,
            det: finite.then_some(det),
        }
    }

    pub fn is_normal(&self) -> bool {
        self.verdict == Verdict::Normal
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub poly: HalfLaurentPoly,
    pub report: NormalityReport,
    /// `|∫ poly · z^s dμ_j|` for every defining relation, by direct quadrature.
    pub residuals: Vec<f64>,
    /// Largest moment magnitude entering the system.
    pub residual_scale: f64,
    /// `α_{n,m}` for `Φ_{n,m}`, `β_{n,m}` for `Φ*_{n,m}`.
    #[serde(default)]
    pub boundary_coeff: Option<Complex64>,
}

impl SolveResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// `∫ p(e^{iθ}) e^{isθ} dμ_j` evaluated pointwise, independent of the moment
/// cache.
pub fn relation_residual(system: &MeasureSystem, p: &HalfLaurentPoly, row: RowLabel) -> Result<f64> {
    let c = system.component(row.component)?;
    let freq = p
        .terms()
        .map(|(k, _)| ((k + row.two_s) as f64 / 2.0).abs())
        .fold(0.0, f64::max);
    let s = row.two_s as f64 / 2.0;
    Ok(c
        .integrate(freq, 1, |theta| p.eval_angle(theta) * Complex64::from_polar(1.0, s * theta))
        .norm())
}

fn residuals(system: &MeasureSystem, p: &HalfLaurentPoly, rows: &[RowLabel]) -> Result<Vec<f64>> {
    rows.iter().map(|&row| relation_residual(system, p, row)).collect()
}

/// Solves `Σ_q κ_q m_j(q + s) = -m_j(monic + s)` over the matrix rows and
/// returns `z^{monic} + Σ κ_q z^q`.
fn solve_monic(
    system: &MeasureSystem,
    matrix: MomentMatrix,
    two_monic: i64,
    what: impl Fn() -> String,
) -> Result<SolveResult> {
    let report = NormalityReport::of(&matrix);
    if report.verdict == Verdict::NonNormal {
        return Err(Error::NonNormal { what: what(), report });
    }
    let rhs = matrix
        .rows
        .iter()
        .map(|row| system.moment(row.component, two_monic + row.two_s).map(|v| -v))
        .collect::<Result<Vec<_>>>()?;
    let rhs = DVector::from_vec(rhs);
    let scale = rhs.iter().map(|z| z.norm()).fold(matrix.scale(), f64::max);
    let kappa = linalg::solve_refined(&matrix.entries, &rhs)
        .ok_or_else(|| Error::NonNormal { what: what(), report: report.clone() })?;
    let mut terms: Vec<(i64, Complex64)> =
        matrix.cols.iter().copied().zip(kappa.iter().copied()).collect();
    terms.push((two_monic, Complex64::new(1.0, 0.0)));
    terms.sort_by_key(|t| t.0);
    let lo = terms[0].0;
    let poly = HalfLaurentPoly::new(lo, terms.into_iter().map(|t| t.1).collect());
    let residuals = residuals(system, &poly, &matrix.rows)?;
    Ok(SolveResult { poly, report, residuals, residual_scale: scale, boundary_coeff: None })
}

fn trivial(poly: HalfLaurentPoly) -> SolveResult {
    SolveResult {
        poly,
        report: NormalityReport::trivial(),
        residuals: Vec::new(),
        residual_scale: 1.0,
        boundary_coeff: None,
    }
}

/// `φ_n = z^{|n|/2} + Σ κ_p z^p`, `p = -|n|/2, ..., |n|/2 - 1`.
pub fn solve_phi(system: &MeasureSystem, n: &MultiIndex) -> Result<SolveResult> {
    system.check_index(n)?;
    if n.is_zero() {
        return Ok(trivial(HalfLaurentPoly::one()));
    }
    let matrix = build_t(system, n)?;
    solve_monic(system, matrix, n.total() as i64, || format!("n = {n}"))
}

/// `φ_n^♯`, with residuals of its own relations `∫ φ^♯ z^{-s} dμ_j`.
pub fn solve_phi_sharp(system: &MeasureSystem, n: &MultiIndex) -> Result<SolveResult> {
    let base = solve_phi(system, n)?;
    let poly = base.poly.sharp();
    let rows: Vec<RowLabel> = crate::moments::phi_rows(n)
        .into_iter()
        .map(|r| RowLabel { component: r.component, two_s: -r.two_s })
        .collect();
    let residuals = residuals(system, &poly, &rows)?;
    Ok(SolveResult { poly, residuals, ..base })
}

/// `Φ_{n,m} = z^{|n|} + ... + α_{n,m} z^{-|m|}`.
pub fn solve_hp(system: &MeasureSystem, n: &MultiIndex, m: &MultiIndex) -> Result<SolveResult> {
    system.check_index(n)?;
    system.check_index(m)?;
    if n.is_zero() && m.is_zero() {
        let mut r = trivial(HalfLaurentPoly::one());
        r.boundary_coeff = Some(Complex64::new(1.0, 0.0));
        return Ok(r);
    }
    let matrix = build_hp(system, n, m)?;
    let mut r = solve_monic(system, matrix, 2 * n.total() as i64, || format!("(n, m) = ({n}, {m})"))?;
    r.boundary_coeff = Some(r.poly.coeff(-2 * m.total() as i64));
    Ok(r)
}

/// `Φ*_{n,m} = β_{n,m} z^{|n|} + ... + z^{-|m|}`.
pub fn solve_hp_star(system: &MeasureSystem, n: &MultiIndex, m: &MultiIndex) -> Result<SolveResult> {
    system.check_index(n)?;
    system.check_index(m)?;
    if n.is_zero() && m.is_zero() {
        let mut r = trivial(HalfLaurentPoly::one());
        r.boundary_coeff = Some(Complex64::new(1.0, 0.0));
        return Ok(r);
    }
    let matrix = build_hp_star(system, n, m)?;
    let mut r = solve_monic(system, matrix, -2 * m.total() as i64, || {
        format!("(n, m) = ({n}, {m}) [starred]")
    })?;
    r.boundary_coeff = Some(r.poly.coeff(2 * n.total() as i64));
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    Phi,
    HpDiag,
    HpOffdiag,
}

impl std::str::FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi" => Ok(ScanMode::Phi),
            "hp_diag" | "hp-diag" => Ok(ScanMode::HpDiag),
            "hp_offdiag" | "hp-offdiag" => Ok(ScanMode::HpOffdiag),
            _ => Err(Error::ConfigParse(format!("unknown scan mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: MultiIndex,
    /// Second index for the Hermite–Padé modes.
    pub m: Option<MultiIndex>,
    pub report: NormalityReport,
}

fn hp_report(system: &MeasureSystem, n: &MultiIndex, m: &MultiIndex) -> Result<NormalityReport> {
    if n.is_zero() && m.is_zero() {
        return Ok(NormalityReport::trivial());
    }
    Ok(NormalityReport::of(&build_hp(system, n, m)?))
}

/// Normality reports over `n ∈ {0..max_index}^r`, in grid order.
pub fn normality_scan(system: &MeasureSystem, max_index: usize, mode: ScanMode) -> Result<Vec<ScanRow>> {
    let grid = MultiIndex::grid(system.r(), max_index);
    let rows: Vec<Vec<ScanRow>> = grid
        .par_iter()
        .map(|n| -> Result<Vec<ScanRow>> {
            match mode {
                ScanMode::Phi => {
                    let report = if n.is_zero() {
                        NormalityReport::trivial()
                    } else {
                        NormalityReport::of(&build_t(system, n)?)
                    };
                    Ok(vec![ScanRow { n: n.clone(), m: None, report }])
                }
                ScanMode::HpDiag => Ok(vec![ScanRow {
                    n: n.clone(),
                    m: Some(n.clone()),
                    report: hp_report(system, n, n)?,
                }]),
                ScanMode::HpOffdiag => {
                    let mut out = Vec::with_capacity(2 * n.r());
                    for j in 0..n.r() {
                        let up = n.plus_unit(j);
                        out.push(ScanRow {
                            n: n.clone(),
                            m: Some(up.clone()),
                            report: hp_report(system, n, &up)?,
                        });
                        out.push(ScanRow {
                            n: up.clone(),
                            m: Some(n.clone()),
                            report: hp_report(system, &up, n)?,
                        });
                    }
                    Ok(out)
                }
            }
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &HalfLaurentPoly, b: &HalfLaurentPoly, tol: f64) -> bool {
        let lo = a.two_min().min(b.two_min());
        let hi = a.two_max().max(b.two_max());
        (lo..=hi).step_by(2).all(|e| (a.coeff(e) - b.coeff(e)).norm() < tol)
    }

    #[test]
    fn verdict_thresholds() {
        assert_eq!(Verdict::from_ratio(1e-9), Verdict::Normal);
        assert_eq!(Verdict::from_ratio(1e-11), Verdict::Borderline);
        assert_eq!(Verdict::from_ratio(1e-14), Verdict::NonNormal);
    }

    #[test]
    fn lebesgue_phi_2_is_z() {
        let r = solve_phi(&presets::lebesgue(), &MultiIndex::new(vec![2])).unwrap();
        assert!(close(&r.poly, &HalfLaurentPoly::monomial(2, c(1.0, 0.0)), 1e-14));
        assert!(r.report.is_normal());
        let s = solve_phi_sharp(&presets::lebesgue(), &MultiIndex::new(vec![2])).unwrap();
        assert!(close(&s.poly, &HalfLaurentPoly::monomial(-2, c(1.0, 0.0)), 1e-14));
    }

    #[test]
    fn phi_zero_is_one() {
        let r = solve_phi(&presets::a2(), &MultiIndex::zeros(2)).unwrap();
        assert_eq!(r.poly, HalfLaurentPoly::one());
        assert!(r.report.is_normal());
    }

    #[test]
    fn bernstein_szego_phi_1() {
        let s = presets::bernstein_szego(c(0.5, 0.0));
        let r = solve_phi(&s, &MultiIndex::new(vec![1])).unwrap();
        let expect = HalfLaurentPoly::from_terms(&[(1, c(1.0, 0.0)), (-1, c(-0.5, 0.0))]);
        assert!(close(&r.poly, &expect, 1e-12), "{}", r.poly);
        let sh = solve_phi_sharp(&s, &MultiIndex::new(vec![1])).unwrap();
        let expect = HalfLaurentPoly::from_terms(&[(1, c(-0.5, 0.0)), (-1, c(1.0, 0.0))]);
        assert!(close(&sh.poly, &expect, 1e-12));
    }

    #[test]
    fn a2_phi_11_matches_explicit_two_by_two() {
        let s = presets::a2();
        let r = solve_phi(&s, &MultiIndex::new(vec![1, 1])).unwrap();
        // φ = z + κ_0 + κ_{-1} z^{-1}; block j has the single row s = 1/2
        let a = [
            [s.moment(0, -1).unwrap(), s.moment(0, 1).unwrap()],
            [s.moment(1, -1).unwrap(), s.moment(1, 1).unwrap()],
        ];
        let b = [-s.moment(0, 3).unwrap(), -s.moment(1, 3).unwrap()];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let k_m1 = (b[0] * a[1][1] - a[0][1] * b[1]) / det;
        let k_0 = (a[0][0] * b[1] - b[0] * a[1][0]) / det;
        assert!((r.poly.coeff(-2) - k_m1).norm() < 1e-12);
        assert!((r.poly.coeff(0) - k_0).norm() < 1e-12);
        assert_eq!(r.poly.coeff(2), c(1.0, 0.0));
    }

    #[test]
    fn phi_sharp_residuals_on_a2() {
        let r = solve_phi_sharp(&presets::a2(), &MultiIndex::new(vec![2, 1])).unwrap();
        assert_eq!(r.residuals.len(), 3);
        assert!(r.max_residual() < 1e-10, "{:?}", r.residuals);
    }

    #[test]
    fn hp_reductions() {
        let bs = presets::bernstein_szego(c(0.5, 0.0));
        let r = solve_hp(&bs, &MultiIndex::new(vec![1]), &MultiIndex::zeros(1)).unwrap();
        let expect = HalfLaurentPoly::from_terms(&[(2, c(1.0, 0.0)), (0, c(-0.5, 0.0))]);
        assert!(close(&r.poly, &expect, 1e-12));
        assert!((r.boundary_coeff.unwrap() - c(-0.5, 0.0)).norm() < 1e-12);

        let star = solve_hp_star(&bs, &MultiIndex::zeros(1), &MultiIndex::new(vec![1])).unwrap();
        let expect = HalfLaurentPoly::from_terms(&[(0, c(-0.5, 0.0)), (-2, c(1.0, 0.0))]);
        assert!(close(&star.poly, &expect, 1e-12), "{}", star.poly);
        assert!((star.boundary_coeff.unwrap() - c(-0.5, 0.0)).norm() < 1e-12);

        let leb = presets::lebesgue();
        let one = MultiIndex::new(vec![1]);
        let r = solve_hp(&leb, &one, &one).unwrap();
        assert!(close(&r.poly, &HalfLaurentPoly::monomial(2, c(1.0, 0.0)), 1e-14));
        let r = solve_hp_star(&leb, &one, &one).unwrap();
        assert!(close(&r.poly, &HalfLaurentPoly::monomial(-2, c(1.0, 0.0)), 1e-14));
    }

    #[test]
    fn hp_diagonal_equals_phi_of_double_index() {
        let s = presets::a2();
        let n = MultiIndex::new(vec![1, 1]);
        let hp = solve_hp(&s, &n, &n).unwrap();
        let phi = solve_phi(&s, &n.doubled()).unwrap();
        assert!(close(&hp.poly, &phi.poly, 1e-10));
    }

    #[test]
    fn sharp_of_hp_is_starred_swap() {
        let s = presets::a2();
        let n = MultiIndex::new(vec![1, 0]);
        let m = MultiIndex::new(vec![0, 1]);
        let lhs = solve_hp(&s, &n, &m).unwrap().poly.sharp();
        let rhs = solve_hp_star(&s, &m, &n).unwrap().poly;
        assert!(close(&lhs, &rhs, 1e-10));
    }

    #[test]
    fn residuals_below_tolerance_on_presets() {
        for s in [presets::a2(), presets::at2()] {
            for n in MultiIndex::grid(2, 3) {
                let r = solve_phi(&s, &n).unwrap();
                assert!(r.max_residual() < 1e-9 * r.residual_scale, "n = {n}: {:?}", r.residuals);
            }
        }
    }

    #[test]
    fn scans() {
        let rows = normality_scan(&presets::a2(), 3, ScanMode::Phi).unwrap();
        assert_eq!(rows.len(), 16);
        assert!(rows.iter().all(|r| r.report.is_normal()));

        let rows = normality_scan(&presets::a2(), 2, ScanMode::HpOffdiag).unwrap();
        assert_eq!(rows.len(), 9 * 4);
        assert!(rows.iter().all(|r| r.report.is_normal()));

        let rows = normality_scan(&presets::at2(), 1, ScanMode::HpOffdiag).unwrap();
        assert!(rows.iter().all(|r| r.report.is_normal()));

        let rows = normality_scan(&presets::lebesgue(), 0, ScanMode::Phi).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].report, NormalityReport::trivial());
    }

    #[test]
    fn at2_offdiag_conditioning_at_max_index_2() {
        // 9×9 matrices on a single arc of length 2: the sigma ratio of the
        // monomial-basis matrix falls to ~1e-11, which is reported as
        // borderline, never as non-normal.
        let rows = normality_scan(&presets::at2(), 2, ScanMode::HpOffdiag).unwrap();
        let weak: Vec<_> = rows.iter().filter(|r| !r.report.is_normal()).collect();
        assert!(weak.iter().all(|r| r.report.verdict == Verdict::Borderline));
        assert!(weak.iter().all(|r| r.n.total() + r.m.as_ref().unwrap().total() == 9));
    }

    #[test]
    fn det_and_sigma_verdicts_agree() {
        for s in [presets::a2(), presets::at2()] {
            for row in normality_scan(&s, 3, ScanMode::Phi).unwrap() {
                let det = row.report.det.unwrap();
                assert!(row.report.det_sign_available);
                assert_eq!(row.report.is_normal(), det.norm() > 1e-300);
            }
        }
    }

    #[test]
    fn non_normal_is_an_error() {
        // a single point mass cannot support two relations
        use crate::measure::{make_at_system, Arc, PointMass, Weight};
        let s = make_at_system(
            Arc::new(0.5, 2.5).unwrap(),
            &[Weight::Uniform],
            &[PointMass::new(1.0, 1.0).unwrap()],
        )
        .unwrap();
        let r = solve_phi(&s, &MultiIndex::new(vec![2]));
        assert!(r.is_ok());
        // duplicate components make T_n rank deficient
        let d = crate::config::SystemDescription::from_json(
            r#"{"r": 2, "t0": 0.5, "tag": "none", "components": [
                {"arc": [0.5, 2.5], "weight": {"kind": "uniform"}},
                {"arc": [0.5, 2.5], "weight": {"kind": "uniform"}}]}"#,
        )
        .unwrap()
        .build()
        .unwrap();
        assert!(matches!(
            solve_phi(&d, &MultiIndex::new(vec![1, 1])),
            Err(Error::NonNormal { .. })
        ));
    }
}
