//! Paraorthogonal polynomials `X_n^(τ) = z^{1/2} φ_n + τ z^{-1/2} φ_n^♯` and
//! their real trigonometric form.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{Branch, HalfLaurentPoly, MultiIndex};
use crate::measure::MeasureSystem;
use crate::moments::RowLabel;
use crate::solver::relation_residual;

/// Allowed deviation of `|τ|` from one.
pub const TAU_TOL: f64 = 1e-14;
/// Relative τ-invariance defect accepted by [`trig_form`].
pub const INVARIANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParaPoly {
    pub x: HalfLaurentPoly,
    pub tau: Complex64,
    #[serde(default)]
    pub trig: Option<Vec<TrigTerm>>,
}

/// `a cos(fθ) + b sin(fθ)` with `f = two_freq / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub two_freq: i64,
    pub cos: f64,
    pub sin: f64,
}

impl TrigTerm {
    pub fn freq(&self) -> f64 {
        self.two_freq as f64 / 2.0
    }
}

/// Evaluates `Σ a cos(fθ) + b sin(fθ)`.
pub fn eval_trig(terms: &[TrigTerm], theta: f64) -> f64 {
    terms
        .iter()
        .map(|t| {
            let f = t.freq() * theta;
            t.cos * f.cos() + t.sin * f.sin()
        })
        .sum()
}

pub fn check_tau(tau: Complex64) -> Result<()> {
    if !((tau.norm() - 1.0).abs() <= TAU_TOL) {
        return Err(Error::NonUnimodularTau { tau });
    }
    Ok(())
}

/// Builds `X` and symmetrizes the coefficients so that `c_{-k} = τ conj(c_k)`.
pub fn build_para(phi: &HalfLaurentPoly, tau: Complex64) -> Result<ParaPoly> {
    check_tau(tau)?;
    if phi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let raw = phi.shift_half(1) + phi.sharp().shift_half(-1).scale(tau);
    let top = raw.two_min().abs().max(raw.two_max().abs());
    let mut coeffs = vec![Complex64::new(0.0, 0.0); (top + 1) as usize];
    // index i holds exponent (−top + 2i)/2
    for k in (0..=top).rev().step_by(2) {
        let avg = (raw.coeff(k) + tau * raw.coeff(-k).conj()) * 0.5;
        coeffs[((top + k) / 2) as usize] = avg;
        if k != 0 {
            coeffs[((top - k) / 2) as usize] = tau * avg.conj();
        }
    }
    Ok(ParaPoly { x: HalfLaurentPoly::new(-top, coeffs), tau, trig: None })
}

impl ParaPoly {
    /// Largest `|c_k − τ conj(c_{−k})|` relative to the largest coefficient.
    pub fn invariance_defect(&self) -> f64 {
        let top = self.x.two_min().abs().max(self.x.two_max().abs());
        let scale = self.x.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
        (-top..=top)
            .step_by(2)
            .map(|k| (self.x.coeff(k) - self.tau * self.x.coeff(-k).conj()).norm())
            .fold(0.0, f64::max)
            / scale
    }

    pub fn with_trig(mut self, branch: Branch) -> Result<Self> {
        self.trig = Some(trig_form(&self, branch)?);
        Ok(self)
    }
}

/// Real coefficients of `T(θ) = ½ τ^{-1/2} X(e^{iθ})`, highest frequency
/// first. `τ^{1/2}` is taken on `branch`.
pub fn trig_form(p: &ParaPoly, branch: Branch) -> Result<Vec<TrigTerm>> {
    let defect = p.invariance_defect();
    if defect > INVARIANCE_TOL {
        return Err(Error::NotTauInvariant { defect });
    }
    let inv_sqrt = branch.half_power(p.tau, -1)?;
    let top = p.x.two_min().abs().max(p.x.two_max().abs());
    let mut out = Vec::new();
    for k in (0..=top).rev().step_by(2) {
        let d = inv_sqrt * p.x.coeff(k);
        if k == 0 {
            let scale = p.x.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
            if d.im.abs() > INVARIANCE_TOL * scale.max(1.0) {
                return Err(Error::NotTauInvariant { defect: d.im.abs() });
            }
            out.push(TrigTerm { two_freq: 0, cos: 0.5 * d.re, sin: 0.0 });
        } else {
            out.push(TrigTerm { two_freq: k, cos: d.re, sin: -d.im });
        }
    }
    Ok(out)
}

/// `|∫ X z^{-p} dμ_j|` for `p = -(n_j-1)/2, ..., (n_j-1)/2`, grouped by `j`.
pub fn para_residuals(system: &MeasureSystem, p: &ParaPoly, n: &MultiIndex) -> Result<Vec<f64>> {
    system.check_index(n)?;
    let mut out = Vec::with_capacity(n.total());
    for (j, &nj) in n.entries().iter().enumerate() {
        let nj = nj as i64;
        let mut two_p = -(nj - 1);
        while two_p < nj {
            out.push(relation_residual(system, &p.x, RowLabel { component: j, two_s: -two_p })?);
            two_p += 2;
        }
    }
    Ok(out)
}

/// `k` equispaced unimodular values `e^{2πi l/k}`, `l = 0..k`.
pub fn equispaced_taus(k: usize) -> Vec<Complex64> {
    (0..k).map(|l| Complex64::from_polar(1.0, TAU * l as f64 / k as f64)).collect()
}

/// Verifier set: `k` equispaced values together with `±1, ±i`, without repeats.
pub fn sweep_taus(k: usize) -> Vec<Complex64> {
    let mut out = equispaced_taus(k);
    for t in [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ] {
        if !out.iter().any(|u| (u - t).norm() < 1e-12) {
            out.push(t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::solver::solve_phi;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lebesgue_examples() {
        let phi = HalfLaurentPoly::monomial(1, c(1.0, 0.0));
        let p = build_para(&phi, c(1.0, 0.0)).unwrap();
        assert_eq!(p.x, HalfLaurentPoly::from_terms(&[(2, c(1.0, 0.0)), (-2, c(1.0, 0.0))]));
        let p = build_para(&phi, c(0.0, 1.0)).unwrap();
        assert_eq!(p.x, HalfLaurentPoly::from_terms(&[(2, c(1.0, 0.0)), (-2, c(0.0, 1.0))]));
        assert!(matches!(build_para(&phi, c(1.1, 0.0)), Err(Error::NonUnimodularTau { .. })));
    }

    #[test]
    fn trig_examples() {
        let b = Branch::new(0.0);
        let phi = HalfLaurentPoly::monomial(1, c(1.0, 0.0));
        let t = trig_form(&build_para(&phi, c(1.0, 0.0)).unwrap(), b).unwrap();
        assert_eq!(t[0], TrigTerm { two_freq: 2, cos: 1.0, sin: 0.0 });
        assert!(t[1..].iter().all(|t| t.cos == 0.0 && t.sin == 0.0));

        let t = trig_form(&build_para(&phi, c(0.0, 1.0)).unwrap(), b).unwrap();
        assert!((t[0].cos - (PI / 4.0).cos()).abs() < 1e-15);
        assert!((t[0].sin - (PI / 4.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn trig_rejects_non_invariant() {
        let p = ParaPoly {
            x: HalfLaurentPoly::from_terms(&[(2, c(1.0, 0.0)), (-2, c(2.0, 0.0))]),
            tau: c(1.0, 0.0),
            trig: None,
        };
        assert!(matches!(trig_form(&p, Branch::new(0.0)), Err(Error::NotTauInvariant { .. })));
    }

    #[test]
    fn reduces_to_classical_for_one_measure() {
        let s = presets::bernstein_szego(c(0.5, 0.0));
        let phi = solve_phi(&s, &MultiIndex::new(vec![1])).unwrap().poly;
        for tau in sweep_taus(8) {
            let p = build_para(&phi, tau).unwrap();
            // z X = z^2 - 0.5 z + τ(1 - 0.5 z)
            let lifted = p.x.shift_half(2);
            let expect = [tau, c(-0.5, 0.0) - 0.5 * tau, c(1.0, 0.0)];
            for (i, e) in expect.iter().enumerate() {
                assert!((lifted.coeff(2 * i as i64) - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn leading_trig_pair_is_sqrt_tau() {
        let s = presets::a2();
        let phi = solve_phi(&s, &MultiIndex::new(vec![1, 1])).unwrap().poly;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let tau = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            let p = build_para(&phi, tau).unwrap();
            let t = trig_form(&p, s.branch()).unwrap();
            let root = s.branch().half_power(tau, 1).unwrap();
            assert!((t[0].cos - root.re).abs() < 1e-13 && (t[0].sin - root.im).abs() < 1e-13);
        }
    }

    #[test]
    fn residual_examples() {
        let leb = presets::lebesgue();
        let phi = HalfLaurentPoly::monomial(1, c(1.0, 0.0));
        let p = build_para(&phi, c(1.0, 0.0)).unwrap();
        let r = para_residuals(&leb, &p, &MultiIndex::new(vec![1])).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0] < 1e-14);

        let s = presets::a2();
        let n = MultiIndex::new(vec![2, 2]);
        let phi = solve_phi(&s, &n).unwrap().poly;
        let p = build_para(&phi, Complex64::from_polar(1.0, 2.1)).unwrap();
        let r = para_residuals(&s, &p, &n).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|v| *v < 1e-9), "{r:?}");

        let s = presets::at2();
        let n = MultiIndex::new(vec![1, 2]);
        let phi = solve_phi(&s, &n).unwrap().poly;
        let p = build_para(&phi, c(-1.0, 0.0)).unwrap();
        let r = para_residuals(&s, &p, &n).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|v| *v < 1e-9), "{r:?}");
    }

    #[test]
    fn sweep_taus_contents() {
        assert_eq!(sweep_taus(8).len(), 8);
        assert_eq!(sweep_taus(3).len(), 6);
        assert_eq!(equispaced_taus(4)[1], Complex64::from_polar(1.0, TAU / 4.0));
    }

    fn arb_phi() -> impl Strategy<Value = HalfLaurentPoly> {
        (1usize..7, prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 7)).prop_map(|(n, cs)| {
            let n = n as i64;
            let mut coeffs: Vec<Complex64> = cs[..n as usize].iter().map(|&(a, b)| c(a, b)).collect();
            coeffs.push(c(1.0, 0.0));
            HalfLaurentPoly::new(-n, coeffs)
        })
    }

    proptest! {
        #[test]
        fn invariance_is_exact_and_pointwise(phi in arb_phi(), angle in 0.0f64..TAU, seed in 0u64..1000) {
            let tau = Complex64::from_polar(1.0, angle);
            let p = build_para(&phi, tau).unwrap();
            prop_assert!(p.invariance_defect() < 1e-15);
            let b = Branch::new(0.0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..100 {
                let z = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU));
                let lhs = p.x.eval(z, b).unwrap();
                let w = Complex64::new(1.0, 0.0) / z.conj();
                let rhs = tau * p.x.eval(w, b).unwrap().conj();
                let scale = lhs.norm().max(1.0) * p.x.coeffs().iter().map(|c| c.norm()).sum::<f64>();
                prop_assert!((lhs - rhs).norm() < 1e-12 * scale);
            }
        }

        #[test]
        fn trig_round_trip(phi in arb_phi(), angle in 0.0f64..TAU) {
            let tau = Complex64::from_polar(1.0, angle);
            let b = Branch::new(0.0);
            let p = build_para(&phi, tau).unwrap();
            let t = trig_form(&p, b).unwrap();
            let half = b.half_power(tau, -1).unwrap() * 0.5;
            for i in 0..200 {
                let theta = TAU * i as f64 / 200.0;
                let direct = half * p.x.eval_angle(theta);
                let scale = p.x.coeffs().iter().map(|c| c.norm()).sum::<f64>();
                prop_assert!((direct.re - eval_trig(&t, theta)).abs() < 1e-12 * scale);
                prop_assert!(direct.im.abs() < 1e-12 * scale);
            }
        }
    }
}
