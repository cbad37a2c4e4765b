//! Laurent polynomials with integer or half-integer exponents.
//!
//! Exponents are stored doubled so that `z^{k/2}` is addressed by the integer
//! `k`. A polynomial keeps a single parity class: every stored exponent has
//! the parity of `two_min`, and consecutive coefficients differ by one in the
//! (undoubled) exponent.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multi-index `n = (n_1, ..., n_r)` of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(r: usize) -> Self {
        MultiIndex(vec![0; r])
    }

    /// Unit vector `e_j`.
    pub fn unit(r: usize, j: usize) -> Self {
        let mut e = vec![0; r];
        e[j] = 1;
        MultiIndex(e)
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    /// `|n| = n_1 + ... + n_r`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, j: usize) -> usize {
        self.0[j]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `n + e_j`.
    pub fn plus_unit(&self, j: usize) -> Self {
        let mut e = self.0.clone();
        e[j] += 1;
        MultiIndex(e)
    }

    /// `2n`.
    pub fn doubled(&self) -> Self {
        MultiIndex(self.0.iter().map(|e| 2 * e).collect())
    }

    /// All indices in `{0..=max}^r`, in lexicographic order.
    pub fn grid(r: usize, max: usize) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zeros(r)];
        for slot in 0..r {
            out = out
                .into_iter()
                .flat_map(|idx| {
                    (0..=max).map(move |v| {
                        let mut e = idx.0.clone();
                        e[slot] = v;
                        MultiIndex(e)
                    })
                })
                .collect();
        }
        out.sort();
        out
    }

    /// All indices with `|n| <= max_total`, in lexicographic order.
    pub fn up_to_total(r: usize, max_total: usize) -> Vec<MultiIndex> {
        Self::grid(r, max_total)
            .into_iter()
            .filter(|n| n.total() <= max_total)
            .collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    /// Parses `"2,1"`, `"(2,1)"` or `"2"`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        body.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::ConfigParse(format!("bad multi-index {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }
}

/// Branch of the square root: `arg` is taken in `[t0, t0 + 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub t0: f64,
}

impl Branch {
    pub fn new(t0: f64) -> Self {
        Branch { t0 }
    }

    /// Maps any angle into `[t0, t0 + 2π)`.
    pub fn normalize(&self, theta: f64) -> f64 {
        let mut r = (theta - self.t0).rem_euclid(TAU);
        if r >= TAU {
            r = 0.0;
        }
        self.t0 + r
    }

    pub fn arg(&self, z: Complex64) -> f64 {
        self.normalize(z.im.atan2(z.re))
    }

    /// `z^{k/2} = |z|^{k/2} exp(i k arg(z) / 2)`.
    pub fn half_power(&self, z: Complex64, k: i64) -> Result<Complex64> {
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroArgument);
        }
        let r = z.norm().powf(k as f64 / 2.0);
        Ok(Complex64::from_polar(r, k as f64 * self.arg(z) / 2.0))
    }

    pub fn sqrt(&self, z: Complex64) -> Result<Complex64> {
        self.half_power(z, 1)
    }
}

/// Laurent polynomial `Σ c_i z^{(two_min + 2i)/2}`.
///
/// Leading and trailing coefficients that are exactly zero are trimmed; no
/// tolerance-based cleanup is ever applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawPoly")]
pub struct HalfLaurentPoly {
    two_min: i64,
    coeffs: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawPoly {
    two_min: i64,
    coeffs: Vec<Complex64>,
}

impl From<RawPoly> for HalfLaurentPoly {
    fn from(raw: RawPoly) -> Self {
        HalfLaurentPoly::new(raw.two_min, raw.coeffs)
    }
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl HalfLaurentPoly {
    pub fn new(two_min: i64, coeffs: Vec<Complex64>) -> Self {
        let lo = coeffs.iter().position(|c| *c != ZERO);
        match lo {
            None => Self::zero(),
            Some(lo) => {
                let hi = coeffs.iter().rposition(|c| *c != ZERO).unwrap();
                HalfLaurentPoly {
                    two_min: two_min + 2 * lo as i64,
                    coeffs: coeffs[lo..=hi].to_vec(),
                }
            }
        }
    }

    pub fn zero() -> Self {
        HalfLaurentPoly { two_min: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, ONE)
    }

    /// `c · z^{two_exp/2}`.
    pub fn monomial(two_exp: i64, c: Complex64) -> Self {
        Self::new(two_exp, vec![c])
    }

    /// Builds a polynomial from `(two_exp, coefficient)` pairs of one parity.
    pub fn from_terms(terms: &[(i64, Complex64)]) -> Self {
        terms
            .iter()
            .fold(Self::zero(), |acc, &(e, c)| acc + Self::monomial(e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Doubled lowest exponent. Zero for the zero polynomial.
    pub fn two_min(&self) -> i64 {
        self.two_min
    }

    /// Doubled highest exponent.
    pub fn two_max(&self) -> i64 {
        self.two_min + 2 * (self.coeffs.len() as i64 - 1).max(0)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Number of unit exponent steps spanned, i.e. the ordinary degree.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of `z^{two_exp/2}`; zero off the support.
    pub fn coeff(&self, two_exp: i64) -> Complex64 {
        let d = two_exp - self.two_min;
        if self.is_zero() || d < 0 || d % 2 != 0 {
            return ZERO;
        }
        self.coeffs.get((d / 2) as usize).copied().unwrap_or(ZERO)
    }

    /// Iterator over `(two_exp, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.two_min + 2 * i as i64, *c))
    }

    pub fn lowest(&self) -> Complex64 {
        self.coeffs.first().copied().unwrap_or(ZERO)
    }

    pub fn highest(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    /// Evaluates with every half power taken on `branch`.
    pub fn eval(&self, z: Complex64, branch: Branch) -> Result<Complex64> {
        if z == ZERO {
            return Err(Error::ZeroArgument);
        }
        let arg = branch.arg(z);
        let ln_r = z.norm().ln();
        Ok(self
            .terms()
            .map(|(k, c)| {
                let h = k as f64 / 2.0;
                c * Complex64::from_polar((h * ln_r).exp(), h * arg)
            })
            .sum())
    }

    /// Evaluates at `z = e^{iθ}` with `z^{k/2} = e^{ikθ/2}`; `theta` is taken
    /// as given, so it must already lie in the branch window.
    pub fn eval_angle(&self, theta: f64) -> Complex64 {
        self.terms()
            .map(|(k, c)| c * Complex64::from_polar(1.0, k as f64 * theta / 2.0))
            .sum()
    }

    /// `p^♯(z) = conj(p(1/z̄))`: `c_k ↦ conj(c_{-k})`.
    pub fn sharp(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        HalfLaurentPoly {
            two_min: -self.two_max(),
            coeffs: self.coeffs.iter().rev().map(|c| c.conj()).collect(),
        }
    }

    /// Multiplication by `z^{k/2}`.
    pub fn shift_half(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        HalfLaurentPoly { two_min: self.two_min + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self::new(self.two_min, self.coeffs.iter().map(|c| c * a).collect())
    }

    /// Ordinary polynomial `z^{-two_min/2} p(z)`.
    pub fn to_ordinary(&self) -> Result<OrdinaryPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(OrdinaryPoly { coeffs: self.coeffs.clone(), two_shift: self.two_min })
    }

    /// Ordinary polynomial `z^{-two_base/2} p(z)` for a nominal lower support
    /// bound `two_base <= two_min`; trimmed low coefficients reappear as zeros.
    pub fn to_ordinary_from(&self, two_base: i64) -> Result<OrdinaryPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let gap = self.two_min - two_base;
        assert!(
            gap >= 0 && gap % 2 == 0,
            "support base {two_base} incompatible with two_min {}",
            self.two_min
        );
        let mut coeffs = vec![ZERO; (gap / 2) as usize];
        coeffs.extend_from_slice(&self.coeffs);
        Ok(OrdinaryPoly { coeffs, two_shift: two_base })
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.is_zero() || other.is_zero() || (self.two_min - other.two_min) % 2 == 0
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        assert!(
            self.same_grid(other),
            "cannot add Laurent polynomials on integer and half-integer grids"
        );
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.scale(Complex64::new(sign, 0.0));
        }
        let lo = self.two_min.min(other.two_min);
        let hi = self.two_max().max(other.two_max());
        let coeffs = (lo..=hi)
            .step_by(2)
            .map(|e| self.coeff(e) + other.coeff(e) * sign)
            .collect();
        Self::new(lo, coeffs)
    }
}

impl Add for HalfLaurentPoly {
    type Output = HalfLaurentPoly;
    fn add(self, rhs: Self) -> Self {
        self.combine(&rhs, 1.0)
    }
}

impl<'a> Add<&'a HalfLaurentPoly> for &'a HalfLaurentPoly {
    type Output = HalfLaurentPoly;
    fn add(self, rhs: Self) -> HalfLaurentPoly {
        self.combine(rhs, 1.0)
    }
}

impl Sub for HalfLaurentPoly {
    type Output = HalfLaurentPoly;
    fn sub(self, rhs: Self) -> Self {
        self.combine(&rhs, -1.0)
    }
}

impl<'a> Sub<&'a HalfLaurentPoly> for &'a HalfLaurentPoly {
    type Output = HalfLaurentPoly;
    fn sub(self, rhs: Self) -> HalfLaurentPoly {
        self.combine(rhs, -1.0)
    }
}

impl Neg for HalfLaurentPoly {
    type Output = HalfLaurentPoly;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul<Complex64> for HalfLaurentPoly {
    type Output = HalfLaurentPoly;
    fn mul(self, a: Complex64) -> Self {
        self.scale(a)
    }
}

impl<'a> Mul<&'a HalfLaurentPoly> for &'a HalfLaurentPoly {
    type Output = HalfLaurentPoly;
    fn mul(self, rhs: Self) -> HalfLaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return HalfLaurentPoly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (k, b) in rhs.coeffs.iter().enumerate() {
                out[i + k] += a * b;
            }
        }
        HalfLaurentPoly::new(self.two_min + rhs.two_min, out)
    }
}

impl Mul for HalfLaurentPoly {
    type Output = HalfLaurentPoly;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl fmt::Display for HalfLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if k % 2 == 0 {
                write!(f, "({c})z^{}", k / 2)?;
            } else {
                write!(f, "({c})z^({k}/2)")?;
            }
        }
        Ok(())
    }
}

/// Ordinary polynomial `Σ coeffs[i] z^i` together with the doubled power of
/// `z` that was factored out of its Laurent source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdinaryPoly {
    pub coeffs: Vec<Complex64>,
    pub two_shift: i64,
}

impl OrdinaryPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Exponent removed from the Laurent source (`two_shift / 2`).
    pub fn shift(&self) -> f64 {
        self.two_shift as f64 / 2.0
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// Value and derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }
}
