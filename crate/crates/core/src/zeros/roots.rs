//! Polynomial roots from balanced companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Leading coefficients below this magnitude are rejected.
pub const MIN_LEADING: f64 = 1e-300;
const NEWTON_STEPS: usize = 3;

/// All roots of `Σ coeffs[i] z^i`, with multiplicity. Exact zero low-order
/// coefficients yield exact zero roots.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let hi = match coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0)) {
        Some(hi) => hi,
        None => return Err(Error::ZeroPolynomial),
    };
    if hi + 1 < coeffs.len() || coeffs[hi].norm() < MIN_LEADING {
        // trailing exact zeros mean the nominal leading coefficient vanished
        let lead = if hi + 1 < coeffs.len() { 0.0 } else { coeffs[hi].norm() };
        return Err(Error::DegenerateLeading { lead });
    }
    let lo = coeffs.iter().position(|c| *c != Complex64::new(0.0, 0.0)).unwrap();
    let mut out = vec![Complex64::new(0.0, 0.0); lo];
    let core = &coeffs[lo..=hi];
    let degree = core.len() - 1;
    if degree == 0 {
        return Ok(out);
    }
    let lead = core[degree];
    let monic: Vec<Complex64> = core.iter().map(|c| c / lead).collect();
    let mut eig = if degree == 1 {
        vec![-monic[0]]
    } else {
        companion_eigenvalues(&monic)
    };
    for z in &mut eig {
        *z = polish(core, *z);
    }
    out.extend(eig);
    Ok(out)
}

fn companion_eigenvalues(monic: &[Complex64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let mut c = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        c[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        c[(i, n - 1)] = -monic[i];
    }
    balance(&mut c);
    let schur = c
        .clone()
        .try_schur(f64::EPSILON, 1000 * n)
        .unwrap_or_else(|| c.schur());
    let (_, t) = schur.unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}

/// Parlett–Reinsch diagonal balancing with powers of two.
fn balance(a: &mut DMatrix<Complex64>) {
    let n = a.nrows();
    let radix = 2.0f64;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += a[(j, i)].l1_norm();
                    row += a[(i, j)].l1_norm();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let s = col + row;
            let mut g = row / radix;
            while col < g {
                f *= radix;
                col *= radix * radix;
            }
            g = row * radix;
            while col > g {
                f /= radix;
                col /= radix * radix;
            }
            if (col + row) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Up to three Newton steps, each kept only if it lowers `|p(z)|`.
fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let eval = |z: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    let (mut p, mut dp) = eval(z);
    for _ in 0..NEWTON_STEPS {
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let (pn, dpn) = eval(next);
        if !(pn.norm() < p.norm()) {
            break;
        }
        z = next;
        p = pn;
        dp = dpn;
    }
    z
}
