//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

const MAX_REFINEMENT_STEPS: usize = 10;

/// Solves `a x = b` by LU with partial pivoting followed by iterative
/// refinement with residuals accumulated in double-double precision, so the
/// forward error approaches `ε |x|` whenever `κ(a) ε < 1`. `None` if the
/// factorization is singular.
pub fn solve_refined(a: &DMatrix<Complex64>, b: &DVector<Complex64>) -> Option<DVector<Complex64>> {
    let lu = a.clone().lu();
    let mut x = lu.solve(b)?;
    if x.iter().any(|z| !z.is_finite()) {
        return None;
    }
    let mut last = f64::INFINITY;
    for _ in 0..MAX_REFINEMENT_STEPS {
        let r = accurate_residual(a, b, &x);
        let Some(dx) = lu.solve(&r) else { break };
        let step = dx.norm();
        if !step.is_finite() || step >= last {
            break;
        }
        x += &dx;
        last = step;
        if step <= f64::EPSILON * x.norm() {
            break;
        }
    }
    Some(x)
}

/// Error-free `a + b = s + e`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Compensated sum of exact products, rounded once at the end.
#[derive(Default)]
struct Dot2 {
    hi: f64,
    lo: f64,
}

impl Dot2 {
    fn add(&mut self, v: f64) {
        let (s, e) = two_sum(self.hi, v);
        self.hi = s;
        self.lo += e;
    }

    fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        let e = a.mul_add(b, -p);
        self.add(p);
        self.lo += e;
    }

    fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// `b - a x`, each component accumulated in twice the working precision.
fn accurate_residual(
    a: &DMatrix<Complex64>,
    b: &DVector<Complex64>,
    x: &DVector<Complex64>,
) -> DVector<Complex64> {
    DVector::from_fn(a.nrows(), |i, _| {
        let (mut re, mut im) = (Dot2::default(), Dot2::default());
        re.add(b[i].re);
        im.add(b[i].im);
        for k in 0..a.ncols() {
            let (m, v) = (a[(i, k)], x[k]);
            re.add_product(-m.re, v.re);
            re.add_product(m.im, v.im);
            im.add_product(-m.re, v.im);
            im.add_product(-m.im, v.re);
        }
        Complex64::new(re.value(), im.value())
    })
}

/// Smallest and largest singular values.
pub fn extreme_singular_values(a: &DMatrix<Complex64>) -> (f64, f64) {
    let sv = a.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    (min, max)
}

pub fn determinant(a: &DMatrix<Complex64>) -> Complex64 {
    a.clone().lu().determinant()
}
