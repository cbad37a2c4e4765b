//! Reference computations that share no numerics with the library.

#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss–Kronrod 7-15 with absolute tolerance `tol`.
pub fn adaptive<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    fn go<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Complex64 {
        let (v, err) = kronrod(f, a, b);
        if err <= tol || depth > 40 {
            return v;
        }
        let m = 0.5 * (a + b);
        go(f, a, m, 0.5 * tol, depth + 1) + go(f, m, b, 0.5 * tol, depth + 1)
    }
    go(f, a, b, tol, 0)
}

/// `∫_a^b e^{itθ} dθ / (b − a)`.
pub fn uniform_moment(a: f64, b: f64, t: f64) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let i = Complex64::new(0.0, 1.0);
    ((i * t * b).exp() - (i * t * a).exp()) / (i * t * (b - a))
}

/// Moment of `e^{λ(θ−a)}` on `[a, b]`, normalized to unit mass.
pub fn exponential_moment(a: f64, b: f64, lambda: f64, t: f64) -> Complex64 {
    let s = Complex64::new(lambda, t);
    let raw = ((s * (b - a)).exp() - 1.0) / s * Complex64::from_polar(1.0, t * a);
    let mass = ((lambda * (b - a)).exp() - 1.0) / lambda;
    raw / mass
}

/// `∫ z^k dμ` for `k = 0..=kmax` by the `points`-point trapezoid rule on the
/// full circle, for a smooth periodic density.
pub fn trapezoid_moments<W: Fn(f64) -> f64>(w: W, kmax: usize, points: usize) -> Vec<Complex64> {
    let h = TAU / points as f64;
    let mass: f64 = (0..points).map(|i| w(h * i as f64)).sum::<f64>() * h;
    (0..=kmax)
        .map(|k| {
            (0..points)
                .map(|i| {
                    let th = h * i as f64;
                    Complex64::from_polar(w(th), k as f64 * th)
                })
                .sum::<Complex64>()
                * (h / mass)
        })
        .collect()
}

/// Monic orthogonal polynomials `Φ_0..=Φ_nmax` (ascending coefficients) from
/// the Szegő recursion `Φ_{k+1} = z Φ_k − conj(α_k) Φ_k^*`, driven by the
/// moments `c_k = ∫ z^k dμ` (with `c_{−k} = conj(c_k)`).
pub fn szego_polynomials(c: &[Complex64], nmax: usize) -> Vec<Vec<Complex64>> {
    let moment = |k: i64| if k >= 0 { c[k as usize] } else { c[(-k) as usize].conj() };
    let integral = |p: &[Complex64], shift: i64| -> Complex64 {
        p.iter().enumerate().map(|(i, a)| a * moment(i as i64 + shift)).sum()
    };
    let mut out = vec![vec![Complex64::new(1.0, 0.0)]];
    for k in 0..nmax {
        let phi = &out[k];
        let star: Vec<Complex64> = phi.iter().rev().map(|a| a.conj()).collect();
        let alpha_bar = integral(phi, 1) / integral(&star, 0);
        let mut next = vec![Complex64::new(0.0, 0.0); k + 2];
        for (i, a) in phi.iter().enumerate() {
            next[i + 1] += a;
        }
        for (i, a) in star.iter().enumerate() {
            next[i] -= alpha_bar * a;
        }
        out.push(next);
    }
    out
}

/// Bernstein–Szegő density `(1 − |a|²)/|1 − a e^{iθ}|²`.
pub fn bernstein_szego_density(a: Complex64) -> impl Fn(f64) -> f64 {
    move |th| (1.0 - a.norm_sqr()) / (Complex64::new(1.0, 0.0) - a * Complex64::from_polar(1.0, th)).norm_sqr()
}
