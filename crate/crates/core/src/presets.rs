//! Named systems used throughout the tests and the CLI.
//!
//! | name         | description                                                   |
//! |--------------|---------------------------------------------------------------|
//! | `SYS-LEB`    | normalized Lebesgue measure on `[0, 2π]`, `t0 = 0`            |
//! | `SYS-BS:a`   | Bernstein–Szegő weight `(1-|a|²)/|1 - a e^{iθ}|²` on `[0, 2π]`  |
//! | `SYS-A2`     | Angelesco, uniform on `[0.2, 1.2]` and `[2.0, 3.0]`, `t0 = 0` |
//! | `SYS-AT2`    | AT on `[0.5, 2.5]`, weights `1` and `e^{θ - 0.5}`, `t0 = 0.5` |
//!
//! Every preset is normalized to unit mass per component.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::{make_angelesco_system, make_at_system, Arc, MeasureSystem, Weight};

pub const PRESET_NAMES: [&str; 4] = ["SYS-LEB", "SYS-BS:<a>", "SYS-A2", "SYS-AT2"];

fn arc(a: f64, b: f64) -> Arc {
    Arc::new(a, b).expect("preset arc")
}

pub fn lebesgue() -> MeasureSystem {
    make_at_system(Arc::full(0.0), &[Weight::Uniform], &[])
        .and_then(|s| s.normalized())
        .expect("SYS-LEB")
}

pub fn bernstein_szego(a: Complex64) -> MeasureSystem {
    make_at_system(Arc::full(0.0), &[Weight::BernsteinSzego { a }], &[])
        .and_then(|s| s.normalized())
        .expect("SYS-BS")
}

pub fn a2() -> MeasureSystem {
    make_angelesco_system(
        &[arc(0.2, 1.2), arc(2.0, 3.0)],
        &[Weight::Uniform, Weight::Uniform],
        &[],
        0.0,
    )
    .and_then(|s| s.normalized())
    .expect("SYS-A2")
}

pub fn at2() -> MeasureSystem {
    make_at_system(
        arc(0.5, 2.5),
        &[Weight::Uniform, Weight::Exponential { lambda: 1.0 }],
        &[],
    )
    .and_then(|s| s.normalized())
    .expect("SYS-AT2")
}

/// Resolves a preset name. `SYS-BS:<a>` accepts a real `a` or `re,im`.
pub fn preset(name: &str) -> Result<MeasureSystem> {
    match name.trim() {
        "SYS-LEB" => Ok(lebesgue()),
        "SYS-A2" => Ok(a2()),
        "SYS-AT2" => Ok(at2()),
        other => {
            let param = other
                .strip_prefix("SYS-BS:")
                .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
            let parts: Vec<f64> = param
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::UnknownPreset(name.to_string()))?;
            let a = match parts.as_slice() {
                [re] => Complex64::new(*re, 0.0),
                [re, im] => Complex64::new(*re, *im),
                _ => return Err(Error::UnknownPreset(name.to_string())),
            };
            if a.norm() >= 1.0 {
                return Err(Error::InvalidWeight(format!("Bernstein–Szegő parameter |{a}| >= 1")));
            }
            Ok(bernstein_szego(a))
        }
    }
}

/// Two-arc Angelesco systems around `SYS-A2` used by the `Φ_n` zero scan.
pub fn a2_family() -> Vec<(String, MeasureSystem)> {
    let normalized = |arcs: [Arc; 2], weights: [Weight; 2]| {
        make_angelesco_system(&arcs, &weights, &[], 0.0)
            .and_then(|s| s.normalized())
            .expect("A2 family member")
    };
    vec![
        ("SYS-A2".to_string(), a2()),
        (
            "A2-wide-gap".to_string(),
            normalized([arc(0.2, 1.2), arc(3.5, 4.5)], [Weight::Uniform, Weight::Uniform]),
        ),
        (
            "A2-adjacent".to_string(),
            normalized([arc(0.5, 1.5), arc(1.5, 2.5)], [Weight::Uniform, Weight::Uniform]),
        ),
        (
            "A2-unequal".to_string(),
            normalized([arc(0.1, 0.6), arc(1.0, 4.0)], [Weight::Uniform, Weight::Uniform]),
        ),
        (
            "A2-jacobi".to_string(),
            normalized(
                [arc(0.2, 1.2), arc(2.0, 3.0)],
                [Weight::Jacobi { gamma: 1.0, delta: 2.0 }, Weight::Exponential { lambda: -1.0 }],
            ),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::SystemTag;

    #[test]
    fn preset_lookup() {
        assert_eq!(preset("SYS-A2").unwrap().tag(), SystemTag::Angelesco);
        assert_eq!(preset("SYS-AT2").unwrap().t0(), 0.5);
        assert_eq!(preset("SYS-LEB").unwrap().r(), 1);
        let bs = preset("SYS-BS:0.5").unwrap();
        assert_eq!(bs.components()[0].weight, Weight::BernsteinSzego { a: Complex64::new(0.5, 0.0) });
        assert!(preset("SYS-BS:0.2,0.3").is_ok());
        assert!(matches!(preset("SYS-XYZ"), Err(Error::UnknownPreset(_))));
        assert!(preset("SYS-BS:1.5").is_err());
    }

    #[test]
    fn presets_have_unit_mass() {
        for s in [lebesgue(), a2(), at2(), bernstein_szego(Complex64::new(0.5, 0.0))] {
            for j in 0..s.r() {
                assert!((s.moment(j, 0).unwrap() - 1.0).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn family_is_angelesco() {
        for (_, s) in a2_family() {
            assert_eq!(s.tag(), SystemTag::Angelesco);
        }
    }
}
