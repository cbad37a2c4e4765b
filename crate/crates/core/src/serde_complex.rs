//! Complex numbers as `[re, im]`; a bare number is accepted as a real value.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Pair([f64; 2]),
    Real(f64),
}

pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
    Ok(match Repr::deserialize(d)? {
        Repr::Pair([re, im]) => Complex64::new(re, im),
        Repr::Real(re) => Complex64::new(re, 0.0),
    })
}
