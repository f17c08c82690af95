//! Small helpers for complex scalars: JSON forms, finiteness checks, principal roots.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Serde adapter storing a `Complex64` as a `[re, im]` pair.
pub mod pair {
    use super::*;

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        if !re.is_finite() || !im.is_finite() {
            return Err(D::Error::custom("complex scalar must be finite"));
        }
        Ok(Complex64::new(re, im))
    }
}

/// Serde adapter for `Option<Complex64>` in the `[re, im]` form.
pub mod pair_opt {
    use super::*;

    pub fn serialize<S: Serializer>(
        c: &Option<Complex64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        c.map(|c| [c.re, c.im]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Complex64>, D::Error> {
        let v = Option::<[f64; 2]>::deserialize(d)?;
        match v {
            None => Ok(None),
            Some([re, im]) => {
                if !re.is_finite() || !im.is_finite() {
                    return Err(D::Error::custom("complex scalar must be finite"));
                }
                Ok(Some(Complex64::new(re, im)))
            }
        }
    }
}

/// Rejects NaN/Inf components.
pub fn ensure_finite(c: Complex64) -> Result<Complex64> {
    if c.re.is_finite() && c.im.is_finite() {
        Ok(c)
    } else {
        Err(Error::InvalidInput(format!("non-finite scalar {c}")))
    }
}

/// Principal square root: argument in (-pi/2, pi/2].
pub fn principal_sqrt(c: Complex64) -> Complex64 {
    c.sqrt()
}

/// Integer power with negative exponents allowed (z must be nonzero for n < 0).
pub fn powi(z: Complex64, n: i32) -> Complex64 {
    if n >= 0 {
        z.powu(n as u32)
    } else {
        z.powu((-n) as u32).inv()
    }
}

/// True when |a - b| <= tol.
pub fn approx(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}
