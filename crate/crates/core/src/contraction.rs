//! Wehler normal forms of holomorphic contractions of W and the structural
//! predicates gating the classification theorems.
//!
//! The five classes IV, III, IIa, IIb, IIc (plus the subclass II'c and the
//! enlarged tilde classes used for squared contractions) are stored with their
//! defining coefficients. `classify` detects the class of a diagonal or
//! triangular polynomial map; plain IIc pairs are canonicalized by the swap
//! rule |alpha| <= |delta|.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cx;
use crate::error::{Error, Result};
use crate::polymap::PolyMap;

/// Tolerance for structural coefficient identities (delta^r detection, reality).
pub const CLASS_TOL: f64 = 1e-9;
/// Bound for the "alpha != delta^r for all r" membership check of class IIc.
pub const R_MAX: u32 = 64;

/// Class tags, including the internal tilde extensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WehlerClass {
    #[serde(rename = "IV")]
    Iv,
    #[serde(rename = "III")]
    Iii,
    #[serde(rename = "IIa")]
    Iia,
    #[serde(rename = "IIb")]
    Iib,
    #[serde(rename = "IIc")]
    Iic,
    #[serde(rename = "IIcPrime")]
    IicPrime,
    #[serde(rename = "IIaTilde")]
    IiaTilde,
    #[serde(rename = "IIbTilde")]
    IibTilde,
}

impl WehlerClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            WehlerClass::Iv => "IV",
            WehlerClass::Iii => "III",
            WehlerClass::Iia => "IIa",
            WehlerClass::Iib => "IIb",
            WehlerClass::Iic => "IIc",
            WehlerClass::IicPrime => "IIcPrime",
            WehlerClass::IiaTilde => "IIaTilde",
            WehlerClass::IibTilde => "IIbTilde",
        }
    }
}

/// A validated contraction in (extended) Wehler normal form.
#[derive(Debug, Clone, PartialEq)]
pub enum Contraction {
    /// (alpha z, alpha w)
    Iv { alpha: Complex64 },
    /// (delta^r z, delta w), r >= 2
    Iii { delta: Complex64, r: u32 },
    /// (delta^r z + w^r, delta w), r >= 2
    Iia { delta: Complex64, r: u32 },
    /// (alpha z + w, alpha w)
    Iib { alpha: Complex64 },
    /// (alpha z, delta w), alpha != delta^r for all r
    Iic { alpha: Complex64, delta: Complex64 },
    /// (alpha z, conj(alpha) w), alpha not real
    IicPrime { alpha: Complex64 },
    /// (delta^r z + c w^r, delta w)
    IiaTilde {
        delta: Complex64,
        r: u32,
        c: Complex64,
    },
    /// (alpha z + c w, alpha w)
    IibTilde { alpha: Complex64, c: Complex64 },
}

/// Structural predicates used by the existence and chart theorems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuralFlags {
    pub real_coeffs: bool,
    pub positive_diagonal: bool,
    pub negative_diagonal_count: u8,
    pub is_iic_prime: bool,
}

fn check_modulus(name: &str, v: Complex64) -> Result<()> {
    cx::ensure_finite(v)?;
    let m = v.norm();
    if m <= 0.0 || m >= 1.0 {
        return Err(Error::NotContraction(format!(
            "|{name}| = {m} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// Relative coefficient comparison (both arguments nonzero in practice).
fn approx_rel(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm())
}

/// True when alpha = delta^r for some 1 <= r <= R_MAX, with modulus pruning.
fn is_power_of(alpha: Complex64, delta: Complex64, tol: f64) -> Option<u32> {
    let mut p = delta;
    for r in 1..=R_MAX {
        if approx_rel(alpha, p, tol) {
            return Some(r);
        }
        // |delta|^r decreases strictly; once well below |alpha| no match can follow.
        if p.norm() < 0.5 * alpha.norm() {
            return None;
        }
        p *= delta;
    }
    None
}

impl Contraction {
    /// Validates the stored coefficients against the class definition.
    pub fn validate(&self) -> Result<()> {
        match self {
            Contraction::Iv { alpha } => check_modulus("alpha", *alpha),
            Contraction::Iii { delta, r } | Contraction::Iia { delta, r } => {
                if *r < 2 {
                    return Err(Error::NotWehlerForm(format!(
                        "class {} needs r >= 2",
                        self.class().as_str()
                    )));
                }
                check_modulus("delta", *delta)
            }
            Contraction::Iib { alpha } => check_modulus("alpha", *alpha),
            Contraction::Iic { alpha, delta } => {
                check_modulus("alpha", *alpha)?;
                check_modulus("delta", *delta)?;
                if is_power_of(*alpha, *delta, CLASS_TOL).is_some()
                    || is_power_of(*delta, *alpha, CLASS_TOL).is_some()
                {
                    return Err(Error::NotWehlerForm(
                        "IIc requires alpha != delta^r for all r (either order)".into(),
                    ));
                }
                Ok(())
            }
            Contraction::IicPrime { alpha } => {
                check_modulus("alpha", *alpha)?;
                if alpha.im.abs() <= CLASS_TOL {
                    return Err(Error::NotWehlerForm("II'c requires alpha not real".into()));
                }
                Ok(())
            }
            Contraction::IiaTilde { delta, r, c } => {
                if *r < 2 {
                    return Err(Error::NotWehlerForm("IIaTilde needs r >= 2".into()));
                }
                cx::ensure_finite(*c)?;
                check_modulus("delta", *delta)
            }
            Contraction::IibTilde { alpha, c } => {
                cx::ensure_finite(*c)?;
                check_modulus("alpha", *alpha)
            }
        }
    }

    pub fn class(&self) -> WehlerClass {
        match self {
            Contraction::Iv { .. } => WehlerClass::Iv,
            Contraction::Iii { .. } => WehlerClass::Iii,
            Contraction::Iia { .. } => WehlerClass::Iia,
            Contraction::Iib { .. } => WehlerClass::Iib,
            Contraction::Iic { .. } => WehlerClass::Iic,
            Contraction::IicPrime { .. } => WehlerClass::IicPrime,
            Contraction::IiaTilde { .. } => WehlerClass::IiaTilde,
            Contraction::IibTilde { .. } => WehlerClass::IibTilde,
        }
    }

    pub fn is_tilde(&self) -> bool {
        matches!(
            self,
            Contraction::IiaTilde { .. } | Contraction::IibTilde { .. }
        )
    }

    /// The pair of diagonal coefficients (first, second coordinate).
    pub fn diagonal(&self) -> (Complex64, Complex64) {
        match self {
            Contraction::Iv { alpha } => (*alpha, *alpha),
            Contraction::Iii { delta, r }
            | Contraction::Iia { delta, r }
            | Contraction::IiaTilde { delta, r, .. } => (cx::powi(*delta, *r as i32), *delta),
            Contraction::Iib { alpha } | Contraction::IibTilde { alpha, .. } => (*alpha, *alpha),
            Contraction::Iic { alpha, delta } => (*alpha, *delta),
            Contraction::IicPrime { alpha } => (*alpha, alpha.conj()),
        }
    }

    /// Off-diagonal coefficient of the w^r monomial (zero for diagonal classes).
    pub fn off_diagonal(&self) -> Complex64 {
        match self {
            Contraction::Iia { .. } | Contraction::Iib { .. } => Complex64::new(1.0, 0.0),
            Contraction::IiaTilde { c, .. } | Contraction::IibTilde { c, .. } => *c,
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Exponent r of the off-diagonal monomial (1 for IIb-type, r for IIa-type).
    pub fn off_exponent(&self) -> u32 {
        match self {
            Contraction::Iii { r, .. }
            | Contraction::Iia { r, .. }
            | Contraction::IiaTilde { r, .. } => *r,
            _ => 1,
        }
    }

    /// Renders the contraction as a PolyMap.
    pub fn polymap(&self) -> PolyMap {
        let (d1, d2) = self.diagonal();
        let off = self.off_diagonal();
        if off.norm() == 0.0 {
            PolyMap::diagonal(d1, d2)
        } else {
            PolyMap::triangular(d1, off, self.off_exponent(), d2)
        }
    }

    /// Flags controlling the existence and chart theorems.
    pub fn structural_flags(&self) -> StructuralFlags {
        let (d1, d2) = self.diagonal();
        let coeffs = [d1, d2, self.off_diagonal()];
        let real_coeffs = !matches!(self, Contraction::IicPrime { .. })
            && coeffs.iter().all(|c| c.im.abs() <= CLASS_TOL);
        let neg = |c: Complex64| c.im.abs() <= CLASS_TOL && c.re < 0.0;
        let negative_diagonal_count = if real_coeffs {
            neg(d1) as u8 + neg(d2) as u8
        } else {
            0
        };
        StructuralFlags {
            real_coeffs,
            positive_diagonal: real_coeffs && d1.re > 0.0 && d2.re > 0.0,
            negative_diagonal_count,
            is_iic_prime: matches!(self, Contraction::IicPrime { .. }),
        }
    }

    /// Swap-canonical representative: for IIc orders the pair |alpha| <= |delta|
    /// (lexicographic (re, im) tie-break); all other classes are unchanged.
    pub fn canonicalized(&self) -> Contraction {
        match self {
            Contraction::Iic { alpha, delta } => {
                let (a, d) = canonical_pair(*alpha, *delta);
                Contraction::Iic { alpha: a, delta: d }
            }
            other => other.clone(),
        }
    }
}

fn canonical_pair(a: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let (na, nd) = (a.norm(), d.norm());
    let keep = if na < nd {
        true
    } else if na > nd {
        false
    } else {
        (a.re, a.im) <= (d.re, d.im)
    };
    if keep {
        (a, d)
    } else {
        (d, a)
    }
}

/// Detects the Wehler class of a holomorphic polynomial contraction.
///
/// The map must fix 0 formally and its monomial support must match one of the
/// classes of the classification; tilde shapes are rejected here (they are
/// accepted as explicit `Contraction` input, but never produced from a map).
pub fn classify(map: &PolyMap) -> Result<Contraction> {
    let found = classify_extended(map)?;
    if found.is_tilde() {
        return Err(Error::NotWehlerForm(
            "off-diagonal coefficient must be 1 (tilde classes are internal only)".into(),
        ));
    }
    Ok(found)
}

/// Like [`classify`] but admits the tilde classes (used for squared contractions).
pub fn classify_extended(map: &PolyMap) -> Result<Contraction> {
    if map.is_antiholomorphic() {
        return Err(Error::NotWehlerForm(
            "contraction must be holomorphic".into(),
        ));
    }
    // Q must be exactly d * w.
    let q = map.q_terms();
    if q.len() != 1 || (q[0].pz, q[0].pw) != (0, 1) {
        return Err(Error::NotWehlerForm(
            "second coordinate must be a multiple of w".into(),
        ));
    }
    let d2 = q[0].coeff;
    let mut d1 = Complex64::ZERO;
    let mut off = Complex64::ZERO;
    let mut r_off = 0u32;
    for t in map.p_terms() {
        if (t.pz, t.pw) == (1, 0) {
            d1 = t.coeff;
        } else if t.pz == 0 && t.pw >= 1 {
            if off != Complex64::ZERO {
                return Err(Error::NotWehlerForm(
                    "too many off-diagonal monomials".into(),
                ));
            }
            off = t.coeff;
            r_off = t.pw;
        } else {
            return Err(Error::NotWehlerForm(format!(
                "unsupported monomial z^{} w^{} in first coordinate",
                t.pz, t.pw
            )));
        }
    }
    check_modulus("first diagonal coefficient", d1)?;
    check_modulus("second diagonal coefficient", d2)?;

    let found = if off.norm() > 0.0 {
        // Triangular support: IIb-type (r = 1) or IIa-type (r >= 2).
        let tilde = !cx::approx(off, Complex64::new(1.0, 0.0), CLASS_TOL);
        if r_off == 1 {
            if !approx_rel(d1, d2, CLASS_TOL) {
                return Err(Error::NotWehlerForm(
                    "(alpha z + c w, beta w) requires alpha = beta".into(),
                ));
            }
            if tilde {
                Contraction::IibTilde { alpha: d2, c: off }
            } else {
                Contraction::Iib { alpha: d2 }
            }
        } else {
            if !approx_rel(d1, cx::powi(d2, r_off as i32), CLASS_TOL) {
                return Err(Error::NotWehlerForm(
                    "(a z + c w^r, delta w) requires a = delta^r".into(),
                ));
            }
            if tilde {
                Contraction::IiaTilde {
                    delta: d2,
                    r: r_off,
                    c: off,
                }
            } else {
                Contraction::Iia {
                    delta: d2,
                    r: r_off,
                }
            }
        }
    } else if approx_rel(d2, d1.conj(), CLASS_TOL) && d1.im.abs() > CLASS_TOL {
        // II'c keeps the input orientation of alpha.
        Contraction::IicPrime { alpha: d1 }
    } else {
        let (a, d) = canonical_pair(d1, d2);
        if approx_rel(a, d, CLASS_TOL) {
            Contraction::Iv { alpha: a }
        } else if let Some(r) = is_power_of(a, d, CLASS_TOL) {
            if r >= 2 {
                Contraction::Iii { delta: d, r }
            } else {
                // r = 1 with the approx above already caught; defensive.
                Contraction::Iv { alpha: a }
            }
        } else {
            Contraction::Iic { alpha: a, delta: d }
        }
    };
    found.validate()?;
    Ok(found)
}

/// Biholomorphism test per the classification: equal normal forms, or a
/// swapped IIc-family coefficient pair.
pub fn is_biholomorphic_pair(f1: &Contraction, f2: &Contraction) -> bool {
    let (a, b) = (f1.canonicalized(), f2.canonicalized());
    let tol = 1e-10;
    match (&a, &b) {
        (Contraction::IicPrime { alpha: x }, Contraction::IicPrime { alpha: y }) => {
            cx::approx(*x, *y, tol) || cx::approx(*x, y.conj(), tol)
        }
        _ => a.class() == b.class() && a.polymap().maps_equal(&b.polymap(), tol),
    }
}

// JSON form: { "class": "IV" | ..., "alpha"/"delta": [re, im], "r": int?, "c": [re, im]? }.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContractionRepr {
    class: WehlerClass,
    #[serde(
        default,
        with = "cx::pair_opt",
        skip_serializing_if = "Option::is_none"
    )]
    alpha: Option<Complex64>,
    #[serde(
        default,
        with = "cx::pair_opt",
        skip_serializing_if = "Option::is_none"
    )]
    delta: Option<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(
        default,
        with = "cx::pair_opt",
        skip_serializing_if = "Option::is_none"
    )]
    c: Option<Complex64>,
}

impl Serialize for Contraction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut repr = ContractionRepr {
            class: self.class(),
            alpha: None,
            delta: None,
            r: None,
            c: None,
        };
        match self {
            Contraction::Iv { alpha } | Contraction::Iib { alpha } => repr.alpha = Some(*alpha),
            Contraction::Iii { delta, r } | Contraction::Iia { delta, r } => {
                repr.delta = Some(*delta);
                repr.r = Some(*r);
            }
            Contraction::Iic { alpha, delta } => {
                repr.alpha = Some(*alpha);
                repr.delta = Some(*delta);
            }
            Contraction::IicPrime { alpha } => repr.alpha = Some(*alpha),
            Contraction::IiaTilde { delta, r, c } => {
                repr.delta = Some(*delta);
                repr.r = Some(*r);
                repr.c = Some(*c);
            }
            Contraction::IibTilde { alpha, c } => {
                repr.alpha = Some(*alpha);
                repr.c = Some(*c);
            }
        }
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Contraction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ContractionRepr::deserialize(d)?;
        let need = |v: Option<Complex64>, name: &str| {
            v.ok_or_else(|| {
                D::Error::custom(format!("class {:?} requires field '{name}'", repr.class))
            })
        };
        let found = match repr.class {
            WehlerClass::Iv => Contraction::Iv {
                alpha: need(repr.alpha, "alpha")?,
            },
            WehlerClass::Iii => Contraction::Iii {
                delta: need(repr.delta, "delta")?,
                r: repr
                    .r
                    .ok_or_else(|| D::Error::custom("class III requires field 'r'"))?,
            },
            WehlerClass::Iia => Contraction::Iia {
                delta: need(repr.delta, "delta")?,
                r: repr
                    .r
                    .ok_or_else(|| D::Error::custom("class IIa requires field 'r'"))?,
            },
            WehlerClass::Iib => Contraction::Iib {
                alpha: need(repr.alpha, "alpha")?,
            },
            WehlerClass::Iic => Contraction::Iic {
                alpha: need(repr.alpha, "alpha")?,
                delta: need(repr.delta, "delta")?,
            }
            .canonicalized(),
            WehlerClass::IicPrime => Contraction::IicPrime {
                alpha: need(repr.alpha, "alpha")?,
            },
            WehlerClass::IiaTilde => Contraction::IiaTilde {
                delta: need(repr.delta, "delta")?,
                r: repr
                    .r
                    .ok_or_else(|| D::Error::custom("class IIaTilde requires field 'r'"))?,
                c: need(repr.c, "c")?,
            },
            WehlerClass::IibTilde => Contraction::IibTilde {
                alpha: need(repr.alpha, "alpha")?,
                c: need(repr.c, "c")?,
            },
        };
        found.validate().map_err(D::Error::custom)?;
        Ok(found)
    }
}
