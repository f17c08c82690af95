//! Real Picard data: the conjugation involution on Pic(H) = C^*, existence
//! and coefficient circle of Real structures on the line bundles L_zeta, and
//! the Real Picard group descriptor.
//!
//! The closed-form circle rule is cross-checked by simulating (nu phi_0)^2 on
//! total-space samples of L_zeta = (W x C) / <(f, zeta .)>.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contraction::Contraction;
use crate::cx;
use crate::error::{Error, Result};
use crate::realstruct::{Parity, RealStructureSpec};
use crate::sampling::{self, SampleRng};
use crate::topology;

/// Existence status of Real structures on L_zeta.
///
/// JSON form: `"none"` or `{"circle_radius": r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BundleRealStructures {
    None,
    /// The set is the circle {nu phi_0 : |nu| = radius}.
    Circle {
        radius: f64,
    },
}

impl Serialize for BundleRealStructures {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BundleRealStructures::None => "none".serialize(s),
            BundleRealStructures::Circle { radius } => {
                let mut m = std::collections::BTreeMap::new();
                m.insert("circle_radius", radius);
                m.serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for BundleRealStructures {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Tag(String),
            Circle { circle_radius: f64 },
        }
        match Repr::deserialize(d)? {
            Repr::Tag(t) if t == "none" => Ok(BundleRealStructures::None),
            Repr::Tag(t) => Err(D::Error::custom(format!("unknown status '{t}'"))),
            Repr::Circle { circle_radius } => Ok(BundleRealStructures::Circle {
                radius: circle_radius,
            }),
        }
    }
}

/// zeta together with the Real-structure status of L_zeta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PicardDatum {
    #[serde(with = "cx::pair")]
    pub zeta: Complex64,
    pub parity: Parity,
    pub status: BundleRealStructures,
}

/// The involution induced on Pic(H) = C^*: plain conjugation.
pub fn pic_involution(zeta: Complex64) -> Result<Complex64> {
    if zeta.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    cx::ensure_finite(zeta)?;
    Ok(zeta.conj())
}

/// Closed-form rule: even structures exist for all real zeta (circle radius 1);
/// odd ones only for zeta > 0 (radius sqrt zeta); nothing off the real axis.
pub fn real_structures_on_line_bundle(parity: Parity, zeta: Complex64) -> Result<PicardDatum> {
    if zeta.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    cx::ensure_finite(zeta)?;
    let status = if zeta.im != 0.0 {
        BundleRealStructures::None
    } else {
        match parity {
            Parity::Even => BundleRealStructures::Circle { radius: 1.0 },
            Parity::Odd => {
                if zeta.re > 0.0 {
                    BundleRealStructures::Circle {
                        radius: zeta.re.sqrt(),
                    }
                } else {
                    BundleRealStructures::None
                }
            }
        }
    };
    Ok(PicardDatum {
        zeta,
        parity,
        status,
    })
}

/// Descriptor of Pic_R(H) and its comparison with Pic(H)(R).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicRealGroup {
    pub presentation: String,
    pub components: u32,
    /// Classes of Pic(H)(R) not hit by Pic_R(H) -> Pic(H)(R).
    pub non_surjective_on: Option<String>,
}

pub fn pic_real_group(parity: Parity) -> PicRealGroup {
    match parity {
        Parity::Even => PicRealGroup {
            presentation: "R*".into(),
            components: 2,
            non_surjective_on: None,
        },
        Parity::Odd => PicRealGroup {
            presentation: "R_{>0}".into(),
            components: 1,
            non_surjective_on: Some("zeta < 0".into()),
        },
    }
}

/// Simulates (nu phi_0)^2 on total-space samples of L_zeta and decides whether
/// it is the identity of the quotient bundle.
///
/// phi_0 is induced by (x, z) -> (lift(x), conj z); the squared map is
/// (lift^2(x), |nu|^2 z), which is the identity iff lift^2 = f^k on W and
/// |nu|^2 = zeta^k on the fiber.
pub fn verify_bundle_involution(
    f: &Contraction,
    s: &RealStructureSpec,
    zeta: f64,
    nu: Complex64,
    samples: usize,
    rng: &mut SampleRng,
) -> Result<bool> {
    if zeta == 0.0 || !zeta.is_finite() {
        return Err(Error::NotRealZeta);
    }
    let lift_sq = s.lift.compose(&s.lift)?;
    let nu_sq = nu.norm_sqr();
    for _ in 0..samples.max(1) {
        let (x0, x1) = sampling::w_point(rng);
        let (y0, y1) = lift_sq.evaluate(x0, x1)?;
        // base must return to the same Hopf point
        let Some(k) = topology::find_deck_shift(f, (y0, y1), (x0, x1), 16, 1e-8) else {
            return Ok(false);
        };
        // fiber: |nu|^2 z must equal zeta^{-k'} z with the matching deck power
        let fiber_factor = nu_sq * zeta.powi(k as i32);
        if (fiber_factor - 1.0).abs() > 1e-8 * fiber_factor.abs().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The conjugation action of C^* id on Real structures of L_zeta reaches the
/// whole circle: solves (z/|z|)^2 = target on the unit circle.
pub fn circle_action_solve(target: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, target.arg() / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realstruct::canonical_structure;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn involution_is_conjugation() {
        assert_eq!(pic_involution(c(2.0, 3.0)).unwrap(), c(2.0, -3.0));
        assert_eq!(pic_involution(c(-5.0, 0.0)).unwrap(), c(-5.0, 0.0));
        assert_eq!(pic_involution(c(0.0, 1.0)).unwrap(), c(0.0, -1.0));
        assert!(matches!(
            pic_involution(c(0.0, 0.0)),
            Err(Error::ZeroArgument)
        ));
    }

    #[test]
    fn circle_rule() {
        let d = real_structures_on_line_bundle(Parity::Even, c(-2.0, 0.0)).unwrap();
        assert_eq!(d.status, BundleRealStructures::Circle { radius: 1.0 });

        let d = real_structures_on_line_bundle(Parity::Odd, c(4.0, 0.0)).unwrap();
        assert_eq!(d.status, BundleRealStructures::Circle { radius: 2.0 });

        let d = real_structures_on_line_bundle(Parity::Odd, c(-2.0, 0.0)).unwrap();
        assert_eq!(d.status, BundleRealStructures::None);

        let d = real_structures_on_line_bundle(Parity::Even, c(1.0, 0.5)).unwrap();
        assert_eq!(d.status, BundleRealStructures::None);
    }

    #[test]
    fn datum_json_shape() {
        let d = real_structures_on_line_bundle(Parity::Odd, c(4.0, 0.0)).unwrap();
        let v = serde_json::to_value(d).unwrap();
        assert_eq!(v["status"]["circle_radius"].as_f64().unwrap(), 2.0);
        let back: PicardDatum = serde_json::from_value(v).unwrap();
        assert_eq!(back.status, d.status);

        let d = real_structures_on_line_bundle(Parity::Odd, c(-4.0, 0.0)).unwrap();
        let v = serde_json::to_value(d).unwrap();
        assert_eq!(v["status"], "none");
    }

    #[test]
    fn group_descriptor() {
        assert_eq!(pic_real_group(Parity::Even).presentation, "R*");
        assert_eq!(pic_real_group(Parity::Odd).presentation, "R_{>0}");
        assert_eq!(
            pic_real_group(Parity::Odd).non_surjective_on.as_deref(),
            Some("zeta < 0")
        );
    }

    #[test]
    fn simulation_matches_circle_rule() {
        let mut rng = sampling::rng_from_seed(11);
        let f = Contraction::Iv { alpha: c(0.5, 0.0) };

        let even = canonical_structure(&f, Parity::Even).unwrap();
        assert!(verify_bundle_involution(&f, &even, -2.0, c(1.0, 0.0), 8, &mut rng).unwrap());
        assert!(!verify_bundle_involution(&f, &even, -2.0, c(2.0, 0.0), 8, &mut rng).unwrap());

        let odd = canonical_structure(&f, Parity::Odd).unwrap();
        assert!(verify_bundle_involution(&f, &odd, 4.0, c(2.0, 0.0), 8, &mut rng).unwrap());
        assert!(!verify_bundle_involution(&f, &odd, 4.0, c(1.0, 0.0), 8, &mut rng).unwrap());
        assert!(!verify_bundle_involution(&f, &odd, -4.0, c(2.0, 0.0), 8, &mut rng).unwrap());
    }

    #[test]
    fn circle_action_surjective() {
        let t = Complex64::from_polar(1.0, 2.5);
        let z = circle_action_solve(t);
        assert!(((z / z.norm()).powu(2) - t).norm() < 1e-12);
    }
}
