//! Element arithmetic in Aut_h(W)^f: canonical representatives modulo `<f>`,
//! membership in the Real automorphism group, symbolic group descriptors, and
//! the Spin^c(3) witness map for the odd class-IV surface.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contraction::Contraction;
use crate::cx;
use crate::error::{Error, Result};
use crate::polymap::PolyMap;
use crate::realstruct::{Parity, RealStructureSpec};

/// Tolerance for coset comparison after canonicalization.
pub const COSET_TOL: f64 = 1e-9;

/// Class-consistent parameters of a commutant element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CommutantParams {
    /// IV: any invertible matrix.
    Matrix {
        #[serde(with = "cx::pair")]
        a11: Complex64,
        #[serde(with = "cx::pair")]
        a12: Complex64,
        #[serde(with = "cx::pair")]
        a21: Complex64,
        #[serde(with = "cx::pair")]
        a22: Complex64,
    },
    /// III: (a z + b w^r, d w).
    Triangular {
        #[serde(with = "cx::pair")]
        a: Complex64,
        #[serde(with = "cx::pair")]
        d: Complex64,
        #[serde(with = "cx::pair")]
        b: Complex64,
    },
    /// IIa / IIb: (a^r z + b w^r, a w).
    Sheared {
        #[serde(with = "cx::pair")]
        a: Complex64,
        #[serde(with = "cx::pair")]
        b: Complex64,
    },
    /// IIc / II'c: diag(a, d).
    Diagonal {
        #[serde(with = "cx::pair")]
        a: Complex64,
        #[serde(with = "cx::pair")]
        d: Complex64,
    },
}

/// A validated element of Aut_h(W)^f.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutantElement {
    pub map: PolyMap,
    pub params: CommutantParams,
}

fn commute_check(f: &Contraction, g: &PolyMap) -> Result<()> {
    let fm = f.polymap();
    let residual = g.compose(&fm)?.relative_difference(&fm.compose(g)?);
    if residual > COSET_TOL {
        return Err(Error::NotCommuting { residual });
    }
    Ok(())
}

/// Validates g against the commutant table of f's class and extracts its
/// parameters.
pub fn commutant_element(f: &Contraction, g: &PolyMap) -> Result<CommutantElement> {
    if g.is_antiholomorphic() {
        return Err(Error::InvalidInput(
            "commutant elements here are holomorphic; anti-holomorphic maps live in Ah(W)^f".into(),
        ));
    }
    commute_check(f, g)?;
    let params = match f {
        Contraction::Iv { .. } => CommutantParams::Matrix {
            a11: g.coefficient(0, 1, 0),
            a12: g.coefficient(0, 0, 1),
            a21: g.coefficient(1, 1, 0),
            a22: g.coefficient(1, 0, 1),
        },
        Contraction::Iii { r, .. } => CommutantParams::Triangular {
            a: g.coefficient(0, 1, 0),
            d: g.coefficient(1, 0, 1),
            b: g.coefficient(0, 0, *r),
        },
        Contraction::Iia { .. }
        | Contraction::IiaTilde { .. }
        | Contraction::Iib { .. }
        | Contraction::IibTilde { .. } => {
            let r = f.off_exponent();
            CommutantParams::Sheared {
                a: g.coefficient(1, 0, 1),
                b: g.coefficient(0, 0, r),
            }
        }
        Contraction::Iic { .. } | Contraction::IicPrime { .. } => CommutantParams::Diagonal {
            a: g.coefficient(0, 1, 0),
            d: g.coefficient(1, 0, 1),
        },
    };
    Ok(CommutantElement {
        map: g.clone(),
        params,
    })
}

/// The scale invariant that the canonical representative pins into its
/// fundamental annulus, together with the per-f multiplier.
fn coset_scale(f: &Contraction, g: &PolyMap) -> (f64, f64) {
    match f {
        Contraction::Iv { alpha } => {
            let det = g.coefficient(0, 1, 0) * g.coefficient(1, 0, 1)
                - g.coefficient(0, 0, 1) * g.coefficient(1, 1, 0);
            (det.norm(), alpha.norm_sqr())
        }
        Contraction::IicPrime { alpha } => (g.coefficient(0, 1, 0).norm(), alpha.norm()),
        _ => {
            let (_, d2) = f.diagonal();
            (g.coefficient(1, 0, 1).norm(), d2.norm())
        }
    }
}

/// The representative g o f^k with its scale parameter in [mu, 1).
///
/// Coset equality is map equality of canonical representatives.
pub fn canonical_rep(f: &Contraction, g: &CommutantElement) -> Result<CommutantElement> {
    let (value, mu) = coset_scale(f, &g.map);
    if value == 0.0 {
        return Err(Error::InvalidInput("commutant element is singular".into()));
    }
    // value * mu^k in [mu, 1): k + x in (0, 1] for x = ln value / ln mu.
    let x = value.ln() / mu.ln();
    let mut k = (1.0 - x).floor() as i64;
    let fm = f.polymap();
    let mut rep = g.map.compose(&fm.power(k)?)?;
    for _ in 0..4 {
        let (v, _) = coset_scale(f, &rep);
        if v >= mu && v < 1.0 {
            break;
        }
        k += if v < mu { -1 } else { 1 };
        rep = g.map.compose(&fm.power(k)?)?;
    }
    commutant_element(f, &rep)
}

/// True when the two elements represent the same coset in Aut_h(H_f).
pub fn cosets_equal(f: &Contraction, g1: &CommutantElement, g2: &CommutantElement) -> Result<bool> {
    let r1 = canonical_rep(f, g1)?;
    let r2 = canonical_rep(f, g2)?;
    Ok(r1.map.maps_equal(&r2.map, COSET_TOL))
}

/// Symbolic description of a Real automorphism group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub presentation: String,
    pub dimension: u32,
    pub notes: Vec<String>,
}

/// Aut(H_f, s) per the even/odd tables.
pub fn real_automorphism_group(f: &Contraction, s: &RealStructureSpec) -> Result<GroupDescriptor> {
    let flags = f.structural_flags();
    if !(flags.real_coeffs || flags.is_iic_prime) {
        return Err(Error::NoSuchStructure(
            "no Real structures on this contraction".into(),
        ));
    }
    // Odd groups coincide with the even ones except for IV with alpha < 0.
    if s.parity == Parity::Odd {
        if let Contraction::Iv { alpha } = f {
            if flags.real_coeffs && alpha.re < 0.0 {
                return Ok(GroupDescriptor {
                    presentation: "Spin^c(3)".into(),
                    dimension: 4,
                    notes: vec![
                        "S^1 x_{Z_2} SU(2)".into(),
                        "witness: Phi(A) = (det(A)^{1/2}, det(A)^{-1/2} A) on R^*_+ SU(2)".into(),
                    ],
                });
            }
        }
    }
    let d = match f {
        Contraction::Iv { alpha } => GroupDescriptor {
            presentation: format!("GL(2,R)/<{} I2>", alpha.re),
            dimension: 4,
            notes: vec![],
        },
        Contraction::Iii { delta, r } => GroupDescriptor {
            presentation: format!(
                "((R* x R*)/<({}, {})>) x|_rho_{r} R",
                delta.re.powi(*r as i32),
                delta.re
            ),
            dimension: 3,
            notes: vec![format!("rho_{r}(a,d)(b) = a d^-{r} b")],
        },
        Contraction::Iia { delta, r } => GroupDescriptor {
            presentation: format!("(R* x|_rho R)/<({}, 1)>", delta.re),
            dimension: 2,
            notes: vec![format!(
                "elements (a^{r} z + b w^{r}, a w), a in R*, b in R; f is (a, b) = ({}, 1)",
                delta.re
            )],
        },
        Contraction::Iib { alpha } => GroupDescriptor {
            presentation: format!("(R* x|_rho R)/<({}, 1)>", alpha.re),
            dimension: 2,
            notes: vec![format!(
                "elements (a z + b w, a w), a in R*, b in R; f is (a, b) = ({}, 1)",
                alpha.re
            )],
        },
        Contraction::Iic { alpha, delta } => GroupDescriptor {
            presentation: format!("(R* x R*)/<({}, {})>", alpha.re, delta.re),
            dimension: 2,
            notes: vec![],
        },
        Contraction::IicPrime { alpha } => GroupDescriptor {
            presentation: format!("C*/<{}+{}i>", alpha.re, alpha.im),
            dimension: 2,
            notes: vec!["1-dimensional complex torus".into()],
        },
        _ => {
            return Err(Error::NoSuchStructure(
                "tilde classes carry no classified Real automorphism group".into(),
            ))
        }
    };
    Ok(d)
}

/// True iff the element descends to an automorphism of (H_f, s_f): real
/// parameters in the real-coefficient classes, diag(a, conj a) for II'c.
pub fn membership_even(f: &Contraction, g: &CommutantElement) -> Result<bool> {
    commute_check(f, &g.map)?;
    let flags = f.structural_flags();
    let tol = COSET_TOL;
    if flags.is_iic_prime {
        return Ok(match &g.params {
            CommutantParams::Diagonal { a, d } => (a.conj() - d).norm() <= tol,
            _ => false,
        });
    }
    if !flags.real_coeffs {
        return Err(Error::NoSuchStructure(
            "no even Real structure on this contraction".into(),
        ));
    }
    let real = |c: &Complex64| c.im.abs() <= tol;
    Ok(match &g.params {
        CommutantParams::Matrix { a11, a12, a21, a22 } => {
            real(a11) && real(a12) && real(a21) && real(a22)
        }
        CommutantParams::Triangular { a, d, b } => real(a) && real(d) && real(b),
        CommutantParams::Sheared { a, b } => real(a) && real(b),
        CommutantParams::Diagonal { a, d } => real(a) && real(d),
    })
}

/// Splits A in R^*_+ SU(2) as Phi(A) = (det^{1/2}, det^{-1/2} A).
///
/// A must have the quaternionic shape [[a, -conj b], [b, conj a]].
pub fn spinc_witness(m: &[Complex64; 4]) -> Result<(f64, [Complex64; 4])> {
    let tol = 1e-10 * m.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-30);
    if (m[0] - m[3].conj()).norm() > tol || (m[1] + m[2].conj()).norm() > tol {
        return Err(Error::NotQuaternionicShape);
    }
    let det = m[0] * m[3] - m[1] * m[2];
    if det.norm() < 1e-30 {
        return Err(Error::NotQuaternionicShape);
    }
    // det = |a|^2 + |b|^2 is positive real on this subgroup.
    let rho = det.re.sqrt();
    Ok((rho, [m[0] / rho, m[1] / rho, m[2] / rho, m[3] / rho]))
}

/// The circle identification `[rho] -> e^{i pi ln(rho) / ln |alpha|}`.
pub fn spinc_circle_coordinate(rho: f64, alpha: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::PI * rho.ln() / alpha.norm().ln())
}

/// The semidirect-product law of the class III group: (a, d, b) stands for
/// g_{a,d,b}(z, w) = (a z + a b w^r, d w) and rho_r(a, d)(b) = a d^{-r} b.
pub fn iii_semidirect_product(
    lhs: (f64, f64, f64),
    rhs: (f64, f64, f64),
    r: u32,
) -> (f64, f64, f64) {
    let (a1, d1, b1) = lhs;
    let (a2, d2, b2) = rhs;
    // rho_r(a2, d2)^{-1}(b1) + b2
    (a1 * a2, d1 * d2, b2 + d2.powi(r as i32) / a2 * b1)
}

/// g_{a,d,b} as a map, for testing the law against direct composition.
pub fn iii_group_element(a: f64, d: f64, b: f64, r: u32) -> PolyMap {
    PolyMap::triangular(
        Complex64::new(a, 0.0),
        Complex64::new(a * b, 0.0),
        r,
        Complex64::new(d, 0.0),
    )
}
