//! Parity of lifts, existence of Real structures, the canonical models, and
//! the constructive normalization psi reducing any commuting anti-holomorphic
//! lift to its canonical model.
//!
//! The normalizations follow the per-class solved systems: square roots of the
//! unit-modulus parameters, a rank-1 real 2x2 solve for the off-diagonal
//! coefficient, the real-form basis construction for class IV, and the
//! quaternionic basis (e1, a(e1)) for class IV with negative parameter.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contraction::Contraction;
use crate::cx;
use crate::error::{Error, Result};
use crate::flows;
use crate::polymap::PolyMap;

/// Tolerance for the involution / odd-square / commutation preconditions.
pub const STRUCTURE_TOL: f64 = 1e-9;
/// Residual allowed when verifying psi o s0 o psi^{-1} = phi.
pub const NORMALIZE_TOL: f64 = 1e-9;
/// Largest |n| accepted in lift^2 = f^n.
pub const DECK_POWER_MAX: i64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Which canonical lift the structure reduces to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CanonicalModel {
    /// c (real coefficients, even)
    StandardC,
    /// c' (II'c, even)
    StandardCPrime,
    /// c o f^{1/2} (real positive diagonal, odd)
    OddCF,
    /// c' o f^{1/2} (II'c, odd)
    OddCPrimeF,
    /// J o f^{1/2} (IV with negative alpha, odd)
    OddJF,
}

/// A lift of a Real structure with its parity data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealStructureSpec {
    pub lift: PolyMap,
    pub parity: Parity,
    pub deck_power: i64,
    pub model: CanonicalModel,
}

/// Existence flags per the anti-holomorphic automorphism criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceFlags {
    pub any_antiholomorphic: bool,
    pub even_exists: bool,
    pub odd_exists: bool,
}

fn check_commutes(f: &Contraction, lift: &PolyMap) -> Result<()> {
    let fm = f.polymap();
    let lhs = lift.compose(&fm)?;
    let rhs = fm.compose(lift)?;
    let residual = lhs.relative_difference(&rhs);
    if residual > STRUCTURE_TOL {
        return Err(Error::NotCommuting { residual });
    }
    Ok(())
}

/// The unique n with lift^2 = f^n, and its parity.
///
/// n is estimated from the modulus of the second diagonal coefficient of
/// lift^2 and then verified by exact map comparison; |n| <= 8.
pub fn parity_of_lift(f: &Contraction, lift: &PolyMap) -> Result<(i64, Parity)> {
    if !lift.is_antiholomorphic() {
        return Err(Error::NotAntiholomorphic);
    }
    check_commutes(f, lift)?;
    let sq = lift.compose(lift)?;
    let (d1, d2) = f.diagonal();
    // Prefer the w-coefficient of Q (the delta slot); fall back to the z slot.
    let (slot, base) = {
        let qw = sq.coefficient(1, 0, 1);
        if qw.norm() > 0.0 {
            (qw, d2)
        } else {
            (sq.coefficient(0, 1, 0), d1)
        }
    };
    if slot.norm() == 0.0 {
        return Err(Error::NotDeckPower(
            "lift square has no diagonal part".into(),
        ));
    }
    let n = (slot.norm().ln() / base.norm().ln()).round() as i64;
    if n.abs() > DECK_POWER_MAX {
        return Err(Error::NotDeckPower(format!(
            "estimated power {n} exceeds bound {DECK_POWER_MAX}"
        )));
    }
    let fn_map = f.polymap().power(n)?;
    let residual = sq.relative_difference(&fn_map);
    if residual > STRUCTURE_TOL {
        return Err(Error::NotDeckPower(format!(
            "lift^2 differs from f^{n} by {residual:.3e}"
        )));
    }
    let parity = if n.rem_euclid(2) == 0 {
        Parity::Even
    } else {
        Parity::Odd
    };
    Ok((n, parity))
}

/// Which Real structures exist on H_f.
pub fn existence(f: &Contraction) -> ExistenceFlags {
    let flags = f.structural_flags();
    let any = flags.real_coeffs || flags.is_iic_prime;
    let odd = (flags.real_coeffs && flags.positive_diagonal)
        || flags.is_iic_prime
        || (matches!(f, Contraction::Iv { .. }) && flags.real_coeffs);
    ExistenceFlags {
        any_antiholomorphic: any,
        even_exists: any,
        odd_exists: odd,
    }
}

/// Square root of f used by the odd canonical structures.
fn odd_half(f: &Contraction) -> Result<(PolyMap, CanonicalModel)> {
    let flags = f.structural_flags();
    if flags.real_coeffs && flags.positive_diagonal {
        return Ok((flows::kth_root(f, 2)?, CanonicalModel::OddCF));
    }
    match f {
        Contraction::IicPrime { alpha } => {
            let beta = cx::principal_sqrt(*alpha);
            Ok((
                PolyMap::diagonal(beta, beta.conj()),
                CanonicalModel::OddCPrimeF,
            ))
        }
        Contraction::Iv { alpha } if flags.real_coeffs && alpha.re < 0.0 => {
            let root = Complex64::new(0.0, alpha.norm().sqrt());
            Ok((PolyMap::scalar(root), CanonicalModel::OddJF))
        }
        _ => Err(Error::NoSuchStructure(format!(
            "no odd Real structure for class {}",
            f.class().as_str()
        ))),
    }
}

/// The canonical Real structure of the requested parity.
pub fn canonical_structure(f: &Contraction, parity: Parity) -> Result<RealStructureSpec> {
    let flags = f.structural_flags();
    match parity {
        Parity::Even => {
            let (lift, model) = if flags.real_coeffs {
                (PolyMap::conjugation(), CanonicalModel::StandardC)
            } else if flags.is_iic_prime {
                (PolyMap::swap_conjugation(), CanonicalModel::StandardCPrime)
            } else {
                return Err(Error::NoSuchStructure(
                    "even structures require real coefficients or II'c".into(),
                ));
            };
            Ok(RealStructureSpec {
                lift,
                parity,
                deck_power: 0,
                model,
            })
        }
        Parity::Odd => {
            if !existence(f).odd_exists {
                return Err(Error::NoSuchStructure(format!(
                    "no odd Real structure for class {}",
                    f.class().as_str()
                )));
            }
            let (half, model) = odd_half(f)?;
            let lift = match model {
                CanonicalModel::OddCF => PolyMap::conjugation().compose(&half)?,
                CanonicalModel::OddCPrimeF => PolyMap::swap_conjugation().compose(&half)?,
                CanonicalModel::OddJF => PolyMap::quaternionic_j().compose(&half)?,
                _ => unreachable!(),
            };
            Ok(RealStructureSpec {
                lift,
                parity,
                deck_power: 1,
                model,
            })
        }
    }
}

/// Least-norm solution B of u B - v conj(B) = b.
///
/// With |u| = |v| the underlying real 2x2 system is rank-1, so the least-norm
/// solution is taken and verified by back-substitution.
fn solve_twist_equation(u: Complex64, v: Complex64, b: Complex64) -> Result<Complex64> {
    let m = [[u.re - v.re, -(u.im + v.im)], [u.im - v.im, u.re + v.re]];
    let rhs = [b.re, b.im];
    let scale = m.iter().flatten().fold(0.0_f64, |s, x| s.max(x.abs()));
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let sol = if scale == 0.0 {
        [0.0, 0.0]
    } else if det.abs() > 1e-8 * scale * scale {
        [
            (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det,
            (rhs[1] * m[0][0] - rhs[0] * m[1][0]) / det,
        ]
    } else {
        // rank <= 1: write M = sigma p q^T and project.
        let col = |j: usize| [m[0][j], m[1][j]];
        let norm2 = |x: [f64; 2]| x[0] * x[0] + x[1] * x[1];
        let (c0, c1) = (col(0), col(1));
        let p_raw = if norm2(c0) >= norm2(c1) { c0 } else { c1 };
        let p_len = norm2(p_raw).sqrt();
        let p = [p_raw[0] / p_len, p_raw[1] / p_len];
        let row = |i: usize| [m[i][0], m[i][1]];
        let (r0, r1) = (row(0), row(1));
        let q_raw = if norm2(r0) >= norm2(r1) { r0 } else { r1 };
        let q_len = norm2(q_raw).sqrt();
        let q = [q_raw[0] / q_len, q_raw[1] / q_len];
        let sigma =
            p[0] * (m[0][0] * q[0] + m[0][1] * q[1]) + p[1] * (m[1][0] * q[0] + m[1][1] * q[1]);
        if sigma.abs() < 1e-12 * scale {
            return Err(Error::NumericallySingular(
                "twist equation has vanishing range".into(),
            ));
        }
        let coeff = (p[0] * rhs[0] + p[1] * rhs[1]) / sigma;
        [coeff * q[0], coeff * q[1]]
    };
    let bb = Complex64::new(sol[0], sol[1]);
    let residual = (u * bb - v * bb.conj() - b).norm();
    if residual > 1e-9 * b.norm().max(1.0) {
        return Err(Error::NumericallySingular(format!(
            "twist equation residual {residual:.3e}"
        )));
    }
    Ok(bb)
}

fn principal_half_root_of_unit(a: Complex64) -> Complex64 {
    Complex64::from_polar(a.norm().sqrt(), a.arg() / 2.0)
}

/// Anti-linear matrix of a degree-1 anti-holomorphic map Z -> M conj(Z).
fn anti_linear_matrix(phi: &PolyMap) -> Result<[Complex64; 4]> {
    if !phi.is_antiholomorphic() || phi.degree() > 1 {
        return Err(Error::InvalidInput("expected an anti-linear map".into()));
    }
    Ok([
        phi.coefficient(0, 1, 0),
        phi.coefficient(0, 0, 1),
        phi.coefficient(1, 1, 0),
        phi.coefficient(1, 0, 1),
    ])
}

/// Conjugator for class IV: a real-form basis of the anti-linear involution.
fn normalize_even_iv(phi: &PolyMap) -> Result<PolyMap> {
    let m = anti_linear_matrix(phi)?;
    let apply = |v: [Complex64; 2]| {
        [
            m[0] * v[0].conj() + m[1] * v[1].conj(),
            m[2] * v[0].conj() + m[3] * v[1].conj(),
        ]
    };
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let e1 = [one, Complex64::ZERO];
    let e2 = [Complex64::ZERO, one];
    // Fixed vectors of the involution: v + a(v) and i(v - a(v)) land in ker(a - id).
    let mut candidates = Vec::new();
    for v in [e1, e2] {
        let av = apply(v);
        candidates.push([v[0] + av[0], v[1] + av[1]]);
        candidates.push([i * (v[0] - av[0]), i * (v[1] - av[1])]);
    }
    let norm = |v: &[Complex64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    // First strict maximum keeps the natural basis (and psi = id for phi = c).
    let pick = |score: &dyn Fn(&[Complex64; 2]) -> f64| {
        let mut best = 0;
        for (i, cand) in candidates.iter().enumerate() {
            if score(cand) > score(&candidates[best]) {
                best = i;
            }
        }
        candidates[best]
    };
    let u1 = pick(&|v| norm(v));
    let u2 = pick(&|v| (u1[0] * v[1] - u1[1] * v[0]).norm());
    let det = u1[0] * u2[1] - u1[1] * u2[0];
    if det.norm() < 1e-10 * norm(&u1) * norm(&u2) {
        return Err(Error::NumericallySingular(
            "degenerate real-form basis".into(),
        ));
    }
    // Columns rescaled by positive reals; this commutes with c, so the
    // conjugation identity is unchanged.
    let (n1, n2) = (norm(&u1), norm(&u2));
    Ok(PolyMap::linear(
        u1[0] / n1,
        u2[0] / n2,
        u1[1] / n1,
        u2[1] / n2,
    ))
}

fn verify_conjugation(psi: PolyMap, standard: &PolyMap, phi: &PolyMap) -> Result<PolyMap> {
    let got = psi.compose(standard)?.compose(&psi.invert()?)?;
    let residual = got.difference(phi);
    if residual > NORMALIZE_TOL {
        return Err(Error::NumericallySingular(format!(
            "normalization residual {residual:.3e}"
        )));
    }
    Ok(psi)
}

/// Conjugator psi in Aut_h(W)^f with phi = psi o c o psi^{-1} (or c' for II'c).
///
/// Requires phi to be an anti-holomorphic involution commuting with f.
pub fn normalize_even(f: &Contraction, phi: &PolyMap) -> Result<PolyMap> {
    if !phi.is_antiholomorphic() {
        return Err(Error::NotAntiholomorphic);
    }
    check_commutes(f, phi)?;
    let sq = phi.compose(phi)?;
    let residual = sq.difference(&PolyMap::identity());
    if residual > STRUCTURE_TOL {
        return Err(Error::NotInvolution { residual });
    }
    let standard = if f.structural_flags().is_iic_prime {
        PolyMap::swap_conjugation()
    } else {
        PolyMap::conjugation()
    };
    let psi = match f {
        Contraction::Iv { .. } => normalize_even_iv(phi)?,
        Contraction::Iii { r, .. } => {
            let a = phi.coefficient(0, 1, 0);
            let d = phi.coefficient(1, 0, 1);
            let b = phi.coefficient(0, 0, *r);
            let big_a = principal_half_root_of_unit(a);
            let big_d = principal_half_root_of_unit(d);
            // b = B conj(D)^{-r} - A conj(A)^{-1} conj(B) conj(D)^{-r}
            let u = cx::powi(big_d.conj(), -(*r as i32));
            let v = big_a * big_a.conj().inv() * u;
            let big_b = solve_twist_equation(u, v, b)?;
            PolyMap::triangular(big_a, big_b, *r, big_d)
        }
        Contraction::Iia { r, .. } | Contraction::IiaTilde { r, .. } => {
            let a = phi.coefficient(1, 0, 1);
            let b = phi.coefficient(0, 0, *r);
            let big_a = principal_half_root_of_unit(a);
            // b = B conj(A)^{-r} - A^r conj(B) conj(A)^{-2r}
            let u = cx::powi(big_a.conj(), -(*r as i32));
            let v = cx::powi(big_a, *r as i32) * cx::powi(big_a.conj(), -2 * (*r as i32));
            let big_b = solve_twist_equation(u, v, b)?;
            PolyMap::triangular(cx::powi(big_a, *r as i32), big_b, *r, big_a)
        }
        Contraction::Iib { .. } | Contraction::IibTilde { .. } => {
            let a = phi.coefficient(1, 0, 1);
            let b = phi.coefficient(0, 0, 1);
            let big_a = principal_half_root_of_unit(a);
            let u = big_a.conj().inv();
            let v = big_a * cx::powi(big_a.conj(), -2);
            let big_b = solve_twist_equation(u, v, b)?;
            PolyMap::triangular(big_a, big_b, 1, big_a)
        }
        Contraction::Iic { .. } => {
            let a = phi.coefficient(0, 1, 0);
            let b = phi.coefficient(1, 0, 1);
            PolyMap::diagonal(
                principal_half_root_of_unit(a),
                principal_half_root_of_unit(b),
            )
        }
        Contraction::IicPrime { .. } => {
            let a = phi.coefficient(0, 0, 1);
            PolyMap::diagonal(a, Complex64::new(1.0, 0.0))
        }
    };
    verify_conjugation(psi, &standard, phi)
}

/// Conjugator psi with phi = psi o (canonical odd lift) o psi^{-1}.
///
/// Requires phi anti-holomorphic, commuting with f, with phi^2 = f.
pub fn normalize_odd(f: &Contraction, phi: &PolyMap) -> Result<PolyMap> {
    if !phi.is_antiholomorphic() {
        return Err(Error::NotAntiholomorphic);
    }
    check_commutes(f, phi)?;
    let sq = phi.compose(phi)?;
    let residual = sq.difference(&f.polymap());
    if residual > STRUCTURE_TOL {
        return Err(Error::NotOddSquare { residual });
    }
    let (half, model) = odd_half(f)?;
    let canonical = canonical_structure(f, Parity::Odd)?.lift;
    match model {
        CanonicalModel::OddCF | CanonicalModel::OddCPrimeF => {
            // phi' = f^{-1/2} o phi is an even involution; delegate.
            let reduced = half.invert()?.compose(phi)?;
            let psi = normalize_even(f, &reduced)?;
            verify_conjugation(psi, &canonical, phi)
        }
        CanonicalModel::OddJF => {
            // a = phi o f^{-1/2} is anti-linear with a^2 = -id; the basis
            // (e1, a(e1)) conjugates J to a.
            let m = anti_linear_matrix(phi)?;
            let scale = half.coefficient(0, 1, 0).inv().conj(); // conj((i sqrt|alpha|)^{-1})
            let a_mat = [m[0] * scale, m[1] * scale, m[2] * scale, m[3] * scale];
            // a(Z) = a_mat conj(Z); a^2 has matrix a_mat conj(a_mat).
            let a_sq = [
                a_mat[0] * a_mat[0].conj() + a_mat[1] * a_mat[2].conj(),
                a_mat[0] * a_mat[1].conj() + a_mat[1] * a_mat[3].conj(),
                a_mat[2] * a_mat[0].conj() + a_mat[3] * a_mat[2].conj(),
                a_mat[2] * a_mat[1].conj() + a_mat[3] * a_mat[3].conj(),
            ];
            let one = Complex64::new(1.0, 0.0);
            let dev =
                (a_sq[0] + one).norm() + a_sq[1].norm() + a_sq[2].norm() + (a_sq[3] + one).norm();
            if dev > 1e-10 {
                return Err(Error::NotOddSquare { residual: dev });
            }
            let v2 = [a_mat[0], a_mat[2]];
            if v2[1].norm() < 1e-12 {
                return Err(Error::NumericallySingular(
                    "degenerate quaternionic basis".into(),
                ));
            }
            let psi = PolyMap::linear(one, v2[0], Complex64::ZERO, v2[1]);
            verify_conjugation(psi, &canonical, phi)
        }
        _ => unreachable!(),
    }
}

/// Reduces an arbitrary commuting anti-holomorphic lift to its canonical model.
///
/// Returns the conjugator and the structure data of the supplied lift (its
/// deck power, parity, and the canonical model tag it reduces to).
pub fn normalize_any(f: &Contraction, lift: &PolyMap) -> Result<(PolyMap, RealStructureSpec)> {
    let (n, parity) = parity_of_lift(f, lift)?;
    let k = n.div_euclid(2);
    let reduced = f.polymap().power(-k)?.compose(lift)?;
    let (psi, model) = match parity {
        Parity::Even => (
            normalize_even(f, &reduced)?,
            canonical_structure(f, Parity::Even)?.model,
        ),
        Parity::Odd => (
            normalize_odd(f, &reduced)?,
            canonical_structure(f, Parity::Odd)?.model,
        ),
    };
    Ok((
        psi,
        RealStructureSpec {
            lift: lift.clone(),
            parity,
            deck_power: n,
            model,
        },
    ))
}

/// Parameter of an anti-holomorphic commutant family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AhParam {
    pub name: String,
    pub constraint: String,
}

/// Symbolic descriptor of Ah(W)^f with an instantiation function.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AhFamily {
    pub class: crate::contraction::WehlerClass,
    pub shape: String,
    pub parameters: Vec<AhParam>,
    #[serde(skip)]
    contraction: Option<Contraction>,
}

impl AhFamily {
    /// Builds the concrete map for given parameter values.
    pub fn instantiate(&self, params: &[Complex64]) -> Result<PolyMap> {
        use crate::polymap::Term;
        let f = self
            .contraction
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("family descriptor has no contraction".into()))?;
        if params.len() != self.parameters.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} parameters, got {}",
                self.parameters.len(),
                params.len()
            )));
        }
        for p in params {
            cx::ensure_finite(*p)?;
        }
        let m = match f {
            Contraction::Iv { .. } => {
                PolyMap::anti_linear(params[0], params[1], params[2], params[3])
            }
            Contraction::Iii { r, .. } => PolyMap::new(
                true,
                vec![Term::new(1, 0, params[0]), Term::new(0, *r, params[2])],
                vec![Term::new(0, 1, params[1])],
            ),
            Contraction::Iia { r, .. } => PolyMap::new(
                true,
                vec![
                    Term::new(1, 0, cx::powi(params[0], *r as i32)),
                    Term::new(0, *r, params[1]),
                ],
                vec![Term::new(0, 1, params[0])],
            ),
            Contraction::Iib { .. } => PolyMap::new(
                true,
                vec![Term::new(1, 0, params[0]), Term::new(0, 1, params[1])],
                vec![Term::new(0, 1, params[0])],
            ),
            Contraction::Iic { .. } => {
                PolyMap::anti_linear(params[0], Complex64::ZERO, Complex64::ZERO, params[1])
            }
            Contraction::IicPrime { .. } => PolyMap::new(
                true,
                vec![Term::new(0, 1, params[0])],
                vec![Term::new(1, 0, params[1])],
            ),
            _ => return Err(Error::NoAntiholomorphic),
        };
        Ok(m)
    }
}

/// The anti-holomorphic commutant Ah(W)^f as a parametric family.
pub fn list_antiholomorphic_family(f: &Contraction) -> Result<AhFamily> {
    let flags = f.structural_flags();
    if !(flags.real_coeffs || flags.is_iic_prime) {
        return Err(Error::NoAntiholomorphic);
    }
    let star = "nonzero complex";
    let free = "complex";
    let param = |name: &str, constraint: &str| AhParam {
        name: name.into(),
        constraint: constraint.into(),
    };
    let (shape, parameters) = match f {
        Contraction::Iv { .. } => (
            "(z, w) |-> A (conj z, conj w), A in GL(2, C)".to_string(),
            vec![
                param("a11", "matrix entry, det != 0"),
                param("a12", "matrix entry"),
                param("a21", "matrix entry"),
                param("a22", "matrix entry"),
            ],
        ),
        Contraction::Iii { r, .. } => (
            format!("(z, w) |-> (a conj(z) + b conj(w)^{r}, d conj(w))"),
            vec![param("a", star), param("d", star), param("b", free)],
        ),
        Contraction::Iia { r, .. } => (
            format!("(z, w) |-> (a^{r} conj(z) + b conj(w)^{r}, a conj(w))"),
            vec![param("a", star), param("b", free)],
        ),
        Contraction::Iib { .. } => (
            "(z, w) |-> (a conj(z) + b conj(w), a conj(w))".to_string(),
            vec![param("a", star), param("b", free)],
        ),
        Contraction::Iic { .. } => (
            "(z, w) |-> (a conj(z), d conj(w))".to_string(),
            vec![param("a", star), param("d", star)],
        ),
        Contraction::IicPrime { .. } => (
            "(z, w) |-> (a conj(w), d conj(z))".to_string(),
            vec![param("a", star), param("d", star)],
        ),
        _ => return Err(Error::NoAntiholomorphic),
    };
    Ok(AhFamily {
        class: f.class(),
        shape,
        parameters,
        contraction: Some(f.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parity_of_standard_conjugation() {
        let f = Contraction::Iii {
            delta: c(0.5, 0.0),
            r: 2,
        };
        let (n, p) = parity_of_lift(&f, &PolyMap::conjugation()).unwrap();
        assert_eq!((n, p), (0, Parity::Even));
    }

    #[test]
    fn parity_of_odd_lift_and_shifts() {
        let f = Contraction::Iv {
            alpha: c(0.25, 0.0),
        };
        let lift = canonical_structure(&f, Parity::Odd).unwrap().lift;
        assert_eq!(parity_of_lift(&f, &lift).unwrap(), (1, Parity::Odd));
        let shifted = lift.compose(&f.polymap()).unwrap();
        assert_eq!(parity_of_lift(&f, &shifted).unwrap(), (3, Parity::Odd));
    }

    #[test]
    fn parity_rejects_large_powers() {
        let f = Contraction::Iv {
            alpha: c(0.25, 0.0),
        };
        let lift = canonical_structure(&f, Parity::Odd).unwrap().lift;
        let mut m = lift;
        for _ in 0..5 {
            m = m.compose(&f.polymap()).unwrap();
        }
        // (lift o f^5)^2 = f^11 exceeds the deck-power bound
        assert!(matches!(
            parity_of_lift(&f, &m),
            Err(Error::NotDeckPower(_))
        ));
    }

    #[test]
    fn existence_table() {
        let f = Contraction::Iii {
            delta: c(-0.5, 0.0),
            r: 2,
        };
        let e = existence(&f);
        assert!(e.any_antiholomorphic && e.even_exists && !e.odd_exists);

        let f = Contraction::Iv {
            alpha: c(-0.5, 0.0),
        };
        let e = existence(&f);
        assert!(e.any_antiholomorphic && e.even_exists && e.odd_exists);

        let f = Contraction::Iic {
            alpha: c(0.3, 0.1),
            delta: c(0.5, 0.0),
        };
        let e = existence(&f);
        assert!(!e.any_antiholomorphic && !e.even_exists && !e.odd_exists);

        let f = Contraction::IicPrime { alpha: c(0.3, 0.4) };
        let e = existence(&f);
        assert!(e.any_antiholomorphic && e.even_exists && e.odd_exists);
    }

    #[test]
    fn canonical_odd_lifts_square_to_f() {
        let cases = vec![
            Contraction::Iv {
                alpha: c(0.25, 0.0),
            },
            Contraction::Iv {
                alpha: c(-0.25, 0.0),
            },
            Contraction::Iii {
                delta: c(0.5, 0.0),
                r: 2,
            },
            Contraction::Iia {
                delta: c(0.5, 0.0),
                r: 2,
            },
            Contraction::Iib { alpha: c(0.5, 0.0) },
            Contraction::Iic {
                alpha: c(0.3, 0.0),
                delta: c(0.5, 0.0),
            },
            Contraction::IicPrime { alpha: c(0.3, 0.4) },
        ];
        for f in cases {
            let s = canonical_structure(&f, Parity::Odd).unwrap();
            let sq = s.lift.compose(&s.lift).unwrap();
            assert!(
                sq.maps_equal(&f.polymap(), 1e-12),
                "square != f for {:?}",
                f.class()
            );
        }
    }

    #[test]
    fn canonical_odd_iv_examples() {
        // alpha = 0.25: lift (z, w) -> (0.5 conj z, 0.5 conj w)
        let f = Contraction::Iv {
            alpha: c(0.25, 0.0),
        };
        let s = canonical_structure(&f, Parity::Odd).unwrap();
        let expected = PolyMap::anti_linear(c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0));
        assert!(s.lift.maps_equal(&expected, 1e-14));

        // alpha = -0.25: lift (z, w) -> (0.5i conj w, -0.5i conj z)
        let f = Contraction::Iv {
            alpha: c(-0.25, 0.0),
        };
        let s = canonical_structure(&f, Parity::Odd).unwrap();
        let expected = PolyMap::anti_linear(c(0.0, 0.0), c(0.0, 0.5), c(0.0, -0.5), c(0.0, 0.0));
        assert!(s.lift.maps_equal(&expected, 1e-14));
        assert_eq!(s.model, CanonicalModel::OddJF);
    }

    #[test]
    fn canonical_even_iicprime_is_swap_conjugation() {
        let f = Contraction::IicPrime { alpha: c(0.3, 0.4) };
        let s = canonical_structure(&f, Parity::Even).unwrap();
        assert!(s.lift.maps_equal(&PolyMap::swap_conjugation(), 0.0));
    }

    #[test]
    fn odd_rejected_for_negative_non_iv() {
        let f = Contraction::Iii {
            delta: c(-0.5, 0.0),
            r: 2,
        };
        assert!(matches!(
            canonical_structure(&f, Parity::Odd),
            Err(Error::NoSuchStructure(_))
        ));
    }

    #[test]
    fn normalize_even_identity_case() {
        let f = Contraction::Iv { alpha: c(0.5, 0.0) };
        let psi = normalize_even(&f, &PolyMap::conjugation()).unwrap();
        assert!(psi.maps_equal(&PolyMap::identity(), 1e-14));
    }

    #[test]
    fn normalize_even_iii_example() {
        // phi(z, w) = (-conj z + conj(w)^2, conj w) for f = diag(0.25, 0.5).
        let f = Contraction::Iii {
            delta: c(0.5, 0.0),
            r: 2,
        };
        let phi = PolyMap::new(
            true,
            vec![
                crate::polymap::Term::new(1, 0, c(-1.0, 0.0)),
                crate::polymap::Term::new(0, 2, c(1.0, 0.0)),
            ],
            vec![crate::polymap::Term::new(0, 1, c(1.0, 0.0))],
        );
        let psi = normalize_even(&f, &phi).unwrap();
        // expected psi(z, w) = (i z + 0.5 w^2, w)
        let expected = PolyMap::triangular(c(0.0, 1.0), c(0.5, 0.0), 2, c(1.0, 0.0));
        assert!(psi.maps_equal(&expected, 1e-12));
    }

    #[test]
    fn normalize_even_iic_example() {
        // phi = (i conj z, conj w) -> psi = diag(e^{i pi/4}, 1).
        let f = Contraction::Iic {
            alpha: c(0.3, 0.0),
            delta: c(0.5, 0.0),
        };
        let phi = PolyMap::anti_linear(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        let psi = normalize_even(&f, &phi).unwrap();
        let e = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert!(psi.maps_equal(&PolyMap::diagonal(e, c(1.0, 0.0)), 1e-12));
    }

    #[test]
    fn normalize_even_rejects_non_involution() {
        let f = Contraction::Iv {
            alpha: c(0.25, 0.0),
        };
        let odd = canonical_structure(&f, Parity::Odd).unwrap().lift;
        assert!(matches!(
            normalize_even(&f, &odd),
            Err(Error::NotInvolution { .. })
        ));
    }

    #[test]
    fn normalize_odd_identity_cases() {
        for f in [
            Contraction::Iv {
                alpha: c(0.25, 0.0),
            },
            Contraction::Iv {
                alpha: c(-0.25, 0.0),
            },
        ] {
            let lift = canonical_structure(&f, Parity::Odd).unwrap().lift;
            let psi = normalize_odd(&f, &lift).unwrap();
            assert!(psi.maps_equal(&PolyMap::identity(), 1e-12), "{:?}", f);
        }
    }

    #[test]
    fn normalize_odd_iv_negative_conjugated() {
        let f = Contraction::Iv {
            alpha: c(-0.25, 0.0),
        };
        let canonical = canonical_structure(&f, Parity::Odd).unwrap().lift;
        let psi0 = PolyMap::linear(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        let phi = psi0
            .compose(&canonical)
            .unwrap()
            .compose(&psi0.invert().unwrap())
            .unwrap();
        let psi = normalize_odd(&f, &phi).unwrap();
        let got = psi
            .compose(&canonical)
            .unwrap()
            .compose(&psi.invert().unwrap())
            .unwrap();
        assert!(got.maps_equal(&phi, 1e-10));
    }

    #[test]
    fn normalize_any_reduces_shifted_lifts() {
        let f = Contraction::Iii {
            delta: c(0.5, 0.0),
            r: 2,
        };
        let lift = PolyMap::conjugation()
            .compose(&f.polymap().power(2).unwrap())
            .unwrap();
        let (_, spec) = normalize_any(&f, &lift).unwrap();
        assert_eq!(spec.deck_power, 4);
        assert_eq!(spec.parity, Parity::Even);
    }

    #[test]
    fn normalize_any_handles_shifted_odd_lifts() {
        // lift = sigma o f^2 has deck power 5; normalize_any reduces it to the
        // canonical odd model.
        let f = Contraction::Iia { delta: c(0.5, 0.0), r: 2 };
        let sigma = canonical_structure(&f, Parity::Odd).unwrap().lift;
        let lift = sigma.compose(&f.polymap().power(2).unwrap()).unwrap();
        let (psi, spec) = normalize_any(&f, &lift).unwrap();
        assert_eq!(spec.parity, Parity::Odd);
        assert_eq!(spec.deck_power, 5);
        // psi conjugates the canonical lift to the deck-reduced one
        let reduced = f
            .polymap()
            .power(-2)
            .unwrap()
            .compose(&lift)
            .unwrap();
        let got = psi
            .compose(&sigma)
            .unwrap()
            .compose(&psi.invert().unwrap())
            .unwrap();
        assert!(got.maps_equal(&reduced, 1e-9));
    }

    #[test]
    fn ah_family_shapes() {
        let f = Contraction::IicPrime { alpha: c(0.3, 0.4) };
        let fam = list_antiholomorphic_family(&f).unwrap();
        let m = fam.instantiate(&[c(2.0, 0.0), c(0.0, 1.0)]).unwrap();
        // (z, w) -> (2 conj w, i conj z) commutes with f
        let fm = f.polymap();
        assert!(m
            .compose(&fm)
            .unwrap()
            .maps_equal(&fm.compose(&m).unwrap(), 1e-12));

        let f = Contraction::Iic {
            alpha: c(0.3, 0.1),
            delta: c(0.5, 0.0),
        };
        assert!(matches!(
            list_antiholomorphic_family(&f),
            Err(Error::NoAntiholomorphic)
        ));

        let f = Contraction::Iib { alpha: c(0.5, 0.0) };
        let fam = list_antiholomorphic_family(&f).unwrap();
        let m = fam.instantiate(&[c(1.0, 1.0), c(0.5, -0.5)]).unwrap();
        let fm = f.polymap();
        assert!(m
            .compose(&fm)
            .unwrap()
            .maps_equal(&fm.compose(&m).unwrap(), 1e-12));
    }
}
