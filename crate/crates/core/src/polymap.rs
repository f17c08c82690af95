//! Conjugation-tagged polynomial self-maps of W = C^2 \ {0}.
//!
//! A [`PolyMap`] stores two sparse polynomials P, Q in (z, w), plus a `conj`
//! flag. A holomorphic map sends Z to (P(Z), Q(Z)); an anti-holomorphic map
//! evaluates P, Q at the conjugated input. Composition, inversion on the
//! linear/triangular shapes, and tolerance-based equality are exact algebra on
//! the coefficient lists, so identities like psi o c o psi^{-1} = phi can be
//! asserted coefficientwise.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cx;
use crate::error::{Error, Result};

/// Coefficients with magnitude below this are dropped during normalization.
pub const DEDUP_EPSILON: f64 = 1e-14;
/// Default tolerance for coefficientwise map equality.
pub const MAP_EQ_TOL: f64 = 1e-10;
/// Default cap on the total degree of a composition result.
pub const DEGREE_CAP: u32 = 16;

/// One monomial `coeff * z^pz * w^pw` of an output coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub pz: u32,
    pub pw: u32,
    pub coeff: Complex64,
}

impl Term {
    pub fn new(pz: u32, pw: u32, coeff: Complex64) -> Self {
        Term { pz, pw, coeff }
    }

    fn degree(&self) -> u32 {
        self.pz + self.pw
    }
}

/// A polynomial self-map of W, optionally pre-composed with coordinate conjugation.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMap {
    conj: bool,
    p: Vec<Term>,
    q: Vec<Term>,
}

fn normalize_terms(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort_by_key(|t| (t.pz, t.pw));
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if (last.pz, last.pw) == (t.pz, t.pw) => last.coeff += t.coeff,
            _ => out.push(t),
        }
    }
    out.retain(|t| t.coeff.norm() >= DEDUP_EPSILON);
    out
}

fn conj_terms(terms: &[Term]) -> Vec<Term> {
    terms
        .iter()
        .map(|t| Term::new(t.pz, t.pw, t.coeff.conj()))
        .collect()
}

fn eval_terms(terms: &[Term], z: Complex64, w: Complex64) -> Complex64 {
    terms
        .iter()
        .map(|t| t.coeff * z.powu(t.pz) * w.powu(t.pw))
        .sum()
}

/// Multiplies two term lists, failing if any product monomial exceeds `cap`.
fn mul_terms(a: &[Term], b: &[Term], cap: u32) -> Result<Vec<Term>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for ta in a {
        for tb in b {
            let deg = ta.degree() + tb.degree();
            if deg > cap {
                return Err(Error::DegreeOverflow { degree: deg, cap });
            }
            out.push(Term::new(ta.pz + tb.pz, ta.pw + tb.pw, ta.coeff * tb.coeff));
        }
    }
    Ok(normalize_terms(out))
}

fn pow_terms(base: &[Term], n: u32, cap: u32) -> Result<Vec<Term>> {
    let mut acc = vec![Term::new(0, 0, Complex64::new(1.0, 0.0))];
    for _ in 0..n {
        acc = mul_terms(&acc, base, cap)?;
    }
    Ok(acc)
}

/// Substitutes (P, Q) for (z, w) in `outer`.
fn substitute(outer: &[Term], p: &[Term], q: &[Term], cap: u32) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    for t in outer {
        let zp = pow_terms(p, t.pz, cap)?;
        let wq = pow_terms(q, t.pw, cap)?;
        let prod = mul_terms(&zp, &wq, cap)?;
        for m in prod {
            out.push(Term::new(m.pz, m.pw, t.coeff * m.coeff));
        }
    }
    Ok(normalize_terms(out))
}

impl PolyMap {
    /// Builds a map from raw term lists; terms are merged, sorted and deduped.
    pub fn new(conj: bool, p: Vec<Term>, q: Vec<Term>) -> Self {
        PolyMap {
            conj,
            p: normalize_terms(p),
            q: normalize_terms(q),
        }
    }

    /// The identity of W.
    pub fn identity() -> Self {
        Self::linear(
            Complex64::new(1.0, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(1.0, 0.0),
        )
    }

    /// The standard conjugation c(z, w) = (conj z, conj w).
    pub fn conjugation() -> Self {
        let mut m = Self::identity();
        m.conj = true;
        m
    }

    /// The swap conjugation c'(z, w) = (conj w, conj z).
    pub fn swap_conjugation() -> Self {
        PolyMap::new(
            true,
            vec![Term::new(0, 1, Complex64::new(1.0, 0.0))],
            vec![Term::new(1, 0, Complex64::new(1.0, 0.0))],
        )
    }

    /// The coordinate swap (z, w) -> (w, z).
    pub fn swap() -> Self {
        let mut m = Self::swap_conjugation();
        m.conj = false;
        m
    }

    /// The quaternionic anti-linear map J(z, w) = (-conj w, conj z), J^2 = -id.
    pub fn quaternionic_j() -> Self {
        PolyMap::new(
            true,
            vec![Term::new(0, 1, Complex64::new(-1.0, 0.0))],
            vec![Term::new(1, 0, Complex64::new(1.0, 0.0))],
        )
    }

    /// The linear map with matrix [[a, b], [c, d]].
    pub fn linear(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        PolyMap::new(
            false,
            vec![Term::new(1, 0, a), Term::new(0, 1, b)],
            vec![Term::new(1, 0, c), Term::new(0, 1, d)],
        )
    }

    /// The anti-linear map Z -> M conj(Z) with matrix M = [[a, b], [c, d]].
    pub fn anti_linear(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        let mut m = Self::linear(a, b, c, d);
        m.conj = true;
        m
    }

    /// diag(a, d).
    pub fn diagonal(a: Complex64, d: Complex64) -> Self {
        Self::linear(a, Complex64::ZERO, Complex64::ZERO, d)
    }

    /// The scalar map lambda * id.
    pub fn scalar(lambda: Complex64) -> Self {
        Self::diagonal(lambda, lambda)
    }

    /// The triangular map (z, w) -> (a z + b w^r, d w).
    pub fn triangular(a: Complex64, b: Complex64, r: u32, d: Complex64) -> Self {
        PolyMap::new(
            false,
            vec![Term::new(1, 0, a), Term::new(0, r, b)],
            vec![Term::new(0, 1, d)],
        )
    }

    pub fn is_antiholomorphic(&self) -> bool {
        self.conj
    }

    pub fn p_terms(&self) -> &[Term] {
        &self.p
    }

    pub fn q_terms(&self) -> &[Term] {
        &self.q
    }

    /// Coefficient of `z^pz w^pw` in coordinate `coord` (0 = P, 1 = Q).
    pub fn coefficient(&self, coord: usize, pz: u32, pw: u32) -> Complex64 {
        let terms = if coord == 0 { &self.p } else { &self.q };
        terms
            .iter()
            .find(|t| (t.pz, t.pw) == (pz, pw))
            .map_or(Complex64::ZERO, |t| t.coeff)
    }

    /// Total degree over both coordinates (0 for the zero map).
    pub fn degree(&self) -> u32 {
        self.p
            .iter()
            .chain(self.q.iter())
            .map(Term::degree)
            .max()
            .unwrap_or(0)
    }

    /// Returns a copy with every coefficient conjugated (the conj flag is kept).
    pub fn conj_coefficients(&self) -> Self {
        PolyMap {
            conj: self.conj,
            p: conj_terms(&self.p),
            q: conj_terms(&self.q),
        }
    }

    /// Evaluates the map at a point of W.
    ///
    /// Anti-holomorphic maps conjugate the input first. A (numerically) zero
    /// image for a nonzero input is a `Domain` error: every map handled here
    /// is expected to restrict to an automorphism of W.
    pub fn evaluate(&self, z: Complex64, w: Complex64) -> Result<(Complex64, Complex64)> {
        if z.norm() == 0.0 && w.norm() == 0.0 {
            return Err(Error::Domain("input must be a point of W (nonzero)".into()));
        }
        let (z, w) = if self.conj {
            (z.conj(), w.conj())
        } else {
            (z, w)
        };
        let out = (eval_terms(&self.p, z, w), eval_terms(&self.q, z, w));
        let in_norm = (z.norm_sqr() + w.norm_sqr()).sqrt();
        let out_norm = (out.0.norm_sqr() + out.1.norm_sqr()).sqrt();
        if out_norm < 1e-250 * in_norm.min(1.0) {
            return Err(Error::Domain(format!(
                "image of ({z}, {w}) is numerically zero"
            )));
        }
        Ok(out)
    }

    /// Composition `self` after `rhs`, with the default degree cap.
    pub fn compose(&self, rhs: &PolyMap) -> Result<PolyMap> {
        self.compose_with_cap(rhs, DEGREE_CAP)
    }

    /// Composition with an explicit degree cap.
    ///
    /// When the left factor is anti-holomorphic the right factor's coefficients
    /// are conjugated before substitution; this is the unique rule making
    /// evaluation a homomorphism.
    pub fn compose_with_cap(&self, rhs: &PolyMap, cap: u32) -> Result<PolyMap> {
        let (rp, rq) = if self.conj {
            (conj_terms(&rhs.p), conj_terms(&rhs.q))
        } else {
            (rhs.p.clone(), rhs.q.clone())
        };
        let p = substitute(&self.p, &rp, &rq, cap)?;
        let q = substitute(&self.q, &rp, &rq, cap)?;
        Ok(PolyMap {
            conj: self.conj ^ rhs.conj,
            p,
            q,
        })
    }

    /// n-th composition power (negative n inverts first).
    pub fn power(&self, n: i64) -> Result<PolyMap> {
        let base = if n < 0 { self.invert()? } else { self.clone() };
        let mut acc = PolyMap::identity();
        for _ in 0..n.unsigned_abs() {
            acc = base.compose(&acc)?;
        }
        Ok(acc)
    }

    fn linear_matrix(&self) -> Option<[Complex64; 4]> {
        let ok = |terms: &[Term]| terms.iter().all(|t| t.degree() == 1);
        if !(ok(&self.p) && ok(&self.q)) {
            return None;
        }
        Some([
            self.coefficient(0, 1, 0),
            self.coefficient(0, 0, 1),
            self.coefficient(1, 1, 0),
            self.coefficient(1, 0, 1),
        ])
    }

    /// Extracts (a, b, r, d) when the map is (a z + b w^r, d w) with r >= 1.
    fn triangular_shape(&self) -> Option<(Complex64, Complex64, u32, Complex64)> {
        if self.q.len() != 1 || (self.q[0].pz, self.q[0].pw) != (0, 1) {
            return None;
        }
        let d = self.q[0].coeff;
        let mut a = Complex64::ZERO;
        let mut b = Complex64::ZERO;
        let mut r = 1;
        for t in &self.p {
            if (t.pz, t.pw) == (1, 0) {
                a = t.coeff;
            } else if t.pz == 0 && t.pw >= 1 {
                if b != Complex64::ZERO {
                    return None;
                }
                b = t.coeff;
                r = t.pw;
            } else {
                return None;
            }
        }
        Some((a, b, r, d))
    }

    /// Inverts linear and triangular maps (conjugation-tagged allowed).
    ///
    /// Any other polynomial shape is rejected, not attempted.
    pub fn invert(&self) -> Result<PolyMap> {
        // m = T o iota with iota = conj or id; m^{-1} = iota o T^{-1}, i.e. the
        // coefficients of T^{-1} conjugated when the map is anti-holomorphic.
        let holomorphic_inverse = if let Some((a, b, r, d)) = self.triangular_shape() {
            if a.norm() < 1e-250 || d.norm() < 1e-250 {
                return Err(Error::NotInvertibleShape(
                    "triangular map with vanishing diagonal".into(),
                ));
            }
            PolyMap::triangular(a.inv(), -b / (a * cx::powi(d, r as i32)), r, d.inv())
        } else if let Some([a, b, c, d]) = self.linear_matrix() {
            let det = a * d - b * c;
            if det.norm() < 1e-12 * (a.norm() + b.norm() + c.norm() + d.norm()).max(1e-30) {
                return Err(Error::NumericallySingular(
                    "linear map determinant ~ 0".into(),
                ));
            }
            PolyMap::linear(d / det, -b / det, -c / det, a / det)
        } else {
            return Err(Error::NotInvertibleShape(
                "only linear or (a z + b w^r, d w) maps are invertible".into(),
            ));
        };
        let mut inv = if self.conj {
            holomorphic_inverse.conj_coefficients()
        } else {
            holomorphic_inverse
        };
        inv.conj = self.conj;
        Ok(inv)
    }

    /// Residual of coefficientwise comparison: the largest coefficient
    /// difference over the union of supports, or +inf on conj-flag mismatch.
    pub fn difference(&self, other: &PolyMap) -> f64 {
        if self.conj != other.conj {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for coord in 0..2 {
            let (lhs, rhs) = if coord == 0 {
                (&self.p, &other.p)
            } else {
                (&self.q, &other.q)
            };
            for t in lhs.iter() {
                worst = worst.max((t.coeff - other.coefficient(coord, t.pz, t.pw)).norm());
            }
            for t in rhs.iter() {
                worst = worst.max((t.coeff - self.coefficient(coord, t.pz, t.pw)).norm());
            }
        }
        worst
    }

    /// True iff conj flags agree and all coefficient differences are <= tol.
    pub fn maps_equal(&self, other: &PolyMap, tol: f64) -> bool {
        self.difference(other) <= tol
    }

    /// Largest coefficient magnitude over both coordinates.
    pub fn coefficient_scale(&self) -> f64 {
        self.p
            .iter()
            .chain(self.q.iter())
            .map(|t| t.coeff.norm())
            .fold(0.0, f64::max)
    }

    /// Coefficient difference relative to the larger of the two maps' scales
    /// (clamped below by 1, so it agrees with `difference` for bounded maps).
    pub fn relative_difference(&self, other: &PolyMap) -> f64 {
        let scale = self
            .coefficient_scale()
            .max(other.coefficient_scale())
            .max(1.0);
        self.difference(other) / scale
    }

    /// Samples the map on pseudo-random points of W and checks no image is zero.
    pub fn is_w_automorphism_sampled(&self, samples: usize, seed: u64) -> bool {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let pt = (
                Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
            );
            if pt.0.norm() + pt.1.norm() < 1e-3 {
                continue;
            }
            if self.evaluate(pt.0, pt.1).is_err() {
                return false;
            }
        }
        true
    }
}

// JSON form: { "conj": bool, "P": [[pz, pw, re, im], ...], "Q": [...] }.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyMapRepr {
    conj: bool,
    #[serde(rename = "P")]
    p: Vec<[f64; 4]>,
    #[serde(rename = "Q")]
    q: Vec<[f64; 4]>,
}

fn terms_to_repr(terms: &[Term]) -> Vec<[f64; 4]> {
    terms
        .iter()
        .map(|t| [t.pz as f64, t.pw as f64, t.coeff.re, t.coeff.im])
        .collect()
}

fn terms_from_repr(rows: &[[f64; 4]]) -> std::result::Result<Vec<Term>, String> {
    rows.iter()
        .map(|&[pz, pw, re, im]| {
            if pz.fract() != 0.0 || pw.fract() != 0.0 || pz < 0.0 || pw < 0.0 {
                return Err(format!(
                    "exponents must be small nonnegative integers, got ({pz}, {pw})"
                ));
            }
            if pz > 64.0 || pw > 64.0 {
                return Err(format!("exponent too large: ({pz}, {pw})"));
            }
            if !re.is_finite() || !im.is_finite() {
                return Err("coefficients must be finite".into());
            }
            Ok(Term::new(pz as u32, pw as u32, Complex64::new(re, im)))
        })
        .collect()
}

impl Serialize for PolyMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyMapRepr {
            conj: self.conj,
            p: terms_to_repr(&self.p),
            q: terms_to_repr(&self.q),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyMapRepr::deserialize(d)?;
        let p = terms_from_repr(&repr.p).map_err(D::Error::custom)?;
        let q = terms_from_repr(&repr.q).map_err(D::Error::custom)?;
        Ok(PolyMap::new(repr.conj, p, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_standard_conjugation() {
        let m = PolyMap::conjugation();
        let (z, w) = m.evaluate(c(1.0, 2.0), c(3.0, 0.0)).unwrap();
        assert_eq!((z, w), (c(1.0, -2.0), c(3.0, 0.0)));
    }

    #[test]
    fn evaluate_swap_conjugation() {
        // c' sends (z, w) to (conj w, conj z).
        let m = PolyMap::swap_conjugation();
        let (z, w) = m.evaluate(c(1.0, 1.0), c(5.0, 0.0)).unwrap();
        assert_eq!((z, w), (c(5.0, 0.0), c(1.0, -1.0)));
    }

    #[test]
    fn evaluate_quaternionic_j() {
        let m = PolyMap::quaternionic_j();
        let (z, w) = m.evaluate(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert_eq!((z, w), (c(0.0, 1.0), c(1.0, 0.0)));
    }

    #[test]
    fn conjugation_is_involutive() {
        let id = PolyMap::identity();
        let cc = PolyMap::conjugation()
            .compose(&PolyMap::conjugation())
            .unwrap();
        assert!(cc.maps_equal(&id, 1e-15));
    }

    #[test]
    fn odd_square_positive_alpha() {
        // (c o f^{1/2})^2 = f for f = diag(0.25, 0.25).
        let half = PolyMap::scalar(c(0.5, 0.0));
        let phi = PolyMap::conjugation().compose(&half).unwrap();
        let sq = phi.compose(&phi).unwrap();
        assert!(sq.maps_equal(&PolyMap::scalar(c(0.25, 0.0)), 1e-15));
    }

    #[test]
    fn odd_square_negative_alpha() {
        // (J o f^{1/2})^2 = f for f = diag(-0.25, -0.25), f^{1/2} = diag(0.5i, 0.5i).
        let half = PolyMap::scalar(c(0.0, 0.5));
        let phi = PolyMap::quaternionic_j().compose(&half).unwrap();
        // phi(z, w) = (0.5i conj w, -0.5i conj z)
        assert!(cx::approx(phi.coefficient(0, 0, 1), c(0.0, 0.5), 1e-15));
        assert!(cx::approx(phi.coefficient(1, 1, 0), c(0.0, -0.5), 1e-15));
        let sq = phi.compose(&phi).unwrap();
        assert!(sq.maps_equal(&PolyMap::scalar(c(-0.25, 0.0)), 1e-15));
    }

    #[test]
    fn invert_diagonal() {
        let m = PolyMap::diagonal(c(2.0, 0.0), c(4.0, 0.0));
        let inv = m.invert().unwrap();
        assert!(inv.maps_equal(&PolyMap::diagonal(c(0.5, 0.0), c(0.25, 0.0)), 1e-15));
    }

    #[test]
    fn invert_triangular() {
        // (z, w) -> (i z + 0.5 w^2, w); inverse is (-i(z - 0.5 w^2), w).
        let m = PolyMap::triangular(c(0.0, 1.0), c(0.5, 0.0), 2, c(1.0, 0.0));
        let inv = m.invert().unwrap();
        let expected = PolyMap::triangular(c(0.0, -1.0), c(0.0, 0.5), 2, c(1.0, 0.0));
        assert!(inv.maps_equal(&expected, 1e-15));
        // two-sided inverse
        assert!(m
            .compose(&inv)
            .unwrap()
            .maps_equal(&PolyMap::identity(), 1e-14));
        assert!(inv
            .compose(&m)
            .unwrap()
            .maps_equal(&PolyMap::identity(), 1e-14));
    }

    #[test]
    fn invert_l_matrix() {
        // L = [[1, i], [1, -i]]; L^{-1} = (1 / -2i) [[-i, -i], [-1, 1]].
        let l = PolyMap::linear(c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, -1.0));
        let inv = l.invert().unwrap();
        let s = c(0.0, -2.0).inv();
        let expected = PolyMap::linear(
            s * c(0.0, -1.0),
            s * c(0.0, -1.0),
            s * c(-1.0, 0.0),
            s * c(1.0, 0.0),
        );
        assert!(inv.maps_equal(&expected, 1e-15));
    }

    #[test]
    fn invert_rejects_general_shapes() {
        let m = PolyMap::new(
            false,
            vec![Term::new(2, 0, c(1.0, 0.0))],
            vec![Term::new(0, 1, c(1.0, 0.0))],
        );
        assert!(matches!(m.invert(), Err(Error::NotInvertibleShape(_))));
    }

    #[test]
    fn invert_antiholomorphic_triangular() {
        let m = {
            let mut t = PolyMap::triangular(c(0.0, 1.0), c(1.0, 1.0), 3, c(2.0, 0.0));
            t.conj = true;
            t
        };
        let inv = m.invert().unwrap();
        assert!(m
            .compose(&inv)
            .unwrap()
            .maps_equal(&PolyMap::identity(), 1e-13));
        assert!(inv
            .compose(&m)
            .unwrap()
            .maps_equal(&PolyMap::identity(), 1e-13));
    }

    #[test]
    fn degree_cap_enforced() {
        let m = PolyMap::new(
            false,
            vec![Term::new(5, 0, c(1.0, 0.0))],
            vec![Term::new(0, 1, c(1.0, 0.0))],
        );
        let err = m.compose(&m).and_then(|m2| m2.compose(&m));
        assert!(matches!(err, Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn maps_equal_distinguishes_support() {
        assert!(!PolyMap::conjugation().maps_equal(&PolyMap::swap_conjugation(), 1e-6));
    }

    #[test]
    fn conjugation_bookkeeping_real_map() {
        // c o m o c = m for real-coefficient holomorphic m.
        let m = PolyMap::triangular(c(0.5, 0.0), c(1.5, 0.0), 2, c(-0.5, 0.0));
        let cc = PolyMap::conjugation();
        let conj = cc.compose(&m).unwrap().compose(&cc).unwrap();
        assert!(conj.maps_equal(&m, 1e-15));
    }

    #[test]
    fn json_round_trip() {
        let m = PolyMap::anti_linear(c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0), c(0.0, 0.0));
        let s = serde_json::to_string(&m).unwrap();
        let back: PolyMap = serde_json::from_str(&s).unwrap();
        assert!(m.maps_equal(&back, 0.0));
    }

    #[test]
    fn json_rejects_non_integer_exponents() {
        let r: std::result::Result<PolyMap, _> =
            serde_json::from_str(r#"{"conj":false,"P":[[0.5,0,1,0]],"Q":[[0,1,1,0]]}"#);
        assert!(r.is_err());
    }

    #[test]
    fn w_automorphism_sampling() {
        assert!(
            PolyMap::triangular(c(0.5, 0.0), c(1.0, 0.0), 2, c(0.5, 0.0))
                .is_w_automorphism_sampled(200, 1)
        );
        // the zero map sends W to 0 and is rejected
        let zero = PolyMap::new(false, vec![], vec![]);
        assert!(!zero.is_w_automorphism_sampled(10, 1));
    }

    #[test]
    fn evaluate_rejects_origin() {
        let m = PolyMap::identity();
        assert!(matches!(
            m.evaluate(Complex64::ZERO, Complex64::ZERO),
            Err(Error::Domain(_))
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_cx(range: f64) -> impl Strategy<Value = Complex64> {
            (-range..range, -range..range).prop_map(|(re, im)| Complex64::new(re, im))
        }

        fn arb_unit_cx() -> impl Strategy<Value = Complex64> {
            (0.2..2.0, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
        }

        /// Linear and triangular maps, holomorphic or anti-holomorphic.
        fn arb_map() -> impl Strategy<Value = PolyMap> {
            let linear = (
                arb_unit_cx(),
                arb_cx(1.0),
                arb_cx(1.0),
                arb_unit_cx(),
                any::<bool>(),
            )
                .prop_map(|(a, b, c2, d, conj)| {
                    let mut m = PolyMap::linear(a, b, c2, d);
                    m.conj = conj;
                    m
                });
            let tri = (
                arb_unit_cx(),
                arb_cx(1.0),
                1u32..3,
                arb_unit_cx(),
                any::<bool>(),
            )
                .prop_map(|(a, b, r, d, conj)| {
                    let mut m = PolyMap::triangular(a, b, r, d);
                    m.conj = conj;
                    m
                });
            prop_oneof![linear, tri]
        }

        proptest! {
            #[test]
            fn composition_associative(a in arb_map(), b in arb_map(), m in arb_map()) {
                let lhs = a.compose(&b.compose(&m).unwrap()).unwrap();
                let rhs = a.compose(&b).unwrap().compose(&m).unwrap();
                prop_assert!(lhs.maps_equal(&rhs, 1e-12));
            }

            #[test]
            fn evaluation_homomorphism(g in arb_map(), h in arb_map(), z in arb_cx(2.0), w in arb_cx(2.0)) {
                prop_assume!(z.norm() + w.norm() > 1e-2);
                let via_points = h
                    .evaluate(z, w)
                    .and_then(|(hz, hw)| g.evaluate(hz, hw));
                let via_compose = g.compose(&h).unwrap().evaluate(z, w);
                if let (Ok(a), Ok(b)) = (via_points, via_compose) {
                    let scale = (a.0.norm() + a.1.norm()).max(1.0);
                    prop_assert!((a.0 - b.0).norm() + (a.1 - b.1).norm() <= 1e-10 * scale);
                }
            }

            #[test]
            fn invert_is_two_sided(m in arb_map()) {
                if let Ok(inv) = m.invert() {
                    let id = PolyMap::identity();
                    prop_assert!(m.compose(&inv).unwrap().maps_equal(&id, 1e-9));
                    prop_assert!(inv.compose(&m).unwrap().maps_equal(&id, 1e-9));
                }
            }
        }
    }
}
