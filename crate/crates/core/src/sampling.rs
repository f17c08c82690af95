//! Seeded sampling of contractions, lifts, commutant elements and points.
//!
//! Everything runs on ChaCha8 so that identical (payload, seed) pairs produce
//! identical reports.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::contraction::{Contraction, WehlerClass};
use crate::cx;
use crate::error::Result;
use crate::polymap::PolyMap;
use crate::realstruct::{canonical_structure, Parity};

pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_complex(rng: &mut SampleRng) -> Complex64 {
    Complex64::from_polar(
        1.0,
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

/// Modulus in [lo, hi], arbitrary phase.
pub fn complex_in_annulus(rng: &mut SampleRng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(
        rng.random_range(lo..hi),
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

pub fn complex_in_disk(rng: &mut SampleRng, radius: f64) -> Complex64 {
    Complex64::new(
        rng.random_range(-radius..radius),
        rng.random_range(-radius..radius),
    )
}

/// A point of W with norm well away from 0 and infinity.
pub fn w_point(rng: &mut SampleRng) -> (Complex64, Complex64) {
    loop {
        let z = complex_in_disk(rng, 1.5);
        let w = complex_in_disk(rng, 1.5);
        let n = (z.norm_sqr() + w.norm_sqr()).sqrt();
        if n > 0.05 {
            return (z, w);
        }
    }
}

fn real_in_annulus(rng: &mut SampleRng, sign: f64) -> Complex64 {
    Complex64::new(sign * rng.random_range(0.15..0.85), 0.0)
}

/// A contraction of the given class with real coefficients.
///
/// `negatives` constrains the number of negative diagonal coefficients
/// (0, 1 or 2); classes that cannot realize the request reroll their sign
/// pattern (IV and IIb only support 0 or 2).
pub fn contraction_real(
    rng: &mut SampleRng,
    class: WehlerClass,
    negatives: u8,
) -> Result<Contraction> {
    let f = match class {
        WehlerClass::Iv => {
            let sign = if negatives == 0 { 1.0 } else { -1.0 };
            Contraction::Iv {
                alpha: real_in_annulus(rng, sign),
            }
        }
        WehlerClass::Iii | WehlerClass::Iia => {
            // diagonal (delta^r, delta): one negative needs r even and delta < 0;
            // two negatives need r odd and delta < 0.
            let r = match negatives {
                0 => rng.random_range(2u32..5),
                1 => 2 * rng.random_range(1u32..3),
                _ => 2 * rng.random_range(1u32..3) + 1,
            };
            let sign = if negatives == 0 { 1.0 } else { -1.0 };
            let delta = real_in_annulus(rng, sign);
            if class == WehlerClass::Iii {
                Contraction::Iii { delta, r }
            } else {
                Contraction::Iia { delta, r }
            }
        }
        WehlerClass::Iib => {
            let sign = if negatives == 0 { 1.0 } else { -1.0 };
            Contraction::Iib {
                alpha: real_in_annulus(rng, sign),
            }
        }
        WehlerClass::Iic => loop {
            let (s1, s2) = match negatives {
                0 => (1.0, 1.0),
                1 => {
                    if rng.random_bool(0.5) {
                        (1.0, -1.0)
                    } else {
                        (-1.0, 1.0)
                    }
                }
                _ => (-1.0, -1.0),
            };
            let alpha = real_in_annulus(rng, s1);
            let delta = real_in_annulus(rng, s2);
            let cand = Contraction::Iic { alpha, delta };
            if cand.validate().is_ok() {
                break cand;
            }
        },
        WehlerClass::IicPrime => Contraction::IicPrime {
            alpha: complex_in_annulus(rng, 0.2, 0.8),
        },
        WehlerClass::IiaTilde => {
            let sign = if negatives == 0 { 1.0 } else { -1.0 };
            Contraction::IiaTilde {
                delta: real_in_annulus(rng, sign),
                r: rng.random_range(2u32..4),
                c: Complex64::new(rng.random_range(-2.0..2.0), 0.0),
            }
        }
        WehlerClass::IibTilde => {
            let sign = if negatives == 0 { 1.0 } else { -1.0 };
            Contraction::IibTilde {
                alpha: real_in_annulus(rng, sign),
                c: Complex64::new(rng.random_range(-2.0..2.0), 0.0),
            }
        }
    };
    f.validate()?;
    Ok(f)
}

/// A II'c contraction (alpha not real, phase bounded away from the real axis).
pub fn contraction_iicprime(rng: &mut SampleRng) -> Contraction {
    loop {
        let alpha = complex_in_annulus(rng, 0.2, 0.8);
        if alpha.im.abs() > 0.02 {
            return Contraction::IicPrime { alpha };
        }
    }
}

/// A valid even lift phi (anti-holomorphic involution commuting with f),
/// sampled from the solved constraint set of the class.
pub fn even_lift(rng: &mut SampleRng, f: &Contraction) -> Result<PolyMap> {
    use crate::polymap::Term;
    let phi = match f {
        Contraction::Iv { .. } => {
            // A conj(A) = I: take A = L conj(L)^{-1} for random invertible L.
            loop {
                let l = [
                    complex_in_disk(rng, 1.5),
                    complex_in_disk(rng, 1.5),
                    complex_in_disk(rng, 1.5),
                    complex_in_disk(rng, 1.5),
                ];
                let det = l[0] * l[3] - l[1] * l[2];
                if det.norm() < 0.2 {
                    continue;
                }
                let linv_conj = [
                    l[3].conj() / det.conj(),
                    -l[1].conj() / det.conj(),
                    -l[2].conj() / det.conj(),
                    l[0].conj() / det.conj(),
                ];
                let a = [
                    l[0] * linv_conj[0] + l[1] * linv_conj[2],
                    l[0] * linv_conj[1] + l[1] * linv_conj[3],
                    l[2] * linv_conj[0] + l[3] * linv_conj[2],
                    l[2] * linv_conj[1] + l[3] * linv_conj[3],
                ];
                break PolyMap::anti_linear(a[0], a[1], a[2], a[3]);
            }
        }
        Contraction::Iii { r, .. } => {
            let a = unit_complex(rng);
            let d = unit_complex(rng);
            // a conj(b) + b conj(d)^r = 0 means b lies on a real line.
            let b = constraint_line_point(rng, d.conj().powu(*r), a);
            PolyMap::new(
                true,
                vec![Term::new(1, 0, a), Term::new(0, *r, b)],
                vec![Term::new(0, 1, d)],
            )
        }
        Contraction::Iia { r, .. } => {
            let a = unit_complex(rng);
            let b = constraint_line_point(rng, a.conj().powu(*r), a.powu(*r));
            PolyMap::new(
                true,
                vec![Term::new(1, 0, a.powu(*r)), Term::new(0, *r, b)],
                vec![Term::new(0, 1, a)],
            )
        }
        Contraction::Iib { .. } => {
            let a = unit_complex(rng);
            let b = constraint_line_point(rng, a.conj(), a);
            PolyMap::new(
                true,
                vec![Term::new(1, 0, a), Term::new(0, 1, b)],
                vec![Term::new(0, 1, a)],
            )
        }
        Contraction::Iic { .. } => PolyMap::anti_linear(
            unit_complex(rng),
            Complex64::ZERO,
            Complex64::ZERO,
            unit_complex(rng),
        ),
        Contraction::IicPrime { .. } => {
            // phi = (a conj w, d conj z) with conj(a) = d^{-1}.
            let a = complex_in_annulus(rng, 0.4, 2.0);
            let d = a.conj().inv();
            PolyMap::new(true, vec![Term::new(0, 1, a)], vec![Term::new(1, 0, d)])
        }
        _ => {
            return Err(crate::error::Error::InvalidInput(
                "even lifts are sampled for the five base classes and II'c".into(),
            ))
        }
    };
    Ok(phi)
}

/// A point b with u conj(b) + b conj(v)... solved as the real line
/// {b : vbar b + u conj(b) = 0} for the constraint u conj(b) + b vbar = 0.
fn constraint_line_point(rng: &mut SampleRng, vbar: Complex64, u: Complex64) -> Complex64 {
    // Solve u conj(b) + b * vbar = 0: b = rho e^{i sigma} with
    // e^{2 i sigma} = -u conj(... ) derived from b / conj(b) = -u / vbar.
    let ratio = -u / vbar;
    let sigma = ratio.arg() / 2.0;
    let rho: f64 = rng.random_range(-1.5..1.5);
    Complex64::from_polar(
        rho.abs(),
        if rho >= 0.0 {
            sigma
        } else {
            sigma + std::f64::consts::PI
        },
    )
}

/// A valid odd lift: a random commutant conjugate of the canonical odd lift.
pub fn odd_lift(rng: &mut SampleRng, f: &Contraction) -> Result<PolyMap> {
    let canonical = canonical_structure(f, Parity::Odd)?.lift;
    let psi = commutant_element(rng, f)?;
    let psi_inv = psi.invert()?;
    psi.compose(&canonical)?.compose(&psi_inv)
}

/// A random element of Aut_h(W)^f per the commutant table.
pub fn commutant_element(rng: &mut SampleRng, f: &Contraction) -> Result<PolyMap> {
    let m = match f {
        Contraction::Iv { .. } => loop {
            let a = complex_in_disk(rng, 1.5);
            let b = complex_in_disk(rng, 1.5);
            let c = complex_in_disk(rng, 1.5);
            let d = complex_in_disk(rng, 1.5);
            if (a * d - b * c).norm() > 0.2 {
                break PolyMap::linear(a, b, c, d);
            }
        },
        Contraction::Iii { r, .. } => {
            let a = complex_in_annulus(rng, 0.3, 2.0);
            let d = complex_in_annulus(rng, 0.3, 2.0);
            let b = complex_in_disk(rng, 1.5);
            PolyMap::triangular(a, b, *r, d)
        }
        Contraction::Iia { r, .. } | Contraction::IiaTilde { r, .. } => {
            let a = complex_in_annulus(rng, 0.3, 2.0);
            let b = complex_in_disk(rng, 1.5);
            PolyMap::triangular(cx::powi(a, *r as i32), b, *r, a)
        }
        Contraction::Iib { .. } | Contraction::IibTilde { .. } => {
            let a = complex_in_annulus(rng, 0.3, 2.0);
            let b = complex_in_disk(rng, 1.5);
            PolyMap::triangular(a, b, 1, a)
        }
        Contraction::Iic { .. } | Contraction::IicPrime { .. } => PolyMap::diagonal(
            complex_in_annulus(rng, 0.3, 2.0),
            complex_in_annulus(rng, 0.3, 2.0),
        ),
    };
    Ok(m)
}

/// A random element of R^*_+ SU(2) in the shape [[a, -conj b], [b, conj a]].
pub fn rpsu2_element(rng: &mut SampleRng) -> [Complex64; 4] {
    loop {
        let a = complex_in_disk(rng, 1.0);
        let b = complex_in_disk(rng, 1.0);
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n < 0.2 {
            continue;
        }
        let scale = rng.random_range(0.5..2.0) / n;
        return [
            scale * a,
            -(scale * b).conj(),
            scale * b,
            (scale * a).conj(),
        ];
    }
}
