//! Pointwise checks of the conjugation identities the chart routes are built
//! on: the half-step correspondences under the squared flow, the quaternionic
//! quarter-step, the II'c flattening of the odd structure, and the mu -> mu0
//! conversion.

use hopf_core::chain::{ChainMap, ChainPoint, CoverVariant, NodeKind};
use hopf_core::contraction::Contraction;
use hopf_core::flows::{self, FlowSpec};
use hopf_core::polymap::PolyMap;
use hopf_core::realstruct::{canonical_structure, Parity};
use hopf_core::sampling;
use hopf_core::topology::{deck_involution, model_involution, Model, ModelPoint};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: (Complex64, Complex64), b: (Complex64, Complex64), tol: f64) -> bool {
    let scale = (a.0.norm() + a.1.norm()).max(1.0);
    ((a.0 - b.0).norm() + (a.1 - b.1).norm()) / scale <= tol
}

/// G(t + 1/2, (u, -v)) = f(G(t, (u, v))) for one negative diagonal
/// coefficient (second slot), and G(t + 1/2, -Z) = f(G(t, Z)) for two.
#[test]
fn squared_flow_half_step_correspondences() {
    let mut rng = sampling::rng_from_seed(42);
    let one_negative = vec![
        Contraction::Iii {
            delta: c(-0.5, 0.0),
            r: 2,
        },
        Contraction::Iia {
            delta: c(-0.45, 0.0),
            r: 4,
        },
        Contraction::Iic {
            alpha: c(0.3, 0.0),
            delta: c(-0.5, 0.0),
        },
    ];
    for f in one_negative {
        let g = flows::square_for_negatives(&f).unwrap();
        let flow = FlowSpec::new(g).unwrap();
        let fm = f.polymap();
        for _ in 0..200 {
            let (u, v) = sampling::w_point(&mut rng);
            let t = 1.7 * (rand_unit(&mut rng) - 0.5);
            let base = flow.at(t).evaluate(u, v).unwrap();
            let lhs = flow.at(t + 0.5).evaluate(u, -v).unwrap();
            let rhs = fm.evaluate(base.0, base.1).unwrap();
            assert!(
                close(lhs, rhs, 1e-12),
                "j' correspondence for {:?}",
                f.class()
            );
        }
    }
    let two_negative = vec![
        Contraction::Iv {
            alpha: c(-0.5, 0.0),
        },
        Contraction::Iii {
            delta: c(-0.55, 0.0),
            r: 3,
        },
        Contraction::Iib {
            alpha: c(-0.6, 0.0),
        },
        Contraction::Iia {
            delta: c(-0.5, 0.0),
            r: 3,
        },
        Contraction::Iic {
            alpha: c(-0.3, 0.0),
            delta: c(-0.5, 0.0),
        },
    ];
    for f in two_negative {
        let g = flows::square_for_negatives(&f).unwrap();
        let flow = FlowSpec::new(g).unwrap();
        let fm = f.polymap();
        for _ in 0..200 {
            let (u, v) = sampling::w_point(&mut rng);
            let t = 1.7 * (rand_unit(&mut rng) - 0.5);
            let base = flow.at(t).evaluate(u, v).unwrap();
            let lhs = flow.at(t + 0.5).evaluate(-u, -v).unwrap();
            let rhs = fm.evaluate(base.0, base.1).unwrap();
            assert!(
                close(lhs, rhs, 1e-12),
                "j'' correspondence for {:?}",
                f.class()
            );
        }
    }
}

/// G(t + 1/4, J i Z) = (J o f^{1/2})(G(t, Z)) for f = alpha id, alpha < 0.
#[test]
fn quaternionic_quarter_step() {
    let mut rng = sampling::rng_from_seed(43);
    let f = Contraction::Iv {
        alpha: c(-0.4, 0.0),
    };
    let g = flows::square_for_negatives(&f).unwrap();
    let flow = FlowSpec::new(g).unwrap();
    let sigma = canonical_structure(&f, Parity::Odd).unwrap().lift;
    let j = PolyMap::quaternionic_j();
    for _ in 0..300 {
        let (z, w) = sampling::w_point(&mut rng);
        let t = 1.7 * (rand_unit(&mut rng) - 0.5);
        let i = c(0.0, 1.0);
        let jiz = j.evaluate(i * z, i * w).unwrap();
        let lhs = flow.at(t + 0.25).evaluate(jiz.0, jiz.1).unwrap();
        let base = flow.at(t).evaluate(z, w).unwrap();
        let rhs = sigma.evaluate(base.0, base.1).unwrap();
        assert!(close(lhs, rhs, 1e-12));
    }
}

/// frak_l o (c o f_{|alpha|}^{1/2}) o frak_l^{-1} = c' o f^{1/2} on II'c.
#[test]
fn flattening_carries_the_odd_structure() {
    let mut rng = sampling::rng_from_seed(44);
    for _ in 0..5 {
        let f = sampling::contraction_iicprime(&mut rng);
        let Contraction::IicPrime { alpha } = f else {
            unreachable!()
        };
        let f_mod = Contraction::Iv {
            alpha: c(alpha.norm(), 0.0),
        };
        let sigma_mod = canonical_structure(&f_mod, Parity::Odd).unwrap().lift;
        let sigma = canonical_structure(&f, Parity::Odd).unwrap().lift;
        let l = PolyMap::linear(c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, -1.0));
        let frak_l = ChainMap::new(vec![
            NodeKind::RadialTwist {
                coef: alpha.arg() / alpha.norm().ln(),
            },
            NodeKind::Poly { map: l },
        ]);
        for _ in 0..100 {
            let (z, w) = sampling::w_point(&mut rng);
            let lhs = frak_l
                .inverse()
                .evaluate(ChainPoint::w(z, w))
                .and_then(|p| p.as_w())
                .and_then(|(a, b)| sigma_mod.evaluate(a, b))
                .and_then(|(a, b)| frak_l.evaluate(ChainPoint::w(a, b)))
                .and_then(|p| p.as_w())
                .unwrap();
            let rhs = sigma.evaluate(z, w).unwrap();
            assert!(close(lhs, rhs, 1e-10));
        }
    }
}

/// psi o (id x Phi) conjugates mu(zeta, Z) = (-zeta, conj Z) to mu0.
#[test]
fn mu_converts_to_mu0() {
    let mut rng = sampling::rng_from_seed(45);
    let convert = ChainMap::new(vec![NodeKind::SphereRealign, NodeKind::SphereSecondTwist]);
    for _ in 0..300 {
        let m = ModelPoint::new(
            sampling::unit_complex(&mut rng),
            sampling::complex_in_disk(&mut rng, 1.0),
            sampling::complex_in_disk(&mut rng, 1.0),
        )
        .renormalized();
        let mu_m = ModelPoint::new(-m.zeta, m.u.conj(), m.v.conj());
        let lhs = convert
            .evaluate(ChainPoint::Model(mu_m))
            .unwrap()
            .as_model()
            .unwrap();
        let rhs = model_involution(
            Model::Mu0,
            convert
                .evaluate(ChainPoint::Model(m))
                .unwrap()
                .as_model()
                .unwrap(),
        );
        assert!(lhs.distance(&rhs) < 1e-12);
    }
}

/// The covers intertwine the involutions: a' o tau = tau' o a' on Q' and
/// a'' o tau = tau o a'' on Q'' (together with deck invariance).
#[test]
fn covers_intertwine_involutions() {
    let mut rng = sampling::rng_from_seed(46);
    for _ in 0..300 {
        let m = ModelPoint::new(
            sampling::unit_complex(&mut rng),
            sampling::complex_in_disk(&mut rng, 1.0),
            sampling::complex_in_disk(&mut rng, 1.0),
        )
        .renormalized();
        let tau_m = model_involution(Model::Tau, m);
        for (variant, target) in [
            (CoverVariant::Prime, Model::TauPrime),
            (CoverVariant::DoublePrime, Model::Tau),
        ] {
            let cover = ChainMap::new(vec![NodeKind::Cover { variant }]);
            let lhs = cover
                .evaluate(ChainPoint::Model(tau_m))
                .unwrap()
                .as_model()
                .unwrap();
            let rhs = model_involution(
                target,
                cover
                    .evaluate(ChainPoint::Model(m))
                    .unwrap()
                    .as_model()
                    .unwrap(),
            );
            assert!(lhs.distance(&rhs) < 1e-12, "{variant:?}");
            // and the deck point maps to the same image
            let deck = cover
                .evaluate(ChainPoint::Model(deck_involution(variant, m)))
                .unwrap()
                .as_model()
                .unwrap();
            let direct = cover
                .evaluate(ChainPoint::Model(m))
                .unwrap()
                .as_model()
                .unwrap();
            assert!(deck.distance(&direct) < 1e-12);
        }
    }
}

fn rand_unit(rng: &mut sampling::SampleRng) -> f64 {
    use rand::Rng;
    rng.random_range(0.0..1.0)
}
