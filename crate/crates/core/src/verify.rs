//! Seeded verification suites behind `hopf verify` and the acceptance tests.
//!
//! Each property runs a sampled check and reports its worst residual against
//! the pinned tolerance; failures carry a replayable counterexample.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::autgroup;
use crate::chain::{ChainMap, ChainPoint, CoverVariant, NodeKind};
use crate::contraction::{classify, is_biholomorphic_pair, Contraction, WehlerClass};
use crate::error::Result;
use crate::flows::{self, FlowSpec};
use crate::picard;
use crate::polymap::PolyMap;
use crate::realstruct::{self, Parity};
use crate::sampling::{self, SampleRng};
use crate::topology::{self, EtaSpec, ModelPoint, RealLocusKind};

/// Outcome of one verified property.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
}

impl PropertyReport {
    fn new(name: &str, samples: usize, tolerance: f64) -> Self {
        PropertyReport {
            name: name.into(),
            samples,
            max_residual: 0.0,
            tolerance,
            pass: true,
            counterexample: None,
        }
    }

    fn record(&mut self, residual: f64, witness: impl FnOnce() -> serde_json::Value) {
        if residual > self.max_residual {
            self.max_residual = residual;
        }
        if residual > self.tolerance && self.pass {
            self.pass = false;
            self.counterexample = Some(witness());
        }
    }

    fn fail(&mut self, message: String, witness: serde_json::Value) {
        self.pass = false;
        self.max_residual = f64::INFINITY;
        if self.counterexample.is_none() {
            self.counterexample = Some(json!({ "error": message, "input": witness }));
        }
    }
}

/// A named bundle of property reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    fn collect(suite: &str, seed: u64, properties: Vec<PropertyReport>) -> Self {
        SuiteReport {
            suite: suite.into(),
            seed,
            pass: properties.iter().all(|p| p.pass),
            properties,
        }
    }
}

/// Sampling controls shared by every suite.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub seed: u64,
    /// Overrides each property's default sample count when set.
    pub samples: Option<usize>,
}

impl Options {
    pub fn new(seed: u64) -> Self {
        Options {
            seed,
            samples: None,
        }
    }

    fn n(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

const BASE_CLASSES: [WehlerClass; 5] = [
    WehlerClass::Iv,
    WehlerClass::Iii,
    WehlerClass::Iia,
    WehlerClass::Iib,
    WehlerClass::Iic,
];

fn point_json(z: Complex64, w: Complex64) -> serde_json::Value {
    json!([[z.re, z.im], [w.re, w.im]])
}

fn model_json(m: &ModelPoint) -> serde_json::Value {
    json!({
        "zeta": [m.zeta.re, m.zeta.im],
        "u": [m.u.re, m.u.im],
        "v": [m.v.re, m.v.im],
    })
}

fn map_json(m: &PolyMap) -> serde_json::Value {
    serde_json::to_value(m).expect("map serializes")
}

fn contraction_json(f: &Contraction) -> serde_json::Value {
    serde_json::to_value(f).expect("contraction serializes")
}

// ---------------------------------------------------------------------------
// polymap suite

pub fn polymap_associativity(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x01);
    let mut report = PropertyReport::new("polymap_composition_associative", opts.n(n), 1e-12);
    for _ in 0..report.samples {
        let f = sampling::contraction_real(&mut rng, WehlerClass::Iii, 0).unwrap();
        let (a, b, c) = (
            sampling::commutant_element(&mut rng, &f).unwrap(),
            sampling::commutant_element(&mut rng, &f).unwrap(),
            sampling::commutant_element(&mut rng, &f).unwrap(),
        );
        let lhs = a.compose(&b.compose(&c).unwrap()).unwrap();
        let rhs = a.compose(&b).unwrap().compose(&c).unwrap();
        report.record(
            lhs.difference(&rhs),
            || json!({ "a": map_json(&a), "b": map_json(&b), "c": map_json(&c) }),
        );
    }
    report
}

pub fn polymap_evaluation_homomorphism(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x02);
    let mut report = PropertyReport::new("polymap_evaluation_homomorphism", opts.n(n), 1e-10);
    for _ in 0..report.samples {
        let f = sampling::contraction_real(&mut rng, WehlerClass::Iia, 0).unwrap();
        let g = if rng.random_bool(0.5) {
            sampling::commutant_element(&mut rng, &f).unwrap()
        } else {
            sampling::even_lift(&mut rng, &f).unwrap()
        };
        let h = if rng.random_bool(0.5) {
            sampling::commutant_element(&mut rng, &f).unwrap()
        } else {
            sampling::even_lift(&mut rng, &f).unwrap()
        };
        let (z, w) = sampling::w_point(&mut rng);
        let via_points = h.evaluate(z, w).and_then(|(hz, hw)| g.evaluate(hz, hw));
        let via_compose = g.compose(&h).and_then(|m| m.evaluate(z, w));
        match (via_points, via_compose) {
            (Ok(p), Ok(q)) => {
                let scale = (p.0.norm() + p.1.norm()).max(1.0);
                let residual = ((p.0 - q.0).norm() + (p.1 - q.1).norm()) / scale;
                report.record(
                    residual,
                    || json!({ "g": map_json(&g), "h": map_json(&h), "point": point_json(z, w) }),
                );
            }
            _ => report.fail("evaluation failed".into(), point_json(z, w)),
        }
    }
    report
}

pub fn polymap_conjugation_bookkeeping(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x03);
    let mut report = PropertyReport::new("polymap_conjugation_bookkeeping", opts.n(n), 1e-12);
    let cc = PolyMap::conjugation();
    for _ in 0..report.samples {
        let a = Complex64::new(rng.random_range(0.3..1.5), 0.0);
        let b = Complex64::new(rng.random_range(-1.5..1.5), 0.0);
        let d = Complex64::new(rng.random_range(0.3..1.5), 0.0);
        let m = PolyMap::triangular(a, b, rng.random_range(1..4), d);
        let conj = cc.compose(&m).unwrap().compose(&cc).unwrap();
        report.record(conj.difference(&m), || map_json(&m));
    }
    report
}

pub fn polymap_invert_two_sided(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x04);
    let mut report = PropertyReport::new("polymap_invert_two_sided", opts.n(n), 1e-9);
    let id = PolyMap::identity();
    for _ in 0..report.samples {
        let f = sampling::contraction_real(&mut rng, WehlerClass::Iii, 0).unwrap();
        let mut m = sampling::commutant_element(&mut rng, &f).unwrap();
        if rng.random_bool(0.3) {
            m = PolyMap::conjugation().compose(&m).unwrap();
        }
        match m.invert() {
            Ok(inv) => {
                let r1 = m.compose(&inv).unwrap().difference(&id);
                let r2 = inv.compose(&m).unwrap().difference(&id);
                report.record(r1.max(r2), || map_json(&m));
            }
            Err(e) => report.fail(format!("invert failed: {e}"), map_json(&m)),
        }
    }
    report
}

// ---------------------------------------------------------------------------
// contractions suite

pub fn classify_round_trip(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x10);
    let mut report = PropertyReport::new("classify_round_trip", opts.n(n), 0.0);
    for i in 0..report.samples {
        let class = BASE_CLASSES[i % BASE_CLASSES.len()];
        let negatives = (i % 3) as u8;
        let f = match class {
            WehlerClass::Iv | WehlerClass::Iib if negatives == 1 => {
                sampling::contraction_real(&mut rng, class, 0).unwrap()
            }
            _ => sampling::contraction_real(&mut rng, class, negatives).unwrap(),
        };
        let f = f.canonicalized();
        match classify(&f.polymap()) {
            Ok(back) if back == f => report.record(0.0, || json!(null)),
            Ok(back) => report.fail(
                "round trip changed the normal form".into(),
                json!({ "input": contraction_json(&f), "output": contraction_json(&back) }),
            ),
            Err(e) => report.fail(format!("classify failed: {e}"), contraction_json(&f)),
        }
    }
    report
}

pub fn biholomorphism_equivalence(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x11);
    let mut report = PropertyReport::new("biholomorphism_equivalence_relation", opts.n(n), 0.0);
    let mut pool = Vec::new();
    for i in 0..report.samples.max(10) {
        let class = BASE_CLASSES[i % BASE_CLASSES.len()];
        pool.push(sampling::contraction_real(&mut rng, class, (i % 2) as u8 * 2).unwrap());
        if i % 7 == 0 {
            pool.push(sampling::contraction_iicprime(&mut rng));
        }
    }
    // swapped IIc pairs land in the pool too
    if let Contraction::Iic { alpha, delta } =
        sampling::contraction_real(&mut rng, WehlerClass::Iic, 0).unwrap()
    {
        pool.push(Contraction::Iic { alpha, delta });
        pool.push(Contraction::Iic {
            alpha: delta,
            delta: alpha,
        });
    }
    for (i, a) in pool.iter().enumerate() {
        if !is_biholomorphic_pair(a, a) {
            report.fail("not reflexive".into(), contraction_json(a));
        }
        for b in pool.iter().skip(i + 1) {
            let ab = is_biholomorphic_pair(a, b);
            let ba = is_biholomorphic_pair(b, a);
            if ab != ba {
                report.fail(
                    "not symmetric".into(),
                    json!({ "a": contraction_json(a), "b": contraction_json(b) }),
                );
            }
            if ab {
                for c in pool.iter() {
                    if is_biholomorphic_pair(b, c) && !is_biholomorphic_pair(a, c) {
                        report.fail(
                            "not transitive".into(),
                            json!({
                                "a": contraction_json(a),
                                "b": contraction_json(b),
                                "c": contraction_json(c)
                            }),
                        );
                    }
                }
            }
        }
    }
    report
}

pub fn iic_swap_invariance(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x12);
    let mut report = PropertyReport::new("iic_swap_canonicalization", opts.n(n), 0.0);
    for _ in 0..report.samples {
        let f = sampling::contraction_real(&mut rng, WehlerClass::Iic, 0).unwrap();
        let Contraction::Iic { alpha, delta } = f else {
            unreachable!()
        };
        let straight = classify(&PolyMap::diagonal(alpha, delta));
        let swapped = classify(&PolyMap::diagonal(delta, alpha));
        match (straight, swapped) {
            (Ok(a), Ok(b)) if a == b => report.record(0.0, || json!(null)),
            (a, b) => report.fail(
                "swap changed classification".into(),
                json!({ "straight": format!("{a:?}"), "swapped": format!("{b:?}") }),
            ),
        }
    }
    report
}

// ---------------------------------------------------------------------------
// flows suite

fn positive_flow_classes(rng: &mut SampleRng) -> Vec<Contraction> {
    let mut out = Vec::new();
    for class in BASE_CLASSES {
        out.push(sampling::contraction_real(rng, class, 0).unwrap());
    }
    out.push(sampling::contraction_real(rng, WehlerClass::IiaTilde, 0).unwrap());
    out.push(sampling::contraction_real(rng, WehlerClass::IibTilde, 0).unwrap());
    out.retain(|f| f.structural_flags().positive_diagonal);
    out
}

pub fn root_composition(opts: &Options, rounds: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x20);
    let mut report = PropertyReport::new("kth_root_composition", opts.n(rounds), 1e-12);
    for _ in 0..report.samples {
        for f in positive_flow_classes(&mut rng) {
            for k in 2u32..=6 {
                let root = flows::kth_root(&f, k).unwrap();
                let mut acc = PolyMap::identity();
                for _ in 0..k {
                    acc = root.compose(&acc).unwrap();
                }
                report.record(
                    acc.difference(&f.polymap()),
                    || json!({ "contraction": contraction_json(&f), "k": k }),
                );
            }
        }
    }
    report
}

pub fn flow_group_law(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x21);
    let mut report = PropertyReport::new("flow_group_law", opts.n(n), 1e-10);
    for i in 0..report.samples {
        let classes = positive_flow_classes(&mut rng);
        let f = classes[i % classes.len()].clone();
        let t = rng.random_range(-3.0..3.0);
        let s = rng.random_range(-3.0..3.0);
        let lhs = flows::flow(&f, t + s).unwrap();
        let rhs = flows::flow(&f, t)
            .unwrap()
            .compose(&flows::flow(&f, s).unwrap())
            .unwrap();
        report.record(
            lhs.relative_difference(&rhs),
            || json!({ "contraction": contraction_json(&f), "t": t, "s": s }),
        );
    }
    report
}

pub fn flow_integer_powers(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x22);
    let mut report = PropertyReport::new("flow_integer_powers", opts.n(n), 1e-10);
    for i in 0..report.samples {
        let classes = positive_flow_classes(&mut rng);
        let f = classes[i % classes.len()].clone();
        let k = rng.random_range(-3i64..=3);
        let via_flow = flows::flow(&f, k as f64).unwrap();
        let via_power = f.polymap().power(k).unwrap();
        report.record(
            via_flow.relative_difference(&via_power),
            || json!({ "contraction": contraction_json(&f), "k": k }),
        );
    }
    report
}

pub fn root_commutant_stability(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x23);
    let mut report = PropertyReport::new("root_commutant_stability", opts.n(n), 1e-9);
    for i in 0..report.samples {
        let classes = positive_flow_classes(&mut rng);
        let f = classes[i % classes.len()].clone();
        let k = rng.random_range(2u32..=6);
        let root = flows::kth_root(&f, k).unwrap();
        let g = if rng.random_bool(0.5) || f.is_tilde() {
            sampling::commutant_element(&mut rng, &f).unwrap()
        } else {
            // anti-holomorphic commutant elements for the base classes
            let fam = realstruct::list_antiholomorphic_family(&f).unwrap();
            let params: Vec<Complex64> = fam
                .parameters
                .iter()
                .map(|_| sampling::complex_in_annulus(&mut rng, 0.4, 1.6))
                .collect();
            fam.instantiate(&params).unwrap()
        };
        let lhs = g.compose(&root).unwrap();
        let rhs = root.compose(&g).unwrap();
        report.record(
            lhs.relative_difference(&rhs),
            || json!({ "contraction": contraction_json(&f), "k": k, "g": map_json(&g) }),
        );
    }
    report
}

// ---------------------------------------------------------------------------
// realstruct suite

fn even_classes(rng: &mut SampleRng) -> Vec<Contraction> {
    let mut out = Vec::new();
    for class in BASE_CLASSES {
        for negatives in [0u8, 1, 2] {
            if matches!(class, WehlerClass::Iv | WehlerClass::Iib) && negatives == 1 {
                continue;
            }
            out.push(sampling::contraction_real(rng, class, negatives).unwrap());
        }
    }
    out.push(sampling::contraction_iicprime(rng));
    out
}

fn odd_classes(rng: &mut SampleRng) -> Vec<Contraction> {
    let mut out = Vec::new();
    for class in BASE_CLASSES {
        out.push(sampling::contraction_real(rng, class, 0).unwrap());
    }
    out.push(sampling::contraction_real(rng, WehlerClass::Iv, 2).unwrap());
    out.push(sampling::contraction_iicprime(rng));
    out
}

pub fn even_normalization(opts: &Options, per_class: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x30);
    let mut report = PropertyReport::new("even_normalization", opts.n(per_class), 1e-9);
    for _ in 0..report.samples {
        for f in even_classes(&mut rng) {
            let phi = sampling::even_lift(&mut rng, &f).unwrap();
            let standard = realstruct::canonical_structure(&f, Parity::Even)
                .unwrap()
                .lift;
            match realstruct::normalize_even(&f, &phi) {
                Ok(psi) => {
                    let got = psi
                        .compose(&standard)
                        .unwrap()
                        .compose(&psi.invert().unwrap())
                        .unwrap();
                    let fm = f.polymap();
                    let commute = psi
                        .compose(&fm)
                        .unwrap()
                        .difference(&fm.compose(&psi).unwrap());
                    report.record(
                        got.difference(&phi).max(commute),
                        || json!({ "contraction": contraction_json(&f), "phi": map_json(&phi) }),
                    );
                }
                Err(e) => report.fail(
                    format!("normalize_even failed: {e}"),
                    json!({ "contraction": contraction_json(&f), "phi": map_json(&phi) }),
                ),
            }
        }
    }
    report
}

pub fn odd_normalization(opts: &Options, per_class: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x31);
    let mut report = PropertyReport::new("odd_normalization", opts.n(per_class), 1e-9);
    for _ in 0..report.samples {
        for f in odd_classes(&mut rng) {
            let phi = sampling::odd_lift(&mut rng, &f).unwrap();
            let canonical = realstruct::canonical_structure(&f, Parity::Odd)
                .unwrap()
                .lift;
            match realstruct::normalize_odd(&f, &phi) {
                Ok(psi) => {
                    let got = psi
                        .compose(&canonical)
                        .unwrap()
                        .compose(&psi.invert().unwrap())
                        .unwrap();
                    let fm = f.polymap();
                    let commute = psi
                        .compose(&fm)
                        .unwrap()
                        .difference(&fm.compose(&psi).unwrap());
                    report.record(
                        got.difference(&phi).max(commute),
                        || json!({ "contraction": contraction_json(&f), "phi": map_json(&phi) }),
                    );
                }
                Err(e) => report.fail(
                    format!("normalize_odd failed: {e}"),
                    json!({ "contraction": contraction_json(&f), "phi": map_json(&phi) }),
                ),
            }
        }
    }
    report
}

pub fn parity_well_defined(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x32);
    let mut report = PropertyReport::new("parity_well_defined", opts.n(n), 0.0);
    for i in 0..report.samples {
        let f = if i % 3 == 0 {
            sampling::contraction_iicprime(&mut rng)
        } else {
            sampling::contraction_real(&mut rng, BASE_CLASSES[i % BASE_CLASSES.len()], 0).unwrap()
        };
        let lift = if i % 2 == 0 {
            sampling::even_lift(&mut rng, &f).unwrap()
        } else {
            sampling::odd_lift(&mut rng, &f).unwrap()
        };
        let Ok((n0, p0)) = realstruct::parity_of_lift(&f, &lift) else {
            report.fail("parity failed on base lift".into(), map_json(&lift));
            continue;
        };
        for k in -3i64..=3 {
            let shifted = lift.compose(&f.polymap().power(k).unwrap()).unwrap();
            match realstruct::parity_of_lift(&f, &shifted) {
                Ok((nk, pk)) => {
                    if pk != p0 || nk != n0 + 2 * k {
                        report.fail(
                            format!("deck power drifted: n0={n0}, k={k}, nk={nk}"),
                            json!({ "contraction": contraction_json(&f), "lift": map_json(&lift) }),
                        );
                    }
                }
                Err(e) => report.fail(
                    format!("parity failed on shifted lift: {e}"),
                    json!({ "contraction": contraction_json(&f), "k": k }),
                ),
            }
        }
    }
    report
}

pub fn canonical_odd_squares(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x33);
    let mut report = PropertyReport::new("canonical_odd_squares_to_f", opts.n(n), 1e-12);
    for _ in 0..report.samples {
        for f in odd_classes(&mut rng) {
            let s = realstruct::canonical_structure(&f, Parity::Odd).unwrap();
            let sq = s.lift.compose(&s.lift).unwrap();
            report.record(sq.difference(&f.polymap()), || contraction_json(&f));
        }
    }
    report
}

pub fn quaternionic_antilinear_square(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x34);
    let mut report = PropertyReport::new("quaternionic_a_squared_minus_id", opts.n(n), 1e-12);
    for _ in 0..report.samples {
        let f = sampling::contraction_real(&mut rng, WehlerClass::Iv, 2).unwrap();
        let phi = sampling::odd_lift(&mut rng, &f).unwrap();
        let Contraction::Iv { alpha } = f else {
            unreachable!()
        };
        let half_inv = Complex64::new(0.0, alpha.norm().sqrt()).inv();
        // a = phi o f^{-1/2}: matrix conj(scale) * Phi
        let s = half_inv.conj();
        let a = [
            phi.coefficient(0, 1, 0) * s,
            phi.coefficient(0, 0, 1) * s,
            phi.coefficient(1, 1, 0) * s,
            phi.coefficient(1, 0, 1) * s,
        ];
        let one = Complex64::new(1.0, 0.0);
        let sq = [
            a[0] * a[0].conj() + a[1] * a[2].conj() + one,
            a[0] * a[1].conj() + a[1] * a[3].conj(),
            a[2] * a[0].conj() + a[3] * a[2].conj(),
            a[2] * a[1].conj() + a[3] * a[3].conj() + one,
        ];
        let residual = sq.iter().map(|c| c.norm()).fold(0.0, f64::max);
        report.record(
            residual,
            || json!({ "contraction": contraction_json(&f), "phi": map_json(&phi) }),
        );
    }
    report
}

// ---------------------------------------------------------------------------
// topology suite

fn flow_sample_classes(rng: &mut SampleRng) -> Vec<Contraction> {
    vec![
        sampling::contraction_real(rng, WehlerClass::Iv, 0).unwrap(),
        sampling::contraction_real(rng, WehlerClass::Iii, 0).unwrap(),
        sampling::contraction_real(rng, WehlerClass::IiaTilde, 0).unwrap(),
        sampling::contraction_real(rng, WehlerClass::IibTilde, 0).unwrap(),
        sampling::contraction_real(rng, WehlerClass::Iic, 0).unwrap(),
    ]
}

pub fn differential_inequality(opts: &Options, per_class: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x40);
    let mut report = PropertyReport::new("eta_differential_inequality", opts.n(per_class), 1e-9);
    let classes = flow_sample_classes(&mut rng);
    for f in &classes {
        let spec = EtaSpec::for_contraction(f).unwrap();
        let flow = FlowSpec::new(f.clone()).unwrap();
        for _ in 0..report.samples {
            let (z, w) = sampling::w_point(&mut rng);
            let eta = spec.eta(z, w);
            let deriv = topology::eta_flow_derivative(&flow, &spec, 0.0, z, w);
            // eta' <= C eta, i.e. eta' - C eta <= 0 (+ tolerance)
            report.record(
                deriv - spec.c * eta,
                || json!({ "contraction": contraction_json(f), "point": point_json(z, w) }),
            );
        }
    }
    report
}

pub fn differential_equality_iv(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x41);
    let mut report = PropertyReport::new("eta_equality_class_iv", opts.n(n), 1e-12);
    let f = sampling::contraction_real(&mut rng, WehlerClass::Iv, 0).unwrap();
    let spec = EtaSpec::for_contraction(&f).unwrap();
    let flow = FlowSpec::new(f.clone()).unwrap();
    for _ in 0..report.samples {
        let (z, w) = sampling::w_point(&mut rng);
        let eta = spec.eta(z, w);
        let deriv = topology::eta_flow_derivative(&flow, &spec, 0.0, z, w);
        report.record(
            (deriv - spec.c * eta).abs() / eta.max(1e-6),
            || json!({ "contraction": contraction_json(&f), "point": point_json(z, w) }),
        );
    }
    report
}

pub fn eta_strict_decrease(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x42);
    let mut report = PropertyReport::new("eta_strict_decrease", opts.n(n), 0.0);
    let classes = flow_sample_classes(&mut rng);
    for i in 0..report.samples {
        let f = &classes[i % classes.len()];
        let spec = EtaSpec::for_contraction(f).unwrap();
        let flow = FlowSpec::new(f.clone()).unwrap();
        let (z, w) = sampling::w_point(&mut rng);
        let t1 = rng.random_range(-2.0..2.0);
        let t2 = t1 + rng.random_range(0.01..2.0);
        let (z1, w1) = flow.at(t1).evaluate(z, w).unwrap();
        let (z2, w2) = flow.at(t2).evaluate(z, w).unwrap();
        let (e1, e2) = (spec.eta(z1, w1), spec.eta(z2, w2));
        if e2 >= e1 {
            report.fail(
                format!("eta not decreasing: {e1} -> {e2}"),
                json!({ "contraction": contraction_json(f), "t1": t1, "t2": t2 }),
            );
        }
    }
    report
}

pub fn trivialization_round_trip(opts: &Options, per_class: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x43);
    let mut report = PropertyReport::new("big_f_round_trip", opts.n(per_class), 1e-8);
    let classes = flow_sample_classes(&mut rng);
    for f in &classes {
        for _ in 0..report.samples {
            let (y0, y1) = sampling::w_point(&mut rng);
            match topology::big_f_inverse(f, y0, y1) {
                Ok((t, (z, w))) => {
                    let (b0, b1) = topology::big_f(f, t, z, w).unwrap();
                    let scale = (y0.norm() + y1.norm()).max(1.0);
                    report.record(((b0 - y0).norm() + (b1 - y1).norm()) / scale, || {
                        json!({ "contraction": contraction_json(f), "point": point_json(y0, y1) })
                    });
                }
                Err(e) => report.fail(
                    format!("big_f_inverse failed: {e}"),
                    json!({ "contraction": contraction_json(f), "point": point_json(y0, y1) }),
                ),
            }
        }
    }
    report
}

pub fn hopf_canonical_representatives(opts: &Options, per_class: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x44);
    let mut report = PropertyReport::new("hopf_canonical_representatives", opts.n(per_class), 1e-8);
    let mut classes = flow_sample_classes(&mut rng);
    classes.push(sampling::contraction_real(&mut rng, WehlerClass::Iii, 1).unwrap());
    classes.push(sampling::contraction_real(&mut rng, WehlerClass::Iv, 2).unwrap());
    classes.push(sampling::contraction_iicprime(&mut rng));
    for f in &classes {
        for _ in 0..report.samples {
            let (y0, y1) = sampling::w_point(&mut rng);
            let r1 = topology::canonical_hopf_representative(f, y0, y1);
            let fy = f.polymap().evaluate(y0, y1).unwrap();
            let r2 = topology::canonical_hopf_representative(f, fy.0, fy.1);
            match (r1, r2) {
                (Ok(a), Ok(b)) => {
                    let scale = (a.0.norm() + a.1.norm()).max(1.0);
                    report.record(((a.0 - b.0).norm() + (a.1 - b.1).norm()) / scale, || {
                        json!({ "contraction": contraction_json(f), "point": point_json(y0, y1) })
                    });
                }
                (r1, r2) => report.fail(
                    format!("canonicalization failed: {r1:?} vs {r2:?}"),
                    json!({ "contraction": contraction_json(f), "point": point_json(y0, y1) }),
                ),
            }
        }
    }
    report
}

/// The seven chart routes, each exercised over all classes that reach it.
fn chart_cases(rng: &mut SampleRng) -> Vec<(Contraction, Parity)> {
    let mut cases = Vec::new();
    // even, positive diagonal (direct route)
    for class in BASE_CLASSES {
        cases.push((
            sampling::contraction_real(rng, class, 0).unwrap(),
            Parity::Even,
        ));
    }
    // even, one negative (via Q')
    for class in [WehlerClass::Iii, WehlerClass::Iia, WehlerClass::Iic] {
        cases.push((
            sampling::contraction_real(rng, class, 1).unwrap(),
            Parity::Even,
        ));
    }
    // even, two negatives (via Q'')
    for class in BASE_CLASSES {
        cases.push((
            sampling::contraction_real(rng, class, 2).unwrap(),
            Parity::Even,
        ));
    }
    // even, II'c (flattening route)
    cases.push((sampling::contraction_iicprime(rng), Parity::Even));
    // odd, positive diagonal
    for class in BASE_CLASSES {
        cases.push((
            sampling::contraction_real(rng, class, 0).unwrap(),
            Parity::Odd,
        ));
    }
    // odd, II'c
    cases.push((sampling::contraction_iicprime(rng), Parity::Odd));
    // odd, IV negative (quaternionic route)
    cases.push((
        sampling::contraction_real(rng, WehlerClass::Iv, 2).unwrap(),
        Parity::Odd,
    ));
    cases
}

pub fn chart_equivariance(opts: &Options, per_route: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x45);
    let mut report =
        PropertyReport::new("chart_equivariance", opts.n(per_route), topology::CHART_TOL);
    for (f, parity) in chart_cases(&mut rng) {
        let s = realstruct::canonical_structure(&f, parity).unwrap();
        let chart = match topology::build_chart(&f, &s) {
            Ok(c) => c,
            Err(e) => {
                report.fail(format!("chart build failed: {e}"), contraction_json(&f));
                continue;
            }
        };
        let points: Vec<_> = (0..report.samples)
            .map(|_| sampling::w_point(&mut rng))
            .collect();
        match topology::chart_equivariance_residual(&s, &chart, &points) {
            Ok(res) => report.record(res, || {
                json!({
                    "contraction": contraction_json(&f),
                    "parity": format!("{parity:?}"),
                    "route": format!("{:?}", chart.route),
                })
            }),
            Err(e) => report.fail(
                format!("chart evaluation failed: {e}"),
                contraction_json(&f),
            ),
        }
    }
    report
}

pub fn chart_round_trip(opts: &Options, per_route: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x4b);
    let mut report =
        PropertyReport::new("chart_forward_backward_identity", opts.n(per_route), 1e-8);
    for (f, parity) in chart_cases(&mut rng) {
        let s = realstruct::canonical_structure(&f, parity).unwrap();
        let chart = match topology::build_chart(&f, &s) {
            Ok(c) => c,
            Err(e) => {
                report.fail(format!("chart build failed: {e}"), contraction_json(&f));
                continue;
            }
        };
        for _ in 0..report.samples {
            let m = ModelPoint::new(
                sampling::unit_complex(&mut rng),
                sampling::complex_in_disk(&mut rng, 1.0),
                sampling::complex_in_disk(&mut rng, 1.0),
            )
            .renormalized();
            let round = chart
                .backward
                .evaluate(ChainPoint::Model(m))
                .and_then(|w| chart.forward.evaluate(w))
                .and_then(|p| p.as_model());
            match round {
                Ok(back) => report.record(m.distance(&back), || {
                    json!({ "contraction": contraction_json(&f), "model_point": model_json(&m) })
                }),
                Err(e) => report.fail(
                    format!("round trip failed: {e}"),
                    json!({ "contraction": contraction_json(&f), "model_point": model_json(&m) }),
                ),
            }
        }
    }
    report
}

pub fn cover_invariance(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x46);
    let mut report = PropertyReport::new("cover_invariance", opts.n(n), 1e-12);
    for _ in 0..report.samples {
        let p = ModelPoint::new(
            sampling::unit_complex(&mut rng),
            sampling::complex_in_disk(&mut rng, 1.0),
            sampling::complex_in_disk(&mut rng, 1.0),
        )
        .renormalized();
        for variant in [CoverVariant::Prime, CoverVariant::DoublePrime] {
            let chain = ChainMap::new(vec![NodeKind::Cover { variant }]);
            let a1 = chain
                .evaluate(ChainPoint::Model(p))
                .unwrap()
                .as_model()
                .unwrap();
            let a2 = chain
                .evaluate(ChainPoint::Model(topology::deck_involution(variant, p)))
                .unwrap()
                .as_model()
                .unwrap();
            report.record(a1.distance(&a2), || model_json(&p));
        }
    }
    report
}

pub fn flattening_conjugations(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x47);
    let mut report = PropertyReport::new("iicprime_flattening_conjugations", opts.n(n), 1e-9);
    let f = sampling::contraction_iicprime(&mut rng);
    let Contraction::IicPrime { alpha } = f else {
        unreachable!()
    };
    let l = PolyMap::linear(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -1.0),
    );
    let twist = alpha.arg() / alpha.norm().ln();
    let frak_l = ChainMap::new(vec![
        NodeKind::RadialTwist { coef: twist },
        NodeKind::Poly { map: l },
    ]);
    let frak_l_inv = frak_l.inverse();
    let f_mod = Contraction::Iv {
        alpha: Complex64::new(alpha.norm(), 0.0),
    };
    for _ in 0..report.samples {
        let (z, w) = sampling::w_point(&mut rng);
        // frak_l^{-1} o f o frak_l = f_{|alpha|}
        let through = frak_l
            .evaluate(ChainPoint::w(z, w))
            .and_then(|p| p.as_w())
            .and_then(|(a, b)| f.polymap().evaluate(a, b))
            .and_then(|(a, b)| frak_l_inv.evaluate(ChainPoint::w(a, b)))
            .and_then(|p| p.as_w())
            .unwrap();
        let direct = f_mod.polymap().evaluate(z, w).unwrap();
        let res1 = (through.0 - direct.0).norm() + (through.1 - direct.1).norm();
        // frak_l^{-1} o c' o frak_l = c
        let through_c = frak_l
            .evaluate(ChainPoint::w(z, w))
            .and_then(|p| p.as_w())
            .and_then(|(a, b)| PolyMap::swap_conjugation().evaluate(a, b))
            .and_then(|(a, b)| frak_l_inv.evaluate(ChainPoint::w(a, b)))
            .and_then(|p| p.as_w())
            .unwrap();
        let res2 = (through_c.0 - z.conj()).norm() + (through_c.1 - w.conj()).norm();
        report.record(
            res1.max(res2),
            || json!({ "alpha": [alpha.re, alpha.im], "point": point_json(z, w) }),
        );
    }
    report
}

pub fn sphere_normalization_commutes(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x48);
    let mut report = PropertyReport::new("sphere_normalization_commutes", opts.n(n), 1e-12);
    let f = sampling::contraction_real(&mut rng, WehlerClass::IiaTilde, 0).unwrap();
    let spec = EtaSpec::for_contraction(&f).unwrap();
    type Invo = fn(Complex64, Complex64) -> (Complex64, Complex64);
    let involutions: [Invo; 3] = [|z, w| (z, -w), |z, w| (-z, -w), |z, w| (z.conj(), w.conj())];
    for _ in 0..report.samples {
        let (z, w) = sampling::w_point(&mut rng);
        let (sz, sw) = topology::sigma_project(&spec, z, w).unwrap();
        let norm = (sz.norm_sqr() + sw.norm_sqr()).sqrt();
        let n_point = (sz / norm, sw / norm);
        for inv in involutions {
            // n commutes with the involution on Sigma
            let (iz, iw) = inv(sz, sw);
            let n_of_inv = {
                let nn = (iz.norm_sqr() + iw.norm_sqr()).sqrt();
                (iz / nn, iw / nn)
            };
            let inv_of_n = inv(n_point.0, n_point.1);
            let res = (n_of_inv.0 - inv_of_n.0).norm() + (n_of_inv.1 - inv_of_n.1).norm();
            report.record(res, || point_json(z, w));
        }
    }
    report
}

pub fn odd_freeness(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x49);
    let mut report = PropertyReport::new("odd_structures_act_freely", opts.n(n), 0.0);
    let cases = vec![
        sampling::contraction_real(&mut rng, WehlerClass::Iv, 0).unwrap(),
        sampling::contraction_real(&mut rng, WehlerClass::Iv, 2).unwrap(),
        sampling::contraction_real(&mut rng, WehlerClass::Iia, 0).unwrap(),
        sampling::contraction_iicprime(&mut rng),
    ];
    for f in &cases {
        let s = realstruct::canonical_structure(f, Parity::Odd).unwrap();
        for _ in 0..report.samples {
            let (z, w) = sampling::w_point(&mut rng);
            let (sz, sw) = s.lift.evaluate(z, w).unwrap();
            // Hopf-level distance: min over deck shifts
            let mut best = f64::INFINITY;
            let fm = f.polymap();
            let inv = fm.invert().unwrap();
            let mut fwd = (sz, sw);
            let mut bwd = (sz, sw);
            let scale = (z.norm_sqr() + w.norm_sqr()).sqrt();
            best = best.min(((sz - z).norm_sqr() + (sw - w).norm_sqr()).sqrt() / scale);
            for _ in 1..=8 {
                fwd = fm.evaluate(fwd.0, fwd.1).unwrap();
                bwd = inv.evaluate(bwd.0, bwd.1).unwrap();
                best = best.min(((fwd.0 - z).norm_sqr() + (fwd.1 - w).norm_sqr()).sqrt() / scale);
                best = best.min(((bwd.0 - z).norm_sqr() + (bwd.1 - w).norm_sqr()).sqrt() / scale);
            }
            if best < 1e-3 {
                report.fail(
                    format!("near-fixed point of an odd structure (residual {best:.3e})"),
                    json!({ "contraction": contraction_json(f), "point": point_json(z, w) }),
                );
            }
        }
    }
    report
}

pub fn locus_classifier_grid(opts: &Options, _n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x4a);
    let mut report = PropertyReport::new("real_locus_grid", 0, 0.0);
    let mut cases: Vec<(Contraction, Parity)> = Vec::new();
    for class in BASE_CLASSES {
        for negatives in [0u8, 1, 2] {
            if matches!(class, WehlerClass::Iv | WehlerClass::Iib) && negatives == 1 {
                continue;
            }
            for _ in 0..3 {
                cases.push((
                    sampling::contraction_real(&mut rng, class, negatives).unwrap(),
                    Parity::Even,
                ));
            }
        }
    }
    for _ in 0..5 {
        cases.push((sampling::contraction_iicprime(&mut rng), Parity::Even));
    }
    // odd cases
    for class in BASE_CLASSES {
        cases.push((
            sampling::contraction_real(&mut rng, class, 0).unwrap(),
            Parity::Odd,
        ));
    }
    cases.push((
        sampling::contraction_real(&mut rng, WehlerClass::Iv, 2).unwrap(),
        Parity::Odd,
    ));
    cases.push((sampling::contraction_iicprime(&mut rng), Parity::Odd));
    report.samples = cases.len();
    for (f, parity) in cases {
        let s = realstruct::canonical_structure(&f, parity).unwrap();
        let got = topology::real_locus(&f, &s);
        let expected = match parity {
            Parity::Odd => RealLocusKind::Empty,
            Parity::Even => {
                if f.structural_flags().is_iic_prime {
                    RealLocusKind::Torus
                } else {
                    let (d1, d2) = f.diagonal();
                    if d1.re * d2.re > 0.0 {
                        RealLocusKind::Torus
                    } else {
                        RealLocusKind::KleinBottle
                    }
                }
            }
        };
        if got.kind != expected {
            report.fail(
                format!("locus mismatch: got {:?}, expected {expected:?}", got.kind),
                contraction_json(&f),
            );
        }
        // sampling oracle: even standard structures fix their real points
        if parity == Parity::Even {
            let (z, w) = sampling::w_point(&mut rng);
            let fixed = if f.structural_flags().is_iic_prime {
                (z, z.conj())
            } else {
                (
                    Complex64::new(z.re, 0.0),
                    Complex64::new(w.re.max(0.1), 0.0),
                )
            };
            let (sz, sw) = s.lift.evaluate(fixed.0, fixed.1).unwrap();
            let res = (sz - fixed.0).norm() + (sw - fixed.1).norm();
            if res > 1e-12 {
                report.fail(
                    format!("standard structure moved a real point by {res:.3e}"),
                    contraction_json(&f),
                );
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// picard suite

pub fn bundle_involution_agreement(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x50);
    let mut report = PropertyReport::new("bundle_involution_agreement", opts.n(n), 0.0);
    for i in 0..report.samples {
        let parity = if i % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        };
        let f = if i % 5 == 0 {
            sampling::contraction_iicprime(&mut rng)
        } else if i % 5 == 1 && parity == Parity::Odd {
            sampling::contraction_real(&mut rng, WehlerClass::Iv, 2).unwrap()
        } else {
            sampling::contraction_real(&mut rng, BASE_CLASSES[i % BASE_CLASSES.len()], 0).unwrap()
        };
        let s = realstruct::canonical_structure(&f, parity).unwrap();
        let zeta = {
            let mag = rng.random_range(0.3..4.0);
            if rng.random_bool(0.5) {
                -mag
            } else {
                mag
            }
        };
        // Half the samples sit exactly on the closed-form circle.
        let datum =
            picard::real_structures_on_line_bundle(parity, Complex64::new(zeta, 0.0)).unwrap();
        let nu = if rng.random_bool(0.5) {
            match datum.status {
                picard::BundleRealStructures::Circle { radius } => {
                    sampling::unit_complex(&mut rng) * radius
                }
                picard::BundleRealStructures::None => {
                    sampling::complex_in_annulus(&mut rng, 0.3, 2.0)
                }
            }
        } else {
            sampling::complex_in_annulus(&mut rng, 0.3, 2.0)
        };
        let simulated = picard::verify_bundle_involution(&f, &s, zeta, nu, 6, &mut rng).unwrap();
        let closed_form = match datum.status {
            picard::BundleRealStructures::None => false,
            picard::BundleRealStructures::Circle { radius } => (nu.norm() - radius).abs() <= 1e-9,
        };
        if simulated != closed_form {
            report.fail(
                format!("simulation {simulated} vs closed form {closed_form}"),
                json!({
                    "contraction": contraction_json(&f),
                    "parity": format!("{parity:?}"),
                    "zeta": zeta,
                    "nu": [nu.re, nu.im],
                }),
            );
        }
    }
    report
}

pub fn pic_involution_properties(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x51);
    let mut report = PropertyReport::new("pic_involution_homomorphism", opts.n(n), 1e-12);
    for _ in 0..report.samples {
        let a = sampling::complex_in_annulus(&mut rng, 0.2, 3.0);
        let b = sampling::complex_in_annulus(&mut rng, 0.2, 3.0);
        let hom = (picard::pic_involution(a * b).unwrap()
            - picard::pic_involution(a).unwrap() * picard::pic_involution(b).unwrap())
        .norm();
        let invo = (picard::pic_involution(picard::pic_involution(a).unwrap()).unwrap() - a).norm();
        report.record(hom.max(invo), || json!([[a.re, a.im], [b.re, b.im]]));
    }
    report
}

pub fn odd_nonsurjectivity_grid(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x52);
    let mut report = PropertyReport::new("odd_nonsurjectivity_is_negative_reals", opts.n(n), 0.0);
    for _ in 0..report.samples {
        let mag = rng.random_range(0.1..5.0);
        for sign in [-1.0, 1.0] {
            let zeta = Complex64::new(sign * mag, 0.0);
            let d = picard::real_structures_on_line_bundle(Parity::Odd, zeta).unwrap();
            let exists = matches!(d.status, picard::BundleRealStructures::Circle { .. });
            if exists != (sign > 0.0) {
                report.fail(
                    format!("odd existence wrong at zeta = {}", zeta.re),
                    json!(zeta.re),
                );
            }
        }
    }
    report
}

pub fn circle_action_reaches_all(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x53);
    let mut report = PropertyReport::new("circle_action_transitive", opts.n(n), 1e-12);
    for _ in 0..report.samples {
        let target = sampling::unit_complex(&mut rng);
        let z = picard::circle_action_solve(target);
        report.record(((z / z.norm()).powu(2) - target).norm(), || {
            json!([target.re, target.im])
        });
    }
    report
}

// ---------------------------------------------------------------------------
// autgroup suite

/// Commutant arithmetic multiplies coefficients like delta^{-r k}; moduli are
/// kept away from 0 and r small so shifted products stay within f64 accuracy.
fn autgroup_classes(rng: &mut SampleRng) -> Vec<Contraction> {
    let real = |rng: &mut SampleRng| Complex64::new(rng.random_range(0.3..0.8), 0.0);
    let mut out = vec![
        Contraction::Iv { alpha: real(rng) },
        Contraction::Iii {
            delta: real(rng),
            r: rng.random_range(2u32..=3),
        },
        Contraction::Iia {
            delta: real(rng),
            r: rng.random_range(2u32..=3),
        },
        Contraction::Iib { alpha: real(rng) },
    ];
    out.push(loop {
        let cand = Contraction::Iic {
            alpha: real(rng),
            delta: real(rng),
        };
        if cand.validate().is_ok() {
            break cand;
        }
    });
    out.push(sampling::contraction_iicprime(rng));
    out
}

pub fn canonical_rep_idempotent(opts: &Options, per_class: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x60);
    let mut report = PropertyReport::new(
        "canonical_rep_idempotent_and_constant",
        opts.n(per_class),
        autgroup::COSET_TOL,
    );
    for _ in 0..report.samples {
        for f in autgroup_classes(&mut rng) {
            let raw = sampling::commutant_element(&mut rng, &f).unwrap();
            let g = match autgroup::commutant_element(&f, &raw) {
                Ok(g) => g,
                Err(e) => {
                    report.fail(format!("element rejected: {e}"), map_json(&raw));
                    continue;
                }
            };
            let rep = autgroup::canonical_rep(&f, &g).unwrap();
            let rep2 = autgroup::canonical_rep(&f, &rep).unwrap();
            let mut residual = rep.map.difference(&rep2.map);
            for k in -3i64..=3 {
                let shifted = autgroup::commutant_element(
                    &f,
                    &g.map.compose(&f.polymap().power(k).unwrap()).unwrap(),
                )
                .unwrap();
                let rep_k = autgroup::canonical_rep(&f, &shifted).unwrap();
                residual = residual.max(rep_k.map.difference(&rep.map));
            }
            report.record(
                residual,
                || json!({ "contraction": contraction_json(&f), "g": map_json(&g.map) }),
            );
        }
    }
    report
}

fn g1_el(f: &Contraction, m: &PolyMap) -> autgroup::CommutantElement {
    autgroup::commutant_element(f, m).expect("sampled commutant element is valid")
}

pub fn coset_multiplication_well_defined(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x61);
    let mut report = PropertyReport::new(
        "coset_multiplication_well_defined",
        opts.n(n),
        autgroup::COSET_TOL,
    );
    for i in 0..report.samples {
        let classes = autgroup_classes(&mut rng);
        let f = classes[i % classes.len()].clone();
        let g1 = sampling::commutant_element(&mut rng, &f).unwrap();
        let g2 = sampling::commutant_element(&mut rng, &f).unwrap();
        // Single deck shifts keep the representative product well inside f64
        // accuracy; opposite large shifts would cancel catastrophically.
        let k1 = rng.random_range(-1i64..=1);
        let k2 = rng.random_range(-1i64..=1);
        let fm = f.polymap();
        let shifted1 = g1.compose(&fm.power(k1).unwrap()).unwrap();
        let shifted2 = g2.compose(&fm.power(k2).unwrap()).unwrap();
        let prod = autgroup::commutant_element(&f, &g1.compose(&g2).unwrap()).unwrap();
        let prod_shifted =
            autgroup::commutant_element(&f, &shifted1.compose(&shifted2).unwrap()).unwrap();
        let r1 = autgroup::canonical_rep(&f, &prod).unwrap();
        let r2 = autgroup::canonical_rep(&f, &prod_shifted).unwrap();
        let mut residual = r1.map.difference(&r2.map);
        // and the product of canonical representatives lands in the same coset
        let c1 = autgroup::canonical_rep(&f, &g1_el(&f, &g1)).unwrap();
        let c2 = autgroup::canonical_rep(&f, &g1_el(&f, &g2)).unwrap();
        let prod_canon =
            autgroup::commutant_element(&f, &c1.map.compose(&c2.map).unwrap()).unwrap();
        let r3 = autgroup::canonical_rep(&f, &prod_canon).unwrap();
        residual = residual.max(r1.map.difference(&r3.map));
        report.record(residual, || {
            json!({ "contraction": contraction_json(&f), "g1": map_json(&g1), "g2": map_json(&g2) })
        });
    }
    report
}

pub fn spinc_homomorphism(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x62);
    let mut report = PropertyReport::new("spinc_witness_homomorphism", opts.n(n), 1e-10);
    for _ in 0..report.samples {
        let a = sampling::rpsu2_element(&mut rng);
        let b = sampling::rpsu2_element(&mut rng);
        let ab = [
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ];
        let (ra, ua) = autgroup::spinc_witness(&a).unwrap();
        let (rb, ub) = autgroup::spinc_witness(&b).unwrap();
        let (rab, uab) = autgroup::spinc_witness(&ab).unwrap();
        let scalar = (rab - ra * rb).abs();
        let uaub = [
            ua[0] * ub[0] + ua[1] * ub[2],
            ua[0] * ub[1] + ua[1] * ub[3],
            ua[2] * ub[0] + ua[3] * ub[2],
            ua[2] * ub[1] + ua[3] * ub[3],
        ];
        let mat = uab
            .iter()
            .zip(uaub.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        report.record(scalar.max(mat), || {
            json!({
                "a": a.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
                "b": b.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
            })
        });
    }
    report
}

pub fn iii_semidirect_law(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x63);
    let mut report = PropertyReport::new("iii_semidirect_law", opts.n(n), 1e-12);
    for _ in 0..report.samples {
        let r = rng.random_range(2u32..5);
        let nz = |rng: &mut SampleRng| {
            let v: f64 = rng.random_range(0.3..2.0);
            if rng.random_bool(0.5) {
                -v
            } else {
                v
            }
        };
        let x = (nz(&mut rng), nz(&mut rng), rng.random_range(-1.5..1.5));
        let y = (nz(&mut rng), nz(&mut rng), rng.random_range(-1.5..1.5));
        let (a, d, b) = autgroup::iii_semidirect_product(x, y, r);
        let lhs = autgroup::iii_group_element(x.0, x.1, x.2, r)
            .compose(&autgroup::iii_group_element(y.0, y.1, y.2, r))
            .unwrap();
        let rhs = autgroup::iii_group_element(a, d, b, r);
        report.record(lhs.difference(&rhs), || json!({ "x": x, "y": y, "r": r }));
    }
    report
}

pub fn membership_commutes_with_conjugation(opts: &Options, n: usize) -> PropertyReport {
    let mut rng = sampling::rng_from_seed(opts.seed ^ 0x64);
    let mut report = PropertyReport::new("membership_commutes_with_conjugation", opts.n(n), 1e-10);
    for i in 0..report.samples {
        let classes = autgroup_classes(&mut rng);
        let f = classes[i % classes.len()].clone();
        let flags = f.structural_flags();
        // build an element that is a member: realify parameters (or a, conj a)
        let raw = sampling::commutant_element(&mut rng, &f).unwrap();
        let member_map = if flags.is_iic_prime {
            let a = raw.coefficient(0, 1, 0);
            PolyMap::diagonal(a, a.conj())
        } else {
            let realify =
                |c: Complex64| Complex64::new(if c.re.abs() < 0.05 { 0.3 } else { c.re }, 0.0);
            let p: Vec<_> = raw
                .p_terms()
                .iter()
                .map(|t| crate::polymap::Term::new(t.pz, t.pw, realify(t.coeff)))
                .collect();
            let q: Vec<_> = raw
                .q_terms()
                .iter()
                .map(|t| crate::polymap::Term::new(t.pz, t.pw, realify(t.coeff)))
                .collect();
            PolyMap::new(false, p, q)
        };
        let member_map = match f {
            // keep the sheared classes consistent: z-coefficient = a^r
            Contraction::Iia { r, .. } => {
                let a = member_map.coefficient(1, 0, 1);
                PolyMap::triangular(
                    crate::cx::powi(a, r as i32),
                    member_map.coefficient(0, 0, r),
                    r,
                    a,
                )
            }
            Contraction::Iib { .. } => {
                let a = member_map.coefficient(1, 0, 1);
                PolyMap::triangular(a, member_map.coefficient(0, 0, 1), 1, a)
            }
            _ => member_map,
        };
        let g = match autgroup::commutant_element(&f, &member_map) {
            Ok(g) => g,
            Err(e) => {
                report.fail(format!("member rejected: {e}"), map_json(&member_map));
                continue;
            }
        };
        match autgroup::membership_even(&f, &g) {
            Ok(true) => {
                let standard = if flags.is_iic_prime {
                    PolyMap::swap_conjugation()
                } else {
                    PolyMap::conjugation()
                };
                let lhs = g.map.compose(&standard).unwrap();
                let rhs = standard.compose(&g.map).unwrap();
                report.record(lhs.difference(&rhs), || map_json(&g.map));
            }
            Ok(false) => report.fail("member not recognized".into(), map_json(&g.map)),
            Err(e) => report.fail(format!("membership failed: {e}"), map_json(&g.map)),
        }
    }
    report
}

// ---------------------------------------------------------------------------
// suite registry

pub fn run_suite(name: &str, opts: &Options) -> Result<SuiteReport> {
    let props = match name {
        "polymap" => vec![
            polymap_associativity(opts, 200),
            polymap_evaluation_homomorphism(opts, 1000),
            polymap_conjugation_bookkeeping(opts, 200),
            polymap_invert_two_sided(opts, 200),
        ],
        "contractions" => vec![
            classify_round_trip(opts, 100),
            biholomorphism_equivalence(opts, 100),
            iic_swap_invariance(opts, 100),
        ],
        "flows" => vec![
            root_composition(opts, 1),
            flow_group_law(opts, 200),
            flow_integer_powers(opts, 100),
            root_commutant_stability(opts, 50),
        ],
        "realstruct" => vec![
            even_normalization(opts, 100),
            odd_normalization(opts, 100),
            parity_well_defined(opts, 60),
            canonical_odd_squares(opts, 25),
            quaternionic_antilinear_square(opts, 100),
        ],
        "topology" => vec![
            differential_inequality(opts, 10_000),
            differential_equality_iv(opts, 10_000),
            eta_strict_decrease(opts, 500),
            trivialization_round_trip(opts, 1000),
            hopf_canonical_representatives(opts, 200),
            chart_equivariance(opts, 1000),
            chart_round_trip(opts, 100),
            cover_invariance(opts, 500),
            flattening_conjugations(opts, 1000),
            sphere_normalization_commutes(opts, 500),
            odd_freeness(opts, 200),
            locus_classifier_grid(opts, 0),
        ],
        "picard" => vec![
            bundle_involution_agreement(opts, 200),
            pic_involution_properties(opts, 200),
            odd_nonsurjectivity_grid(opts, 50),
            circle_action_reaches_all(opts, 100),
        ],
        "autgroup" => vec![
            canonical_rep_idempotent(opts, 34),
            coset_multiplication_well_defined(opts, 100),
            spinc_homomorphism(opts, 100),
            iii_semidirect_law(opts, 100),
            membership_commutes_with_conjugation(opts, 60),
        ],
        "all" => {
            let mut props = Vec::new();
            for sub in [
                "polymap",
                "contractions",
                "flows",
                "realstruct",
                "topology",
                "picard",
                "autgroup",
            ] {
                props.extend(run_suite(sub, opts)?.properties);
            }
            props
        }
        other => {
            return Err(crate::error::Error::InvalidInput(format!(
                "unknown suite '{other}' (expected polymap|contractions|flows|realstruct|topology|picard|autgroup|all)"
            )))
        }
    };
    Ok(SuiteReport::collect(name, opts.seed, props))
}
