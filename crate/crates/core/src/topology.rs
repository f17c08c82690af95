//! Weight functions eta_B^q, the slice Sigma, the trivializing diffeomorphism
//! F(t, Z) = f^t(Z), the model involutions on S^1 x S^3, the equivariant
//! charts, the real locus and the quotient description.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainMap, ChainPoint, CoverVariant, NodeKind};
use crate::contraction::Contraction;
use crate::cx;
use crate::error::{Error, Result};
use crate::flows::{self, FlowSpec};
use crate::polymap::PolyMap;
use crate::realstruct::{self, Parity, RealStructureSpec};

/// Tolerance on |eta - 1| for the slice solvers.
pub const ETA_TOL: f64 = 1e-12;
/// Iteration cap for the monotone root finders.
pub const MAX_ITER: usize = 200;
/// Equivariance tolerance for chart verification.
pub const CHART_TOL: f64 = 1e-8;

/// Parameters of the weight function eta(z, w) = |z|^2 + B |w|^{2q} and the
/// decay constant C of the differential inequality eta_Z' <= C eta_Z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaSpec {
    pub q: u32,
    pub b: f64,
    pub c: f64,
}

impl EtaSpec {
    /// The table row for a contraction with real coefficients and positive
    /// diagonal (tilde classes allowed). B is max(1, table bound).
    pub fn for_contraction(f: &Contraction) -> Result<EtaSpec> {
        let flags = f.structural_flags();
        if !flags.real_coeffs {
            return Err(Error::NotRealCoefficients);
        }
        if !flags.positive_diagonal {
            return Err(Error::NotPositiveDiagonal);
        }
        let (d1, d2) = f.diagonal();
        let (a1, a2) = (d1.re, d2.re);
        let spec = match f {
            Contraction::Iv { .. } => EtaSpec {
                q: 1,
                b: 1.0,
                c: 2.0 * a1.ln(),
            },
            Contraction::Iii { .. } => EtaSpec {
                q: 1,
                b: 1.0,
                c: 2.0 * a2.ln(),
            },
            Contraction::Iic { .. } => EtaSpec {
                q: 1,
                b: 1.0,
                c: 2.0 * a1.ln().max(a2.ln()),
            },
            Contraction::Iia { r, .. } | Contraction::IiaTilde { r, .. } => {
                let c = f.off_diagonal().re;
                let rr = *r as f64;
                let bound = c * c / (rr * rr * a2.powi(2 * *r as i32) * a2.ln().powi(2));
                EtaSpec {
                    q: *r,
                    b: bound.max(1.0),
                    c: rr * a2.ln(),
                }
            }
            Contraction::Iib { .. } | Contraction::IibTilde { .. } => {
                let c = f.off_diagonal().re;
                let bound = c * c / (a2 * a2 * a2.ln().powi(2));
                EtaSpec {
                    q: 1,
                    b: bound.max(1.0),
                    c: a2.ln(),
                }
            }
            Contraction::IicPrime { .. } => unreachable!("rejected above"),
        };
        Ok(spec)
    }

    /// eta(z, w) = |z|^2 + B |w|^{2q}.
    pub fn eta(&self, z: Complex64, w: Complex64) -> f64 {
        z.norm_sqr() + self.b * w.norm_sqr().powi(self.q as i32)
    }
}

/// The table row (q, B, C) for a contraction; the public entry point.
pub fn eta_params(f: &Contraction) -> Result<EtaSpec> {
    EtaSpec::for_contraction(f)
}

/// Projects Z onto the slice Sigma = eta^{-1}(1) along its ray.
///
/// rho^2 |z|^2 + B rho^{2q} |w|^{2q} = 1 is strictly increasing in rho, so the
/// root is bracketed by doubling and polished by safeguarded Newton.
pub fn sigma_project(spec: &EtaSpec, z: Complex64, w: Complex64) -> Result<(Complex64, Complex64)> {
    let zn = z.norm_sqr();
    let wn = w.norm_sqr().powi(spec.q as i32);
    if zn + wn == 0.0 {
        return Err(Error::Domain("cannot project the origin".into()));
    }
    let g = |rho: f64| rho * rho * zn + spec.b * rho.powi(2 * spec.q as i32) * wn;
    let dg = |rho: f64| {
        2.0 * rho * zn + 2.0 * spec.q as f64 * spec.b * rho.powi(2 * spec.q as i32 - 1) * wn
    };
    let mut lo = 1.0_f64;
    let mut hi = 1.0_f64;
    let mut iter = 0;
    while g(lo) > 1.0 {
        lo *= 0.5;
        iter += 1;
        if iter > MAX_ITER {
            return Err(Error::ConvergenceFailure("sigma bracket (lower)".into()));
        }
    }
    while g(hi) < 1.0 {
        hi *= 2.0;
        iter += 1;
        if iter > MAX_ITER {
            return Err(Error::ConvergenceFailure("sigma bracket (upper)".into()));
        }
    }
    let mut rho = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let val = g(rho) - 1.0;
        if val.abs() <= ETA_TOL {
            return Ok((rho * z, rho * w));
        }
        if val > 0.0 {
            hi = rho;
        } else {
            lo = rho;
        }
        let slope = dg(rho);
        let newton = rho - val / slope;
        rho = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::ConvergenceFailure("sigma projection".into()))
}

/// F(t, Z) = f^t(Z).
pub fn big_f(
    f: &Contraction,
    t: f64,
    z: Complex64,
    w: Complex64,
) -> Result<(Complex64, Complex64)> {
    let flow = FlowSpec::new(f.clone())?;
    flow.at(t).evaluate(z, w)
}

/// Solves F(t, Z) = Y: the unique t with eta(f^{-t}(Y)) = 1, then Z = f^{-t}(Y).
///
/// eta_Y is strictly decreasing along the flow, so h(t) = eta(f^{-t} Y) is
/// strictly increasing; brackets are found by doubling from [-1, 1] and the
/// root polished by Newton with bisection fallback.
pub fn big_f_inverse(
    f: &Contraction,
    y0: Complex64,
    y1: Complex64,
) -> Result<(f64, (Complex64, Complex64))> {
    if y0.norm_sqr() + y1.norm_sqr() == 0.0 {
        return Err(Error::Domain("Y must be a point of W".into()));
    }
    let flow = FlowSpec::new(f.clone())?;
    let spec = EtaSpec::for_contraction(f)?;
    let h = |t: f64| {
        let (z, w) = flow
            .at(-t)
            .evaluate(y0, y1)
            .expect("flow map is invertible");
        spec.eta(z, w)
    };
    // h'(t) = -d/ds eta(f^s Y) at s = -t
    let dh = |t: f64| -eta_flow_derivative(&flow, &spec, -t, y0, y1);
    let mut lo = -1.0_f64;
    let mut hi = 1.0_f64;
    let mut iter = 0;
    while h(lo) > 1.0 {
        lo *= 2.0;
        iter += 1;
        if iter > MAX_ITER {
            return Err(Error::ConvergenceFailure(
                "flow-time bracket (lower)".into(),
            ));
        }
    }
    while h(hi) < 1.0 {
        hi *= 2.0;
        iter += 1;
        if iter > MAX_ITER {
            return Err(Error::ConvergenceFailure(
                "flow-time bracket (upper)".into(),
            ));
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let val = h(t) - 1.0;
        if val.abs() <= ETA_TOL {
            let z = flow.at(-t).evaluate(y0, y1)?;
            return Ok((t, z));
        }
        if val > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let slope = dh(t);
        let newton = t - val / slope;
        t = if slope.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::ConvergenceFailure("flow-time solve".into()))
}

/// d/dt eta(f^t(Z)), exact, from the closed-form flow derivative.
pub fn eta_flow_derivative(
    flow: &FlowSpec,
    spec: &EtaSpec,
    t: f64,
    z: Complex64,
    w: Complex64,
) -> f64 {
    let ((zt, wt), (dz, dw)) = flow.eval_with_derivative(t, z, w);
    let dz_part = 2.0 * (zt.conj() * dz).re;
    let q = spec.q as i32;
    let dw_part = spec.b * (spec.q as f64) * wt.norm_sqr().powi(q - 1) * 2.0 * (wt.conj() * dw).re;
    dz_part + dw_part
}

/// A point of S^1 x S^3, stored as (zeta, (u, v)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    pub zeta: Complex64,
    pub u: Complex64,
    pub v: Complex64,
}

impl ModelPoint {
    pub fn new(zeta: Complex64, u: Complex64, v: Complex64) -> Self {
        ModelPoint { zeta, u, v }
    }

    /// Pushes zeta back to S^1 and (u, v) back to S^3.
    pub fn renormalized(&self) -> Self {
        let zn = self.zeta.norm();
        let sn = (self.u.norm_sqr() + self.v.norm_sqr()).sqrt();
        ModelPoint {
            zeta: self.zeta / zn,
            u: self.u / sn,
            v: self.v / sn,
        }
    }

    /// Product-metric distance.
    pub fn distance(&self, other: &ModelPoint) -> f64 {
        let sphere = ((self.u - other.u).norm_sqr() + (self.v - other.v).norm_sqr()).sqrt();
        (self.zeta - other.zeta).norm().max(sphere)
    }
}

/// The three reference involutions on S^1 x S^3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Tau,
    TauPrime,
    Mu0,
}

/// tau(zeta, (u, v)) = (zeta, (conj u, conj v));
/// tau'(zeta, (u, v)) = (zeta, (conj u, zeta conj v));
/// mu0(zeta, Z) = (-zeta, Z).
pub fn model_involution(model: Model, p: ModelPoint) -> ModelPoint {
    match model {
        Model::Tau => ModelPoint::new(p.zeta, p.u.conj(), p.v.conj()),
        Model::TauPrime => ModelPoint::new(p.zeta, p.u.conj(), p.zeta * p.v.conj()),
        Model::Mu0 => ModelPoint::new(-p.zeta, p.u, p.v),
    }
}

/// The deck involutions j', j'' of the double covers Q', Q''.
pub fn deck_involution(variant: CoverVariant, p: ModelPoint) -> ModelPoint {
    match variant {
        CoverVariant::Prime => ModelPoint::new(-p.zeta, p.u, -p.v),
        CoverVariant::DoublePrime => ModelPoint::new(-p.zeta, -p.u, -p.v),
    }
}

/// Which composite realizes the equivariant chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverRoute {
    Direct,
    ViaQPrime,
    ViaQDoublePrime,
    ViaIicPrimeFlattening,
    OddRoute,
}

/// An equivariant chart H_f -> S^1 x S^3 with its matched model involution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelChart {
    pub model: Model,
    pub route: CoverRoute,
    pub forward: ChainMap,
    pub backward: ChainMap,
}

impl ModelChart {
    /// Applies the forward chain to a point of W.
    pub fn forward_point(&self, z: Complex64, w: Complex64) -> Result<ModelPoint> {
        self.forward.evaluate(ChainPoint::w(z, w))?.as_model()
    }
}

/// The linear map L = [[1, i], [1, -i]] of the II'c flattening.
fn flattening_l() -> PolyMap {
    PolyMap::linear(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -1.0),
    )
}

/// Nodes of frak-l^{-1} = Psi_{-tau} o l^{-1} followed by the IV(|alpha|) chart.
fn flattening_nodes(alpha: Complex64) -> Result<Vec<NodeKind>> {
    let theta = alpha.arg();
    let modulus = alpha.norm();
    Ok(vec![
        NodeKind::Poly {
            map: flattening_l().invert()?,
        },
        NodeKind::RadialTwist {
            coef: -theta / modulus.ln(),
        },
        NodeKind::Trivialize {
            contraction: Contraction::Iv {
                alpha: Complex64::new(modulus, 0.0),
            },
        },
    ])
}

fn odd_tail() -> Vec<NodeKind> {
    vec![NodeKind::SphereRealign, NodeKind::SphereSecondTwist]
}

/// Builds the equivariant chart for (H_f, s).
///
/// Route and model follow the sign trichotomy for even structures (direct /
/// via Q' / via Q'') , the flattening for II'c, and the mu0 route for odd
/// structures. A non-canonical lift is handled by prepending the inverse of
/// its normalizing conjugator.
pub fn build_chart(f: &Contraction, s: &RealStructureSpec) -> Result<ModelChart> {
    let flags = f.structural_flags();
    let canonical = realstruct::canonical_structure(f, s.parity)?;
    let mut nodes: Vec<NodeKind> = Vec::new();
    if !s.lift.maps_equal(&canonical.lift, 1e-12) {
        let (psi, _) = realstruct::normalize_any(f, &s.lift)?;
        if !psi.maps_equal(&PolyMap::identity(), 1e-12) {
            nodes.push(NodeKind::Poly { map: psi.invert()? });
        }
    }
    let (model, route) = match s.parity {
        Parity::Even => {
            if flags.is_iic_prime {
                let alpha = match f {
                    Contraction::IicPrime { alpha } => *alpha,
                    _ => unreachable!(),
                };
                nodes.extend(flattening_nodes(alpha)?);
                (Model::Tau, CoverRoute::ViaIicPrimeFlattening)
            } else if !flags.real_coeffs {
                return Err(Error::NoSuchStructure(
                    "even charts require real coefficients or II'c".into(),
                ));
            } else {
                match flags.negative_diagonal_count {
                    0 => {
                        nodes.push(NodeKind::Trivialize {
                            contraction: f.clone(),
                        });
                        (Model::Tau, CoverRoute::Direct)
                    }
                    1 => {
                        // Ensure the negative coefficient sits in the second slot.
                        let oriented = match f {
                            Contraction::Iic { alpha, delta } if alpha.re < 0.0 => {
                                nodes.push(NodeKind::Poly {
                                    map: PolyMap::swap(),
                                });
                                Contraction::Iic {
                                    alpha: *delta,
                                    delta: *alpha,
                                }
                            }
                            other => other.clone(),
                        };
                        let g = flows::square_for_negatives(&oriented)?;
                        nodes.push(NodeKind::Trivialize { contraction: g });
                        nodes.push(NodeKind::Cover {
                            variant: CoverVariant::Prime,
                        });
                        (Model::TauPrime, CoverRoute::ViaQPrime)
                    }
                    _ => {
                        let g = flows::square_for_negatives(f)?;
                        nodes.push(NodeKind::Trivialize { contraction: g });
                        nodes.push(NodeKind::Cover {
                            variant: CoverVariant::DoublePrime,
                        });
                        (Model::Tau, CoverRoute::ViaQDoublePrime)
                    }
                }
            }
        }
        Parity::Odd => {
            if flags.is_iic_prime {
                let alpha = match f {
                    Contraction::IicPrime { alpha } => *alpha,
                    _ => unreachable!(),
                };
                nodes.extend(flattening_nodes(alpha)?);
                nodes.extend(odd_tail());
            } else if flags.positive_diagonal {
                nodes.push(NodeKind::Trivialize {
                    contraction: f.clone(),
                });
                nodes.extend(odd_tail());
            } else if matches!(f, Contraction::Iv { .. }) && flags.real_coeffs {
                let g = flows::square_for_negatives(f)?;
                nodes.push(NodeKind::Trivialize { contraction: g });
                nodes.push(NodeKind::Cover {
                    variant: CoverVariant::DoublePrime,
                });
                nodes.push(NodeKind::SpherePhase {
                    phase: Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
                });
                nodes.extend(odd_tail());
            } else {
                return Err(Error::NoSuchStructure(
                    "no odd chart for this contraction".into(),
                ));
            }
            (Model::Mu0, CoverRoute::OddRoute)
        }
    };
    let forward = ChainMap::new(nodes);
    let backward = forward.inverse();
    Ok(ModelChart {
        model,
        route,
        forward,
        backward,
    })
}

/// Max equivariance residual of forward o s = model_involution o forward
/// over the given sample points.
pub fn chart_equivariance_residual(
    s: &RealStructureSpec,
    chart: &ModelChart,
    points: &[(Complex64, Complex64)],
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &(z, w) in points {
        let (sz, sw) = s.lift.evaluate(z, w)?;
        let lhs = chart.forward_point(sz, sw)?;
        let rhs = model_involution(chart.model, chart.forward_point(z, w)?);
        worst = worst.max(lhs.distance(&rhs));
    }
    Ok(worst)
}

/// Canonical representative of `[Y]` in H_f: flow-time coordinate in `[0, 1)`.
///
/// Contractions with negative diagonal go through g = f^2 (time in [0, 1/2)
/// for g), II'c through the flattening conjugation.
pub fn canonical_hopf_representative(
    f: &Contraction,
    y0: Complex64,
    y1: Complex64,
) -> Result<(Complex64, Complex64)> {
    let flags = f.structural_flags();
    let k = if flags.real_coeffs && flags.positive_diagonal {
        let (t, _) = big_f_inverse(f, y0, y1)?;
        snap_floor(t)
    } else if flags.real_coeffs {
        let g = flows::square_for_negatives(f)?;
        let (t, _) = big_f_inverse(&g, y0, y1)?;
        snap_floor(2.0 * t)
    } else if flags.is_iic_prime {
        let alpha = match f {
            Contraction::IicPrime { alpha } => *alpha,
            _ => unreachable!(),
        };
        let (lz, lw) = flattening_l().invert()?.evaluate(y0, y1)?;
        let t = 0.5 * (lz.norm_sqr() + lw.norm_sqr()).ln() / alpha.norm().ln();
        snap_floor(t)
    } else {
        return Err(Error::NoSuchStructure(
            "no canonical representative without real coefficients or II'c".into(),
        ));
    };
    let (z, w) = f.polymap().power(-k)?.evaluate(y0, y1)?;
    Ok((z, w))
}

fn snap_floor(t: f64) -> i64 {
    let k = t.floor();
    if t - k > 1.0 - 1e-10 {
        k as i64 + 1
    } else {
        k as i64
    }
}

/// A point of H_f stored through its canonical W-representative (flow-time
/// coordinate in [0, 1)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfPoint {
    pub z: Complex64,
    pub w: Complex64,
}

impl HopfPoint {
    /// Canonicalizes a W-representative of a point of H_f.
    pub fn new(f: &Contraction, z: Complex64, w: Complex64) -> Result<HopfPoint> {
        let (z, w) = canonical_hopf_representative(f, z, w)?;
        Ok(HopfPoint { z, w })
    }

    /// Distance of canonical representatives; two lifts of the same point of
    /// H_f agree up to solver tolerance.
    pub fn distance(&self, other: &HopfPoint) -> f64 {
        ((self.z - other.z).norm_sqr() + (self.w - other.w).norm_sqr()).sqrt()
    }
}

/// Finds k with f^k(Y) = target (relative tolerance), |k| <= kmax.
pub fn find_deck_shift(
    f: &Contraction,
    y: (Complex64, Complex64),
    target: (Complex64, Complex64),
    kmax: i64,
    tol: f64,
) -> Option<i64> {
    let fm = f.polymap();
    let inv = fm.invert().ok()?;
    let close = |a: (Complex64, Complex64)| {
        let scale = (a.0.norm() + a.1.norm()).max(target.0.norm() + target.1.norm());
        ((a.0 - target.0).norm() + (a.1 - target.1).norm()) <= tol * scale.max(1e-30)
    };
    let mut fwd = y;
    let mut bwd = y;
    if close(y) {
        return Some(0);
    }
    for k in 1..=kmax {
        fwd = fm.evaluate(fwd.0, fwd.1).ok()?;
        if close(fwd) {
            return Some(k);
        }
        bwd = inv.evaluate(bwd.0, bwd.1).ok()?;
        if close(bwd) {
            return Some(-k);
        }
    }
    None
}

/// The real locus H^s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealLocusKind {
    Torus,
    KleinBottle,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealLocusReport {
    pub kind: RealLocusKind,
    /// For II'c loci: the parameter of the elliptic curve `C^* / <alpha>`
    /// carrying the natural (non-oriented) conformal structure.
    #[serde(
        default,
        with = "cx::pair_opt",
        skip_serializing_if = "Option::is_none"
    )]
    pub elliptic_parameter: Option<Complex64>,
}

/// Torus or Klein bottle by the diagonal sign rule for even structures;
/// empty for odd structures.
pub fn real_locus(f: &Contraction, s: &RealStructureSpec) -> RealLocusReport {
    match s.parity {
        Parity::Odd => RealLocusReport {
            kind: RealLocusKind::Empty,
            elliptic_parameter: None,
        },
        Parity::Even => {
            if let Contraction::IicPrime { alpha } = f {
                return RealLocusReport {
                    kind: RealLocusKind::Torus,
                    elliptic_parameter: Some(*alpha),
                };
            }
            let (d1, d2) = f.diagonal();
            let kind = if d1.re * d2.re > 0.0 {
                RealLocusKind::Torus
            } else {
                RealLocusKind::KleinBottle
            };
            RealLocusReport {
                kind,
                elliptic_parameter: None,
            }
        }
    }
}

/// Topological description of `H_f / <s>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientDescriptor {
    pub space: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locus_image: Option<RealLocusKind>,
    pub double_cover: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deck: Option<String>,
}

/// Even: S^1 x S^3 with the fixed-locus image type; odd: S^1 x S^3 as the base
/// of a double cover with anti-holomorphic deck involution.
pub fn quotient_descriptor(f: &Contraction, s: &RealStructureSpec) -> QuotientDescriptor {
    match s.parity {
        Parity::Even => QuotientDescriptor {
            space: "S1xS3".into(),
            locus_image: Some(real_locus(f, s).kind),
            double_cover: false,
            deck: None,
        },
        Parity::Odd => QuotientDescriptor {
            space: "S1xS3".into(),
            locus_image: None,
            double_cover: true,
            deck: Some("anti-holomorphic involution".into()),
        },
    }
}

/// The folding map beta(zeta) = zeta^2 identifying R^2 / <-id> with R^2.
pub fn beta(x: f64, y: f64) -> (f64, f64) {
    (x * x - y * y, 2.0 * x * y)
}
