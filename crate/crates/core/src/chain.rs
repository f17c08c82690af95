//! Composable chains of invertible map nodes.
//!
//! A [`ChainMap`] realizes the diffeomorphisms of the classification proofs as
//! an ordered list of nodes: polynomial maps and radial twists on W, the flow
//! trivialization W -> S^1 x S^3, the circle-squaring covers a'/a'', and the
//! sphere-side twists used to convert between the model involutions. Every
//! node is invertible; running a chain backwards reverses the list and flips
//! each node's direction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contraction::Contraction;
use crate::cx;
use crate::error::{Error, Result};
use crate::flows::{self, FlowSpec};
use crate::polymap::PolyMap;
use crate::topology::{self, EtaSpec, ModelPoint};

/// A point in either of the two spaces a chain can act on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainPoint {
    /// A point of W = C^2 \ {0}.
    W(Complex64, Complex64),
    /// A point of S^1 x S^3.
    Model(ModelPoint),
}

impl ChainPoint {
    pub fn w(z: Complex64, w: Complex64) -> Self {
        ChainPoint::W(z, w)
    }

    pub fn as_w(&self) -> Result<(Complex64, Complex64)> {
        match self {
            ChainPoint::W(z, w) => Ok((*z, *w)),
            ChainPoint::Model(_) => Err(Error::ChainPointMismatch(
                "expected a point of W, got a model point".into(),
            )),
        }
    }

    pub fn as_model(&self) -> Result<ModelPoint> {
        match self {
            ChainPoint::Model(m) => Ok(*m),
            ChainPoint::W(..) => Err(Error::ChainPointMismatch(
                "expected a model point, got a point of W".into(),
            )),
        }
    }
}

/// Which of the two circle-squaring covers a node applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverVariant {
    /// a'(zeta, (u, v)) = (zeta^2, (u, zeta v))
    Prime,
    /// a''(zeta, (u, v)) = (zeta^2, R_zeta (u, v))
    DoublePrime,
}

/// Node kinds of a chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeKind {
    /// A polynomial automorphism of W.
    Poly { map: PolyMap },
    /// Psi_tau with tau(t) = coef * ln t: rotate by R_{e^{i tau(|Z|)}}.
    RadialTwist { coef: f64 },
    /// Z -> factor * Z on W.
    Scale { factor: f64 },
    /// The flow f^t on W.
    Flow { contraction: Contraction, t: f64 },
    /// W -> S^1 x S^3 through F^{-1}, the exponential and sphere normalization.
    Trivialize { contraction: Contraction },
    /// The covers a' / a'' on S^1 x S^3.
    Cover { variant: CoverVariant },
    /// The conjugation c on W.
    Conj,
    /// (zeta, Z) -> (zeta, phase * Z) on the model.
    SpherePhase {
        #[serde(with = "cx::pair")]
        phase: Complex64,
    },
    /// id x Phi with Phi(z, w) = (Re z + i Re w, Im z + i Im w); an involution.
    SphereRealign,
    /// (zeta, (m, n)) -> (zeta, (m, zeta n)) on the model.
    SphereSecondTwist,
}

/// A node with a direction flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainNode {
    #[serde(flatten)]
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inverted: bool,
}

impl ChainNode {
    pub fn new(kind: NodeKind) -> Self {
        ChainNode {
            kind,
            inverted: false,
        }
    }
}

/// An ordered chain of invertible nodes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChainMap {
    pub nodes: Vec<ChainNode>,
}

fn rotate(zeta: Complex64, u: Complex64, v: Complex64) -> (Complex64, Complex64) {
    // R_zeta as a real rotation matrix acting on (u, v) in C^2.
    (zeta.re * u - zeta.im * v, zeta.im * u + zeta.re * v)
}

fn unit_sqrt(zeta: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, zeta.arg() / 2.0)
}

fn realign(u: Complex64, v: Complex64) -> (Complex64, Complex64) {
    (Complex64::new(u.re, v.re), Complex64::new(u.im, v.im))
}

fn apply_node(node: &ChainNode, pt: ChainPoint) -> Result<ChainPoint> {
    let fwd = !node.inverted;
    match &node.kind {
        NodeKind::Poly { map } => {
            let (z, w) = pt.as_w()?;
            let m = if fwd { map.clone() } else { map.invert()? };
            let (z, w) = m.evaluate(z, w)?;
            Ok(ChainPoint::W(z, w))
        }
        NodeKind::RadialTwist { coef } => {
            let (z, w) = pt.as_w()?;
            let coef = if fwd { *coef } else { -coef };
            let norm = (z.norm_sqr() + w.norm_sqr()).sqrt();
            let zeta = Complex64::from_polar(1.0, coef * norm.ln());
            let (z, w) = rotate(zeta, z, w);
            Ok(ChainPoint::W(z, w))
        }
        NodeKind::Scale { factor } => {
            if *factor <= 0.0 || !factor.is_finite() {
                return Err(Error::InvalidInput("scale factor must be positive".into()));
            }
            let (z, w) = pt.as_w()?;
            let s = if fwd { *factor } else { 1.0 / factor };
            Ok(ChainPoint::W(s * z, s * w))
        }
        NodeKind::Flow { contraction, t } => {
            let (z, w) = pt.as_w()?;
            let t = if fwd { *t } else { -t };
            let (z, w) = flows::flow(contraction, t)?.evaluate(z, w)?;
            Ok(ChainPoint::W(z, w))
        }
        NodeKind::Trivialize { contraction } => {
            if fwd {
                let (z, w) = pt.as_w()?;
                let (t, (sz, sw)) = topology::big_f_inverse(contraction, z, w)?;
                let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU * t);
                let norm = (sz.norm_sqr() + sw.norm_sqr()).sqrt();
                Ok(ChainPoint::Model(ModelPoint::new(
                    zeta,
                    sz / norm,
                    sw / norm,
                )))
            } else {
                let m = pt.as_model()?;
                let mut t = m.zeta.arg() / std::f64::consts::TAU;
                if t < 0.0 {
                    t += 1.0;
                }
                let spec = EtaSpec::for_contraction(contraction)?;
                let (sz, sw) = topology::sigma_project(&spec, m.u, m.v)?;
                let flow = FlowSpec::new(contraction.clone())?;
                let (z, w) = flow.at(t).evaluate(sz, sw)?;
                Ok(ChainPoint::W(z, w))
            }
        }
        NodeKind::Cover { variant } => {
            let m = pt.as_model()?;
            let out = if fwd {
                let zeta2 = m.zeta * m.zeta;
                match variant {
                    CoverVariant::Prime => ModelPoint::new(zeta2, m.u, m.zeta * m.v),
                    CoverVariant::DoublePrime => {
                        let (u, v) = rotate(m.zeta, m.u, m.v);
                        ModelPoint::new(zeta2, u, v)
                    }
                }
            } else {
                // One of the two preimages; the other differs by the deck
                // involution j' / j'', which maps to the same Hopf point.
                let root = unit_sqrt(m.zeta);
                match variant {
                    CoverVariant::Prime => ModelPoint::new(root, m.u, root.conj() * m.v),
                    CoverVariant::DoublePrime => {
                        let (u, v) = rotate(root.conj(), m.u, m.v);
                        ModelPoint::new(root, u, v)
                    }
                }
            };
            Ok(ChainPoint::Model(out.renormalized()))
        }
        NodeKind::Conj => {
            let (z, w) = pt.as_w()?;
            Ok(ChainPoint::W(z.conj(), w.conj()))
        }
        NodeKind::SpherePhase { phase } => {
            let m = pt.as_model()?;
            let p = if fwd { *phase } else { phase.conj() };
            Ok(ChainPoint::Model(
                ModelPoint::new(m.zeta, p * m.u, p * m.v).renormalized(),
            ))
        }
        NodeKind::SphereRealign => {
            // Phi is an involution, so both directions coincide.
            let m = pt.as_model()?;
            let (u, v) = realign(m.u, m.v);
            Ok(ChainPoint::Model(
                ModelPoint::new(m.zeta, u, v).renormalized(),
            ))
        }
        NodeKind::SphereSecondTwist => {
            let m = pt.as_model()?;
            let twist = if fwd { m.zeta } else { m.zeta.conj() };
            Ok(ChainPoint::Model(
                ModelPoint::new(m.zeta, m.u, twist * m.v).renormalized(),
            ))
        }
    }
}

impl ChainMap {
    pub fn new(nodes: Vec<NodeKind>) -> Self {
        ChainMap {
            nodes: nodes.into_iter().map(ChainNode::new).collect(),
        }
    }

    pub fn push(&mut self, kind: NodeKind) {
        self.nodes.push(ChainNode::new(kind));
    }

    /// Applies every node in order.
    pub fn evaluate(&self, pt: ChainPoint) -> Result<ChainPoint> {
        let mut cur = pt;
        for node in &self.nodes {
            cur = apply_node(node, cur)?;
        }
        Ok(cur)
    }

    /// The reversed chain with every node direction flipped.
    pub fn inverse(&self) -> ChainMap {
        ChainMap {
            nodes: self
                .nodes
                .iter()
                .rev()
                .map(|n| ChainNode {
                    kind: n.kind.clone(),
                    inverted: !n.inverted,
                })
                .collect(),
        }
    }
}
