//! JSON function descriptors.
//!
//! ```json
//! {"dim": 1, "node": "sum", "terms": [[1.0, {"dim": 1, "node": "eigen", "k": 0}],
//!                                     [0.5, {"dim": 1, "node": "autocorr",
//!                                            "balls": {"radius": 0.5, "centers": [[0.0]]}}]]}
//! ```
//!
//! Node kinds: `eigen` (`k`), `sum` (`terms`), `dilate` (`c`, `inner`),
//! `autocorr` and `ftsq` (`balls`), `fourier` (`inner`). Every node repeats
//! the dimension.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::expr::{EvenFunction, Node};
use crate::error::{Error, Result};
use crate::geometry::BallUnion;

#[derive(Serialize, Deserialize)]
struct Repr {
    dim: usize,
    #[serde(flatten)]
    node: NodeRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
enum NodeRepr {
    Eigen { k: usize },
    Sum { terms: Vec<(f64, Repr)> },
    Dilate { c: f64, inner: Box<Repr> },
    Autocorr { balls: Balls },
    Ftsq { balls: Balls },
    Fourier { inner: Box<Repr> },
}

#[derive(Serialize, Deserialize)]
struct Balls {
    radius: f64,
    centers: Vec<Vec<f64>>,
}

impl Balls {
    fn from_union(s: &BallUnion) -> Self {
        Balls {
            radius: s.radius(),
            centers: s.centers().to_vec(),
        }
    }
}

fn to_repr(dim: usize, node: &Node) -> Repr {
    let node = match node {
        Node::Eigen(k) => NodeRepr::Eigen { k: *k },
        Node::Sum(terms) => NodeRepr::Sum {
            terms: terms.iter().map(|(c, n)| (*c, to_repr(dim, n))).collect(),
        },
        Node::Dilate(c, inner) => NodeRepr::Dilate {
            c: *c,
            inner: Box::new(to_repr(dim, inner)),
        },
        Node::Autocorr(s) => NodeRepr::Autocorr {
            balls: Balls::from_union(s),
        },
        Node::FtSquared(s) => NodeRepr::Ftsq {
            balls: Balls::from_union(s),
        },
        Node::FourierOf(inner) => NodeRepr::Fourier {
            inner: Box::new(to_repr(dim, inner)),
        },
    };
    Repr { dim, node }
}

fn from_repr(dim: usize, r: Repr) -> Result<Node> {
    if r.dim != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: r.dim,
        });
    }
    Ok(match r.node {
        NodeRepr::Eigen { k } => Node::Eigen(k),
        NodeRepr::Sum { terms } => Node::Sum(
            terms
                .into_iter()
                .map(|(c, n)| Ok((c, from_repr(dim, n)?)))
                .collect::<Result<Vec<_>>>()?,
        ),
        NodeRepr::Dilate { c, inner } => Node::Dilate(c, Box::new(from_repr(dim, *inner)?)),
        NodeRepr::Autocorr { balls } => {
            Node::Autocorr(BallUnion::new(dim, balls.radius, balls.centers)?)
        }
        NodeRepr::Ftsq { balls } => {
            Node::FtSquared(BallUnion::new(dim, balls.radius, balls.centers)?)
        }
        NodeRepr::Fourier { inner } => Node::FourierOf(Box::new(from_repr(dim, *inner)?)),
    })
}

impl Serialize for EvenFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        to_repr(self.dim(), self.node()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EvenFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = Repr::deserialize(deserializer)?;
        let dim = repr.dim;
        let node = from_repr(dim, repr).map_err(serde::de::Error::custom)?;
        EvenFunction::from_node(dim, node).map_err(serde::de::Error::custom)
    }
}

impl EvenFunction {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triangle_descriptor() {
        let text = r#"{"dim":1,"node":"autocorr","balls":{"radius":0.5,"centers":[[0.0]]}}"#;
        let f = EvenFunction::from_json(text).unwrap();
        assert_eq!(
            f,
            EvenFunction::autocorr(BallUnion::single(1, 0.5).unwrap())
        );
        assert_eq!(f.to_json().unwrap(), text);
    }

    #[test]
    fn rejects_malformed() {
        assert!(EvenFunction::from_json(r#"{"dim":2,"node":"eigen"}"#).is_err());
        assert!(EvenFunction::from_json(r#"{"dim":2,"node":"cube","k":1}"#).is_err());
        assert!(EvenFunction::from_json(
            r#"{"dim":2,"node":"fourier","inner":{"dim":3,"node":"eigen","k":0}}"#
        )
        .is_err());
        assert!(EvenFunction::from_json(
            r#"{"dim":1,"node":"dilate","c":-1,"inner":{"dim":1,"node":"eigen","k":0}}"#
        )
        .is_err());
        assert!(EvenFunction::from_json(
            r#"{"dim":1,"node":"autocorr","balls":{"radius":1,"centers":[[0],[1]]}}"#
        )
        .is_err());
    }

    fn leaf(dim: usize) -> impl Strategy<Value = Node> {
        prop_oneof![
            (0usize..12).prop_map(Node::Eigen),
            (
                0.05f64..0.5,
                prop::collection::vec(prop::collection::vec(-3.0f64..3.0, dim), 1..3)
            )
                .prop_filter_map("overlap", move |(rho, centers)| BallUnion::new(
                    dim, rho, centers
                )
                .ok()
                .map(Node::Autocorr)),
            (0.05f64..0.5)
                .prop_map(move |rho| Node::FtSquared(BallUnion::single(dim, rho).unwrap())),
        ]
    }

    fn tree(dim: usize) -> impl Strategy<Value = Node> {
        leaf(dim).prop_recursive(3, 16, 4, |inner| {
            prop_oneof![
                prop::collection::vec((-2.0f64..2.0, inner.clone()), 1..4).prop_map(Node::Sum),
                (0.1f64..4.0, inner.clone()).prop_map(|(c, n)| Node::Dilate(c, Box::new(n))),
                inner.prop_map(|n| Node::FourierOf(Box::new(n))),
            ]
        })
    }

    proptest! {
        #[test]
        fn round_trip_is_identity((dim, node) in (1usize..4).prop_flat_map(|d| (Just(d), tree(d)))) {
            let f = EvenFunction::from_node(dim, node).unwrap();
            let text = f.to_json().unwrap();
            let back = EvenFunction::from_json(&text).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(back.to_json().unwrap(), text);
        }
    }
}
