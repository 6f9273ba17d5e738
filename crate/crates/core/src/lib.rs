pub mod code;
pub mod error;
pub mod field;
pub mod frame;
pub mod graph;
pub mod linalg;
pub mod matroid;
pub mod perturb;
pub mod random;
pub mod short_circuits;

pub use code::{GoodnessParams, LinearCode};
pub use error::{Error, Result};
pub use field::{Elem, FieldElem, FieldSpec};
pub use frame::{Arc, FrameRep, LabelledDigraph};
pub use graph::UGraph;
pub use linalg::{Limits, Mat, MatrixJson};
pub use matroid::{ReprMatroid, Separation, VerticalConnectivity};
pub use perturb::PerturbWitness;
