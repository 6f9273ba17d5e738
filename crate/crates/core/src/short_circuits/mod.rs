//! Short circuits in matroids close to frame matroids: girth bounds for
//! graphs, edge-disjoint short cycles, the cover graph `G+` of a labelled
//! graph and the circuit extraction pipelines built on them.
//!
//! Logarithms are natural throughout.

mod constants;
mod cover;
mod cycles;
mod deficiency;
mod moore;
mod near;

pub use constants::{bound_constant_c, BoundConstants};
pub use cover::{build_cover, CoverEdge, CoverGraph};
pub use cycles::{disjoint_short_cycles, DisjointCycles};
pub use deficiency::{rank_deficient_set, DeficiencyReport};
pub use moore::{moore_bound_check, MooreReport};
pub use near::{
    minimize_dependent, near_coframe_circuit, near_frame_circuit, CircuitRoute, NearCoframeOutcome,
    NearFrameOutcome,
};
