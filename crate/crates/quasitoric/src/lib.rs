//! Combinatorial invariants of small covers and quasitoric manifolds over
//! properly colored simple polytopes.
//!
//! Given an n-dimensional simple polytope with a proper n-coloring of its
//! facets, this crate constructs a characteristic matrix, computes the mod-2
//! cohomology ring of the associated manifold (real for d = 1, complex for
//! d = 2), evaluates total and dual Stiefel-Whitney classes, and reports
//! lower bounds for immersions, embeddings and totally skew embeddings.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! polytope -> coloring -> characteristic pair -> face ring -> classes -> bounds
//! ```
//!
//! with an independent oracle ring on generators t_1..t_n used to cross-check
//! every dual class computation. See the `examples/` directory for runnable
//! walkthroughs of each stage, and the `quasitoric` binary for the one-shot
//! command line front end.

pub mod charpair;
pub mod classes;
pub mod coloring;
pub mod error;
pub mod face_ring;
pub mod gf2;
pub mod polytope;
pub mod report;
pub mod t_ring;

pub use charpair::{CharMatrix, ManifoldSpec, PairKind};
pub use classes::{bounds, compute_classes, product_sw, BoundsReport, SWClasses};
pub use coloring::{find_n_coloring, is_proper, parity_criterion, Coloring};
pub use error::{Error, Result};
pub use face_ring::{FaceRing, KernelChoice, RingElement, VMonomial, VPoly};
pub use polytope::{parse_expression, Face, FacetSet, SimplePolytope};
pub use t_ring::{dual_total_class, lucas_binom, sigma_table, total_class, TPoly};
