//! Riemannian 3-manifolds with a circulant metric `g = circ(A, B, B)` and the
//! circulant affinor `q` (`q^3 = id`, `g(qx, qy) = g(x, y)`).
//!
//! The crate computes the Levi-Civita connection and curvature of such a
//! metric from user-supplied fields `A`, `B`, classifies points into the
//! parallel / `V1` / `V2` subclasses, and checks the sectional-curvature
//! identities for q-sections against independent numerical oracles.

#![allow(clippy::needless_range_loop)]

pub mod circulant;
pub mod classify;
pub mod curvature;
pub mod error;
pub mod exec;
pub mod expr;
pub mod report;
pub mod sampling;
pub mod sectional;
pub mod spec;

pub use circulant::{
    angle_with_q, apply_q, orthonormal_q_base, q_independent, CirculantMetric, MetricAtPoint, TangentVec,
};
pub use curvature::{
    christoffel_at, closed_form_components, curvature_at, fd_curvature_oracle, Christoffel, Curv13, Curv4,
};
pub use error::{GeomError, Result};
pub use expr::{fd_partial, Axis, Expr, Point};
