//! curvkit — exact tools for SO(n)-covariant curvature measures and valuations.
//!
//! The crate computes, entirely in rational arithmetic, the harmonic
//! decomposition of the space of smooth translation-invariant curvature
//! measures on ℝⁿ, builds the explicit differential-form bases on the sphere
//! bundle that realise each isotypic component, verifies the algebraic
//! identities relating those forms (column exchanges, globalisation kernel
//! relations, Bianchi-type symmetries), and evaluates tensor-valued curvature
//! measures on convex polytopes.
//!
//! Module map:
//!
//! * [`weights`] — highest-weight bookkeeping, admissibility tests and
//!   multiplicity rules for `Curv_k` and `Val_k`.
//! * [`characters`] — character ring in elementary-symmetric generators,
//!   Giambelli determinants, SO(n) branching.
//! * [`tensor`] — exact sparse tensors over ℚ, the symmetric-group algebra,
//!   Young symmetrisers, traces and the trace-free projection, Hodge star.
//! * [`forms`] — bigraded translation-invariant forms on the sphere bundle,
//!   the Φ/Ξ/Ψ/Θ families, exterior calculus, ideal-membership tests.
//! * [`polytope`] — face lattices, normal cones, spherical moments and the
//!   face-sum evaluation of tensor curvature measures on polytopes.
//! * [`oracles`] — independent brute-force enumerators used to cross-check
//!   the implementations above.
//! * [`suites`] — named verification suites driven by the CLI and the
//!   acceptance tests.

pub mod characters;
pub mod forms;
pub mod json;
pub mod oracles;
pub mod perm;
pub mod polytope;
pub mod scalar;
pub mod suites;
pub mod tensor;
pub mod weights;

pub use scalar::{PiScalar, Q};
