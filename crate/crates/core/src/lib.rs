//! Canonical affinor structures on homogeneous k-symmetric spaces of SU(3)
//! and the classification of invariant metric f-structures on the flag
//! manifold `SU(3)/T_max`.
//!
//! Modules, bottom-up:
//!
//! * [`liealg`]: su(3) in `E ⊕ D` coordinates, bracket and trace form.
//! * [`phispace`]: the operator `θ = Ad(s)|_m` of a diagonal inner
//!   automorphism and the canonical f-, h-, J- and P-structures it generates.
//! * [`flagmetric`]: invariant metrics and f-structures, the Nomizu map,
//!   `∇f`, the composition tensor and Nijenhuis tensors.
//! * [`classify`]: exact metric loci of the Kähler, Killing, nearly Kähler,
//!   Hermitian and G1 classes, cross-checked by random sampling.
//! * [`curvature`]: Riemann and Ricci tensors of invariant metrics and the
//!   Einstein-metric scan.

pub mod classify;
pub mod curvature;
pub mod exec;
pub mod flagmetric;
pub mod liealg;
pub mod phispace;

pub use exec::Execution;
