//! A finite-dimensional laboratory for generalized proximity operators.
//!
//! The crate models `R^n` as a primal space paired with its dual, equips it
//! with a catalog of Legendre geometries (Euclidean, SPD-quadratic, p-norm
//! energy, Shannon entropy) and a catalog of convex functions (norms,
//! indicators, linear and quadratic forms), and computes two generalizations
//! of the classical proximity operator:
//!
//! * `bprox` — the Bregman (D-)proximity operator, `argmin φ(y) + D_f(y, x)`;
//! * `aprox` — the anisotropic proximity operator, `argmin φ(y) + f(x - y)`.
//!
//! On top of these it verifies, to numerical tolerance, the decomposition
//! identities that tie them together: the orthogonal and conic splittings in
//! Hilbert space, the generalized-projector splitting in ℓp geometry, the
//! mixed aprox/bprox decomposition, the frame version, and the resolvent
//! identity.
//!
//! Every solve is certified through a Fenchel–Young gap rather than trusted
//! from the solver path, and low-dimensional brute-force oracles provide an
//! independent cross-check. See the `examples/` directory for runnable tours
//! of each capability; the `prox-lab` binary drives configured suites and
//! emits JSON reports.

pub mod convex;
pub mod decomposition;
pub mod error;
pub mod frames;
pub mod legendre;
pub mod prox;
pub mod report;
pub mod solvers;
pub mod space;

pub use convex::{ConeSpec, ConvexFunction};
pub use decomposition::{decompose, DecompositionReport};
pub use error::ProxError;
pub use frames::{build_frame, FrameSystem};
pub use legendre::{duality_map, LegendreFunction};
pub use prox::{aprox, bprox, gen_project, PairingLedger, ProxResult};
pub use space::{DualVector, PrimalVector, ToleranceProfile};
