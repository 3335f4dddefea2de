//! Hermite–Hadamard-type bounds on simplices.
//!
//! [`simplex`] holds barycentric geometry, [`functions`] the convex function
//! zoo, [`quadrature`] ground-truth integral means, [`bounds`] the inequality
//! chains, [`registry`] name-addressable chain strategies and [`harness`] the
//! randomized campaigns built on top of them.

pub mod bounds;
pub mod functions;
pub mod harness;
pub mod quadrature;
pub mod registry;
pub mod simplex;
pub mod tolerance;

pub use bounds::{ChainReport, Verdict};
pub use functions::{ConvexFunction, FunctionKind, FunctionSpec};
pub use quadrature::IntegralEstimate;
pub use registry::{BoundInputs, ChainRegistry};
pub use simplex::{BarycentricCoords, Point, Simplex};
