//! Adaptive Krylov polynomial graph filters.
//!
//! The pipeline is decoupled: [`propagation`] builds the tunable propagation
//! matrix `P_tau = D_tau^{-1/2} (tau A + (1 - tau) I) D_tau^{-1/2}` and the
//! stacked Krylov blocks `[X | P X | ... | P^K X]` once; [`model`] then learns
//! one weight per hop plus an MLP classifier on top of those fixed blocks.
//!
//! [`polybases`] converts the classical filter bases (Chebyshev, Bernstein,
//! Jacobi) to monomial form, and [`spectral`] holds a dense eigensolver used
//! as ground truth for the spectral properties the method relies on.
//! [`verify`] bundles those checks into randomized suites.

pub mod container;
pub mod datagen;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod model;
pub mod polybases;
pub mod propagation;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{load_graph, make_splits, FeatureMatrix, Graph, SplitSet};
pub use model::{FilterModel, TrainConfig};
pub use polybases::{BasisKind, PolyCoeffMatrix};
pub use propagation::{build_krylov_basis, build_merged_basis, build_propagator, KrylovBasis, TauPropagator};
