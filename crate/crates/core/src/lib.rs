//! Minimizing measures of discrete Lagrangian models, computed as linear
//! programs over polytopes of holonomic/invariant probability measures.
//!
//! The crate is organized around a small dense LP engine ([`lp`]) that solves
//! measure-minimization problems and extracts the optimal face together with
//! its affine dimension. On top of it sit:
//!
//! * [`convex`]: piecewise-linear convex analysis with subdifferential
//!   polytopes, strata `Σ_k` with box counting, strong-convexity
//!   augmentation, the Lipschitz inverse of the subdifferential, and
//!   Legendre conjugation;
//! * [`measure`]: finite state spaces, discrete probability measures,
//!   potentials, the projection to base measures, and separating families of
//!   test functions;
//! * [`graph`]: exact discrete models where invariant measures of a cost
//!   graph form a polytope, with Karp's minimum mean cycle as an independent
//!   oracle, cohomology tilts, and the alpha function;
//! * [`tonelli`]: discretized mechanical Lagrangians on the torus with
//!   holonomic measure polytopes and curve (occupation) measures;
//! * [`genericity`]: the tilt machinery with constrained value functions
//!   `F_m`, their conjugates `G_m`, argmin sets `M_m`, and Monte-Carlo
//!   experiments showing that generic tilts collapse the minimizing-measure
//!   face.

pub mod convex;
pub mod export;
pub mod genericity;
pub mod graph;
pub mod linalg;
pub mod lp;
pub mod measure;
pub mod rng;
pub mod tonelli;

pub use convex::{AffinePiece, PiecewiseConvexFunction, StratumScan, SubdiffPolytope};
pub use genericity::{AffineFamily, FmEvaluation, TiltConfig, TiltExperimentReport};
pub use graph::{CostGraph, CycleMeasure, Edge};
pub use lp::{Constraint, LinearProgram, LpError, OptimalFace, Relation, Solution};
pub use measure::{
    DiscreteMeasure, GridPotential, MeasurePolytope, Potential, SeparatingFamily, StateSpace,
};
pub use tonelli::{CohomologyClass, LagrangianSpec, PhaseGrid};
