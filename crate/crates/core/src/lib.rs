//! Computational toolkit for many-objective optimization.
//!
//! * [`dominance`]: objective vectors, Pareto dominance and the independent
//!   objectives non-dominance model.
//! * [`landscape`]: seeded multi-objective NK-landscapes with exhaustive
//!   Pareto-set enumeration.
//! * [`archive`]: Pareto archives (list, ND-Tree, quad tree) with comparison
//!   counting.
//! * [`hypervolume`]: exact hypervolume, contributions and Monte-Carlo
//!   estimation with a Wilson-interval stopping rule.
//! * [`scalarization`]: the polyhedral scalarizing functional and its
//!   Chebyshev, weighted-sum, epsilon-constraint and Pascoletti-Serafini
//!   special cases.
//! * [`weights`]: simplex-lattice weight vectors and neighborhoods.
//! * [`experiments`]: the batch harness behind the `pareto-lab` binary.
//! * [`cli`]: argument parsing and dispatch for that binary.

pub mod archive;
pub mod cli;
pub mod dominance;
pub mod error;
pub mod experiments;
pub mod hypervolume;
pub mod landscape;
pub mod rng;
pub mod scalarization;
pub mod weights;

pub use error::{Error, Result};
