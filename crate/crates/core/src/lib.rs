//! Integer multi-objective optimization by fuzzy compromise.
//!
//! The solver turns a problem with `d` objectives and inequality constraints
//! into a sequence of single-objective subproblems, solves them with
//! differential evolution (best individuals picked by TOPSIS over fitness and
//! constraint violation) and turns continuous solutions into integer ones
//! with stochastic rounding and tabu search.
//!
//! ```no_run
//! use intmoo::{benchmarks, harness, hybrid::HybridConfig};
//!
//! let spec = benchmarks::problem1();
//! let out = harness::solve_seeded(&spec.problem, &HybridConfig::default(), 1).unwrap();
//! for e in out.archive.entries() {
//!     println!("{:?}", e.x);
//! }
//! ```

pub mod benchmarks;
pub mod de;
pub mod error;
pub mod harness;
pub mod hybrid;
pub mod problem;
pub mod tabu;
pub mod topsis;

pub use error::{Error, Result};
pub use problem::{Evaluation, Fitness, Problem, Sense};
