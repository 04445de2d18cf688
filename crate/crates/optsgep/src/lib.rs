//! Certifiably optimal ℓ0-constrained sparse generalized eigenvalue
//! problems: maximize vᵀAv over vᵀBv = 1 with at most k nonzeros, solved
//! exactly by a customized branch-and-bound search.
//!
//! The crate is organized around three layers:
//!
//! - the solver core ([`problem`], [`linalg`], [`truncate`], [`bounds`],
//!   [`bnb`], with [`oracle`] as exhaustive ground truth for testing);
//! - sufficient-dimension-reduction front-ends ([`sdr`]) that build the
//!   (A, B) kernel pair from regression samples, plus sparsity selection
//!   ([`model_select`]);
//! - a simulation benchmark harness ([`simbench`]) and the CSV file
//!   formats of the command-line surface ([`io`]).
//!
//! See the `examples/` directory for runnable tours of each capability.

pub mod bnb;
pub mod bounds;
pub mod error;
pub mod io;
pub mod linalg;
pub mod model_select;
pub mod oracle;
pub mod problem;
pub mod sdr;
pub mod simbench;
pub mod truncate;

pub use error::{Error, Result};
pub use problem::{Branching, Certificate, Node, SgepProblem, SolverOptions, SolverStatus};
