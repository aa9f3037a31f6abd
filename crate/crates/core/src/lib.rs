//! Minimization of finite coalgebras under behavioural equivalence.
//!
//! A coalgebra assigns every state a structured successor term over a
//! functor expression (see [`functor`]). Two states are behaviourally
//! equivalent if no sequence of observations distinguishes them. The
//! [`minimize`] module computes the coarsest such partition by signature
//! based partition refinement and can build the quotient system.

pub mod error;
pub mod functor;
pub mod gen;
pub mod io;
pub mod minimize;
pub mod partition;
pub mod rational;
pub mod sig;
pub mod table;
pub mod term;

pub use error::{BuildError, FormatError, ParseError, SigError};
pub use functor::{parse_functor_expr, FunctorExpr, MonoidKind};
pub use minimize::{
    check_stable, minimize, naive_minimize, quotient, InstrumentationStats, PartitionResult,
};
pub use partition::RefinablePartition;
pub use rational::Rational;
pub use sig::{encode_sig, renumber, renumber_prime, SignatureBytes};
pub use table::{build_table, CoalgebraTable};
pub use term::{MonoidValue, SuccessorTerm};
