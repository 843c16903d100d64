//! Internal T-multicategories over cartesian monads on finite sets.
//!
//! The crate is layered bottom-up: [`finset`] provides finite sets with
//! chosen pullbacks, [`monad`] the cartesian monads acting on them,
//! [`multicat`] multicategories and their functors, [`sketch`] the
//! finite-limit sketch presentation with pseudo-equalizer objects, and
//! [`descent`] descent data, the descent criteria and the brute-force oracle.
//! [`gallery`] holds weighted categories and the fixture library.

pub mod descent;
pub mod elem;
pub mod error;
pub mod finset;
pub mod gallery;
pub mod json;
pub mod monad;
pub mod multicat;
pub mod report;
pub mod sketch;

pub use elem::Elem;
pub use error::{Error, Result};
pub use finset::{FinMap, FinSetObj, PullbackSquare};
pub use monad::MonadSpec;
pub use multicat::{TFunctor, TMulticategory};
pub use report::{Check, Report};
