//! Exact computation of local representation densities of quadratic
//! lattices, their interpolation in `X = p^(-s)`, discriminant-kernel
//! volumes, orbit censuses, local zeta functions and global volume
//! expansions, together with mechanical verification of the identities
//! that relate them.
//!
//! Everything is exact: rationals, rational functions in `X`, square roots
//! of primes tracked symbolically, and transcendental constants collected
//! in a [`ledger::ConstLedger`].

// Matrix and table code indexes several arrays with one loop variable.
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod arch;
pub mod counting;
pub mod error;
pub mod exact;
pub mod global;
pub mod lambda;
pub mod lattice;
pub mod modular;
pub mod laurent;
pub mod ledger;
pub mod mono;
pub mod numeric;
pub mod orbits;
pub mod poly;
pub mod report;
pub mod series;
pub mod suites;
pub mod surd;
pub mod yang;
pub mod zeta;

pub use error::{Error, Result};
pub use exact::Rat;
pub use lattice::{Coset, DiagLattice, GramLattice};
pub use laurent::LaurentRat;
pub use ledger::{ConstLedger, Symbol};
