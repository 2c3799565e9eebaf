//! Hadamard-derived decoupling and selective recoupling for heteronuclear
//! spin systems.
//!
//! The pipeline runs:
//!
//! ```text
//! OrderRegistry ──► HadamardMatrix ──► SignMatrix ──► PulseProgram
//!                                          │               │
//!                                          ▼               ▼
//!                                   exact weights     diagonal simulation
//!                                          └────► VerificationReport ◄┘
//! ```
//!
//! A sign matrix has one row per spin and one column per equal-length free
//! evolution interval; entry `(i, a)` is the sign of `σz` of spin `i` during
//! interval `a`. Pairs of rows that agree in exactly half the columns have
//! their coupling cancelled; identical rows keep their coupling on.
//!
//! Spin indices in domain types (purposes, couplings, pulse boundaries,
//! weights) are 1-based. Raw matrix row/column accessors are 0-based.

pub mod analysis;
pub mod error;
pub mod hadamard;
pub mod io;
pub mod numtheory;
pub mod pulse;
pub mod signmatrix;
pub mod signs;
pub mod system;
pub mod verify;

pub use error::{Error, Result};
pub use hadamard::{HadamardMatrix, OrderRegistry};
pub use pulse::{compile, emit, interval_duration, Compiled, PulseProgram};
pub use signmatrix::{Purpose, SignMatrix, Topology};
pub use system::SpinSystem;
pub use verify::{Target, VerificationReport};
