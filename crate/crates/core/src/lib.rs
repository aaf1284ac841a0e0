//! Finite-dimensional quantum channels, GKSL semigroups and type-I
//! Stinespring curves.
//!
//! Everything here is dense complex linear algebra on small matrices. The
//! crate is `no_std` and only needs `alloc`; file formats and the command
//! line front end live in the companion `stinespring-cli` crate.
//!
//! Conventions used throughout:
//!
//! * `vec(X) = Σ_i e_i ⊗ X e_i`, i.e. column stacking. Under this
//!   convention the matrix of `X ↦ A X B` is `Bᵀ ⊗ A`.
//! * Tensor products are ordered system ⊗ ancilla.
//! * Channels are stored as superoperator matrices; Choi, Kraus and
//!   Stinespring forms are derived from them on demand.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod channels;
pub mod diagnostics;
pub mod dilation;
mod error;
pub mod gksl;
pub mod numerics;

pub use channels::{Channel, KrausSet, StinespringDilation};
pub use diagnostics::{ChannelFamily, CurveTrace, DivisibilityReport, TraceSource};
pub use dilation::{AncillaState, StinespringCurve};
pub use error::{Error, Result};
pub use gksl::{Generator, LindbladData};

pub use numerics::{ComplexMatrix, HermitianEig, C64, DEFAULT_TOL};
