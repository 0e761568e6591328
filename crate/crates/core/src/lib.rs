//! Exact rational intersection theory for Keel–McKernan surfaces and the
//! numerical ledger of the cone threefolds built over them.

#![allow(clippy::needless_range_loop)]

pub mod cohom;
pub mod cone3fold;
pub mod contract;
pub mod error;
pub mod km_surface;
pub mod qlattice;
pub mod scenarios;

pub use error::{Error, Result};
