//! Analysis toolkit for InAs nanowire arrays: weak-localization
//! magnetotransport fitting, geometric phase strain mapping, cross-section
//! shape energetics and transfer-length contact analysis.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fitting;
pub mod gpa;
pub mod io;
pub mod morphology;
pub mod tlm;
pub mod transport;

pub use error::{Error, ErrorCategory, Result};
