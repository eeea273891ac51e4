#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Desk-scale models of credit, money creation and the condensation of wealth.

pub mod banking;
pub mod condensation;
pub mod credit;
pub mod dilemma;
pub mod distribution;
pub mod error;
pub mod exact;
pub mod macro_dynamics;
pub mod ownership;

pub use error::{Error, Result};
pub use exact::Exact;
