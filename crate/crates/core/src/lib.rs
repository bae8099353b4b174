//! Capacities per unit cost of quantum channels.
//!
//! Finite-dimensional channels are handled by optimizers over ensembles,
//! pure states and density matrices ([`capacity`]); bosonic Gaussian
//! channels by closed forms ([`gaussian`]). Exact Neyman–Pearson tests
//! ([`hyptest`]) drive the pulse-position-modulation checks in [`ppm`].

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod entropy;
pub mod error;
pub mod ext;
pub mod gaussian;
pub mod hyptest;
pub mod linalg;
pub mod par;
pub mod ppm;
pub mod qcore;
pub mod rng;
pub mod symmetric;

pub use error::{Error, Result};
pub use ext::ExtendedReal;
pub use par::Exec;
