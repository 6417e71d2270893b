//! Exact q-series for level-2 modular forms and certified bounds on the
//! Fourier coefficients of weight-k cusp forms on Γ₀(2).

pub mod error;
pub mod series;

pub use error::{Error, Result};
pub use series::{MulStrategy, QSeries};
pub mod rigor;
pub mod report;
pub mod basis;
pub mod forms;
pub mod partitions;
pub mod envelopes;
pub mod cli;
