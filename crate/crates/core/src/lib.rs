//! Offline scheduling of status updates through a transmit stage and an edge
//! computing stage so that the average age of information at the destination
//! is as small as possible before a hard deadline.
//!
//! ```
//! use mec_aoi::{model::Instance, solver::solve};
//!
//! let instance = Instance::new(
//!     vec![0.5, 0.1, 0.3, 0.7, 0.4],
//!     vec![0.2, 0.4, 0.3, 0.6, 0.8],
//!     1.0,
//!     7.5,
//! )?;
//! let result = solve(&instance)?;
//! assert!(result.metrics.peaks.iter().all(|p| (p - 32.0 / 15.0).abs() < 1e-9));
//! # Ok::<(), mec_aoi::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod feasibility;
pub mod model;
pub mod solver;

pub use error::{Error, Result};
