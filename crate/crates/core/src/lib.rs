//! Persistent homology for small, high-dimensional point clouds of player
//! statistics.
//!
//! The pipeline is: [`roster`] rows become a [`geometry::PointCloud`], which
//! is turned into a Rips (or Čech) [`filtration::Filtration`] of dimension at
//! most 2, reduced over GF(2) into a [`persistence::Barcode`], and condensed
//! into a [`analytics::TeamSummary`]. [`render`] draws barcodes as SVG or text.

pub mod analytics;
pub mod error;
pub mod exec;
pub mod filtration;
pub mod geometry;
pub mod persistence;
pub mod render;
pub mod roster;

pub use error::{Error, Result};
pub use exec::Execution;
