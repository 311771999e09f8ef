//! Command-line and HTTP front ends over a dataset directory of team rosters.
//!
//! Both front ends call [`service::Service`], which renders every answer to
//! JSON text once, so the CLI and the HTTP API emit identical bytes for the
//! same query.

pub mod dataset;
pub mod http;
pub mod service;

pub use dataset::Dataset;
pub use service::{ApiError, Service, ServiceConfig};
