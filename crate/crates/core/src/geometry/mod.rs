//! Point clouds, Euclidean geometry, and the cloud-level metrics: sparsity
//! (minimal and progressive merge distances) and tunneling (largest empty
//! ball inside the convex hull).

mod cloud;
mod hull;
mod tunneling;

pub use cloud::{
    build_distance_matrix, degree_sparsity, euclidean, sparsity, DistanceMatrix, Point, PointCloud,
    SparsityProfile,
};
pub use hull::{affine_rank, hull_contains, hull_facets, project_onto_hull, Facet, HULL_TOLERANCE};
pub use tunneling::{
    empty_ball_radius, tunneling, tunneling_oracle_2d, TunnelingConfig, TunnelingEstimate,
    TunnelingMethod,
};
