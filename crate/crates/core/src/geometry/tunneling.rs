//! Largest empty ball inside the convex hull of a cloud.
//!
//! The quantity maximized over `x` in the hull is
//!
//! ```text
//! g(x) = min( min_i |x - s_i| , min_f dist(x, facet f) )
//! ```
//!
//! i.e. the radius of the largest ball centered at `x` that stays inside the
//! hull and contains no cloud point in its interior. The tunneling diameter
//! is `2 * max g`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cloud::{euclidean, PointCloud};
use super::hull::{hull_contains, hull_facets, min_norm_point, Facet};
use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TunnelingMethod {
    GridOracle2d,
    MultistartMaxmin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TunnelingEstimate {
    pub diameter: f64,
    pub center: Vec<f64>,
    pub method: TunnelingMethod,
    pub starts_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunnelingConfig {
    pub starts: usize,
    pub iterations: usize,
    pub seed: u64,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for TunnelingConfig {
    fn default() -> Self {
        Self {
            starts: 64,
            iterations: 400,
            seed: 2014,
            execution: Execution::default(),
        }
    }
}

/// Objective pieces for one cloud.
struct EmptyBall<'a> {
    cloud: &'a PointCloud,
    facets: &'a [Facet],
}

impl EmptyBall<'_> {
    fn radius(&self, x: &[f64]) -> f64 {
        let to_points = self
            .cloud
            .points()
            .iter()
            .map(|p| euclidean(x, &p.coords))
            .fold(f64::INFINITY, f64::min);
        self.facets
            .iter()
            .map(|f| f.inner_distance(x))
            .fold(to_points, f64::min)
    }

    /// Gradients of every piece within `slack` of the current minimum.
    fn active_gradients(&self, x: &[f64], value: f64, slack: f64) -> Vec<Vec<f64>> {
        let mut grads = Vec::new();
        for p in self.cloud.points() {
            let dist = euclidean(x, &p.coords);
            if dist <= value + slack {
                if dist > 0.0 {
                    grads.push(
                        x.iter()
                            .zip(&p.coords)
                            .map(|(a, b)| (a - b) / dist)
                            .collect(),
                    );
                } else {
                    // Sitting on a data point: head for the centroid.
                    let c = self.cloud.centroid();
                    let n = euclidean(&c, x).max(f64::MIN_POSITIVE);
                    grads.push(c.iter().zip(x).map(|(a, b)| (a - b) / n).collect());
                }
            }
        }
        for f in self.facets {
            if f.inner_distance(x) <= value + slack {
                grads.push(f.normal.iter().map(|v| -v).collect());
            }
        }
        grads
    }

    /// Local maximization from `start` by steepest ascent on the min of the
    /// nearly-active pieces, with an adaptive step that doubles as the
    /// activity slack.
    fn ascend(&self, start: Vec<f64>, iterations: usize, scale: f64) -> (f64, Vec<f64>) {
        let mut x = start;
        let mut value = self.radius(&x);
        let mut step = 0.05 * scale;
        let min_step = 1e-10 * scale;
        for _ in 0..iterations {
            if step < min_step {
                break;
            }
            let grads = self.active_gradients(&x, value, step);
            if grads.is_empty() {
                break;
            }
            let dir = min_norm_point(&grads).point;
            let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-9 {
                step *= 0.5;
                continue;
            }
            let candidate: Vec<f64> = x
                .iter()
                .zip(&dir)
                .map(|(a, d)| a + step * d / norm)
                .collect();
            let cand_value = self.radius(&candidate);
            if cand_value > value {
                x = candidate;
                value = cand_value;
                step *= 1.25;
            } else {
                step *= 0.5;
            }
        }
        (value, x)
    }
}

fn bbox_scale(cloud: &PointCloud) -> f64 {
    let (lo, hi) = cloud.bounding_box();
    euclidean(&lo, &hi)
}

/// Seeded start points: uniform samples from the bounding box kept only if
/// inside the hull, topped up with random convex combinations when the hull
/// is too thin for rejection sampling (the usual case in high dimension).
fn draw_starts(cloud: &PointCloud, config: &TunnelingConfig) -> Result<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (lo, hi) = cloud.bounding_box();
    let mut starts = Vec::with_capacity(config.starts);
    let budget = 16 * config.starts;
    let mut tries = 0;
    while starts.len() < config.starts && tries < budget {
        tries += 1;
        let x: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(&a, &b)| if b > a { rng.random_range(a..b) } else { a })
            .collect();
        if hull_contains(cloud, &x)? {
            starts.push(x);
        }
    }
    while starts.len() < config.starts {
        // Flat Dirichlet weights via normalized exponentials.
        let w: Vec<f64> = (0..cloud.len())
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        let total: f64 = w.iter().sum();
        let mut x = vec![0.0; cloud.dim()];
        for (wi, p) in w.iter().zip(cloud.points()) {
            for (acc, c) in x.iter_mut().zip(&p.coords) {
                *acc += wi / total * c;
            }
        }
        starts.push(x);
    }
    Ok(starts)
}

/// Multi-start estimate of the tunneling constant; a lower bound on the
/// true value, deterministic for a fixed seed regardless of execution mode.
pub fn tunneling(cloud: &PointCloud, config: &TunnelingConfig) -> Result<TunnelingEstimate> {
    if cloud.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    // Start points and facet order depend on point order; fixing it makes
    // the estimate a function of the point multiset alone.
    let mut points = cloud.points().to_vec();
    points.sort_by(|a, b| {
        a.coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.label.cmp(&b.label))
    });
    let canonical = PointCloud::new(points)?;
    let cloud = &canonical;
    let degenerate = TunnelingEstimate {
        diameter: 0.0,
        center: cloud.centroid(),
        method: TunnelingMethod::MultistartMaxmin,
        starts_used: 0,
    };
    let Some(facets) = hull_facets(cloud, config.execution)? else {
        return Ok(degenerate);
    };
    if config.starts == 0 {
        return Ok(degenerate);
    }
    let scale = bbox_scale(cloud);
    let objective = EmptyBall {
        cloud,
        facets: &facets,
    };
    let starts = draw_starts(cloud, config)?;
    let results = config.execution.map_slice(&starts, |s| {
        objective.ascend(s.clone(), config.iterations, scale)
    });
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.0 > results[best].0 {
            best = i;
        }
    }
    let (radius, center) = results[best].clone();
    Ok(TunnelingEstimate {
        diameter: 2.0 * radius.max(0.0),
        center,
        method: TunnelingMethod::MultistartMaxmin,
        starts_used: starts.len(),
    })
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain, counter-clockwise, collinear points dropped.
fn planar_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let chain = |iter: &mut dyn Iterator<Item = &[f64; 2]>| {
        let mut out: Vec<[f64; 2]> = Vec::new();
        for &p in iter {
            while out.len() >= 2 && cross(out[out.len() - 2], out[out.len() - 1], p) <= 0.0 {
                out.pop();
            }
            out.push(p);
        }
        out.pop();
        out
    };
    let mut hull = chain(&mut pts.iter());
    hull.extend(chain(&mut pts.iter().rev()));
    hull
}

/// Brute-force planar reference: evaluates the empty-ball radius on a
/// `resolution x resolution` grid over the bounding box, skipping grid points
/// outside the hull.
pub fn tunneling_oracle_2d(
    cloud: &PointCloud,
    resolution: usize,
    exec: Execution,
) -> Result<TunnelingEstimate> {
    if cloud.dim() != 2 {
        return Err(Error::NotPlanar);
    }
    if resolution < 2 {
        return Err(Error::InvalidParameter(
            "resolution must be at least 2".into(),
        ));
    }
    let pts: Vec<[f64; 2]> = cloud
        .points()
        .iter()
        .map(|p| [p.coords[0], p.coords[1]])
        .collect();
    let hull = planar_hull(&pts);
    let empty = TunnelingEstimate {
        diameter: 0.0,
        center: cloud.centroid(),
        method: TunnelingMethod::GridOracle2d,
        starts_used: 0,
    };
    if hull.len() < 3 {
        return Ok(empty);
    }
    let edges: Vec<([f64; 2], [f64; 2], f64)> = (0..hull.len())
        .map(|i| {
            let a = hull[i];
            let b = hull[(i + 1) % hull.len()];
            (a, b, ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt())
        })
        .collect();
    let (lo, hi) = cloud.bounding_box();
    let step = |k: usize, i: usize| lo[k] + (hi[k] - lo[k]) * i as f64 / (resolution - 1) as f64;
    let rows = exec.map_range(resolution, |i| {
        let y = step(1, i);
        let mut best: Option<(f64, [f64; 2])> = None;
        for j in 0..resolution {
            let p = [step(0, j), y];
            let mut r = f64::INFINITY;
            let mut inside = true;
            for &(a, b, len) in &edges {
                let c = cross(a, b, p);
                if c < 0.0 {
                    inside = false;
                    break;
                }
                r = r.min(c / len);
            }
            if !inside {
                continue;
            }
            for q in &pts {
                r = r.min(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
            }
            if best.is_none_or(|(v, _)| r > v) {
                best = Some((r, p));
            }
        }
        best
    });
    let mut best: Option<(f64, [f64; 2])> = None;
    for r in rows.into_iter().flatten() {
        if best.is_none_or(|(v, _)| r.0 > v) {
            best = Some(r);
        }
    }
    Ok(match best {
        Some((r, c)) => TunnelingEstimate {
            diameter: 2.0 * r,
            center: c.to_vec(),
            method: TunnelingMethod::GridOracle2d,
            starts_used: 0,
        },
        None => empty,
    })
}

/// The empty-ball radius at `x` for a cloud; exposed for invariant checks.
pub fn empty_ball_radius(cloud: &PointCloud, x: &[f64]) -> Result<f64> {
    let facets = hull_facets(cloud, Execution::Sequential)?.unwrap_or_default();
    Ok(EmptyBall {
        cloud,
        facets: &facets,
    }
    .radius(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> PointCloud {
        PointCloud::from_coords([[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]).unwrap()
    }

    #[test]
    fn right_triangle_inradius() {
        let est = tunneling(&triangle(), &TunnelingConfig::default()).unwrap();
        assert!((est.diameter - 2.0).abs() < 1e-6, "{}", est.diameter);
        assert!((est.center[0] - 1.0).abs() < 1e-4 && (est.center[1] - 1.0).abs() < 1e-4);
        assert!(hull_contains(&triangle(), &est.center).unwrap());
    }

    #[test]
    fn oracle_right_triangle() {
        let est = tunneling_oracle_2d(&triangle(), 2000, Execution::Parallel).unwrap();
        assert!((est.diameter - 2.0).abs() < 0.01, "{}", est.diameter);
        assert_eq!(est.method, TunnelingMethod::GridOracle2d);
    }

    #[test]
    fn unit_square_is_limited_by_the_hull() {
        let sq = PointCloud::from_coords([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let oracle = tunneling_oracle_2d(&sq, 2000, Execution::Parallel).unwrap();
        assert!((oracle.diameter - 1.0).abs() < 0.01, "{}", oracle.diameter);
        let est = tunneling(&sq, &TunnelingConfig::default()).unwrap();
        assert!((est.diameter - 1.0).abs() < 1e-6);
    }

    #[test]
    fn two_points_and_collinear_are_zero() {
        let two = PointCloud::from_coords([[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(
            tunneling(&two, &TunnelingConfig::default())
                .unwrap()
                .diameter,
            0.0
        );
        let line = PointCloud::from_coords([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap();
        assert_eq!(
            tunneling(&line, &TunnelingConfig::default())
                .unwrap()
                .diameter,
            0.0
        );
        assert_eq!(
            tunneling_oracle_2d(&line, 100, Execution::Sequential)
                .unwrap()
                .diameter,
            0.0
        );
    }

    #[test]
    fn oracle_rejects_non_planar() {
        let c = PointCloud::from_coords([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(
            tunneling_oracle_2d(&c, 10, Execution::Sequential)
                .unwrap_err()
                .to_string(),
            "oracle is planar only"
        );
    }

    #[test]
    fn execution_modes_agree() {
        let c = PointCloud::from_coords([
            [49.0, 77.0],
            [78.0, 65.0],
            [90.0, 32.0],
            [74.0, 8.0],
            [41.0, 6.0],
            [15.0, 23.0],
            [9.0, 48.0],
            [18.0, 62.0],
        ])
        .unwrap();
        let seq = TunnelingConfig {
            execution: Execution::Sequential,
            ..Default::default()
        };
        let par = TunnelingConfig {
            execution: Execution::Parallel,
            ..Default::default()
        };
        assert_eq!(tunneling(&c, &seq).unwrap(), tunneling(&c, &par).unwrap());
    }

    #[test]
    fn regular_tetrahedron_insphere() {
        let s = 1.0 / 2f64.sqrt();
        let tet = PointCloud::from_coords([
            [1.0, 0.0, -s],
            [-1.0, 0.0, -s],
            [0.0, 1.0, s],
            [0.0, -1.0, s],
        ])
        .unwrap();
        // edge length 2: inradius = a / (2 sqrt 6)
        let est = tunneling(&tet, &TunnelingConfig::default()).unwrap();
        assert!(
            (est.diameter - 2.0 / 6f64.sqrt()).abs() < 1e-6,
            "{}",
            est.diameter
        );
    }
}
