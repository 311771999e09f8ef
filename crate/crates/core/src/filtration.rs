//! Rips and Čech filtrations truncated at dimension 2.
//!
//! Filtration values use the diameter convention: an edge enters at its
//! length, a Rips triangle at its longest edge, a Čech triangle at twice the
//! radius of its minimum enclosing ball.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{euclidean, DistanceMatrix, PointCloud};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub value: f64,
}

impl Simplex {
    pub fn new(mut vertices: Vec<usize>, value: f64) -> Self {
        vertices.sort_unstable();
        Self { vertices, value }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Codimension-1 faces, in lexicographic order.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        if self.vertices.len() < 2 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .rev()
            .map(|skip| {
                self.vertices
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect()
    }
}

/// Order used throughout: value, then dimension, then vertex list.
pub fn filtration_order(a: &Simplex, b: &Simplex) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiltrationKind {
    Rips,
    Cech,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    kind: FiltrationKind,
    max_value: f64,
    max_dim: usize,
    vertex_count: usize,
}

impl Filtration {
    /// Wraps simplices in the given order without sorting or validation.
    /// Persistence computation rejects orders where a face follows a coface.
    pub fn from_ordered(
        simplices: Vec<Simplex>,
        kind: FiltrationKind,
        max_value: f64,
        max_dim: usize,
    ) -> Self {
        let vertex_count = simplices.iter().filter(|s| s.vertices.len() == 1).count();
        Self {
            simplices,
            kind,
            max_value,
            max_dim,
            vertex_count,
        }
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn kind(&self) -> FiltrationKind {
        self.kind
    }

    pub fn max_value(&self) -> f64 {
        self.max_value
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn count_dim(&self, dim: usize) -> usize {
        self.simplices.iter().filter(|s| s.dim() == dim).count()
    }
}

fn check_params(max_dim: usize, max_value: f64) -> Result<()> {
    if !(1..=2).contains(&max_dim) {
        return Err(Error::InvalidParameter(format!(
            "max_dim must be 1 or 2, got {max_dim}"
        )));
    }
    if max_value.is_nan() || max_value <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "max_value must be positive, got {max_value}"
        )));
    }
    Ok(())
}

/// Default truncation: 10% past the largest pairwise distance, so the
/// filtration ends at the full (contractible) complex.
pub fn default_max_value(dm: &DistanceMatrix) -> f64 {
    let m = dm.max_entry();
    if m > 0.0 {
        1.1 * m
    } else {
        1.0
    }
}

fn build(
    n: usize,
    max_dim: usize,
    max_value: f64,
    kind: FiltrationKind,
    edge: impl Fn(usize, usize) -> f64,
    triangle: impl Fn(usize, usize, usize) -> f64,
) -> Filtration {
    let mut simplices: Vec<Simplex> = (0..n).map(|i| Simplex::new(vec![i], 0.0)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = edge(i, j);
            if v <= max_value {
                simplices.push(Simplex::new(vec![i, j], v));
            }
        }
    }
    if max_dim >= 2 {
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let v = triangle(i, j, k);
                    if v <= max_value {
                        simplices.push(Simplex::new(vec![i, j, k], v));
                    }
                }
            }
        }
    }
    simplices.sort_by(filtration_order);
    Filtration {
        simplices,
        kind,
        max_value,
        max_dim,
        vertex_count: n,
    }
}

pub fn rips_filtration(dm: &DistanceMatrix, max_dim: usize, max_value: f64) -> Result<Filtration> {
    check_params(max_dim, max_value)?;
    Ok(build(
        dm.len(),
        max_dim,
        max_value,
        FiltrationKind::Rips,
        |i, j| dm.get(i, j),
        |i, j, k| dm.get(i, j).max(dm.get(i, k)).max(dm.get(j, k)),
    ))
}

pub fn cech_filtration(cloud: &PointCloud, max_dim: usize, max_value: f64) -> Result<Filtration> {
    check_params(max_dim, max_value)?;
    let dm = DistanceMatrix::from_cloud(cloud);
    Ok(build(
        cloud.len(),
        max_dim,
        max_value,
        FiltrationKind::Cech,
        |i, j| dm.get(i, j),
        |i, j, k| {
            let (_, r) = min_enclosing_ball(&[cloud.coords(i), cloud.coords(j), cloud.coords(k)]);
            // A triangle may not precede its own edges.
            (2.0 * r)
                .max(dm.get(i, j))
                .max(dm.get(i, k))
                .max(dm.get(j, k))
        },
    ))
}

fn midpoint(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

/// Smallest ball containing one to three points of equal dimension.
pub fn min_enclosing_ball(points: &[&[f64]]) -> (Vec<f64>, f64) {
    match points {
        [] => panic!("min_enclosing_ball needs at least one point"),
        [p] => (p.to_vec(), 0.0),
        [a, b] => (midpoint(a, b), 0.5 * euclidean(a, b)),
        [a, b, c] => {
            // Try each side's diametral ball, longest side first.
            let mut sides = [(*a, *b, *c), (*a, *c, *b), (*b, *c, *a)];
            sides.sort_by(|x, y| euclidean(y.0, y.1).total_cmp(&euclidean(x.0, x.1)));
            for (p, q, r) in sides {
                let center = midpoint(p, q);
                let radius = 0.5 * euclidean(p, q);
                if euclidean(&center, r) <= radius * (1.0 + 1e-12) {
                    return (center, radius);
                }
            }
            circumscribed(a, b, c)
        }
        _ => panic!("min_enclosing_ball supports at most three points"),
    }
}

/// Circumcenter of a non-degenerate triangle in any dimension.
fn circumscribed(a: &[f64], b: &[f64], c: &[f64]) -> (Vec<f64>, f64) {
    let u: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let v: Vec<f64> = c.iter().zip(a).map(|(x, y)| x - y).collect();
    let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(x, y)| x * y).sum::<f64>();
    let (uu, vv, uv) = (dot(&u, &u), dot(&v, &v), dot(&u, &v));
    let det = 2.0 * (uu * vv - uv * uv);
    let s = vv * (uu - uv) / det;
    let t = uu * (vv - uv) / det;
    let center: Vec<f64> = (0..a.len()).map(|k| a[k] + s * u[k] + t * v[k]).collect();
    let radius = euclidean(&center, a);
    (center, radius)
}
