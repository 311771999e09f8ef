use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A labeled point in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub label: String,
    pub coords: Vec<f64>,
}

/// A finite, nonempty set of labeled points of a common dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    points: Vec<Point>,
    dim: usize,
}

impl PointCloud {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyCloud)?;
        let dim = first.coords.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                label: first.label.clone(),
                expected: 1,
                found: 0,
            });
        }
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if p.coords.len() != dim {
                return Err(Error::DimensionMismatch {
                    label: p.label.clone(),
                    expected: dim,
                    found: p.coords.len(),
                });
            }
            if p.coords.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite(p.label.clone()));
            }
            if !seen.insert(p.label.as_str()) {
                return Err(Error::DuplicateLabel(p.label.clone()));
            }
        }
        Ok(Self { points, dim })
    }

    /// Builds a cloud from bare coordinates, labeling points `p0, p1, ...`.
    pub fn from_coords<I, V>(coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<f64>>,
    {
        let points = coords
            .into_iter()
            .enumerate()
            .map(|(i, c)| Point {
                label: format!("p{i}"),
                coords: c.into(),
            })
            .collect();
        Self::new(points)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn coords(&self, i: usize) -> &[f64] {
        &self.points[i].coords
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.points.iter().map(|p| p.label.as_str())
    }

    /// Multiplies coordinate `k` of every point by `factors[k]`.
    pub fn scaled(&self, factors: &[f64]) -> Result<Self> {
        if factors.len() != self.dim {
            return Err(Error::DimensionMismatch {
                label: "<scaling>".into(),
                expected: self.dim,
                found: factors.len(),
            });
        }
        let points = self
            .points
            .iter()
            .map(|p| Point {
                label: p.label.clone(),
                coords: p.coords.iter().zip(factors).map(|(c, f)| c * f).collect(),
            })
            .collect();
        Self::new(points)
    }

    /// Uniform scaling by `k`.
    pub fn scaled_uniform(&self, k: f64) -> Result<Self> {
        self.scaled(&vec![k; self.dim])
    }

    /// Returns a copy with one extra point appended.
    pub fn with_point(&self, label: impl Into<String>, coords: Vec<f64>) -> Result<Self> {
        let mut points = self.points.clone();
        points.push(Point {
            label: label.into(),
            coords,
        });
        Self::new(points)
    }

    /// Axis-aligned bounding box as `(min, max)` per coordinate.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.points[0].coords.clone();
        let mut hi = lo.clone();
        for p in &self.points[1..] {
            for (k, &c) in p.coords.iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        (lo, hi)
    }

    pub fn centroid(&self) -> Vec<f64> {
        let n = self.len() as f64;
        let mut c = vec![0.0; self.dim];
        for p in &self.points {
            for (acc, x) in c.iter_mut().zip(&p.coords) {
                *acc += x;
            }
        }
        c.iter_mut().for_each(|x| *x /= n);
        c
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Dense symmetric matrix of pairwise Euclidean distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_cloud(cloud: &PointCloud) -> Self {
        let n = cloud.len();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(cloud.coords(i), cloud.coords(j));
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        Self { n, entries }
    }

    /// Wraps a caller-supplied matrix. Rejects asymmetric, negative or
    /// non-zero-diagonal input.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyCloud);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "distance matrix row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::InvalidParameter("nonzero diagonal".into()));
            }
            for j in 0..n {
                let v = entries[i * n + j];
                if !v.is_finite() || v < 0.0 || v != entries[j * n + i] {
                    return Err(Error::InvalidParameter(format!(
                        "entry ({i},{j}) is negative, non-finite or asymmetric"
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }
}

pub fn build_distance_matrix(cloud: &PointCloud) -> DistanceMatrix {
    DistanceMatrix::from_cloud(cloud)
}

/// Nondecreasing single-linkage merge distances of a cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsityProfile {
    pub values: Vec<f64>,
}

impl SparsityProfile {
    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("profile has n-1 >= 1 entries")
    }
}

/// Minimal pairwise distance.
pub fn sparsity(cloud: &PointCloud) -> Result<f64> {
    if cloud.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let dm = DistanceMatrix::from_cloud(cloud);
    let mut best = f64::INFINITY;
    for i in 0..dm.len() {
        for j in (i + 1)..dm.len() {
            best = best.min(dm.get(i, j));
        }
    }
    Ok(best)
}

/// Sorted edge lengths of a minimum spanning tree (dense Prim).
///
/// Among equal candidate edges the one with the lexicographically smallest
/// `(tree vertex, new vertex)` pair wins, so the tree itself is deterministic.
pub fn degree_sparsity(cloud: &PointCloud) -> Result<SparsityProfile> {
    if cloud.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let dm = DistanceMatrix::from_cloud(cloud);
    Ok(mst_profile(&dm))
}

pub(crate) fn mst_profile(dm: &DistanceMatrix) -> SparsityProfile {
    let n = dm.len();
    let mut in_tree = vec![false; n];
    // (distance, attaching tree vertex) per outside vertex
    let mut best: Vec<(f64, usize)> = (0..n).map(|j| (dm.get(0, j), 0)).collect();
    in_tree[0] = true;
    let mut values = Vec::with_capacity(n.saturating_sub(1));
    for _ in 1..n {
        let mut pick: Option<usize> = None;
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            pick = match pick {
                None => Some(j),
                Some(k) => {
                    let (dj, sj) = best[j];
                    let (dk, sk) = best[k];
                    if dj < dk || (dj == dk && (sj, j) < (sk, k)) {
                        Some(j)
                    } else {
                        Some(k)
                    }
                }
            };
        }
        let j = pick.expect("an outside vertex remains");
        in_tree[j] = true;
        values.push(best[j].0);
        for k in 0..n {
            if !in_tree[k] {
                let d = dm.get(j, k);
                let (dk, sk) = best[k];
                if d < dk || (d == dk && j < sk) {
                    best[k] = (d, j);
                }
            }
        }
    }
    values.sort_by(f64::total_cmp);
    SparsityProfile { values }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eight_points() -> PointCloud {
        let pts = [
            ("A", 49.0, 77.0),
            ("B", 78.0, 65.0),
            ("C", 90.0, 32.0),
            ("D", 74.0, 8.0),
            ("E", 41.0, 6.0),
            ("F", 15.0, 23.0),
            ("G", 9.0, 48.0),
            ("H", 18.0, 62.0),
        ];
        PointCloud::new(
            pts.iter()
                .map(|(l, x, y)| Point {
                    label: l.to_string(),
                    coords: vec![*x, *y],
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn distance_entry_g_h() {
        let dm = build_distance_matrix(&eight_points());
        assert!((dm.get(6, 7) - 277f64.sqrt()).abs() < 1e-12);
        assert!((dm.get(6, 7) - 16.643).abs() < 1e-3);
    }

    #[test]
    fn single_point_matrix() {
        let c = PointCloud::from_coords([vec![1.0, 2.0]]).unwrap();
        let dm = build_distance_matrix(&c);
        assert_eq!(dm.len(), 1);
        assert_eq!(dm.get(0, 0), 0.0);
    }

    #[test]
    fn coincident_points() {
        let c = PointCloud::from_coords([vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(build_distance_matrix(&c).get(0, 1), 0.0);
        assert_eq!(sparsity(&c).unwrap(), 0.0);
    }

    #[test]
    fn eight_points_sparsity_and_profile() {
        let c = eight_points();
        assert!((sparsity(&c).unwrap() - 16.643).abs() < 0.01);
        let expected = [16.64, 25.71, 28.84, 31.06, 31.38, 33.06, 34.44];
        let got = degree_sparsity(&c).unwrap();
        assert_eq!(got.values.len(), 7);
        for (g, e) in got.values.iter().zip(expected) {
            assert!((g - e).abs() < 0.01, "{g} vs {e}");
        }
        assert_eq!(got.first(), sparsity(&c).unwrap());
    }

    #[test]
    fn two_points_profile() {
        let c = PointCloud::from_coords([vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(degree_sparsity(&c).unwrap().values, vec![5.0]);
    }

    #[test]
    fn too_few_points() {
        let c = PointCloud::from_coords([vec![0.0]]).unwrap();
        assert_eq!(sparsity(&c), Err(Error::TooFewPoints));
        assert_eq!(
            degree_sparsity(&c).unwrap_err().to_string(),
            "sparsity undefined for fewer than two points"
        );
    }

    #[test]
    fn rejects_malformed_clouds() {
        assert_eq!(PointCloud::new(vec![]), Err(Error::EmptyCloud));
        assert!(matches!(
            PointCloud::from_coords([vec![0.0, 1.0], vec![2.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        let dup = vec![
            Point {
                label: "x".into(),
                coords: vec![0.0],
            },
            Point {
                label: "x".into(),
                coords: vec![1.0],
            },
        ];
        assert_eq!(PointCloud::new(dup), Err(Error::DuplicateLabel("x".into())));
    }

    #[test]
    fn from_rows_validates() {
        assert!(DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        let dm = DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(dm.get(1, 0), 1.0);
    }
}
