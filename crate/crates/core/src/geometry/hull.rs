//! Convex-hull queries that never enumerate the hull up front: membership
//! and projection go through Wolfe's minimum-norm-point algorithm, and the
//! facet list (needed for distance-to-boundary) is found by testing every
//! `d`-subset of vertices as a supporting hyperplane.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use super::cloud::{euclidean, PointCloud};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Membership tolerance, relative to the cloud's bounding-box diagonal.
pub const HULL_TOLERANCE: f64 = 1e-8;

const MAX_SUBSETS: u128 = 5_000_000;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Result of a minimum-norm-point query over `conv(vectors)`.
#[derive(Debug, Clone)]
pub(crate) struct MinNorm {
    pub point: Vec<f64>,
}

impl MinNorm {
    pub fn norm(&self) -> f64 {
        dot(&self.point, &self.point).sqrt()
    }
}

/// Solves `min |sum a_i p_i|^2` subject to `sum a_i = 1` over the corral.
fn affine_minimizer(vectors: &[Vec<f64>], corral: &[usize]) -> Option<Vec<f64>> {
    let k = corral.len();
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    for (r, &i) in corral.iter().enumerate() {
        for (c, &j) in corral.iter().enumerate().skip(r) {
            let g = dot(&vectors[i], &vectors[j]);
            m[(r, c)] = g;
            m[(c, r)] = g;
        }
        m[(r, k)] = 1.0;
        m[(k, r)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let solved = m
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .or_else(|| m.svd(true, true).solve(&rhs, 1e-14).ok())?;
    let alpha: Vec<f64> = solved.iter().take(k).copied().collect();
    alpha.iter().all(|v| v.is_finite()).then_some(alpha)
}

fn combine(vectors: &[Vec<f64>], corral: &[usize], lambda: &[f64]) -> Vec<f64> {
    let d = vectors[0].len();
    let mut x = vec![0.0; d];
    for (&i, &l) in corral.iter().zip(lambda) {
        for (acc, v) in x.iter_mut().zip(&vectors[i]) {
            *acc += l * v;
        }
    }
    x
}

/// Wolfe's algorithm: the point of `conv(vectors)` closest to the origin.
pub(crate) fn min_norm_point(vectors: &[Vec<f64>]) -> MinNorm {
    assert!(!vectors.is_empty());
    let max_sq = vectors
        .iter()
        .map(|v| dot(v, v))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let start = (0..vectors.len())
        .min_by(|&a, &b| dot(&vectors[a], &vectors[a]).total_cmp(&dot(&vectors[b], &vectors[b])))
        .unwrap();
    let mut corral = vec![start];
    let mut lambda = vec![1.0];
    let mut x = vectors[start].clone();
    const WEIGHT_EPS: f64 = 1e-12;

    for _ in 0..(10 * vectors.len() + 100) {
        let xx = dot(&x, &x);
        if xx <= 1e-30 * max_sq {
            break;
        }
        let (j, xp) = (0..vectors.len())
            .map(|j| (j, dot(&x, &vectors[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xx - xp <= 1e-12 * max_sq || corral.contains(&j) {
            break;
        }
        corral.push(j);
        lambda.push(0.0);

        loop {
            let Some(alpha) = affine_minimizer(vectors, &corral) else {
                // Numerically dependent corral; keep the current iterate.
                corral.pop();
                lambda.pop();
                return finish(x);
            };
            if alpha.iter().all(|&a| a > WEIGHT_EPS) {
                lambda = alpha;
                x = combine(vectors, &corral, &lambda);
                break;
            }
            let theta = lambda
                .iter()
                .zip(&alpha)
                .filter(|(_, &a)| a <= WEIGHT_EPS)
                .map(|(&l, &a)| if l - a > 0.0 { l / (l - a) } else { 0.0 })
                .fold(1.0, f64::min);
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            // Drop the points whose weight hit zero.
            let mut keep_c = Vec::with_capacity(corral.len());
            let mut keep_l = Vec::with_capacity(corral.len());
            for (&c, &l) in corral.iter().zip(&lambda) {
                if l > WEIGHT_EPS {
                    keep_c.push(c);
                    keep_l.push(l);
                }
            }
            if keep_c.is_empty() {
                // Degenerate step; fall back to the newest point alone.
                keep_c.push(j);
                keep_l.push(1.0);
            }
            let total: f64 = keep_l.iter().sum();
            keep_l.iter_mut().for_each(|l| *l /= total);
            corral = keep_c;
            lambda = keep_l;
            x = combine(vectors, &corral, &lambda);
            if corral.len() == 1 {
                break;
            }
        }
    }
    finish(x)
}

fn finish(point: Vec<f64>) -> MinNorm {
    MinNorm { point }
}

fn cloud_scale(cloud: &PointCloud) -> f64 {
    let (lo, hi) = cloud.bounding_box();
    euclidean(&lo, &hi).max(1.0)
}

/// Offset from `query` to the nearest hull point.
pub(crate) fn hull_distance(cloud: &PointCloud, query: &[f64]) -> MinNorm {
    let shifted: Vec<Vec<f64>> = cloud
        .points()
        .iter()
        .map(|p| p.coords.iter().zip(query).map(|(s, q)| s - q).collect())
        .collect();
    min_norm_point(&shifted)
}

/// Whether `query` is a convex combination of the cloud's points.
pub fn hull_contains(cloud: &PointCloud, query: &[f64]) -> Result<bool> {
    if query.len() != cloud.dim() {
        return Err(Error::DimensionMismatch {
            label: "<query>".into(),
            expected: cloud.dim(),
            found: query.len(),
        });
    }
    let dist = hull_distance(cloud, query).norm();
    Ok(dist <= HULL_TOLERANCE * cloud_scale(cloud))
}

/// Nearest point of the hull to `query`.
pub fn project_onto_hull(cloud: &PointCloud, query: &[f64]) -> Vec<f64> {
    let mn = hull_distance(cloud, query);
    query.iter().zip(&mn.point).map(|(q, p)| q + p).collect()
}

/// Dimension of the affine span of the cloud.
pub fn affine_rank(cloud: &PointCloud) -> usize {
    let n = cloud.len();
    if n < 2 {
        return 0;
    }
    let d = cloud.dim();
    let base = cloud.coords(0);
    let m = DMatrix::from_fn(n - 1, d, |r, c| cloud.coords(r + 1)[c] - base[c]);
    m.rank(1e-9 * cloud_scale(cloud))
}

/// Supporting hyperplane `normal . x <= offset` with a unit outward normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Facet {
    /// Signed distance to the facet hyperplane, positive on the inner side.
    pub fn inner_distance(&self, x: &[f64]) -> f64 {
        self.offset - dot(&self.normal, x)
    }
}

/// Unit vector orthogonal to every row, when the rows have full rank.
fn null_vector(mut rows: Vec<Vec<f64>>, d: usize, tol: f64) -> Option<Vec<f64>> {
    let m = rows.len();
    let mut pivot_cols = Vec::with_capacity(m);
    let mut r = 0;
    for c in 0..d {
        if r == m {
            break;
        }
        let (best, val) = (r..m)
            .map(|i| (i, rows[i][c].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if val <= tol {
            continue;
        }
        rows.swap(r, best);
        let p = rows[r][c];
        rows[r].iter_mut().for_each(|v| *v /= p);
        for i in 0..m {
            if i != r {
                let f = rows[i][c];
                if f != 0.0 {
                    let pivot = rows[r].clone();
                    rows[i]
                        .iter_mut()
                        .zip(&pivot)
                        .for_each(|(v, p)| *v -= f * p);
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if pivot_cols.len() != m || m + 1 != d {
        return None;
    }
    let free = (0..d).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![0.0; d];
    v[free] = 1.0;
    for (row, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -rows[row][free];
    }
    let norm = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    Some(v)
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Facets of a full-dimensional hull, or `None` if the hull has empty
/// interior.
pub fn hull_facets(cloud: &PointCloud, exec: Execution) -> Result<Option<Vec<Facet>>> {
    let n = cloud.len();
    let d = cloud.dim();
    if n < d + 1 || affine_rank(cloud) < d {
        return Ok(None);
    }
    let subsets = binomial(n, d);
    if subsets > MAX_SUBSETS {
        return Err(Error::HullTooLarge(subsets));
    }
    let scale = cloud_scale(cloud);
    let tol = 1e-9 * scale;
    let combos: Vec<Vec<usize>> = (0..n).combinations(d).collect();
    let candidates = exec.map_slice(&combos, |combo| {
        let base = cloud.coords(combo[0]);
        let rows: Vec<Vec<f64>> = combo[1..]
            .iter()
            .map(|&i| {
                cloud
                    .coords(i)
                    .iter()
                    .zip(base)
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        // d == 1 has no rows: the "hyperplane" is a single point.
        let normal = if d == 1 {
            vec![1.0]
        } else {
            null_vector(rows, d, 1e-12 * scale)?
        };
        let offset = dot(&normal, base);
        let side: Vec<f64> = cloud
            .points()
            .iter()
            .map(|p| dot(&normal, &p.coords) - offset)
            .collect();
        if side.iter().all(|&s| s <= tol) {
            Some(Facet { normal, offset })
        } else if side.iter().all(|&s| s >= -tol) {
            Some(Facet {
                normal: normal.iter().map(|v| -v).collect(),
                offset: -offset,
            })
        } else {
            None
        }
    });
    let mut facets: Vec<Facet> = Vec::new();
    for f in candidates.into_iter().flatten() {
        let dup = facets
            .iter()
            .any(|g| dot(&f.normal, &g.normal) > 1.0 - 1e-12 && (f.offset - g.offset).abs() <= tol);
        if !dup {
            facets.push(f);
        }
    }
    Ok(Some(facets))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eight_points() -> PointCloud {
        PointCloud::from_coords([
            vec![49.0, 77.0],
            vec![78.0, 65.0],
            vec![90.0, 32.0],
            vec![74.0, 8.0],
            vec![41.0, 6.0],
            vec![15.0, 23.0],
            vec![9.0, 48.0],
            vec![18.0, 62.0],
        ])
        .unwrap()
    }

    #[test]
    fn centroid_and_vertices_inside() {
        let c = eight_points();
        assert!(hull_contains(&c, &c.centroid()).unwrap());
        for p in c.points() {
            assert!(hull_contains(&c, &p.coords).unwrap());
        }
    }

    #[test]
    fn far_query_outside() {
        assert!(!hull_contains(&eight_points(), &[1000.0, 1000.0]).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            hull_contains(&eight_points(), &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn min_norm_of_segment() {
        let mn = min_norm_point(&[vec![-1.0, 1.0], vec![1.0, 1.0]]);
        assert!((mn.point[0]).abs() < 1e-12 && (mn.point[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_lands_on_boundary() {
        let square =
            PointCloud::from_coords([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let p = project_onto_hull(&square, &[2.0, 0.5]);
        assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
        let q = project_onto_hull(&square, &[0.25, 0.75]);
        assert!((q[0] - 0.25).abs() < 1e-12 && (q[1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn square_facets() {
        let square =
            PointCloud::from_coords([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let facets = hull_facets(&square, Execution::Sequential)
            .unwrap()
            .unwrap();
        assert_eq!(facets.len(), 4);
        for f in &facets {
            assert!((f.inner_distance(&[0.5, 0.5]) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn collinear_hull_is_degenerate() {
        let line = PointCloud::from_coords([[0.0, 0.0], [1.0, 1.0], [3.0, 3.0]]).unwrap();
        assert_eq!(affine_rank(&line), 1);
        assert!(hull_facets(&line, Execution::Sequential).unwrap().is_none());
    }

    #[test]
    fn simplex_in_3d_has_four_facets() {
        let tet = PointCloud::from_coords([
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.2, 0.2, 0.2],
        ])
        .unwrap();
        let facets = hull_facets(&tet, Execution::Parallel).unwrap().unwrap();
        assert_eq!(facets.len(), 4);
    }
}
