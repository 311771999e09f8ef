#![allow(dead_code)]

use persistry_core::geometry::{Point, PointCloud};
use proptest::prelude::*;

/// The 8-point planar example cloud, labelled A..H.
pub fn eight_points() -> PointCloud {
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
            .map(|&(l, x, y)| Point {
                label: l.into(),
                coords: vec![x, y],
            })
            .collect(),
    )
    .unwrap()
}

/// Clouds with `n` in `ns` and `d` in `ds`, coordinates on an integer grid
/// in `[0, 100]` so that ties and coincidences actually occur.
pub fn lattice_cloud(
    ns: std::ops::RangeInclusive<usize>,
    ds: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = PointCloud> {
    (ns, ds).prop_flat_map(|(n, d)| {
        prop::collection::vec(prop::collection::vec(0u8..=100, d), n).prop_map(|rows| {
            PointCloud::from_coords(
                rows.into_iter()
                    .map(|r| r.into_iter().map(f64::from).collect::<Vec<_>>()),
            )
            .unwrap()
        })
    })
}

/// Real-valued clouds, generic position with probability one.
pub fn real_cloud(
    ns: std::ops::RangeInclusive<usize>,
    ds: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = PointCloud> {
    (ns, ds).prop_flat_map(|(n, d)| {
        prop::collection::vec(prop::collection::vec(0.0f64..100.0, d), n)
            .prop_map(|rows| PointCloud::from_coords(rows).unwrap())
    })
}

/// Kruskal with union-find over all pairwise edges; returns sorted weights.
pub fn kruskal_weights(cloud: &PointCloud) -> Vec<f64> {
    let n = cloud.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d: f64 = cloud
                .coords(i)
                .iter()
                .zip(cloud.coords(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            edges.push((d, i, j));
        }
    }
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    let mut out = Vec::new();
    for (d, i, j) in edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
            out.push(d);
        }
    }
    out
}
