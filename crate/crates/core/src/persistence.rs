//! Persistence intervals by left-to-right column reduction over GF(2), and an
//! independent rank-based Betti number oracle.

use std::collections::HashMap;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::filtration::Filtration;

/// Sparse GF(2) boundary matrix; each column is a sorted list of row indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix {
    columns: Vec<Vec<usize>>,
}

impl BoundaryMatrix {
    /// Rejects a filtration in which some face is missing or does not
    /// precede its coface.
    pub fn from_filtration(filtration: &Filtration) -> Result<Self> {
        let mut index: HashMap<&[usize], usize> = HashMap::with_capacity(filtration.len());
        let mut columns = Vec::with_capacity(filtration.len());
        for (j, s) in filtration.simplices().iter().enumerate() {
            let mut col = Vec::with_capacity(s.vertices.len());
            for face in s.faces() {
                match index.get(face.as_slice()) {
                    Some(&i) if filtration.simplices()[i].value <= s.value => col.push(i),
                    _ => return Err(Error::FiltrationOrder),
                }
            }
            col.sort_unstable();
            if index.insert(&s.vertices, j).is_some() {
                return Err(Error::FiltrationOrder);
            }
            columns.push(col);
        }
        Ok(Self { columns })
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    /// Standard reduction. Returns `(birth index, death index)` pairs.
    pub fn reduce(mut self) -> Vec<(usize, usize)> {
        let mut pivot_owner: HashMap<usize, usize> = HashMap::new();
        let mut pairs = Vec::new();
        for j in 0..self.columns.len() {
            while let Some(&low) = self.columns[j].last() {
                match pivot_owner.get(&low) {
                    Some(&k) => {
                        let other = std::mem::take(&mut self.columns[k]);
                        self.columns[j] = symmetric_difference(&self.columns[j], &other);
                        self.columns[k] = other;
                    }
                    None => {
                        pivot_owner.insert(low, j);
                        pairs.push((low, j));
                        break;
                    }
                }
            }
        }
        pairs
    }
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A half-open interval `[birth, death)`; `death` is `+inf` for classes that
/// never die.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistenceInterval {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

impl PersistenceInterval {
    pub fn is_infinite(&self) -> bool {
        self.death.is_infinite()
    }

    pub fn length(&self) -> f64 {
        self.death - self.birth
    }

    pub fn contains(&self, t: f64) -> bool {
        self.birth <= t && t < self.death
    }
}

fn interval_order(a: &PersistenceInterval, b: &PersistenceInterval) -> std::cmp::Ordering {
    a.birth
        .total_cmp(&b.birth)
        .then(a.death.total_cmp(&b.death))
}

/// Dimension-0 and dimension-1 intervals, each sorted by `(birth, death)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Barcode {
    dim0: Vec<PersistenceInterval>,
    dim1: Vec<PersistenceInterval>,
    cloud_cardinality: usize,
}

impl Barcode {
    pub fn new(intervals: Vec<PersistenceInterval>, cloud_cardinality: usize) -> Self {
        let (mut dim0, mut dim1): (Vec<_>, Vec<_>) =
            intervals.into_iter().partition(|i| i.dim == 0);
        dim0.sort_by(interval_order);
        dim1.sort_by(interval_order);
        Self {
            dim0,
            dim1,
            cloud_cardinality,
        }
    }

    pub fn intervals(&self, dim: usize) -> &[PersistenceInterval] {
        match dim {
            0 => &self.dim0,
            1 => &self.dim1,
            _ => &[],
        }
    }

    pub fn cloud_cardinality(&self) -> usize {
        self.cloud_cardinality
    }

    /// Finite dimension-0 deaths, ascending.
    pub fn finite_deaths(&self, dim: usize) -> Vec<f64> {
        let mut d: Vec<f64> = self
            .intervals(dim)
            .iter()
            .filter(|i| !i.is_infinite())
            .map(|i| i.death)
            .collect();
        d.sort_by(f64::total_cmp);
        d
    }

    /// Copy with dimension-1 bars shorter than `floor` removed.
    pub fn without_short_dim1(&self, floor: f64) -> Barcode {
        Barcode {
            dim0: self.dim0.clone(),
            dim1: self
                .dim1
                .iter()
                .filter(|i| i.length() >= floor)
                .copied()
                .collect(),
            cloud_cardinality: self.cloud_cardinality,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("barcode serialization is infallible")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

struct Bars<'a>(&'a [PersistenceInterval]);

impl Serialize for Bars<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for i in self.0 {
            let death = (!i.is_infinite()).then_some(i.death);
            seq.serialize_element(&(i.birth, death))?;
        }
        seq.end()
    }
}

/// Serializes one dimension's intervals as `[[birth, death|null], ...]`.
pub fn serialize_intervals<S: Serializer>(
    intervals: &[PersistenceInterval],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    Bars(intervals).serialize(serializer)
}

impl Serialize for Barcode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Barcode", 2)?;
        st.serialize_field("dim0", &Bars(&self.dim0))?;
        st.serialize_field("dim1", &Bars(&self.dim1))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Barcode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim0: Vec<(f64, Option<f64>)>,
            dim1: Vec<(f64, Option<f64>)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let lift = |dim, v: Vec<(f64, Option<f64>)>| {
            v.into_iter()
                .map(move |(birth, death)| PersistenceInterval {
                    dim,
                    birth,
                    death: death.unwrap_or(f64::INFINITY),
                })
        };
        // Vertex births are all zero, so cardinality is at least the dim-0 bar count.
        let n = raw.dim0.len();
        let intervals = lift(0, raw.dim0).chain(lift(1, raw.dim1)).collect();
        Ok(Barcode::new(intervals, n))
    }
}

/// Persistence intervals of dimensions `0..=max_dim` (at most 1).
/// Zero-length intervals are discarded.
pub fn compute_intervals(filtration: &Filtration, max_dim: usize) -> Result<Barcode> {
    let matrix = BoundaryMatrix::from_filtration(filtration)?;
    let simplices = filtration.simplices();
    let pairs = matrix.reduce();
    let mut paired = vec![false; simplices.len()];
    let mut intervals = Vec::new();
    let keep = |dim: usize| dim <= max_dim.min(1);
    for &(birth, death) in &pairs {
        paired[birth] = true;
        paired[death] = true;
        let dim = simplices[birth].dim();
        let (b, d) = (simplices[birth].value, simplices[death].value);
        if keep(dim) && d > b {
            intervals.push(PersistenceInterval {
                dim,
                birth: b,
                death: d,
            });
        }
    }
    for (i, s) in simplices.iter().enumerate() {
        // An unpaired simplex whose column reduced to zero is positive.
        if !paired[i] && keep(s.dim()) {
            intervals.push(PersistenceInterval {
                dim: s.dim(),
                birth: s.value,
                death: f64::INFINITY,
            });
        }
    }
    Ok(Barcode::new(intervals, filtration.vertex_count()))
}

/// Number of `dim`-intervals alive at `t`.
pub fn betti_at(barcode: &Barcode, t: f64, dim: usize) -> usize {
    barcode
        .intervals(dim)
        .iter()
        .filter(|i| i.contains(t))
        .count()
}

/// Rank of a GF(2) matrix given as bit-packed rows.
fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len() * 64);
    for col in 0..width {
        let (word, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][word] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[word] & bit != 0 {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        rank += 1;
    }
    rank
}

/// Betti number of the sub-complex `{value <= t}` computed as
/// `dim ker d_k - rank d_{k+1}` by Gaussian elimination, without the
/// persistence reduction.
pub fn betti_oracle(filtration: &Filtration, t: f64, dim: usize) -> usize {
    let alive: Vec<&crate::filtration::Simplex> = filtration
        .simplices()
        .iter()
        .filter(|s| s.value <= t)
        .collect();
    let of_dim = |k: usize| -> Vec<&Vec<usize>> {
        alive
            .iter()
            .filter(|s| s.dim() == k)
            .map(|s| &s.vertices)
            .collect()
    };
    let boundary_rank = |k: usize| -> usize {
        if k == 0 {
            return 0;
        }
        let lower = of_dim(k - 1);
        let upper = of_dim(k);
        if lower.is_empty() || upper.is_empty() {
            return 0;
        }
        let position: HashMap<&Vec<usize>, usize> =
            lower.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let words = lower.len().div_ceil(64);
        let rows = upper
            .iter()
            .map(|verts| {
                let mut row = vec![0u64; words];
                for i in 0..verts.len() {
                    let face: Vec<usize> = verts
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &v)| v)
                        .collect();
                    if let Some(&p) = position.get(&face) {
                        row[p / 64] ^= 1 << (p % 64);
                    }
                }
                row
            })
            .collect();
        gf2_rank(rows)
    };
    let chains = of_dim(dim).len();
    chains - boundary_rank(dim) - boundary_rank(dim + 1)
}
