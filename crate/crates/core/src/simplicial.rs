//! Finite abstract simplicial complexes on the vertex set `[m] = {1, ..., m}`.
//!
//! Faces are stored as bit masks (vertex `i` is bit `i - 1`), so `m` is
//! limited to 63. Labels are never compacted: a full subcomplex or a link
//! keeps the ambient labels, and vertices that appear in no face are ghost
//! vertices.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported number of vertices.
pub const MAX_VERTICES: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("number of vertices must be positive, got {0}")]
    NonPositiveVertexCount(i64),
    #[error("number of vertices {0} exceeds the supported maximum {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("vertex {vertex} is outside [1, {m}]")]
    VertexOutOfRange { vertex: i64, m: usize },
    #[error("repeated vertex {0} in a simplex")]
    RepeatedVertex(usize),
    #[error("{sigma} is not a face of the complex")]
    NotAFace { sigma: Simplex },
    #[error("{sigma} is not contained in {set}")]
    NotContained { sigma: Simplex, set: Simplex },
    #[error("complex is not the boundary of a polygon: {0}")]
    NotAPolygon(String),
    #[error("malformed complex description: {0}")]
    Parse(String),
}

/// A set of vertices of `[m]`, used both for simplices and for vertex subsets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Simplex(pub u64);

/// Vertex subsets share the representation of simplices.
pub type VertexSet = Simplex;

impl Simplex {
    pub const EMPTY: Simplex = Simplex(0);

    pub fn from_vertices(vertices: &[usize]) -> Result<Simplex, SimplicialError> {
        let mut mask = 0u64;
        for &v in vertices {
            if v == 0 || v > MAX_VERTICES {
                return Err(SimplicialError::VertexOutOfRange {
                    vertex: v as i64,
                    m: MAX_VERTICES,
                });
            }
            let bit = 1u64 << (v - 1);
            if mask & bit != 0 {
                return Err(SimplicialError::RepeatedVertex(v));
            }
            mask |= bit;
        }
        Ok(Simplex(mask))
    }

    /// The full vertex set `[m]`.
    pub fn full(m: usize) -> Simplex {
        if m >= 64 {
            Simplex(u64::MAX)
        } else {
            Simplex((1u64 << m) - 1)
        }
    }

    pub fn singleton(v: usize) -> Simplex {
        Simplex(1u64 << (v - 1))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Simplicial dimension, `-1` for the empty simplex.
    pub fn dim(self) -> i64 {
        self.len() as i64 - 1
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=64).contains(&v) && self.0 & (1u64 << (v - 1)) != 0
    }

    pub fn is_subset_of(self, other: Simplex) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Simplex) -> Simplex {
        Simplex(self.0 | other.0)
    }

    pub fn intersection(self, other: Simplex) -> Simplex {
        Simplex(self.0 & other.0)
    }

    pub fn difference(self, other: Simplex) -> Simplex {
        Simplex(self.0 & !other.0)
    }

    pub fn with(self, v: usize) -> Simplex {
        Simplex(self.0 | (1u64 << (v - 1)))
    }

    pub fn without(self, v: usize) -> Simplex {
        Simplex(self.0 & !(1u64 << (v - 1)))
    }

    /// Vertices in increasing order.
    pub fn vertices(self) -> Vertices {
        Vertices(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.vertices().collect()
    }

    /// Number of vertices of `self` strictly smaller than `v`.
    pub fn count_below(self, v: usize) -> usize {
        (self.0 & ((1u64 << (v - 1)) - 1)).count_ones() as usize
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            set: self.0,
            next: Some(0),
        }
    }

    /// Dimension-first, then lexicographic comparison.
    pub fn cmp_lex(self, other: Simplex) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let a = self.vertices();
            let b = other.vertices();
            a.cmp(b)
        })
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dimension-first, then lexicographic.
impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_lex(*other)
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.vertices().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Simplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

#[derive(Clone)]
pub struct Vertices(u64);

impl Iterator for Vertices {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v + 1)
    }
}

pub struct Subsets {
    set: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = Simplex;
    fn next(&mut self) -> Option<Simplex> {
        let cur = self.next?;
        self.next = if cur == self.set {
            None
        } else {
            Some(cur.wrapping_sub(self.set) & self.set)
        };
        Some(Simplex(cur))
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Position of `sigma` in the dimension-first, then lexicographic, order of
/// all faces of the full simplex on `[m]`, with the empty face at 0.
pub fn lex_weight(sigma: Simplex, m: usize) -> u64 {
    let k = sigma.len();
    let mut w: u64 = (0..k).map(|j| binomial(m, j)).sum();
    let mut prev = 0usize;
    for (j, c) in sigma.vertices().enumerate() {
        for v in prev + 1..c {
            w += binomial(m - v, k - j - 1);
        }
        prev = c;
    }
    w
}

/// Input format: `{"m": int, "facets": [[int, ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexSpec {
    pub m: i64,
    pub facets: Vec<Vec<i64>>,
}

/// A simplicial complex on `[m]`; always contains the empty face.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    m: usize,
    faces: Vec<Simplex>,
    members: HashSet<u64>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K(m={}, facets={:?})", self.m, self.facets())
    }
}

impl SimplicialComplex {
    /// Downward closure of the given faces; faces must lie in `[m]`.
    pub fn from_faces<I>(m: usize, faces: I) -> Result<SimplicialComplex, SimplicialError>
    where
        I: IntoIterator<Item = Simplex>,
    {
        if m == 0 {
            return Err(SimplicialError::NonPositiveVertexCount(0));
        }
        if m > MAX_VERTICES {
            return Err(SimplicialError::TooManyVertices(m));
        }
        let full = Simplex::full(m);
        let mut members: HashSet<u64> = HashSet::new();
        members.insert(0);
        for f in faces {
            if !f.is_subset_of(full) {
                let v = f.difference(full).vertices().next().unwrap_or(0);
                return Err(SimplicialError::VertexOutOfRange { vertex: v as i64, m });
            }
            if members.contains(&f.0) {
                continue;
            }
            for s in f.subsets() {
                members.insert(s.0);
            }
        }
        Ok(Self::from_member_set(m, members))
    }

    fn from_member_set(m: usize, members: HashSet<u64>) -> SimplicialComplex {
        let mut faces: Vec<Simplex> = members.iter().map(|&x| Simplex(x)).collect();
        faces.sort_by(|a, b| a.cmp_lex(*b));
        SimplicialComplex { m, faces, members }
    }

    /// Validates vertex lists and takes the downward closure.
    pub fn from_facets(m: i64, facets: &[Vec<i64>]) -> Result<SimplicialComplex, SimplicialError> {
        if m <= 0 {
            return Err(SimplicialError::NonPositiveVertexCount(m));
        }
        let mu = m as usize;
        if mu > MAX_VERTICES {
            return Err(SimplicialError::TooManyVertices(mu));
        }
        let mut simplices = Vec::with_capacity(facets.len());
        for f in facets {
            let mut vs = Vec::with_capacity(f.len());
            for &v in f {
                if v < 1 || v > m {
                    return Err(SimplicialError::VertexOutOfRange { vertex: v, m: mu });
                }
                vs.push(v as usize);
            }
            simplices.push(Simplex::from_vertices(&vs)?);
        }
        Self::from_faces(mu, simplices)
    }

    pub fn from_spec(spec: &ComplexSpec) -> Result<SimplicialComplex, SimplicialError> {
        Self::from_facets(spec.m, &spec.facets)
    }

    pub fn from_json(text: &str) -> Result<SimplicialComplex, SimplicialError> {
        let spec: ComplexSpec =
            serde_json::from_str(text).map_err(|e| SimplicialError::Parse(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> ComplexSpec {
        ComplexSpec {
            m: self.m as i64,
            facets: self
                .facets()
                .iter()
                .map(|f| f.vertices().map(|v| v as i64).collect())
                .collect(),
        }
    }

    /// The complex `{∅}` on `[m]`.
    pub fn empty(m: usize) -> SimplicialComplex {
        Self::from_faces(m, []).expect("valid vertex count")
    }

    /// The full simplex on `[m]`.
    pub fn simplex(m: usize) -> SimplicialComplex {
        Self::from_faces(m, [Simplex::full(m)]).expect("valid vertex count")
    }

    /// Boundary of the `n`-gon with vertices `1..n` in cyclic order.
    pub fn polygon(n: usize) -> SimplicialComplex {
        let edges = (1..=n).map(|i| Simplex::singleton(i).with(i % n + 1));
        Self::from_faces(n, edges).expect("valid vertex count")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// All faces, including the empty face, in lex-weight order.
    pub fn faces(&self) -> &[Simplex] {
        &self.faces
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn contains(&self, sigma: Simplex) -> bool {
        self.members.contains(&sigma.0)
    }

    pub fn dim(&self) -> i64 {
        self.faces.last().map(|f| f.dim()).unwrap_or(-1)
    }

    /// Maximal faces in lex-weight order.
    pub fn facets(&self) -> Vec<Simplex> {
        let full = Simplex::full(self.m);
        self.faces
            .iter()
            .copied()
            .filter(|f| {
                full.difference(*f)
                    .vertices()
                    .all(|v| !self.contains(f.with(v)))
            })
            .collect()
    }

    /// Vertices that span a 0-simplex.
    pub fn vertex_set(&self) -> VertexSet {
        Simplex(
            self.faces
                .iter()
                .filter(|f| f.len() == 1)
                .fold(0, |acc, f| acc | f.0),
        )
    }

    pub fn ghost_vertices(&self) -> VertexSet {
        Simplex::full(self.m).difference(self.vertex_set())
    }

    /// `K_I = {σ ∈ K : σ ⊆ I}`, still on the ambient `[m]`.
    pub fn full_subcomplex(&self, set: VertexSet) -> SimplicialComplex {
        let members: HashSet<u64> = self
            .members
            .iter()
            .copied()
            .filter(|&f| f & !set.0 == 0)
            .collect();
        Self::from_member_set(self.m, members)
    }

    /// The link of `σ` in the complement of `I`: faces `τ ⊆ [m] - I` with
    /// `τ ∪ σ ∈ K`. Requires `σ ∈ K` and `σ ⊆ I`.
    pub fn link_complement(
        &self,
        set: VertexSet,
        sigma: Simplex,
    ) -> Result<SimplicialComplex, SimplicialError> {
        if !self.contains(sigma) {
            return Err(SimplicialError::NotAFace { sigma });
        }
        if !sigma.is_subset_of(set) {
            return Err(SimplicialError::NotContained { sigma, set });
        }
        Ok(self.link_complement_unchecked(set, sigma))
    }

    pub(crate) fn link_complement_unchecked(
        &self,
        set: VertexSet,
        sigma: Simplex,
    ) -> SimplicialComplex {
        let members: HashSet<u64> = self
            .members
            .iter()
            .copied()
            .filter(|&f| f & set.0 == sigma.0)
            .map(|f| f & !sigma.0)
            .collect();
        Self::from_member_set(self.m, members)
    }

    /// `f[0]` counts the empty face, `f[k + 1]` counts `k`-faces.
    pub fn f_vector(&self) -> Vec<u64> {
        let top = (self.dim() + 2) as usize;
        let mut f = vec![0u64; top];
        for s in &self.faces {
            f[s.len()] += 1;
        }
        f
    }

    /// Minimal subsets of `[m]` that are not faces.
    pub fn minimal_non_faces(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        // Candidates are faces plus one vertex; every minimal non-face arises this way.
        let full = Simplex::full(self.m);
        let mut seen = HashSet::new();
        for f in &self.faces {
            for v in full.difference(*f).vertices() {
                let g = f.with(v);
                if self.contains(g) || !seen.insert(g.0) {
                    continue;
                }
                if g.vertices().all(|u| self.contains(g.without(u))) {
                    out.push(g);
                }
            }
        }
        out.sort_by(|a, b| a.cmp_lex(*b));
        out
    }

    /// If the complex is the boundary of a polygon through all of `[m]`,
    /// returns the number of sides.
    pub fn polygon_sides(&self) -> Result<usize, SimplicialError> {
        let m = self.m;
        if m < 3 {
            return Err(SimplicialError::NotAPolygon(format!("only {m} vertices")));
        }
        if self.dim() != 1 {
            return Err(SimplicialError::NotAPolygon(format!(
                "dimension is {}, expected 1",
                self.dim()
            )));
        }
        if !self.ghost_vertices().is_empty() {
            return Err(SimplicialError::NotAPolygon(format!(
                "ghost vertices {}",
                self.ghost_vertices()
            )));
        }
        let edges: Vec<Simplex> = self.faces.iter().copied().filter(|f| f.len() == 2).collect();
        for v in 1..=m {
            let deg = edges.iter().filter(|e| e.contains(v)).count();
            if deg != 2 {
                return Err(SimplicialError::NotAPolygon(format!(
                    "vertex {v} has degree {deg}"
                )));
            }
        }
        // Every vertex has degree two; connectedness makes it a single cycle.
        let mut reached = Simplex::singleton(1);
        loop {
            let next = edges
                .iter()
                .filter(|e| !e.intersection(reached).is_empty())
                .fold(reached, |acc, e| acc.union(*e));
            if next == reached {
                break;
            }
            reached = next;
        }
        if reached != Simplex::full(m) {
            return Err(SimplicialError::NotAPolygon("not connected".into()));
        }
        Ok(m)
    }
}

/// All simplicial complexes on `[m]` (ghost vertices allowed), as sets of faces.
///
/// The count grows like the Dedekind numbers; intended for `m <= 4`.
pub fn enumerate_complexes(m: usize) -> Vec<SimplicialComplex> {
    assert!((1..=5).contains(&m), "enumeration only supported for 1 <= m <= 5");
    let mut nonempty: Vec<Simplex> = Simplex::full(m)
        .subsets()
        .filter(|s| !s.is_empty())
        .collect();
    nonempty.sort_by(|a, b| a.cmp_lex(*b));
    let mut out = Vec::new();
    let mut chosen: HashSet<u64> = HashSet::new();
    chosen.insert(0);
    enumerate_rec(m, &nonempty, 0, &mut chosen, &mut out);
    out
}

fn enumerate_rec(
    m: usize,
    candidates: &[Simplex],
    idx: usize,
    chosen: &mut HashSet<u64>,
    out: &mut Vec<SimplicialComplex>,
) {
    if idx == candidates.len() {
        out.push(SimplicialComplex::from_member_set(m, chosen.clone()));
        return;
    }
    let f = candidates[idx];
    enumerate_rec(m, candidates, idx + 1, chosen, out);
    // Candidates come in dimension order, so all boundary faces are already decided.
    if f.vertices().all(|v| chosen.contains(&f.without(v).0)) {
        chosen.insert(f.0);
        enumerate_rec(m, candidates, idx + 1, chosen, out);
        chosen.remove(&f.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Simplex {
        Simplex::from_vertices(v).unwrap()
    }

    #[test]
    fn weights_for_three_vertices() {
        let expected = [
            (vec![], 0),
            (vec![1], 1),
            (vec![2], 2),
            (vec![3], 3),
            (vec![1, 2], 4),
            (vec![1, 3], 5),
            (vec![2, 3], 6),
            (vec![1, 2, 3], 7),
        ];
        for (v, w) in expected {
            assert_eq!(lex_weight(s(&v), 3), w, "{v:?}");
        }
    }

    #[test]
    fn weights_are_a_bijection() {
        for m in 1..=7 {
            let mut all: Vec<Simplex> = Simplex::full(m).subsets().collect();
            all.sort_by(|a, b| a.cmp_lex(*b));
            for (i, f) in all.iter().enumerate() {
                assert_eq!(lex_weight(*f, m), i as u64);
            }
        }
    }

    #[test]
    fn closure_adds_faces() {
        let k = SimplicialComplex::from_facets(3, &[vec![1, 2, 3]]).unwrap();
        assert_eq!(k.num_faces(), 8);
        assert_eq!(k.f_vector(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            SimplicialComplex::from_facets(3, &[vec![1, 4]]),
            Err(SimplicialError::VertexOutOfRange { vertex: 4, .. })
        ));
        assert!(matches!(
            SimplicialComplex::from_facets(0, &[]),
            Err(SimplicialError::NonPositiveVertexCount(0))
        ));
        assert!(SimplicialComplex::from_facets(3, &[vec![1, 1]]).is_err());
        assert!(SimplicialComplex::from_json("{\"m\": 2}").is_err());
    }

    #[test]
    fn full_subcomplex_keeps_labels() {
        let k = SimplicialComplex::polygon(5);
        let sub = k.full_subcomplex(s(&[1, 2, 4]));
        assert_eq!(sub.m(), 5);
        assert_eq!(sub.facets(), vec![s(&[4]), s(&[1, 2])]);
    }

    #[test]
    fn link_complement_examples() {
        let k = SimplicialComplex::polygon(4);
        let n = k.link_complement(s(&[1]), s(&[1])).unwrap();
        assert_eq!(n.facets(), vec![s(&[2]), s(&[4])]);
        let n = k.link_complement(s(&[1, 3]), Simplex::EMPTY).unwrap();
        assert_eq!(n.facets(), vec![s(&[2]), s(&[4])]);
        assert!(k.link_complement(s(&[1, 3]), s(&[1, 3])).is_err());
        assert!(k.link_complement(s(&[2]), s(&[1])).is_err());
        let whole = k.link_complement(Simplex::full(4), s(&[1, 2])).unwrap();
        assert_eq!(whole.num_faces(), 1);
    }

    #[test]
    fn minimal_non_faces_of_square() {
        let k = SimplicialComplex::polygon(4);
        assert_eq!(k.minimal_non_faces(), vec![s(&[1, 3]), s(&[2, 4])]);
        let g = SimplicialComplex::from_facets(3, &[vec![1]]).unwrap();
        assert_eq!(g.minimal_non_faces(), vec![s(&[2]), s(&[3])]);
    }

    #[test]
    fn polygon_detection() {
        assert_eq!(SimplicialComplex::polygon(6).polygon_sides().unwrap(), 6);
        let two_triangles = SimplicialComplex::from_facets(
            6,
            &[vec![1, 2], vec![2, 3], vec![1, 3], vec![4, 5], vec![5, 6], vec![4, 6]],
        )
        .unwrap();
        assert!(two_triangles.polygon_sides().is_err());
        assert!(SimplicialComplex::simplex(3).polygon_sides().is_err());
    }

    #[test]
    fn enumeration_counts() {
        // Downsets of the Boolean lattice containing the empty set.
        let counts: Vec<usize> = (1..=4).map(|m| enumerate_complexes(m).len()).collect();
        assert_eq!(counts, vec![2, 5, 19, 167]);
    }

    #[test]
    fn subsets_iterate_everything() {
        let set = s(&[2, 5, 7]);
        let all: Vec<Simplex> = set.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|x| x.is_subset_of(set)));
    }
}
