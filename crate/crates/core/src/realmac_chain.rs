//! The cochain complex `C_K` computing the cohomology of the real
//! moment-angle complex `Z(K; (D^1, S^0))`, with its product.
//!
//! Generators are words in `1, t, s` indexed by `[m]`: for `I ⊆ [m]` and
//! `σ ∈ K` with `σ ⊆ I` the generator has `s` on `σ`, `t` on `I - σ` and
//! `1` elsewhere. Its degree is `|σ|`. The differential turns one `t` into
//! an `s` and preserves `I`, so `C_K` splits as a sum of blocks `C_{K_I}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graded_algebra::field::{sparse_rank, PrimeField, Rationals};
use crate::graded_algebra::homology::{cohomology_basis, CohomologyBasis};
use crate::graded_algebra::{Coefficients, IntegerMatrix, LinalgError, SparseMatrix};
use crate::simplicial::{lex_weight, Simplex, SimplicialComplex, SimplicialError, VertexSet};

#[derive(Debug, Error)]
pub enum RealmacError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error("a polygon needs at least 3 sides, got {0}")]
    TooFewSides(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TsSymbol {
    One,
    T,
    S,
}

/// A basis word of `C_K`: `s` on `sigma`, `t` on `set - sigma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TsKey {
    pub set: VertexSet,
    pub sigma: Simplex,
}

impl TsKey {
    pub fn new(set: VertexSet, sigma: Simplex) -> Self {
        debug_assert!(sigma.is_subset_of(set));
        TsKey { set, sigma }
    }

    pub fn degree(self) -> usize {
        self.sigma.len()
    }

    pub fn symbol(self, v: usize) -> TsSymbol {
        if self.sigma.contains(v) {
            TsSymbol::S
        } else if self.set.contains(v) {
            TsSymbol::T
        } else {
            TsSymbol::One
        }
    }

    pub fn symbols(self, m: usize) -> Vec<TsSymbol> {
        (1..=m).map(|v| self.symbol(v)).collect()
    }
}

impl fmt::Display for TsKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.set.is_empty() {
            return write!(f, "1");
        }
        for v in self.set.vertices() {
            let c = if self.sigma.contains(v) { 's' } else { 't' };
            write!(f, "{c}{v}")?;
        }
        Ok(())
    }
}

/// An integral cochain of `C_K`.
pub type Cochain = BTreeMap<TsKey, i64>;

/// Renders a cochain as `t1s2 - s1t2`.
pub fn format_cochain(c: &Cochain) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (k, &v)) in c.iter().enumerate() {
        let mag = v.unsigned_abs();
        if i == 0 {
            if v < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if v < 0 { " - " } else { " + " });
        }
        if mag != 1 {
            out.push_str(&format!("{mag}·"));
        }
        out.push_str(&k.to_string());
    }
    out
}

fn add_term(c: &mut Cochain, k: TsKey, v: i64) {
    if v == 0 {
        return;
    }
    let e = c.entry(k).or_insert(0);
    *e += v;
    if *e == 0 {
        c.remove(&k);
    }
}

/// Differential of one generator of `C_K`.
pub fn differential_of(k: &SimplicialComplex, key: TsKey) -> Vec<(TsKey, i64)> {
    let mut out = Vec::new();
    for v in key.set.difference(key.sigma).vertices() {
        let tau = key.sigma.with(v);
        if k.contains(tau) {
            let sign = if key.sigma.count_below(v).is_multiple_of(2) { 1 } else { -1 };
            out.push((TsKey::new(key.set, tau), sign));
        }
    }
    out
}

/// Differential of an arbitrary cochain.
pub fn coboundary(k: &SimplicialComplex, c: &Cochain) -> Cochain {
    let mut out = Cochain::new();
    for (&key, &v) in c {
        for (t, s) in differential_of(k, key) {
            add_term(&mut out, t, s * v);
        }
    }
    out
}

/// The product on `C_K`: coordinatewise `t·t = t`, `s·t = s`,
/// `t·s = s·s = 0`, `1` a unit, with the Koszul sign, and terms whose
/// `s`-set is not a face dropped.
pub fn cai_product_keys(k: &SimplicialComplex, x: TsKey, y: TsKey) -> Option<(TsKey, i64)> {
    if !y.sigma.intersection(x.set).is_empty() {
        return None;
    }
    let sigma = x.sigma.union(y.sigma);
    if !k.contains(sigma) {
        return None;
    }
    // (-1)^{#{(i, j) : i < j, i ∈ σ_y, j ∈ σ_x}}
    let mut swaps = 0usize;
    for j in x.sigma.vertices() {
        swaps += y.sigma.count_below(j);
    }
    let sign = if swaps.is_multiple_of(2) { 1 } else { -1 };
    Some((TsKey::new(x.set.union(y.set), sigma), sign))
}

pub fn cai_product(k: &SimplicialComplex, x: &Cochain, y: &Cochain) -> Cochain {
    let mut out = Cochain::new();
    for (&a, &ca) in x {
        for (&b, &cb) in y {
            if let Some((key, s)) = cai_product_keys(k, a, b) {
                add_term(&mut out, key, s * ca * cb);
            }
        }
    }
    out
}

/// One summand `C_{K_I}` of `C_K`, with dense differentials.
#[derive(Clone, Debug)]
pub struct CkBlock {
    pub set: VertexSet,
    /// Faces of `K_I` by size.
    pub gens_by_degree: Vec<Vec<Simplex>>,
    /// `d[k]` maps degree `k` to degree `k + 1`.
    pub d: Vec<IntegerMatrix>,
}

impl CkBlock {
    pub fn new(k: &SimplicialComplex, set: VertexSet) -> CkBlock {
        let mut gens_by_degree: Vec<Vec<Simplex>> = Vec::new();
        for &f in k.faces() {
            if f.is_subset_of(set) {
                if gens_by_degree.len() <= f.len() {
                    gens_by_degree.resize(f.len() + 1, Vec::new());
                }
                gens_by_degree[f.len()].push(f);
            }
        }
        let index: Vec<HashMap<Simplex, usize>> = gens_by_degree
            .iter()
            .map(|g| g.iter().enumerate().map(|(i, &s)| (s, i)).collect())
            .collect();
        let mut d = Vec::new();
        for deg in 0..gens_by_degree.len().saturating_sub(1) {
            let mut m = IntegerMatrix::zeros(gens_by_degree[deg + 1].len(), gens_by_degree[deg].len());
            for (col, &sigma) in gens_by_degree[deg].iter().enumerate() {
                for (t, s) in differential_of(k, TsKey::new(set, sigma)) {
                    m.set(index[deg + 1][&t.sigma], col, s);
                }
            }
            d.push(m);
        }
        CkBlock {
            set,
            gens_by_degree,
            d,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.gens_by_degree.len().saturating_sub(1)
    }

    /// Integral cohomology with representatives in each degree.
    pub fn integral_cohomology(&self) -> Result<Vec<CohomologyBasis>, LinalgError> {
        (0..self.gens_by_degree.len())
            .map(|deg| {
                let d_in = deg.checked_sub(1).map(|j| &self.d[j]);
                let d_out = self.d.get(deg);
                cohomology_basis(deg as i64, self.gens_by_degree[deg].len(), d_in, d_out)
            })
            .collect()
    }

    /// Dimensions over a field.
    pub fn field_betti(&self, coeffs: Coefficients) -> Result<Vec<usize>, LinalgError> {
        let ranks: Vec<usize> = match coeffs {
            Coefficients::Prime(p) => {
                let f = PrimeField::new(p).ok_or(LinalgError::NotPrime(p))?;
                self.d.iter().map(|m| sparse_rank(&f, &SparseMatrix::from_dense(m))).collect()
            }
            _ => self
                .d
                .iter()
                .map(|m| sparse_rank(&Rationals, &SparseMatrix::from_dense(m)))
                .collect(),
        };
        Ok((0..self.gens_by_degree.len())
            .map(|deg| {
                let r_out = ranks.get(deg).copied().unwrap_or(0);
                let r_in = deg.checked_sub(1).map(|j| ranks[j]).unwrap_or(0);
                self.gens_by_degree[deg].len() - r_out - r_in
            })
            .collect())
    }
}

/// The complex `C_K` with generators grouped by `I` (in lex-weight order)
/// and then by `σ`.
#[derive(Clone, Debug)]
pub struct CkComplex {
    k: SimplicialComplex,
    generators: Vec<TsKey>,
    index: HashMap<TsKey, usize>,
}

pub fn build_ck(k: &SimplicialComplex) -> CkComplex {
    let m = k.m();
    let mut sets: Vec<VertexSet> = Simplex::full(m).subsets().collect();
    sets.sort_by_key(|s| lex_weight(*s, m));
    let mut generators = Vec::new();
    for set in sets {
        for &f in k.faces() {
            if f.is_subset_of(set) {
                generators.push(TsKey::new(set, f));
            }
        }
    }
    let index = generators.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    CkComplex {
        k: k.clone(),
        generators,
        index,
    }
}

impl CkComplex {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.k
    }

    pub fn generators(&self) -> &[TsKey] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, key: TsKey) -> Option<usize> {
        self.index.get(&key).copied()
    }

    pub fn differential(&self, key: TsKey) -> Vec<(TsKey, i64)> {
        differential_of(&self.k, key)
    }

    /// Whole differential as a sparse matrix on the generator list.
    pub fn differential_matrix(&self) -> SparseMatrix {
        let mut trip = Vec::new();
        for (c, &g) in self.generators.iter().enumerate() {
            for (t, s) in self.differential(g) {
                trip.push((self.index[&t], c, s));
            }
        }
        SparseMatrix::from_triplets(self.len(), self.len(), &trip)
    }

    pub fn blocks(&self) -> Vec<CkBlock> {
        let m = self.k.m();
        let mut sets: Vec<VertexSet> = Simplex::full(m).subsets().collect();
        sets.sort_by_key(|s| lex_weight(*s, m));
        sets.into_iter().map(|s| CkBlock::new(&self.k, s)).collect()
    }
}

/// Cohomology of `C_K` in one degree.
#[derive(Clone, Debug, Serialize)]
pub struct CkGroup {
    pub degree: i64,
    pub rank: usize,
    pub torsion: Vec<i64>,
    /// Free classes first, then torsion classes; integral coefficients only.
    #[serde(serialize_with = "ser_cochains")]
    pub representatives: Vec<Cochain>,
}

fn ser_cochains<S: serde::Serializer>(v: &[Cochain], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&format_cochain(c))?;
    }
    seq.end()
}

#[derive(Clone, Debug)]
struct BlockBasis {
    set: VertexSet,
    gens_by_degree: Vec<Vec<Simplex>>,
    bases: Vec<CohomologyBasis>,
}

/// Cohomology of `C_K`, with the data needed to take class coordinates.
#[derive(Clone, Debug)]
pub struct CkCohomology {
    pub coefficients: Coefficients,
    pub groups: Vec<CkGroup>,
    bases: Vec<BlockBasis>,
}

impl CkCohomology {
    pub fn group(&self, degree: i64) -> Option<&CkGroup> {
        self.groups.iter().find(|g| g.degree == degree)
    }

    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.rank).collect()
    }

    /// Coordinates of the class of a homogeneous integral cocycle, in the
    /// order of `representatives` (torsion coordinates reduced).
    pub fn class_coordinates(&self, degree: i64, c: &Cochain) -> Result<Vec<i64>, LinalgError> {
        let mut free = Vec::new();
        let mut tors = Vec::new();
        for b in &self.bases {
            let Some(basis) = b.bases.get(degree as usize) else {
                continue;
            };
            let set = &b.set;
            let deg_gens = &b.gens_by_degree[degree as usize];
            let mut v = vec![0i64; deg_gens.len()];
            for (i, g) in deg_gens.iter().enumerate() {
                if let Some(&x) = c.get(&TsKey::new(*set, *g)) {
                    v[i] = x;
                }
            }
            let coords = basis.coordinates(&v)?;
            free.extend_from_slice(&coords[..basis.rank()]);
            tors.extend_from_slice(&coords[basis.rank()..]);
        }
        if c.iter().any(|(k, &v)| v != 0 && k.degree() as i64 != degree) {
            return Err(LinalgError::NotACocycle);
        }
        free.extend(tors);
        Ok(free)
    }
}

/// Cohomology of `C_K`, computed block by block.
pub fn ck_cohomology(ck: &CkComplex, coeffs: Coefficients) -> Result<CkCohomology, LinalgError> {
    let blocks = ck.blocks();
    let top = blocks.iter().map(|b| b.max_degree()).max().unwrap_or(0);
    let mut groups: Vec<CkGroup> = (0..=top)
        .map(|d| CkGroup {
            degree: d as i64,
            rank: 0,
            torsion: Vec::new(),
            representatives: Vec::new(),
        })
        .collect();
    let mut bases = Vec::new();
    match coeffs {
        Coefficients::Integers => {
            let computed: Vec<Vec<CohomologyBasis>> = {
                use rayon::prelude::*;
                blocks
                    .par_iter()
                    .map(|b| b.integral_cohomology())
                    .collect::<Result<_, _>>()?
            };
            let mut torsion_reps: Vec<Vec<Cochain>> = vec![Vec::new(); top + 1];
            for (b, cb) in blocks.iter().zip(computed) {
                for (deg, basis) in cb.iter().enumerate() {
                    let gens = &b.gens_by_degree[deg];
                    let to_cochain = |v: &[i64]| -> Cochain {
                        let mut c = Cochain::new();
                        for (i, &x) in v.iter().enumerate() {
                            add_term(&mut c, TsKey::new(b.set, gens[i]), x);
                        }
                        c
                    };
                    let g = &mut groups[deg];
                    g.rank += basis.rank();
                    for v in &basis.free {
                        g.representatives.push(to_cochain(v));
                    }
                    for (order, v) in &basis.torsion {
                        g.torsion.push(*order);
                        torsion_reps[deg].push(to_cochain(v));
                    }
                }
                bases.push(BlockBasis {
                    set: b.set,
                    gens_by_degree: b.gens_by_degree.clone(),
                    bases: cb,
                });
            }
            for (g, t) in groups.iter_mut().zip(torsion_reps) {
                g.representatives.extend(t);
                g.torsion.sort_unstable();
            }
        }
        _ => {
            for b in &blocks {
                for (deg, r) in b.field_betti(coeffs)?.into_iter().enumerate() {
                    groups[deg].rank += r;
                }
            }
        }
    }
    Ok(CkCohomology {
        coefficients: coeffs,
        groups,
        bases,
    })
}

/// `Σ_{n ≥ -1} (-1)^{n+1} t_n 2^{m-n-1}`, where `t_n` counts `n`-faces.
pub fn euler_characteristic(k: &SimplicialComplex) -> i128 {
    let m = k.m() as i64;
    k.f_vector()
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let n = i as i64 - 1;
            let sign: i128 = if (n + 1) % 2 == 0 { 1 } else { -1 };
            sign * t as i128 * (1i128 << (m - n - 1))
        })
        .sum()
}

/// Genus of the real moment-angle surface over an `n`-gon.
pub fn genus_ngon(n: usize) -> Result<i128, RealmacError> {
    if n < 3 {
        return Err(RealmacError::TooFewSides(n));
    }
    // 1 + (n - 4) 2^{n-3}, written to stay integral at n = 3.
    let p = 1i128 << (n - 3);
    Ok(1 + (n as i128 - 4) * p)
}

/// Genus of the surface over `k`, which must be a polygon.
pub fn genus(k: &SimplicialComplex) -> Result<i128, RealmacError> {
    let n = k.polygon_sides()?;
    genus_ngon(n)
}

/// Product table of cohomology classes of degrees `p` and `q`: entry
/// `[i][j]` holds the coordinates of `x_i · y_j` in degree `p + q`.
pub fn cup_product_table(
    ck: &CkComplex,
    h: &CkCohomology,
    p: i64,
    q: i64,
) -> Result<Vec<Vec<Vec<i64>>>, LinalgError> {
    let (Some(gp), Some(gq)) = (h.group(p), h.group(q)) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for x in &gp.representatives {
        let mut row = Vec::new();
        for y in &gq.representatives {
            let prod = cai_product(ck.complex(), x, y);
            if h.group(p + q).is_none() {
                row.push(Vec::new());
            } else {
                row.push(h.class_coordinates(p + q, &prod)?);
            }
        }
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_points() -> SimplicialComplex {
        SimplicialComplex::from_facets(2, &[vec![1], vec![2]]).unwrap()
    }

    fn key(m: usize, word: &str) -> TsKey {
        assert_eq!(word.len(), m);
        let mut set = Simplex::EMPTY;
        let mut sigma = Simplex::EMPTY;
        for (i, ch) in word.chars().enumerate() {
            match ch {
                't' => set = set.with(i + 1),
                's' => {
                    set = set.with(i + 1);
                    sigma = sigma.with(i + 1)
                }
                _ => {}
            }
        }
        TsKey::new(set, sigma)
    }

    #[test]
    fn two_points_generators_and_differential() {
        let k = two_points();
        let ck = build_ck(&k);
        assert_eq!(ck.len(), 8);
        let d = ck.differential(key(2, "tt"));
        assert_eq!(d, vec![(key(2, "st"), 1), (key(2, "ts"), 1)]);
        assert!(ck.differential(key(2, "st")).is_empty());
        let edge = SimplicialComplex::simplex(2);
        assert_eq!(differential_of(&edge, key(2, "st")), vec![(key(2, "ss"), -1)]);
    }

    #[test]
    fn small_cohomology() {
        let h = ck_cohomology(&build_ck(&two_points()), Coefficients::Integers).unwrap();
        assert_eq!(h.betti(), vec![1, 1]);
        let h = ck_cohomology(&build_ck(&SimplicialComplex::polygon(5)), Coefficients::Integers)
            .unwrap();
        assert_eq!(h.betti(), vec![1, 10, 1]);
        let h = ck_cohomology(&build_ck(&SimplicialComplex::simplex(3)), Coefficients::Integers)
            .unwrap();
        assert_eq!(h.betti(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_characteristic(&SimplicialComplex::polygon(5)), -8);
        assert_eq!(euler_characteristic(&SimplicialComplex::polygon(4)), 0);
        let three = SimplicialComplex::from_facets(3, &[vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(euler_characteristic(&three), -4);
    }

    #[test]
    fn genus_values() {
        assert_eq!(genus_ngon(3).unwrap(), 0);
        assert_eq!(genus_ngon(4).unwrap(), 1);
        assert_eq!(genus_ngon(5).unwrap(), 5);
        assert_eq!(genus_ngon(6).unwrap(), 17);
        assert!(genus(&SimplicialComplex::simplex(3)).is_err());
    }

    #[test]
    fn product_rules() {
        let k = SimplicialComplex::simplex(2);
        assert_eq!(cai_product_keys(&k, key(2, "t1"), key(2, "t1")), Some((key(2, "t1"), 1)));
        assert_eq!(cai_product_keys(&k, key(2, "t1"), key(2, "1t")), Some((key(2, "tt"), 1)));
        assert_eq!(cai_product_keys(&k, key(2, "s1"), key(2, "t1")), Some((key(2, "s1"), 1)));
        assert_eq!(cai_product_keys(&k, key(2, "s1"), key(2, "tt")), Some((key(2, "st"), 1)));
        assert_eq!(cai_product_keys(&k, key(2, "t1"), key(2, "s1")), None);
        assert_eq!(cai_product_keys(&k, key(2, "1s"), key(2, "s1")), Some((key(2, "ss"), -1)));
        assert_eq!(cai_product_keys(&k, key(2, "s1"), key(2, "1s")), Some((key(2, "ss"), 1)));
        let pts = two_points();
        assert_eq!(cai_product_keys(&pts, key(2, "s1"), key(2, "1s")), None);
    }

    #[test]
    fn coordinates_of_representatives() {
        let k = SimplicialComplex::polygon(5);
        let ck = build_ck(&k);
        let h = ck_cohomology(&ck, Coefficients::Integers).unwrap();
        let g = h.group(1).unwrap();
        for (i, r) in g.representatives.iter().enumerate() {
            let c = h.class_coordinates(1, r).unwrap();
            let expected: Vec<i64> = (0..g.representatives.len()).map(|j| (i == j) as i64).collect();
            assert_eq!(c, expected);
        }
    }

    #[test]
    fn display() {
        assert_eq!(key(3, "st1").to_string(), "s1t2");
        assert_eq!(key(2, "11").to_string(), "1");
        let mut c = Cochain::new();
        c.insert(key(2, "st"), 1);
        c.insert(key(2, "ts"), -2);
        assert_eq!(format_cochain(&c), "s1t2 - 2·t1s2");
    }
}
