//! Exact field arithmetic and dense linear algebra over a field.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::SparseMatrix;

/// A field with a runtime context (so that the prime of `F_p` can be chosen at run time).
pub trait Field: Clone + Send + Sync + Debug {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.to_integer().to_string()
        } else if a.is_negative() {
            format!("-{}/{}", a.numer().abs(), a.denom())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Returns `None` unless `p` is a prime below 2^31.
    pub fn new(p: u64) -> Option<PrimeField> {
        if !(2..1 << 31).contains(&p) {
            return None;
        }
        let mut d = 2;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return None;
            }
            d += 1;
        }
        Some(PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * a % self.p;
            }
            a = a * a % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Dense vectors and matrices over a field are plain nested vectors.
pub type FVec<F> = Vec<<F as Field>::Elem>;

/// An echelon basis of a subspace, kept reduced so that membership tests and
/// coordinates are cheap.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    dim: usize,
    /// Reduced rows with a leading 1 at `pivots[i]`.
    rows: Vec<FVec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the basis; returns the remainder.
    pub fn reduce(&self, f: &F, v: &[F::Elem]) -> FVec<F> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&v[p]) {
                let c = v[p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !f.is_zero(r) {
                        *x = f.sub(x, &f.mul(&c, r));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, f: &F, v: &[F::Elem]) -> bool {
        self.reduce(f, v).iter().all(|x| f.is_zero(x))
    }

    /// Adds `v` if independent; returns whether the rank grew.
    pub fn insert(&mut self, f: &F, v: &[F::Elem]) -> bool {
        let mut r = self.reduce(f, v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]);
        for x in r.iter_mut() {
            *x = f.mul(x, &inv);
        }
        // Keep existing rows reduced at the new pivot.
        for row in self.rows.iter_mut() {
            if !f.is_zero(&row[p]) {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    if !f.is_zero(y) {
                        *x = f.sub(x, &f.mul(&c, y));
                    }
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}

/// Rank of a dense matrix given as a list of rows.
pub fn rank<F: Field>(f: &F, rows: &[FVec<F>]) -> usize {
    let dim = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut e = Echelon::<F>::new(dim);
    for r in rows {
        e.insert(f, r);
    }
    e.rank()
}

/// Basis of `{x : A x = 0}` where `A` is given by rows over `ncols` unknowns.
pub fn kernel<F: Field>(f: &F, rows: &[FVec<F>], ncols: usize) -> Vec<FVec<F>> {
    // Reduced row echelon form, then read off free variables.
    let mut e = Echelon::<F>::new(ncols);
    for r in rows {
        e.insert(f, r);
    }
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; ncols];
        for &p in &e.pivots {
            s[p] = true;
        }
        s
    };
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            if !f.is_zero(&row[free]) {
                v[p] = f.neg(&row[free]);
            }
        }
        out.push(v);
    }
    out
}

/// Rank of a sparse integer matrix over the given field.
pub fn sparse_rank<F: Field>(f: &F, m: &SparseMatrix) -> usize {
    // Column-by-column insertion into a sparse echelon keyed by pivot row.
    use std::collections::BTreeMap;
    let mut basis: BTreeMap<usize, BTreeMap<usize, F::Elem>> = BTreeMap::new();
    for c in 0..m.cols() {
        let mut v: BTreeMap<usize, F::Elem> = m
            .column(c)
            .iter()
            .map(|&(r, x)| (r, f.from_i64(x)))
            .filter(|(_, x)| !f.is_zero(x))
            .collect();
        while let Some((&lead, lv)) = v.iter().next() {
            let lv = lv.clone();
            match basis.get(&lead) {
                Some(b) => {
                    // b has leading coefficient 1 at `lead`.
                    for (&r, x) in b {
                        let cur = v.get(&r).cloned().unwrap_or_else(|| f.zero());
                        let nv = f.sub(&cur, &f.mul(&lv, x));
                        if f.is_zero(&nv) {
                            v.remove(&r);
                        } else {
                            v.insert(r, nv);
                        }
                    }
                }
                None => {
                    let inv = f.inv(&lv);
                    for x in v.values_mut() {
                        *x = f.mul(x, &inv);
                    }
                    basis.insert(lead, v);
                    break;
                }
            }
        }
    }
    basis.len()
}

/// Integer view of a rational, when it is one.
pub fn rational_to_i64(q: &BigRational) -> Option<i64> {
    if !q.is_integer() {
        return None;
    }
    i64::try_from(q.to_integer()).ok()
}
