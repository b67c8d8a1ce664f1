//! Spectral sequence of a small finite filtered cochain complex.
//!
//! The filtration is decreasing, `F^s` spanned by basis elements of weight
//! at least `s`, and the differential strictly raises the weight. For page
//! `r` and filtration `s`,
//!
//! ```text
//! Z_r^s = { x ∈ F^s : dx ∈ F^{s+r} }
//! E_r^s = π_s(Z_r^s) / π_s(d F^{s-r+1} ∩ F^s)
//! ```
//!
//! where `π_s` takes the weight-`s` component. A class survives to page `r`
//! exactly when some lift has all components of its coboundary in weight at
//! least `s + r`; `d_r` is the weight-`(s + r)` component of that
//! coboundary. Each page is computed directly and compared with the
//! homology of the previous one.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::graded_algebra::field::{kernel, Echelon, FVec, Field};

use super::SpectralError;

/// A filtered complex with dense differential `d[i][j]` = coefficient of
/// element `i` in `d(element j)`.
#[derive(Clone, Debug)]
pub struct FilteredBlock<F: Field> {
    pub filt: Vec<u64>,
    pub deg: Vec<i64>,
    pub d: Vec<FVec<F>>,
    /// Weight gaps that a differential can cross.
    gaps: BTreeSet<u64>,
}

#[derive(Clone, Debug)]
pub struct ClassRep<F: Field> {
    pub filtration: u64,
    pub degree: i64,
    /// Weight-`filtration` component, as a vector over the block basis.
    pub rep: FVec<F>,
    /// An element of `Z_r` projecting to `rep`.
    pub lift: FVec<F>,
}

/// One page of one block, with its differential.
#[derive(Clone, Debug)]
pub struct BlockPage<F: Field> {
    /// Page number; `None` for the directly computed `E_∞`.
    pub r: Option<usize>,
    pub classes: Vec<ClassRep<F>>,
    /// Nonzero entries `(source, target, coefficient)` of `d_r`.
    pub differential: Vec<(usize, usize, F::Elem)>,
    boundaries: HashMap<(u64, i64), Vec<FVec<F>>>,
}

impl<F: Field> BlockPage<F> {
    /// Class counts per `(filtration, degree)`.
    pub fn dims(&self) -> BTreeMap<(u64, i64), usize> {
        let mut out = BTreeMap::new();
        for c in &self.classes {
            *out.entry((c.filtration, c.degree)).or_insert(0) += 1;
        }
        out
    }
}

impl<F: Field> FilteredBlock<F> {
    pub fn new(f: &F, filt: Vec<u64>, deg: Vec<i64>, d: Vec<FVec<F>>) -> Result<Self, SpectralError> {
        let n = filt.len();
        if deg.len() != n || d.len() != n || d.iter().any(|row| row.len() != n) {
            return Err(SpectralError::Internal("block shapes disagree".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if !f.is_zero(&d[i][j]) && (filt[i] <= filt[j] || deg[i] != deg[j] + 1) {
                    return Err(SpectralError::NotFiltered { from: j, to: i });
                }
            }
        }
        let mut gaps = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                if deg[i] == deg[j] + 1 && filt[i] > filt[j] {
                    gaps.insert(filt[i] - filt[j]);
                }
            }
        }
        Ok(FilteredBlock { filt, deg, d, gaps })
    }

    pub fn len(&self) -> usize {
        self.filt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filt.is_empty()
    }

    /// Largest weight gap a differential could cross; pages beyond it are stable.
    pub fn max_gap(&self) -> u64 {
        self.gaps.iter().next_back().copied().unwrap_or(0)
    }

    fn apply(&self, f: &F, x: &[F::Elem]) -> FVec<F> {
        let n = self.len();
        let mut out = vec![f.zero(); n];
        for (j, xj) in x.iter().enumerate() {
            if f.is_zero(xj) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = &self.d[i][j];
                if !f.is_zero(a) {
                    *o = f.add(o, &f.mul(a, xj));
                }
            }
        }
        out
    }

    fn project(&self, f: &F, x: &[F::Elem], s: u64, t: i64) -> FVec<F> {
        x.iter()
            .enumerate()
            .map(|(i, v)| {
                if self.filt[i] == s && self.deg[i] == t {
                    v.clone()
                } else {
                    f.zero()
                }
            })
            .collect()
    }

    /// Kernel of the rows `rows` of `d` restricted to columns `cols`, as full vectors.
    fn restricted_kernel(&self, f: &F, rows: &[usize], cols: &[usize]) -> Vec<FVec<F>> {
        let mat: Vec<FVec<F>> = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.d[i][j].clone()).collect())
            .collect();
        kernel(f, &mat, cols.len())
            .into_iter()
            .map(|k| {
                let mut v = vec![f.zero(); self.len()];
                for (a, &j) in cols.iter().enumerate() {
                    v[j] = k[a].clone();
                }
                v
            })
            .collect()
    }

    /// Boundaries and classes of `E_r^{s,t}` (`r = None` for `E_∞`).
    fn bigraded(&self, f: &F, r: Option<usize>, s: u64, t: i64) -> (Vec<FVec<F>>, Vec<ClassRep<F>>) {
        let n = self.len();
        let reach = |lo: u64, hi: u64| r.is_none_or(|r| hi < lo + r as u64);
        // Z_r^s in degree t.
        let cols: Vec<usize> = (0..n).filter(|&j| self.filt[j] >= s && self.deg[j] == t).collect();
        let rows: Vec<usize> = (0..n)
            .filter(|&i| self.deg[i] == t + 1 && self.filt[i] > s && reach(s, self.filt[i]))
            .collect();
        let cycles = self.restricted_kernel(f, &rows, &cols);
        // d(F^{s-r+1}) ∩ F^s in degree t, projected to weight s.
        let ycols: Vec<usize> = (0..n)
            .filter(|&j| self.deg[j] == t - 1 && self.filt[j] < s && reach(self.filt[j], s))
            .collect();
        let yrows: Vec<usize> = (0..n).filter(|&i| self.deg[i] == t && self.filt[i] < s).collect();
        let ys = self.restricted_kernel(f, &yrows, &ycols);
        let mut ech = Echelon::<F>::new(n);
        let mut bounds = Vec::new();
        for y in ys {
            let b = self.project(f, &self.apply(f, &y), s, t);
            if ech.insert(f, &b) {
                bounds.push(b);
            }
        }
        let mut classes = Vec::new();
        for z in cycles {
            let p = self.project(f, &z, s, t);
            if ech.insert(f, &p) {
                classes.push(ClassRep {
                    filtration: s,
                    degree: t,
                    rep: p,
                    lift: z,
                });
            }
        }
        (bounds, classes)
    }

    fn bigrades(&self) -> BTreeSet<(u64, i64)> {
        self.filt.iter().copied().zip(self.deg.iter().copied()).collect()
    }

    /// Page `r` (or `E_∞` for `None`) computed from scratch, with `d_r`.
    pub fn page(&self, f: &F, r: Option<usize>) -> Result<BlockPage<F>, SpectralError> {
        let mut classes = Vec::new();
        let mut boundaries = HashMap::new();
        for (s, t) in self.bigrades() {
            let (b, c) = self.bigraded(f, r, s, t);
            boundaries.insert((s, t), b);
            classes.extend(c);
        }
        let mut page = BlockPage {
            r,
            classes,
            differential: Vec::new(),
            boundaries,
        };
        if let Some(r) = r {
            page.differential = self.differential(f, &page, r)?;
        }
        Ok(page)
    }

    /// Entries of `d_r` on a page.
    fn differential(
        &self,
        f: &F,
        page: &BlockPage<F>,
        r: usize,
    ) -> Result<Vec<(usize, usize, F::Elem)>, SpectralError> {
        if !self.gaps.contains(&(r as u64)) {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for (src, x) in page.classes.iter().enumerate() {
            let ts = x.filtration + r as u64;
            let tt = x.degree + 1;
            let v = self.project(f, &self.apply(f, &x.lift), ts, tt);
            if v.iter().all(|a| f.is_zero(a)) {
                continue;
            }
            let targets: Vec<usize> = (0..page.classes.len())
                .filter(|&j| page.classes[j].filtration == ts && page.classes[j].degree == tt)
                .collect();
            let bounds = page.boundaries.get(&(ts, tt)).cloned().unwrap_or_default();
            let coeffs = express(f, &bounds, targets.iter().map(|&j| &page.classes[j].rep), &v)
                .ok_or_else(|| {
                    SpectralError::Internal(format!(
                        "d_{r} of a class at weight {} leaves the cycles of weight {ts}",
                        x.filtration
                    ))
                })?;
            for (a, c) in targets.iter().zip(coeffs) {
                if !f.is_zero(&c) {
                    out.push((src, *a, c));
                }
            }
        }
        Ok(out)
    }

    /// The next page, checked against the homology of `(E_r, d_r)`.
    pub fn turn_page(&self, f: &F, page: &BlockPage<F>) -> Result<BlockPage<F>, SpectralError> {
        let r = page.r.ok_or_else(|| SpectralError::Internal("cannot turn E_inf".into()))?;
        let next = if self.gaps.contains(&(r as u64)) {
            self.page(f, Some(r + 1))?
        } else {
            // No differential crosses a gap of r, so Z and B are unchanged.
            let mut p = page.clone();
            p.r = Some(r + 1);
            p.differential = self.differential(f, &p, r + 1)?;
            p
        };
        check_homology(f, page, &next)?;
        Ok(next)
    }

    /// All pages from `E_1` until no differential can act, ending with the
    /// stable page, which is compared with a direct `E_∞` computation.
    pub fn run(&self, f: &F, last: usize) -> Result<Vec<BlockPage<F>>, SpectralError> {
        let mut pages = vec![self.page(f, Some(1))?];
        for _ in 1..last {
            let next = self.turn_page(f, pages.last().expect("nonempty"))?;
            pages.push(next);
        }
        let stable = pages.last().expect("nonempty");
        if (stable.r.unwrap_or(0) as u64) > self.max_gap() {
            let direct = self.page(f, None)?;
            if direct.dims() != stable.dims() {
                return Err(SpectralError::Inconsistent(format!(
                    "stable page {:?} differs from E_inf {:?}",
                    stable.dims(),
                    direct.dims()
                )));
            }
        }
        Ok(pages)
    }
}

/// Solves `v = Σ b_i + Σ c_j rep_j` for the `c_j`, with `b` in the span of `bounds`.
fn express<'a, F: Field>(
    f: &F,
    bounds: &[FVec<F>],
    reps: impl Iterator<Item = &'a FVec<F>>,
    v: &[F::Elem],
) -> Option<Vec<F::Elem>>
where
    F::Elem: 'a,
{
    let reps: Vec<&FVec<F>> = reps.collect();
    let cols: Vec<&FVec<F>> = bounds.iter().chain(reps.iter().copied()).collect();
    let n = v.len();
    let k = cols.len();
    let rows: Vec<FVec<F>> = (0..n)
        .map(|i| {
            let mut row: FVec<F> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let ker = kernel(f, &rows, k + 1);
    let sol = ker.into_iter().find(|x| !f.is_zero(&x[k]))?;
    let scale = f.neg(&f.inv(&sol[k]));
    Some(sol[bounds.len()..k].iter().map(|x| f.mul(x, &scale)).collect())
}

fn check_homology<F: Field>(f: &F, page: &BlockPage<F>, next: &BlockPage<F>) -> Result<(), SpectralError> {
    let n = page.classes.len();
    let mut mat: Vec<FVec<F>> = vec![vec![f.zero(); n]; n];
    for (src, dst, c) in &page.differential {
        mat[*dst][*src] = c.clone();
    }
    // d_r ∘ d_r = 0
    for src in 0..n {
        for dst in 0..n {
            let mut acc = f.zero();
            for mid in 0..n {
                if !f.is_zero(&mat[mid][src]) && !f.is_zero(&mat[dst][mid]) {
                    acc = f.add(&acc, &f.mul(&mat[dst][mid], &mat[mid][src]));
                }
            }
            if !f.is_zero(&acc) {
                return Err(SpectralError::Inconsistent(format!(
                    "d_{} ∘ d_{} is nonzero",
                    page.r.unwrap_or(0),
                    page.r.unwrap_or(0)
                )));
            }
        }
    }
    let expected = homology_dims(f, page, &mat);
    let got = next.dims();
    let nonzero = |m: &BTreeMap<(u64, i64), usize>| -> BTreeMap<(u64, i64), usize> {
        m.iter().filter(|e| *e.1 > 0).map(|(k, v)| (*k, *v)).collect()
    };
    if nonzero(&expected) != nonzero(&got) {
        return Err(SpectralError::Inconsistent(format!(
            "page {:?} has dims {:?}, homology of the previous page gives {:?}",
            next.r, got, expected
        )));
    }
    Ok(())
}

fn homology_dims<F: Field>(f: &F, page: &BlockPage<F>, mat: &[FVec<F>]) -> BTreeMap<(u64, i64), usize> {
    let mut out = page.dims();
    let keys: Vec<(u64, i64)> = out.keys().copied().collect();
    for key in keys {
        let idx: Vec<usize> = (0..page.classes.len())
            .filter(|&i| (page.classes[i].filtration, page.classes[i].degree) == key)
            .collect();
        // rank of d_r leaving this bigrade and arriving into it
        let all: Vec<usize> = (0..page.classes.len()).collect();
        let leaving: Vec<FVec<F>> = all
            .iter()
            .map(|&dst| idx.iter().map(|&src| mat[dst][src].clone()).collect())
            .collect();
        let arriving: Vec<FVec<F>> = idx
            .iter()
            .map(|&dst| all.iter().map(|&src| mat[dst][src].clone()).collect())
            .collect();
        let r_out = crate::graded_algebra::field::rank(f, &leaving);
        let r_in = crate::graded_algebra::field::rank(f, &arriving);
        let e = out.get_mut(&key).expect("present");
        *e = *e - r_out - r_in;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::Rationals;

    fn q(x: i64) -> num_rational::BigRational {
        Rationals.from_i64(x)
    }

    /// a -> b + c with weights 0, 1, 2: d_1 kills a and b, c survives.
    #[test]
    fn three_element_block() {
        let f = Rationals;
        let d = vec![
            vec![q(0), q(0), q(0)],
            vec![q(1), q(0), q(0)],
            vec![q(1), q(0), q(0)],
        ];
        let b = FilteredBlock::new(&f, vec![0, 1, 2], vec![0, 1, 1], d).unwrap();
        let pages = b.run(&f, 4).unwrap();
        assert_eq!(pages[0].classes.len(), 3);
        assert_eq!(pages[0].differential.len(), 1);
        assert_eq!(pages[1].classes.len(), 1);
        assert_eq!(pages[1].classes[0].filtration, 2);
        assert_eq!(pages[3].classes.len(), 1);
    }

    /// a -> c only, weights 0, 1, 2: b survives, d_2 kills a and c.
    #[test]
    fn longer_differential() {
        let f = Rationals;
        let d = vec![
            vec![q(0), q(0), q(0)],
            vec![q(0), q(0), q(0)],
            vec![q(1), q(0), q(0)],
        ];
        let b = FilteredBlock::new(&f, vec![0, 1, 2], vec![0, 1, 1], d).unwrap();
        let pages = b.run(&f, 4).unwrap();
        assert_eq!(pages[0].differential.len(), 0);
        assert_eq!(pages[1].differential.len(), 1);
        assert_eq!(pages[2].classes.len(), 1);
        assert_eq!(pages[2].classes[0].filtration, 1);
    }

    #[test]
    fn rejects_non_increasing_differential() {
        let f = Rationals;
        let d = vec![vec![q(0), q(1)], vec![q(0), q(0)]];
        assert!(FilteredBlock::new(&f, vec![0, 1], vec![1, 0], d).is_err());
    }
}
