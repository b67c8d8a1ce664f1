//! Smith normal form over the integers.

use std::collections::{BTreeMap, BTreeSet};

use super::matrix::{IntegerMatrix, SparseMatrix};
use super::LinalgError;

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal with
/// `d[0] | d[1] | ...`, all diagonal entries nonnegative.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v: IntegerMatrix,
    pub v_inv: IntegerMatrix,
    pub d: IntegerMatrix,
    /// Nonzero diagonal entries, in order.
    pub divisors: Vec<i64>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Divisors greater than one.
    pub fn torsion(&self) -> Vec<i64> {
        self.divisors.iter().copied().filter(|&x| x > 1).collect()
    }
}

struct Tracker {
    a: IntegerMatrix,
    u: IntegerMatrix,
    u_inv: IntegerMatrix,
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

impl Tracker {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// `row[dst] += k * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: i64) -> Result<(), LinalgError> {
        self.a.add_row(dst, src, k)?;
        self.u.add_row(dst, src, k)?;
        self.u_inv.add_col(src, dst, k.checked_neg().ok_or(LinalgError::Overflow)?)
    }

    /// `col[dst] += k * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, k: i64) -> Result<(), LinalgError> {
        self.a.add_col(dst, src, k)?;
        self.v.add_col(dst, src, k)?;
        self.v_inv.add_row(src, dst, k.checked_neg().ok_or(LinalgError::Overflow)?)
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Computes the Smith normal form together with the change-of-basis matrices.
pub fn smith_normal_form(a: &IntegerMatrix) -> Result<SmithForm, LinalgError> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut t = Tracker {
        a: a.clone(),
        u: IntegerMatrix::identity(rows),
        u_inv: IntegerMatrix::identity(rows),
        v: IntegerMatrix::identity(cols),
        v_inv: IntegerMatrix::identity(cols),
    };
    let n = rows.min(cols);
    let mut divisors = Vec::new();
    for p in 0..n {
        // Pivot: smallest nonzero absolute value in the trailing block.
        let Some((pr, pc)) = min_entry(&t.a, p) else {
            break;
        };
        t.swap_rows(p, pr);
        t.swap_cols(p, pc);
        loop {
            let mut dirty = false;
            for r in p + 1..rows {
                let x = t.a.get(r, p);
                if x != 0 {
                    let q = x.div_euclid(t.a.get(p, p));
                    t.add_row(r, p, -q)?;
                    if t.a.get(r, p) != 0 {
                        dirty = true;
                    }
                }
            }
            for c in p + 1..cols {
                let x = t.a.get(p, c);
                if x != 0 {
                    let q = x.div_euclid(t.a.get(p, p));
                    t.add_col(c, p, -q)?;
                    if t.a.get(p, c) != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                let (pr, pc) = min_entry_cross(&t.a, p);
                t.swap_rows(p, pr);
                t.swap_cols(p, pc);
                continue;
            }
            // Row and column are clear; enforce divisibility of the block.
            let piv = t.a.get(p, p);
            let bad = (p + 1..rows)
                .find(|&r| (p + 1..cols).any(|c| t.a.get(r, c) % piv != 0));
            match bad {
                Some(r) => {
                    t.add_row(p, r, 1)?;
                }
                None => break,
            }
        }
        if t.a.get(p, p) < 0 {
            t.negate_row(p);
        }
        divisors.push(t.a.get(p, p));
    }
    Ok(SmithForm {
        u: t.u,
        u_inv: t.u_inv,
        v: t.v,
        v_inv: t.v_inv,
        d: t.a,
        divisors,
    })
}

fn min_entry(a: &IntegerMatrix, p: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i64)> = None;
    for r in p..a.rows() {
        for c in p..a.cols() {
            let x = a.get(r, c).unsigned_abs() as i64;
            if x != 0 && best.map(|b| x < b.2).unwrap_or(true) {
                best = Some((r, c, x));
                if x == 1 {
                    return Some((r, c));
                }
            }
        }
    }
    best.map(|b| (b.0, b.1))
}

fn min_entry_cross(a: &IntegerMatrix, p: usize) -> (usize, usize) {
    let mut best = (p, p, a.get(p, p).unsigned_abs());
    for r in p + 1..a.rows() {
        let x = a.get(r, p).unsigned_abs();
        if x != 0 && x < best.2 {
            best = (r, p, x);
        }
    }
    for c in p + 1..a.cols() {
        let x = a.get(p, c).unsigned_abs();
        if x != 0 && x < best.2 {
            best = (p, c, x);
        }
    }
    (best.0, best.1)
}

/// Nonzero elementary divisors of a sparse matrix, in divisibility order.
///
/// Unit pivots are eliminated sparsely first; whatever remains goes through
/// the dense algorithm.
pub fn elementary_divisors(m: &SparseMatrix) -> Result<Vec<i64>, LinalgError> {
    let mut rows: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); m.rows()];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols()];
    for c in 0..m.cols() {
        for &(r, v) in m.column(c) {
            rows[r].insert(c, v);
            col_rows[c].insert(r);
        }
    }
    let mut alive: BTreeSet<usize> = (0..m.rows()).filter(|&r| !rows[r].is_empty()).collect();
    let mut units = 0usize;
    loop {
        // Shortest row that has a unit entry; ties go to the sparsest column.
        let mut choice: Option<(usize, usize, usize)> = None;
        for &r in &alive {
            let len = rows[r].len();
            if choice.map(|c| len >= c.2).unwrap_or(false) {
                continue;
            }
            let col = rows[r]
                .iter()
                .filter(|e| e.1.abs() == 1)
                .min_by_key(|e| col_rows[*e.0].len())
                .map(|e| *e.0);
            if let Some(c) = col {
                choice = Some((r, c, len));
                if len == 1 {
                    break;
                }
            }
        }
        let Some((pr, pc, _)) = choice else { break };
        let prow = std::mem::take(&mut rows[pr]);
        alive.remove(&pr);
        let pv = prow[&pc];
        for &c in prow.keys() {
            col_rows[c].remove(&pr);
        }
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in targets {
            let f = rows[r][&pc] * pv; // pv = ±1, so the quotient is exact
            for (&c, &v) in &prow {
                let e = rows[r].entry(c).or_insert(0);
                *e = v
                    .checked_mul(f)
                    .and_then(|p| e.checked_sub(p))
                    .ok_or(LinalgError::Overflow)?;
                if *e == 0 {
                    rows[r].remove(&c);
                    col_rows[c].remove(&r);
                } else {
                    col_rows[c].insert(r);
                }
            }
            if rows[r].is_empty() {
                alive.remove(&r);
            }
        }
        units += 1;
    }
    // Dense remainder.
    let rem_rows: Vec<usize> = alive.iter().copied().collect();
    let mut rem_cols: BTreeSet<usize> = BTreeSet::new();
    for &r in &rem_rows {
        rem_cols.extend(rows[r].keys().copied());
    }
    let rem_cols: Vec<usize> = rem_cols.into_iter().collect();
    let mut dense = IntegerMatrix::zeros(rem_rows.len(), rem_cols.len());
    for (i, &r) in rem_rows.iter().enumerate() {
        for (j, &c) in rem_cols.iter().enumerate() {
            if let Some(&v) = rows[r].get(&c) {
                dense.set(i, j, v);
            }
        }
    }
    let rest = if dense.rows() == 0 || dense.cols() == 0 {
        Vec::new()
    } else {
        smith_divisors_only(dense)?
    };
    let mut out = vec![1i64; units];
    out.extend(rest);
    Ok(out)
}

/// Smith divisors without tracking the change of basis.
pub fn smith_divisors_only(mut a: IntegerMatrix) -> Result<Vec<i64>, LinalgError> {
    let (rows, cols) = (a.rows(), a.cols());
    let n = rows.min(cols);
    let mut divisors = Vec::new();
    for p in 0..n {
        let Some((pr, pc)) = min_entry(&a, p) else {
            break;
        };
        a.swap_rows(p, pr);
        a.swap_cols(p, pc);
        loop {
            let mut dirty = false;
            for r in p + 1..rows {
                let x = a.get(r, p);
                if x != 0 {
                    a.add_row(r, p, -x.div_euclid(a.get(p, p)))?;
                    dirty |= a.get(r, p) != 0;
                }
            }
            for c in p + 1..cols {
                let x = a.get(p, c);
                if x != 0 {
                    a.add_col(c, p, -x.div_euclid(a.get(p, p)))?;
                    dirty |= a.get(p, c) != 0;
                }
            }
            if dirty {
                let (pr, pc) = min_entry_cross(&a, p);
                a.swap_rows(p, pr);
                a.swap_cols(p, pc);
                continue;
            }
            let piv = a.get(p, p);
            match (p + 1..rows).find(|&r| (p + 1..cols).any(|c| a.get(r, c) % piv != 0)) {
                Some(r) => a.add_row(p, r, 1)?,
                None => break,
            }
        }
        divisors.push(a.get(p, p).abs());
    }
    Ok(divisors)
}

/// Determinant of a square matrix, up to sign given by the Smith form
/// (the product of the divisors, or zero when singular).
pub fn abs_determinant(a: &IntegerMatrix) -> Result<i64, LinalgError> {
    assert_eq!(a.rows(), a.cols(), "determinant of a non-square matrix");
    let d = smith_divisors_only(a.clone())?;
    if d.len() < a.rows() {
        return Ok(0);
    }
    d.iter()
        .try_fold(1i64, |acc, &x| acc.checked_mul(x))
        .ok_or(LinalgError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntegerMatrix) -> SmithForm {
        let s = smith_normal_form(a).unwrap();
        let uav = s.u.mul(a).unwrap().mul(&s.v).unwrap();
        assert_eq!(uav, s.d);
        assert_eq!(
            s.u.mul(&s.u_inv).unwrap(),
            IntegerMatrix::identity(a.rows())
        );
        assert_eq!(
            s.v.mul(&s.v_inv).unwrap(),
            IntegerMatrix::identity(a.cols())
        );
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert_eq!(s.d.get(i, j), 0);
                }
            }
        }
        for w in s.divisors.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        s
    }

    #[test]
    fn textbook_example() {
        let a = IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = check(&a);
        assert_eq!(s.divisors, vec![2, 6, 12]);
    }

    #[test]
    fn projective_plane_boundary() {
        // Boundary of the 2-cell of RP^2 in the minimal CW structure.
        let a = IntegerMatrix::from_rows(&[vec![2]]);
        assert_eq!(check(&a).torsion(), vec![2]);
    }

    #[test]
    fn rectangular_and_zero() {
        let a = IntegerMatrix::from_rows(&[vec![0, 0, 0], vec![0, 3, 0]]);
        assert_eq!(check(&a).divisors, vec![3]);
        let z = IntegerMatrix::zeros(2, 4);
        assert_eq!(check(&z).rank(), 0);
    }

    #[test]
    fn sparse_agrees_with_dense() {
        let a = IntegerMatrix::from_rows(&[
            vec![1, -1, 0, 0],
            vec![0, 1, -1, 0],
            vec![0, 0, 2, 4],
            vec![3, 0, 0, 6],
        ]);
        let dense = check(&a).divisors;
        let sparse = elementary_divisors(&SparseMatrix::from_dense(&a)).unwrap();
        assert_eq!(dense, sparse);
    }

    #[test]
    fn determinant() {
        let a = IntegerMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(abs_determinant(&a).unwrap(), 1);
        let b = IntegerMatrix::from_rows(&[vec![2, 4], vec![1, 2]]);
        assert_eq!(abs_determinant(&b).unwrap(), 0);
    }
}
