//! Brute-force cellular cohomology of the real moment-angle complex
//! `Z(K; (D^1, S^0))`, realized as a cubical subcomplex of `[-1, 1]^m`.
//!
//! A cell picks, per coordinate, the point `-1`, the point `+1` or the whole
//! interval; the interval coordinates must form a face of `K`. This shares
//! no construction with `C_K` and serves as an independent check.

use std::collections::HashMap;

use thiserror::Error;

use crate::graded_algebra::homology::{homology_of_complex, Complex, Direction, HomologyGroup};
use crate::graded_algebra::{Coefficients, LinalgError, SparseMatrix};
use crate::realmac_chain::{build_ck, ck_cohomology};
use crate::simplicial::{Simplex, SimplicialComplex};

/// Default cap on the number of vertices; override with `POLYPROD_MAX_M`.
pub const DEFAULT_MAX_M: usize = 10;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle limited to m <= {cap} (set POLYPROD_MAX_M to raise it), got m = {m}")]
    TooLarge { m: usize, cap: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub fn max_m() -> usize {
    std::env::var("POLYPROD_MAX_M")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_M)
}

/// A cube: `interval` coordinates span `[-1, 1]`, the others sit at `+1`
/// when in `plus` and at `-1` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub interval: Simplex,
    pub plus: Simplex,
}

impl Cell {
    pub fn dim(self) -> usize {
        self.interval.len()
    }
}

/// Cellular chain complex of the cubical model, cells grouped by dimension.
#[derive(Clone, Debug)]
pub struct CubicalComplex {
    pub cells: Vec<Vec<Cell>>,
    /// `boundary[k]` maps `(k+1)`-cells to `k`-cells.
    pub boundary: Vec<SparseMatrix>,
}

impl CubicalComplex {
    pub fn num_cells(&self) -> usize {
        self.cells.iter().map(|c| c.len()).sum()
    }

    /// The dual cochain complex.
    pub fn cochain_complex(&self) -> Complex {
        Complex::new(
            0,
            self.cells.iter().map(|c| c.len()).collect(),
            self.boundary.iter().map(|b| b.transpose()).collect(),
            Direction::Cochain,
        )
        .expect("shapes are consistent by construction")
    }

    pub fn chain_complex(&self) -> Complex {
        Complex::new(
            0,
            self.cells.iter().map(|c| c.len()).collect(),
            self.boundary.clone(),
            Direction::Chain,
        )
        .expect("shapes are consistent by construction")
    }
}

/// Number of cells, `Σ_{σ ∈ K} 2^{m - |σ|}`.
pub fn cell_count(k: &SimplicialComplex) -> u128 {
    k.faces()
        .iter()
        .map(|f| 1u128 << (k.m() - f.len()))
        .sum()
}

pub fn build_cubical(k: &SimplicialComplex) -> Result<CubicalComplex, OracleError> {
    let m = k.m();
    let cap = max_m();
    if m > cap {
        return Err(OracleError::TooLarge { m, cap });
    }
    let full = Simplex::full(m);
    let top = (k.dim() + 1) as usize;
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
    for &f in k.faces() {
        for plus in full.difference(f).subsets() {
            cells[f.len()].push(Cell { interval: f, plus });
        }
    }
    let index: Vec<HashMap<Cell, usize>> = cells
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(i, &c)| (c, i)).collect())
        .collect();
    let mut boundary = Vec::with_capacity(top);
    for d in 1..=top {
        let mut trip = Vec::new();
        for (col, &c) in cells[d].iter().enumerate() {
            for j in c.interval.vertices() {
                let sign: i64 = if c.interval.count_below(j) % 2 == 0 { 1 } else { -1 };
                let face = c.interval.without(j);
                let right = Cell { interval: face, plus: c.plus.with(j) };
                let left = Cell { interval: face, plus: c.plus };
                trip.push((index[d - 1][&right], col, sign));
                trip.push((index[d - 1][&left], col, -sign));
            }
        }
        boundary.push(SparseMatrix::from_triplets(cells[d - 1].len(), cells[d].len(), &trip));
    }
    Ok(CubicalComplex { cells, boundary })
}

/// Cellular cohomology of the cubical model.
pub fn oracle_cohomology(
    k: &SimplicialComplex,
    coeffs: Coefficients,
) -> Result<Vec<HomologyGroup>, OracleError> {
    let cube = build_cubical(k)?;
    if coeffs == Coefficients::Prime(2) {
        return Ok(mod_two_cohomology(&cube));
    }
    Ok(homology_of_complex(&cube.cochain_complex(), coeffs)?)
}

/// Over `F_2` the ranks come from packed bit rows.
fn mod_two_cohomology(cube: &CubicalComplex) -> Vec<HomologyGroup> {
    let ranks: Vec<usize> = cube.boundary.iter().map(bit_rank).collect();
    (0..cube.cells.len())
        .map(|k| {
            let r_out = ranks.get(k).copied().unwrap_or(0);
            let r_in = k.checked_sub(1).map(|j| ranks[j]).unwrap_or(0);
            HomologyGroup {
                degree: k as i64,
                rank: cube.cells[k].len() - r_out - r_in,
                torsion: Vec::new(),
            }
        })
        .collect()
}

fn bit_rank(m: &SparseMatrix) -> usize {
    let words = m.rows().div_ceil(64);
    let mut pivots: HashMap<usize, Vec<u64>> = HashMap::new();
    for c in 0..m.cols() {
        let mut v = vec![0u64; words];
        for &(r, x) in m.column(c) {
            if x.rem_euclid(2) == 1 {
                v[r / 64] ^= 1 << (r % 64);
            }
        }
        while let Some(lead) = v
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
        {
            match pivots.get(&lead) {
                Some(p) => {
                    for (a, b) in v.iter_mut().zip(p) {
                        *a ^= b;
                    }
                }
                None => {
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Outcome of comparing the oracle with `C_K`.
#[derive(Clone, Debug)]
pub struct OracleComparison {
    pub oracle: Vec<HomologyGroup>,
    pub ck: Vec<HomologyGroup>,
}

impl OracleComparison {
    pub fn agrees(&self) -> bool {
        let trim = |v: &[HomologyGroup]| -> Vec<HomologyGroup> {
            let mut v = v.to_vec();
            while v.last().map(|g| g.rank == 0 && g.torsion.is_empty()).unwrap_or(false) {
                v.pop();
            }
            v
        };
        trim(&self.oracle) == trim(&self.ck)
    }
}

/// Computes both sides over the given coefficients.
pub fn compare_with_ck(
    k: &SimplicialComplex,
    coeffs: Coefficients,
) -> Result<OracleComparison, OracleError> {
    let oracle = oracle_cohomology(k, coeffs)?;
    let ck = ck_cohomology(&build_ck(k), coeffs)?
        .groups
        .into_iter()
        .map(|g| HomologyGroup {
            degree: g.degree,
            rank: g.rank,
            torsion: g.torsion,
        })
        .collect();
    Ok(OracleComparison { oracle, ck })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ranks(v: &[HomologyGroup]) -> Vec<usize> {
        v.iter().map(|g| g.rank).collect()
    }

    #[test]
    fn cell_counts() {
        let two = SimplicialComplex::from_facets(2, &[vec![1], vec![2]]).unwrap();
        assert_eq!(cell_count(&two), 8);
        assert_eq!(build_cubical(&two).unwrap().num_cells(), 8);
        assert_eq!(cell_count(&SimplicialComplex::simplex(2)), 9);
        assert_eq!(cell_count(&SimplicialComplex::polygon(5)), 152);
    }

    #[test]
    fn boundary_squares_to_zero() {
        let k = SimplicialComplex::simplex(4);
        let cube = build_cubical(&k).unwrap();
        assert!(cube.chain_complex().check_square_zero().is_ok());
    }

    #[test]
    fn torus_from_square() {
        let h = oracle_cohomology(&SimplicialComplex::polygon(4), Coefficients::Integers).unwrap();
        assert_eq!(ranks(&h), vec![1, 2, 1]);
    }

    #[test]
    fn mod_two_matches_generic_path() {
        let k = SimplicialComplex::polygon(5);
        let fast = oracle_cohomology(&k, Coefficients::Prime(2)).unwrap();
        let slow = homology_of_complex(
            &build_cubical(&k).unwrap().cochain_complex(),
            Coefficients::Prime(2),
        )
        .unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn agrees_with_ck_on_small_cases() {
        for k in [
            SimplicialComplex::polygon(5),
            SimplicialComplex::empty(3),
            SimplicialComplex::from_facets(4, &[vec![1, 2], vec![3]]).unwrap(),
        ] {
            assert!(compare_with_ck(&k, Coefficients::Integers).unwrap().agrees());
        }
    }
}
