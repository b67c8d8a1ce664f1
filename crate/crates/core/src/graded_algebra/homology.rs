//! (Co)homology of finite free complexes.

use serde::Serialize;

use super::field::{sparse_rank, PrimeField, Rationals};
use super::matrix::{IntegerMatrix, SparseMatrix};
use super::snf::{elementary_divisors, smith_normal_form};
use super::{Coefficients, LinalgError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Differentials raise degree.
    Cochain,
    /// Differentials lower degree.
    Chain,
}

/// A bounded complex of free modules `C_lo, ..., C_hi`.
///
/// `maps[k]` connects the modules at index `k` and `k + 1`: for cochain
/// complexes it is the matrix `C^k -> C^{k+1}`, for chain complexes the
/// matrix `C_{k+1} -> C_k`.
#[derive(Clone, Debug)]
pub struct Complex {
    pub lowest_degree: i64,
    pub dims: Vec<usize>,
    pub maps: Vec<SparseMatrix>,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: i64,
    /// Free rank over the integers, or dimension over a field.
    pub rank: usize,
    /// Orders of the cyclic torsion summands (integers only).
    pub torsion: Vec<i64>,
}

impl Complex {
    /// Checks shapes; does not check `d∘d = 0`.
    pub fn new(
        lowest_degree: i64,
        dims: Vec<usize>,
        maps: Vec<SparseMatrix>,
        direction: Direction,
    ) -> Result<Complex, LinalgError> {
        if dims.is_empty() {
            if !maps.is_empty() {
                return Err(LinalgError::Shape("maps given without modules".into()));
            }
        } else if maps.len() + 1 != dims.len() {
            return Err(LinalgError::Shape(format!(
                "{} modules need {} maps, got {}",
                dims.len(),
                dims.len() - 1,
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            let (rows, cols) = match direction {
                Direction::Cochain => (dims[k + 1], dims[k]),
                Direction::Chain => (dims[k], dims[k + 1]),
            };
            if m.rows() != rows || m.cols() != cols {
                return Err(LinalgError::Shape(format!(
                    "map {k} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Complex {
            lowest_degree,
            dims,
            maps,
            direction,
        })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Map leaving the module at index `k`.
    pub fn outgoing(&self, k: usize) -> Option<&SparseMatrix> {
        match self.direction {
            Direction::Cochain => self.maps.get(k),
            Direction::Chain => k.checked_sub(1).map(|j| &self.maps[j]),
        }
    }

    /// Map arriving at the module at index `k`.
    pub fn incoming(&self, k: usize) -> Option<&SparseMatrix> {
        match self.direction {
            Direction::Cochain => k.checked_sub(1).map(|j| &self.maps[j]),
            Direction::Chain => self.maps.get(k),
        }
    }

    /// Verifies that consecutive differentials compose to zero.
    pub fn check_square_zero(&self) -> Result<(), LinalgError> {
        for k in 0..self.maps.len().saturating_sub(1) {
            let prod = match self.direction {
                Direction::Cochain => self.maps[k + 1].mul(&self.maps[k])?,
                Direction::Chain => self.maps[k].mul(&self.maps[k + 1])?,
            };
            if !prod.is_zero() {
                return Err(LinalgError::NotAComplex {
                    degree: self.lowest_degree + k as i64,
                });
            }
        }
        Ok(())
    }
}

/// Homology in every degree with the given coefficients.
pub fn homology_of_complex(
    c: &Complex,
    coeffs: Coefficients,
) -> Result<Vec<HomologyGroup>, LinalgError> {
    c.check_square_zero()?;
    let ranks: Vec<(usize, Vec<i64>)> = match coeffs {
        Coefficients::Integers => c
            .maps
            .iter()
            .map(|m| {
                let d = elementary_divisors(m)?;
                let t = d.iter().copied().filter(|&x| x > 1).collect();
                Ok((d.len(), t))
            })
            .collect::<Result<_, LinalgError>>()?,
        Coefficients::Rationals => c
            .maps
            .iter()
            .map(|m| (sparse_rank(&Rationals, m), Vec::new()))
            .collect(),
        Coefficients::Prime(p) => {
            let f = PrimeField::new(p).ok_or(LinalgError::NotPrime(p))?;
            c.maps
                .iter()
                .map(|m| (sparse_rank(&f, m), Vec::new()))
                .collect()
        }
    };
    let mut out = Vec::with_capacity(c.len());
    for k in 0..c.len() {
        let (out_idx, in_idx) = match c.direction {
            Direction::Cochain => (Some(k), k.checked_sub(1)),
            Direction::Chain => (k.checked_sub(1), Some(k)),
        };
        let r_out = out_idx
            .and_then(|j| ranks.get(j))
            .map(|x| x.0)
            .unwrap_or(0);
        let (r_in, torsion) = in_idx
            .and_then(|j| ranks.get(j))
            .map(|x| (x.0, x.1.clone()))
            .unwrap_or((0, Vec::new()));
        out.push(HomologyGroup {
            degree: c.lowest_degree + k as i64,
            rank: c.dims[k] - r_out - r_in,
            torsion,
        });
    }
    Ok(out)
}

/// Integral cohomology of one degree with explicit representatives.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub degree: i64,
    /// Cocycles representing a basis of the free part.
    pub free: Vec<Vec<i64>>,
    /// `(order, cocycle)` for each cyclic torsion summand.
    pub torsion: Vec<(i64, Vec<i64>)>,
    /// `V^{-1}` of the outgoing differential's Smith form, rows from the kernel part on.
    kernel_coords: IntegerMatrix,
    /// Change of basis inside the kernel (`P` of the second Smith form).
    kernel_change: IntegerMatrix,
    /// Diagonal of the second Smith form, padded with zeros.
    kernel_divisors: Vec<i64>,
    /// Maps the first `rank` rows of `V^{-1} c` (must vanish on cocycles).
    image_rows: IntegerMatrix,
}

impl CohomologyBasis {
    pub fn rank(&self) -> usize {
        self.free.len()
    }

    /// Number of basis classes, free first, then torsion.
    pub fn len(&self) -> usize {
        self.free.len() + self.torsion.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Class of a cocycle as coordinates (free part first, then torsion
    /// coordinates reduced modulo their orders).
    pub fn coordinates(&self, cocycle: &[i64]) -> Result<Vec<i64>, LinalgError> {
        let test = self.image_rows.mul_vec(cocycle)?;
        if test.iter().any(|&x| x != 0) {
            return Err(LinalgError::NotACocycle);
        }
        let x = self.kernel_coords.mul_vec(cocycle)?;
        let y = self.kernel_change.mul_vec(&x)?;
        let mut free = Vec::new();
        let mut tors = Vec::new();
        for (i, &v) in y.iter().enumerate() {
            match self.kernel_divisors[i] {
                0 => free.push(v),
                1 => {}
                d => tors.push(v.rem_euclid(d)),
            }
        }
        free.extend(tors);
        Ok(free)
    }
}

/// Integral cohomology with representatives for a cochain complex given by
/// dense differentials `d_in: C^{k-1} -> C^k` and `d_out: C^k -> C^{k+1}`.
pub fn cohomology_basis(
    degree: i64,
    dim: usize,
    d_in: Option<&IntegerMatrix>,
    d_out: Option<&IntegerMatrix>,
) -> Result<CohomologyBasis, LinalgError> {
    let (kernel_basis, kernel_coords, image_rows) = match d_out {
        Some(d) if d.rows() > 0 && dim > 0 => {
            let s = smith_normal_form(d)?;
            let r = s.rank();
            let keep: Vec<usize> = (r..dim).collect();
            let all_rows: Vec<usize> = (0..dim).collect();
            let z = s.v.select(&all_rows, &keep);
            let coords = s.v_inv.select(&keep, &all_rows);
            let head: Vec<usize> = (0..r).collect();
            let image_rows = s.v_inv.select(&head, &all_rows);
            (z, coords, image_rows)
        }
        _ => (
            IntegerMatrix::identity(dim),
            IntegerMatrix::identity(dim),
            IntegerMatrix::zeros(0, dim),
        ),
    };
    let zdim = kernel_basis.cols();
    // Image of d_in in kernel coordinates.
    let m = match d_in {
        Some(d) if d.cols() > 0 => {
            let full = kernel_coords.mul(d)?;
            let check = image_rows.mul(d)?;
            if !check.is_zero() {
                return Err(LinalgError::NotAComplex { degree: degree - 1 });
            }
            full
        }
        _ => IntegerMatrix::zeros(zdim, 0),
    };
    let (change, change_inv, divisors) = if m.cols() == 0 || zdim == 0 {
        (
            IntegerMatrix::identity(zdim),
            IntegerMatrix::identity(zdim),
            vec![0; zdim],
        )
    } else {
        let s = smith_normal_form(&m)?;
        let mut divs = s.divisors.clone();
        divs.resize(zdim, 0);
        (s.u, s.u_inv, divs)
    };
    // New kernel basis: columns of Z * P^{-1}.
    let new_basis = kernel_basis.mul(&change_inv)?;
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    for (i, &d) in divisors.iter().enumerate() {
        match d {
            0 => free.push(new_basis.column(i)),
            1 => {}
            _ => torsion.push((d, new_basis.column(i))),
        }
    }
    Ok(CohomologyBasis {
        degree,
        free,
        torsion,
        kernel_coords,
        kernel_change: change,
        kernel_divisors: divisors,
        image_rows,
    })
}
