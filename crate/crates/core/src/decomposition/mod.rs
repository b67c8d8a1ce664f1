//! Additive decomposition of `H*(Z(K; (X, A)))` and `H̃*(Ẑ(K; (X, A)))`
//! into summands indexed by `(I, σ)`, with Poincaré series, the
//! Stanley-Reisner presentation and the multiplicative structure.
//!
//! The summand for `(I, σ)` is `E^J ⊗ H̃*(Σ|N(I, σ)|) ⊗ Y^{I, σ}` where
//! `J = [m] - I`, `N(I, σ)` is the link of `σ` in the complement of `I` and
//! `Y` takes `C_i` on `σ` and `B_i` (reduced for the smash product) on
//! `I - σ`. Link cohomology is computed from the top block of `C_N` and
//! checked against plain simplicial cohomology of `N`.

pub mod ring;
pub mod sr;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graded_algebra::homology::{homology_of_complex, Complex, Direction};
use crate::graded_algebra::pair::{CoordGen, Part};
use crate::graded_algebra::{Coefficients, LinalgError, PairData, PoincareSeries, SparseMatrix};
use crate::realmac_chain::CkBlock;
use crate::simplicial::{Simplex, SimplicialComplex, SimplicialError, VertexSet};
use crate::spectral::SpectralError;
use crate::Variant;

pub use ring::{BasisKey, DecompositionRing, RingElement};
pub use sr::{maximal_subring, sr_presentation, MaximalSubring, SrPresentation};

#[derive(Debug, Error)]
pub enum DecompositionError {
    #[error("pair data has {pair} vertices, complex has {complex}")]
    VertexCount { pair: usize, complex: usize },
    #[error("vertex {vertex} has a nonempty E part; the presentation needs E = ∅ everywhere")]
    ExteriorPart { vertex: usize },
    #[error("link cohomology of N({set}, {sigma}) disagrees between C_N and simplicial cochains")]
    LinkMismatch { set: VertexSet, sigma: Simplex },
    #[error("element is not in the decomposition basis: {0}")]
    NotInBasis(String),
    #[error("product is not closed: {0}")]
    NotClosed(String),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Cohomology of `Σ|N|`, indexed from degree 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkCohomology {
    pub betti: Vec<usize>,
    /// Torsion orders per degree (integers only).
    pub torsion: Vec<Vec<i64>>,
}

impl LinkCohomology {
    pub fn series(&self) -> PoincareSeries {
        PoincareSeries::from_dims(
            self.betti
                .iter()
                .enumerate()
                .map(|(d, &b)| (d as i64, b as u64)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.betti.iter().all(|&b| b == 0) && self.torsion.iter().all(|t| t.is_empty())
    }

    fn trimmed(&self) -> LinkCohomology {
        let mut out = self.clone();
        while out.betti.last() == Some(&0) && out.torsion.last().is_none_or(|t| t.is_empty()) {
            out.betti.pop();
            out.torsion.pop();
        }
        out
    }
}

/// `H̃*(Σ|N|)` from the block of `C_N` on the vertex set `J`.
pub fn link_cohomology(
    n: &SimplicialComplex,
    j: VertexSet,
    coeffs: Coefficients,
) -> Result<LinkCohomology, LinalgError> {
    let block = CkBlock::new(n, j);
    match coeffs {
        Coefficients::Integers => {
            let bases = block.integral_cohomology()?;
            Ok(LinkCohomology {
                betti: bases.iter().map(|b| b.rank()).collect(),
                torsion: bases
                    .iter()
                    .map(|b| b.torsion.iter().map(|t| t.0).collect())
                    .collect(),
            })
        }
        _ => {
            let betti = block.field_betti(coeffs)?;
            let torsion = vec![Vec::new(); betti.len()];
            Ok(LinkCohomology { betti, torsion })
        }
    }
}

/// `H̃*(Σ|N|) = H̃^{*-1}(|N|)` from the augmented simplicial cochain
/// complex of `N` (empty face in degree `-1`).
pub fn link_cohomology_simplicial(
    n: &SimplicialComplex,
    coeffs: Coefficients,
) -> Result<LinkCohomology, LinalgError> {
    let top = (n.dim() + 1).max(0) as usize;
    let mut faces: Vec<Vec<Simplex>> = vec![Vec::new(); top + 1];
    for &f in n.faces() {
        faces[f.len()].push(f);
    }
    let mut maps = Vec::new();
    for p in 0..top {
        let index: BTreeMap<Simplex, usize> = faces[p].iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut trip = Vec::new();
        for (row, &tau) in faces[p + 1].iter().enumerate() {
            for (i, v) in tau.vertices().enumerate() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                trip.push((row, index[&tau.without(v)], sign));
            }
        }
        maps.push(SparseMatrix::from_triplets(faces[p + 1].len(), faces[p].len(), &trip));
    }
    let complex = Complex::new(
        -1,
        faces.iter().map(|f| f.len()).collect(),
        maps,
        Direction::Cochain,
    )?;
    let groups = homology_of_complex(&complex, coeffs)?;
    Ok(LinkCohomology {
        betti: groups.iter().map(|g| g.rank).collect(),
        torsion: groups.into_iter().map(|g| g.torsion).collect(),
    })
}

/// One summand `E^J ⊗ H̃*(Σ|N(I, σ)|) ⊗ Y^{I, σ}`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub set: VertexSet,
    pub sigma: Simplex,
    pub complement: VertexSet,
    pub link: SimplicialComplex,
    pub link_cohomology: LinkCohomology,
    /// Allowed generators per coordinate, in coordinate order.
    pub factors: Vec<Vec<CoordGen>>,
    pub series: PoincareSeries,
}

impl Summand {
    pub fn dimension(&self) -> i128 {
        self.series.total()
    }
}

impl Serialize for Summand {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(5))?;
        map.serialize_entry("I", &self.set.to_vec())?;
        map.serialize_entry("sigma", &self.sigma.to_vec())?;
        map.serialize_entry("link_betti", &self.link_cohomology.betti)?;
        if self.link_cohomology.torsion.iter().any(|t| !t.is_empty()) {
            map.serialize_entry("link_torsion", &self.link_cohomology.torsion)?;
        }
        let dims: BTreeMap<String, i128> = self.series.terms().map(|(d, c)| (d.to_string(), c)).collect();
        map.serialize_entry("dims_by_degree", &dims)?;
        map.end()
    }
}

/// All nonzero summands and their total.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    #[serde(skip)]
    pub variant: Variant,
    #[serde(skip)]
    pub coefficients: Coefficients,
    pub summands: Vec<Summand>,
    pub poincare: PoincareSeries,
}

/// Generators allowed at each coordinate for the summand `(I, σ)`.
pub fn summand_factors(pair: &PairData, variant: Variant, set: VertexSet, sigma: Simplex) -> Vec<Vec<CoordGen>> {
    (1..=pair.m())
        .map(|i| {
            let v = pair.vertex(i);
            if sigma.contains(i) {
                (0..v.c.len()).map(|k| CoordGen::new(Part::C, k)).collect()
            } else if set.contains(i) {
                match variant {
                    Variant::Smash => v.reduced_b(),
                    Variant::Product => (0..v.b.len())
                        .map(|k| CoordGen::new(Part::B, k))
                        .collect(),
                }
            } else {
                (0..v.e.len()).map(|k| CoordGen::new(Part::E, k)).collect()
            }
        })
        .collect()
}

fn factor_series(pair: &PairData, factors: &[Vec<CoordGen>]) -> PoincareSeries {
    let mut acc = PoincareSeries::one();
    for (i, f) in factors.iter().enumerate() {
        let v = pair.vertex(i + 1);
        acc = &acc * &PoincareSeries::from_dims(f.iter().map(|&g| (v.deg(g), 1)));
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// The pairs `(I, σ)` with `σ ∈ K` and `σ ⊆ I`, ordered by `I` (lex) and
/// then by the weight of `σ`.
pub fn index_pairs(k: &SimplicialComplex) -> Vec<(VertexSet, Simplex)> {
    let mut sets: Vec<VertexSet> = Simplex::full(k.m()).subsets().collect();
    sets.sort();
    let mut out = Vec::new();
    for set in sets {
        for &sigma in k.faces() {
            if sigma.is_subset_of(set) {
                out.push((set, sigma));
            }
        }
    }
    out
}

/// Enumerates the summands, dropping those of dimension zero. Link
/// cohomology is computed twice (from `C_N` and simplicially) and the
/// results must agree.
pub fn decompose(
    k: &SimplicialComplex,
    pair: &PairData,
    variant: Variant,
    coeffs: Coefficients,
) -> Result<Decomposition, DecompositionError> {
    if pair.m() != k.m() {
        return Err(DecompositionError::VertexCount {
            pair: pair.m(),
            complex: k.m(),
        });
    }
    let m = k.m();
    let pairs = index_pairs(k);
    let found: Vec<Option<Summand>> = pairs
        .par_iter()
        .map(|&(set, sigma)| {
            let factors = summand_factors(pair, variant, set, sigma);
            let fs = factor_series(pair, &factors);
            if fs.is_zero() {
                return Ok(None);
            }
            let complement = Simplex::full(m).difference(set);
            let link = k.link_complement(set, sigma)?;
            let lc = link_cohomology(&link, complement, coeffs)?;
            let check = link_cohomology_simplicial(&link, coeffs)?;
            if lc.trimmed() != check.trimmed() {
                return Err(DecompositionError::LinkMismatch { set, sigma });
            }
            let series = &fs * &lc.series();
            if series.is_zero() && lc.is_zero() {
                return Ok(None);
            }
            Ok(Some(Summand {
                set,
                sigma,
                complement,
                link,
                link_cohomology: lc,
                factors,
                series,
            }))
        })
        .collect::<Result<_, DecompositionError>>()?;
    let summands: Vec<Summand> = found.into_iter().flatten().collect();
    let poincare = summands.iter().map(|s| s.series.clone()).sum();
    Ok(Decomposition {
        variant,
        coefficients: coeffs,
        summands,
        poincare,
    })
}

/// Poincaré series of `H*(Z)` (product variant) or `H̃*(Ẑ)` (smash variant).
pub fn poincare(
    k: &SimplicialComplex,
    pair: &PairData,
    variant: Variant,
    coeffs: Coefficients,
) -> Result<PoincareSeries, DecompositionError> {
    Ok(decompose(k, pair, variant, coeffs)?.poincare)
}
