//! Stanley-Reisner presentation for `E = ∅` and the maximal subring
//! spanned by the `I = [m]` summands.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::graded_algebra::field::{sparse_rank, Rationals};
use crate::graded_algebra::pair::{CoordGen, Part};
use crate::graded_algebra::{PairData, PoincareSeries, SparseMatrix};
use crate::simplicial::{Simplex, SimplicialComplex};
use crate::spectral::{ChainModel, Monomial};
use crate::Variant;

use super::DecompositionError;

#[derive(Clone, Debug, Serialize)]
pub struct SrGenerator {
    pub vertex: usize,
    pub label: String,
    pub deg: i64,
}

/// `H*(X_1) ⊗ ... ⊗ H*(X_m)` modulo the ideal generated by the products
/// `c_{i_1} ⋯ c_{i_t}` over minimal non-faces `{i_1, ..., i_t}`.
#[derive(Clone, Debug, Serialize)]
pub struct SrPresentation {
    pub generators: Vec<SrGenerator>,
    pub minimal_non_faces: Vec<Vec<usize>>,
    /// Each relation as `label@vertex` factors.
    pub relations: Vec<String>,
    pub quotient: PoincareSeries,
    pub ideal: PoincareSeries,
    pub ambient: PoincareSeries,
}

fn all_tensors(pair: &PairData) -> Vec<Vec<CoordGen>> {
    let mut out: Vec<Vec<CoordGen>> = vec![Vec::new()];
    for v in pair.vertices() {
        let basis: Vec<CoordGen> = v
            .basis()
            .into_iter()
            .filter(|g| matches!(g.part, Part::B | Part::C))
            .collect();
        out = out
            .into_iter()
            .flat_map(|t| {
                basis.iter().map(move |&g| {
                    let mut t = t.clone();
                    t.push(g);
                    t
                })
            })
            .collect();
    }
    out
}

fn tensor_degree(pair: &PairData, t: &[CoordGen]) -> i64 {
    t.iter()
        .enumerate()
        .map(|(i, &g)| pair.vertex(i + 1).deg(g))
        .sum()
}

/// Coordinatewise product in `H*(X_1) ⊗ ... ⊗ H*(X_m)` with Koszul signs.
fn tensor_product(pair: &PairData, x: &[CoordGen], y: &[CoordGen]) -> Vec<(Vec<CoordGen>, i64)> {
    let mut swaps = 0i64;
    let mut ydeg = 0i64;
    for i in 0..x.len() {
        let v = pair.vertex(i + 1);
        swaps += ydeg * v.deg(x[i]);
        ydeg += v.deg(y[i]);
    }
    let mut partial: Vec<(Vec<CoordGen>, i64)> = vec![(Vec::new(), if swaps % 2 == 0 { 1 } else { -1 })];
    for i in 0..x.len() {
        let prod = pair.vertex(i + 1).product_x(x[i], y[i]);
        let mut next = Vec::new();
        for (p, c) in &partial {
            for &(g, k) in &prod {
                let mut q = p.clone();
                q.push(g);
                next.push((q, c * k));
            }
        }
        partial = next;
        if partial.is_empty() {
            break;
        }
    }
    partial
}

/// The presentation, with quotient dimensions computed by linear algebra
/// over the rationals on the span of `relation · x` for all basis tensors `x`.
pub fn sr_presentation(k: &SimplicialComplex, pair: &PairData) -> Result<SrPresentation, DecompositionError> {
    if pair.m() != k.m() {
        return Err(DecompositionError::VertexCount {
            pair: pair.m(),
            complex: k.m(),
        });
    }
    if let Some(vertex) = pair.first_vertex_with_e() {
        return Err(DecompositionError::ExteriorPart { vertex });
    }
    let m = k.m();
    let mut generators = Vec::new();
    for i in 1..=m {
        for g in &pair.vertex(i).c {
            generators.push(SrGenerator {
                vertex: i,
                label: g.label.clone(),
                deg: g.deg,
            });
        }
    }
    let non_faces = k.minimal_non_faces();
    let mut relations = Vec::new();
    let mut relation_tensors: Vec<Vec<CoordGen>> = Vec::new();
    for &nf in &non_faces {
        let mut partial: Vec<Vec<CoordGen>> = vec![Vec::new()];
        for i in 1..=m {
            let v = pair.vertex(i);
            let choices: Vec<CoordGen> = if nf.contains(i) {
                (0..v.c.len()).map(|j| CoordGen::new(Part::C, j)).collect()
            } else {
                vec![v.unit()]
            };
            partial = partial
                .into_iter()
                .flat_map(|t| {
                    choices.iter().map(move |&g| {
                        let mut t = t.clone();
                        t.push(g);
                        t
                    })
                })
                .collect();
        }
        for r in partial {
            relations.push(
                nf.vertices()
                    .map(|i| format!("{}@{}", pair.vertex(i).label(r[i - 1]), i))
                    .collect::<Vec<_>>()
                    .join("·"),
            );
            relation_tensors.push(r);
        }
    }
    let basis = all_tensors(pair);
    let index: HashMap<&Vec<CoordGen>, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut ambient = PoincareSeries::zero();
    for t in &basis {
        ambient.add_term(tensor_degree(pair, t), 1);
    }
    // Spanning vectors of the ideal, grouped by degree and deduplicated.
    let mut spans: BTreeMap<i64, BTreeSet<Vec<(usize, i64)>>> = BTreeMap::new();
    for r in &relation_tensors {
        for x in &basis {
            let mut v: BTreeMap<usize, i64> = BTreeMap::new();
            for (t, c) in tensor_product(pair, r, x) {
                *v.entry(index[&t]).or_insert(0) += c;
            }
            let mut v: Vec<(usize, i64)> = v.into_iter().filter(|e| e.1 != 0).collect();
            let Some(&(_, lead)) = v.first() else { continue };
            if lead < 0 {
                for e in v.iter_mut() {
                    e.1 = -e.1;
                }
            }
            let deg = tensor_degree(pair, r) + tensor_degree(pair, x);
            spans.entry(deg).or_default().insert(v);
        }
    }
    let mut ideal = PoincareSeries::zero();
    for (deg, vs) in spans {
        let mut trip = Vec::new();
        for (col, v) in vs.iter().enumerate() {
            for &(row, c) in v {
                trip.push((row, col, c));
            }
        }
        let mat = SparseMatrix::from_triplets(basis.len(), vs.len(), &trip);
        ideal.add_term(deg, sparse_rank(&Rationals, &mat) as i128);
    }
    let mut quotient = ambient.clone();
    for (d, c) in ideal.terms() {
        quotient.add_term(d, -c);
    }
    Ok(SrPresentation {
        generators,
        minimal_non_faces: non_faces.iter().map(|s| s.to_vec()).collect(),
        relations,
        quotient,
        ideal,
        ambient,
    })
}

/// The subring `⊕_{σ ∈ K} Y^{[m], σ}` with its product table.
#[derive(Clone, Debug, Serialize)]
pub struct MaximalSubring {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    pub supports: Vec<Vec<usize>>,
    /// `table[i][j]` lists `(k, c)` with `basis_i · basis_j = Σ c basis_k`.
    pub table: Vec<Vec<Vec<(usize, i64)>>>,
    pub series: PoincareSeries,
}

/// Builds the subring and checks it is closed under the product.
pub fn maximal_subring(
    k: &SimplicialComplex,
    pair: &PairData,
    variant: Variant,
) -> Result<MaximalSubring, DecompositionError> {
    let model = ChainModel::full(k, pair, variant)?;
    let m = k.m();
    let mut basis: Vec<Monomial> = Vec::new();
    for &sigma in k.faces() {
        let factors = super::summand_factors(pair, variant, Simplex::full(m), sigma);
        let mut partial: Vec<Vec<Option<CoordGen>>> = vec![Vec::new()];
        for f in &factors {
            partial = partial
                .into_iter()
                .flat_map(|t| {
                    f.iter().map(move |&g| {
                        let mut t = t.clone();
                        t.push(Some(g));
                        t
                    })
                })
                .collect();
        }
        basis.extend(partial.into_iter().map(Monomial));
    }
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut table = Vec::with_capacity(basis.len());
    for x in &basis {
        let mut row = Vec::with_capacity(basis.len());
        for y in &basis {
            let mut entry: BTreeMap<usize, i64> = BTreeMap::new();
            for (p, c) in model.product(x, y) {
                let i = index
                    .get(&p)
                    .ok_or_else(|| DecompositionError::NotClosed(model.label(&p)))?;
                *entry.entry(*i).or_insert(0) += c;
            }
            row.push(entry.into_iter().filter(|e| e.1 != 0).collect());
        }
        table.push(row);
    }
    let degrees: Vec<i64> = basis.iter().map(|x| model.degree(x)).collect();
    let mut series = PoincareSeries::zero();
    for &d in &degrees {
        series.add_term(d, 1);
    }
    Ok(MaximalSubring {
        labels: basis.iter().map(|x| model.label(x)).collect(),
        supports: basis.iter().map(|x| model.support(x).to_vec()).collect(),
        degrees,
        table,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::{Coefficients, Preset};

    #[test]
    fn two_points_polynomial_truncation() {
        let k = SimplicialComplex::from_facets(2, &[vec![1], vec![2]]).unwrap();
        let sr = sr_presentation(&k, &Preset::ProjectivePlane.data(2)).unwrap();
        assert_eq!(sr.minimal_non_faces, vec![vec![1, 2]]);
        assert_eq!(sr.relations.len(), 4);
        assert_eq!(sr.quotient.to_string(), "1+2t^2+2t^4");
    }

    #[test]
    fn boundary_of_triangle_single_relation_shape() {
        let k = SimplicialComplex::from_facets(3, &[vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        let sr = sr_presentation(&k, &Preset::ProjectivePlane.data(3)).unwrap();
        assert_eq!(sr.minimal_non_faces, vec![vec![1, 2, 3]]);
        let d = super::super::poincare(&k, &Preset::ProjectivePlane.data(3), Variant::Product, Coefficients::Integers)
            .unwrap();
        assert_eq!(sr.quotient, d);
    }

    #[test]
    fn exterior_part_is_rejected() {
        let k = SimplicialComplex::simplex(2);
        assert!(matches!(
            sr_presentation(&k, &Preset::DiskSphere1.data(2)),
            Err(DecompositionError::ExteriorPart { vertex: 1 })
        ));
    }

    #[test]
    fn mixed_maximal_subring() {
        let k = SimplicialComplex::from_facets(3, &[vec![1, 2], vec![1, 3]]).unwrap();
        let r = maximal_subring(&k, &Preset::Mixed.data(3), Variant::Smash).unwrap();
        assert_eq!(
            r.labels,
            vec![
                "b4⊗b4⊗b4",
                "c6⊗b4⊗b4",
                "b4⊗c6⊗b4",
                "b4⊗b4⊗c6",
                "c6⊗c6⊗b4",
                "c6⊗b4⊗c6"
            ]
        );
        assert_eq!(r.series.to_string(), "t^12+3t^14+2t^16");
    }
}
