//! Spectral sequence of the filtration by lex weight on the cochain model.

pub mod engine;
pub mod model;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graded_algebra::field::{FVec, Field};
use crate::graded_algebra::pair::Part;
use crate::graded_algebra::{PairData, PoincareSeries};
use crate::simplicial::{lex_weight, Simplex, SimplicialComplex, VertexSet};
use crate::Variant;

pub use engine::{BlockPage, ClassRep, FilteredBlock};
pub use model::{Block, Chain, ChainModel, Monomial};

/// Class counts by `(filtration, degree)` for each set `I`.
pub type SubcomplexSplit = BTreeMap<VertexSet, BTreeMap<(u64, i64), usize>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("pair data has {pair} vertices, complex has {complex}")]
    VertexCount { pair: usize, complex: usize },
    #[error("differential from element {from} to {to} does not raise the filtration")]
    NotFiltered { from: usize, to: usize },
    #[error("spectral sequence bookkeeping failed: {0}")]
    Inconsistent(String),
    #[error("differential mixes blocks: {0}")]
    CrossBlock(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// A page of the whole spectral sequence: one page per block.
#[derive(Clone, Debug)]
pub struct Page<F: Field> {
    pub r: usize,
    pub blocks: Vec<BlockPage<F>>,
}

/// One entry of a page dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellEntry {
    pub degree: i64,
    pub label: String,
}

/// The spectral sequence of a chain model, block by block.
pub struct SpectralSequence<F: Field> {
    model: ChainModel,
    field: F,
    blocks: Vec<Block>,
    engines: Vec<FilteredBlock<F>>,
}

impl<F: Field> SpectralSequence<F> {
    /// Builds the `E_1` data: the model's blocks as filtered complexes.
    pub fn build_e1(model: ChainModel, field: F) -> Result<Self, SpectralError> {
        let blocks = model.blocks();
        let engines = blocks
            .par_iter()
            .map(|b| block_engine(&model, &field, b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SpectralSequence {
            model,
            field,
            blocks,
            engines,
        })
    }

    pub fn model(&self) -> &ChainModel {
        &self.model
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn e1(&self) -> Result<Page<F>, SpectralError> {
        let blocks = self
            .engines
            .par_iter()
            .map(|e| e.page(&self.field, Some(1)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Page { r: 1, blocks })
    }

    pub fn turn_page(&self, page: &Page<F>) -> Result<Page<F>, SpectralError> {
        let blocks = self
            .engines
            .par_iter()
            .zip(page.blocks.par_iter())
            .map(|(e, p)| e.turn_page(&self.field, p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Page {
            r: page.r + 1,
            blocks,
        })
    }

    /// Pages `E_1, E_2, ...` until `r` exceeds `2^m`; the last one is `E_∞`.
    pub fn run_to_einfty(&self) -> Result<Vec<Page<F>>, SpectralError> {
        let limit = 1usize << self.model.m();
        let mut pages = vec![self.e1()?];
        while pages.last().expect("nonempty").r <= limit {
            let next = self.turn_page(pages.last().expect("nonempty"))?;
            pages.push(next);
        }
        let last = pages.last().expect("nonempty");
        for (e, p) in self.engines.iter().zip(&last.blocks) {
            let direct = e.page(&self.field, None)?;
            if direct.dims() != p.dims() {
                return Err(SpectralError::Inconsistent(
                    "final page differs from the direct E_inf computation".into(),
                ));
            }
        }
        Ok(pages)
    }

    /// `E_∞` computed directly (kernel and image of the full differential).
    pub fn einfty_direct(&self) -> Result<Page<F>, SpectralError> {
        let blocks = self
            .engines
            .par_iter()
            .map(|e| e.page(&self.field, None))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Page { r: usize::MAX, blocks })
    }

    /// Label of a class: its leading component as a combination of monomials.
    pub fn class_label(&self, block: usize, class: &ClassRep<F>) -> String {
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, c) in class.rep.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            terms.push((c.clone(), self.model.label(&self.blocks[block].elements[i])));
        }
        let one = f.one();
        let minus_one = f.neg(&one);
        let mut out = String::new();
        for (k, (c, l)) in terms.iter().enumerate() {
            let (neg, mag) = if *c == minus_one {
                (true, None)
            } else if *c == one {
                (false, None)
            } else {
                let s = f.format(c);
                match s.strip_prefix('-') {
                    Some(rest) => (true, Some(rest.to_string())),
                    None => (false, Some(s)),
                }
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if let Some(mag) = mag {
                out.push_str(&mag);
                out.push('·');
            }
            out.push_str(l);
        }
        out
    }

    /// Classes by filtration.
    pub fn cells(&self, page: &Page<F>) -> BTreeMap<u64, Vec<CellEntry>> {
        let mut out: BTreeMap<u64, Vec<CellEntry>> = BTreeMap::new();
        for (b, bp) in page.blocks.iter().enumerate() {
            for c in &bp.classes {
                out.entry(c.filtration).or_default().push(CellEntry {
                    degree: c.degree,
                    label: self.class_label(b, c),
                });
            }
        }
        for v in out.values_mut() {
            v.sort_by(|a, b| (a.degree, &a.label).cmp(&(b.degree, &b.label)));
        }
        out
    }

    /// Nonzero differentials `(source label, target label, coefficient)`.
    pub fn differentials(&self, page: &Page<F>) -> Vec<(String, String, String)> {
        let mut out = Vec::new();
        for (b, bp) in page.blocks.iter().enumerate() {
            for (src, dst, c) in &bp.differential {
                out.push((
                    self.class_label(b, &bp.classes[*src]),
                    self.class_label(b, &bp.classes[*dst]),
                    self.field.format(c),
                ));
            }
        }
        out
    }

    /// Poincaré series of the page (total degree).
    pub fn series(&self, page: &Page<F>) -> PoincareSeries {
        let mut s = PoincareSeries::zero();
        for bp in &page.blocks {
            for c in &bp.classes {
                s.add_term(c.degree, 1);
            }
        }
        s
    }

    /// Total number of differentials on a page.
    pub fn differential_count(&self, page: &Page<F>) -> usize {
        page.blocks.iter().map(|b| b.differential.len()).sum()
    }

    /// Splits a page of the unreduced variant by the set `I` of non-unit
    /// coordinates; returns `(filtration, degree) -> count` per `I`.
    pub fn split_by_subcomplex(
        &self,
        page: &Page<F>,
    ) -> Result<SubcomplexSplit, SpectralError> {
        let mut out = SubcomplexSplit::new();
        for (b, bp) in self.blocks.iter().zip(&page.blocks) {
            let set = self.non_unit_positions(b);
            let entry = out.entry(set).or_default();
            for (k, v) in bp.dims() {
                *entry.entry(k).or_insert(0) += v;
            }
        }
        Ok(out)
    }

    fn non_unit_positions(&self, b: &Block) -> VertexSet {
        let mut set = Simplex::EMPTY;
        for (i, s) in b.skeleton.iter().enumerate() {
            let v = self.model.pair().vertex(i + 1);
            match s {
                model::SkeletonSlot::Fixed(g) if v.is_unit(*g) => {}
                model::SkeletonSlot::Absent => {}
                _ => set = set.with(i + 1),
            }
        }
        set
    }
}

/// The filtered complex of one block, with the model's actual signs.
fn block_engine<F: Field>(model: &ChainModel, f: &F, b: &Block) -> Result<FilteredBlock<F>, SpectralError> {
    let n = b.elements.len();
    let index: HashMap<&Monomial, usize> = b.elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut d: Vec<FVec<F>> = vec![vec![f.zero(); n]; n];
    for (j, x) in b.elements.iter().enumerate() {
        for (y, s) in model.differential(x) {
            let i = *index.get(&y).ok_or_else(|| {
                SpectralError::CrossBlock(format!(
                    "{} -> {}",
                    model.label(x),
                    model.label(&y)
                ))
            })?;
            d[i][j] = f.add(&d[i][j], &f.from_i64(s));
        }
    }
    let filt = b.elements.iter().map(|x| model.weight(x)).collect();
    let deg = b.elements.iter().map(|x| model.degree(x)).collect();
    FilteredBlock::new(f, filt, deg, d)
}

/// Normalized block for a shape `(pairs, sigma)`: elements `γ ⊆ pairs` with
/// `σ ∪ γ ∈ K`, degree `|γ|`, weight of `σ ∪ γ`, and differential signs
/// `(-1)^{#γ below v}`. Every block of the model with this shape is
/// isomorphic to it as a filtered complex (rescale basis elements by signs).
pub fn shape_engine<F: Field>(
    k: &SimplicialComplex,
    f: &F,
    pairs: VertexSet,
    sigma: Simplex,
) -> Result<FilteredBlock<F>, SpectralError> {
    let m = k.m();
    let mut gammas: Vec<Simplex> = pairs
        .subsets()
        .filter(|g| k.contains(g.union(sigma)))
        .collect();
    gammas.sort_by_key(|g| lex_weight(g.union(sigma), m));
    let index: HashMap<Simplex, usize> = gammas.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let n = gammas.len();
    let mut d: Vec<FVec<F>> = vec![vec![f.zero(); n]; n];
    for (j, g) in gammas.iter().enumerate() {
        for v in pairs.difference(*g).vertices() {
            if let Some(&i) = index.get(&g.with(v)) {
                let s = if g.count_below(v) % 2 == 0 { 1 } else { -1 };
                d[i][j] = f.from_i64(s);
            }
        }
    }
    let filt = gammas.iter().map(|g| lex_weight(g.union(sigma), m)).collect();
    let deg = gammas.iter().map(|g| g.len() as i64).collect();
    FilteredBlock::new(f, filt, deg, d)
}

/// Poincaré series of the generators fixed by a shape.
fn shape_multiplicity(
    pair: &PairData,
    variant: Variant,
    coords: VertexSet,
    pairs: VertexSet,
    sigma: Simplex,
) -> PoincareSeries {
    let mut acc = PoincareSeries::one();
    for i in coords.vertices() {
        let v = pair.vertex(i);
        let gens: Vec<i64> = if pairs.contains(i) {
            v.e.iter().map(|g| g.deg).collect()
        } else if sigma.contains(i) {
            v.c.iter().map(|g| g.deg).collect()
        } else {
            let mut b: Vec<i64> = v.reduced_b().iter().map(|&g| v.deg(g)).collect();
            if variant == Variant::Product {
                b.push(0);
            }
            b
        };
        let p = PoincareSeries::from_dims(gens.into_iter().map(|d| (d, 1)));
        acc = &acc * &p;
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Per-page series of the whole spectral sequence, computed once per
/// block shape and scaled by generator multiplicities. Returns the series
/// of `E_1, ..., E_R` where `R = 2^m + 1`, the last page being `E_∞`.
pub fn page_series_by_shape<F: Field>(
    k: &SimplicialComplex,
    pair: &PairData,
    variant: Variant,
    coords: VertexSet,
    f: &F,
) -> Result<Vec<PoincareSeries>, SpectralError> {
    if pair.m() != k.m() {
        return Err(SpectralError::VertexCount {
            pair: pair.m(),
            complex: k.m(),
        });
    }
    let coords = coords.intersection(Simplex::full(k.m()));
    let kc = k.full_subcomplex(coords);
    let mut shapes = Vec::new();
    for &sigma in kc.faces() {
        for pairs in coords.difference(sigma).subsets() {
            let mult = shape_multiplicity(pair, variant, coords, pairs, sigma);
            if !mult.is_zero() {
                shapes.push((pairs, sigma, mult));
            }
        }
    }
    let last = (1usize << k.m()) + 1;
    let per_shape: Vec<Vec<PoincareSeries>> = shapes
        .par_iter()
        .map(|(pairs, sigma, mult)| {
            let e = shape_engine(&kc, f, *pairs, *sigma)?;
            let pages = e.run(f, last)?;
            Ok(pages
                .iter()
                .map(|p| {
                    let mut s = PoincareSeries::zero();
                    for c in &p.classes {
                        s.add_term(c.degree, 1);
                    }
                    &s * mult
                })
                .collect())
        })
        .collect::<Result<_, SpectralError>>()?;
    let mut out = vec![PoincareSeries::zero(); last];
    for pages in per_shape {
        for (o, s) in out.iter_mut().zip(pages) {
            *o = &*o + &s;
        }
    }
    Ok(out)
}

/// Series of `E_∞`, through the shape-by-shape computation.
pub fn einfty_series<F: Field>(
    k: &SimplicialComplex,
    pair: &PairData,
    variant: Variant,
    f: &F,
) -> Result<PoincareSeries, SpectralError> {
    let pages = page_series_by_shape(k, pair, variant, Simplex::full(k.m()), f)?;
    Ok(pages.into_iter().last().unwrap_or_default())
}

/// A table in the incremental presentation: the stable page of the
/// complex built so far, together with the `E_1` cells of the new faces.
#[derive(Clone, Debug, Serialize)]
pub struct IncrementalTable {
    /// Faces added at this step.
    pub added: Vec<Simplex>,
    /// Class labels by filtration.
    pub cells: BTreeMap<u64, Vec<CellEntry>>,
}

/// Builds `K` face by face in lex order (all vertices at once first) and
/// records, for each step, `E_∞` of the previous complex plus the `E_1`
/// cells supported on the new face.
pub fn incremental_tables<F: Field>(
    k: &SimplicialComplex,
    pair: &PairData,
    variant: Variant,
    f: &F,
) -> Result<Vec<IncrementalTable>, SpectralError> {
    let m = k.m();
    let mut steps: Vec<Vec<Simplex>> = Vec::new();
    let vertices: Vec<Simplex> = k.faces().iter().copied().filter(|s| s.len() == 1).collect();
    steps.push(vertices);
    for &s in k.faces() {
        if s.len() >= 2 {
            steps.push(vec![s]);
        }
    }
    let mut built: Vec<Simplex> = Vec::new();
    let mut out = Vec::new();
    for added in steps {
        let prev = SimplicialComplex::from_faces(m, built.iter().copied())
            .map_err(|e| SpectralError::Internal(e.to_string()))?;
        let prev_ss = SpectralSequence::build_e1(ChainModel::full(&prev, pair, variant)?, f.clone())?;
        let pages = prev_ss.run_to_einfty()?;
        let mut cells = prev_ss.cells(pages.last().expect("nonempty"));
        built.extend(added.iter().copied());
        let next = SimplicialComplex::from_faces(m, built.iter().copied())
            .map_err(|e| SpectralError::Internal(e.to_string()))?;
        let model = ChainModel::full(&next, pair, variant)?;
        for x in model.enumerate() {
            if added.contains(&model.support(&x)) {
                cells.entry(model.weight(&x)).or_default().push(CellEntry {
                    degree: model.degree(&x),
                    label: model.label(&x),
                });
            }
        }
        for v in cells.values_mut() {
            v.sort_by(|a, b| (a.degree, &a.label).cmp(&(b.degree, &b.label)));
        }
        out.push(IncrementalTable { added, cells });
    }
    Ok(out)
}

/// Renders filtration-indexed cells as a two-row tab-separated table with
/// columns `0 ..= max_weight` and `0` for empty cells.
pub fn render_cells(cells: &BTreeMap<u64, Vec<CellEntry>>, max_weight: u64) -> String {
    let mut head = vec!["filtration".to_string()];
    let mut row = vec!["classes".to_string()];
    for w in 0..=max_weight {
        head.push(w.to_string());
        match cells.get(&w) {
            Some(v) if !v.is_empty() => {
                row.push(v.iter().map(|c| c.label.as_str()).collect::<Vec<_>>().join(", "))
            }
            _ => row.push("0".into()),
        }
    }
    format!("{}\n{}\n", head.join("\t"), row.join("\t"))
}

/// True when no coordinate carries an `E` generator, so the model has no differential.
pub fn has_trivial_differential(model: &ChainModel) -> bool {
    (1..=model.m()).all(|i| model.choices(i).iter().all(|g| g.part != Part::E))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::{PrimeField, Preset, Rationals};

    fn three_points() -> SimplicialComplex {
        SimplicialComplex::from_facets(3, &[vec![1], vec![2], vec![3]]).unwrap()
    }

    #[test]
    fn three_points_smash() {
        let k = three_points();
        let model = ChainModel::full(&k, &Preset::DiskSphere1.data(3), Variant::Smash).unwrap();
        let ss = SpectralSequence::build_e1(model, Rationals).unwrap();
        let pages = ss.run_to_einfty().unwrap();
        let last = pages.last().unwrap();
        let cells = ss.cells(last);
        let labels: Vec<(u64, String)> = cells
            .iter()
            .flat_map(|(w, v)| v.iter().map(move |c| (*w, c.label.clone())))
            .collect();
        assert_eq!(
            labels,
            vec![(2, "e0⊗w1⊗e0".to_string()), (3, "e0⊗e0⊗w1".to_string())]
        );
        assert_eq!(ss.series(last).to_string(), "2t");
    }

    #[test]
    fn shape_path_matches_explicit_pages() {
        let k = SimplicialComplex::polygon(4);
        for preset in Preset::ALL {
            for variant in [Variant::Product, Variant::Smash] {
                let pair = preset.data(4);
                let ss = SpectralSequence::build_e1(
                    ChainModel::full(&k, &pair, variant).unwrap(),
                    Rationals,
                )
                .unwrap();
                let pages = ss.run_to_einfty().unwrap();
                let fast =
                    page_series_by_shape(&k, &pair, variant, Simplex::full(4), &Rationals).unwrap();
                assert_eq!(pages.len(), fast.len());
                for (p, s) in pages.iter().zip(&fast) {
                    assert_eq!(&ss.series(p), s, "{} page {}", preset.name(), p.r);
                }
            }
        }
    }

    #[test]
    fn prime_field_runs() {
        let k = SimplicialComplex::polygon(5);
        let pair = Preset::DiskSphere1.data(5);
        let f = PrimeField::new(3).unwrap();
        let s = einfty_series(&k, &pair, Variant::Product, &f).unwrap();
        assert_eq!(s.to_string(), "1+10t+t^2");
    }

    #[test]
    fn incremental_three_vertex_tables() {
        let k = SimplicialComplex::simplex(3);
        let tables = incremental_tables(&k, &Preset::DiskSphere1.data(3), Variant::Smash, &Rationals).unwrap();
        let rendered: Vec<Vec<(u64, String)>> = tables
            .iter()
            .map(|t| {
                t.cells
                    .iter()
                    .flat_map(|(w, v)| v.iter().map(move |c| (*w, c.label.clone())))
                    .collect()
            })
            .collect();
        let expected: Vec<Vec<(u64, &str)>> = vec![
            vec![(0, "e0⊗e0⊗e0"), (1, "w1⊗e0⊗e0"), (2, "e0⊗w1⊗e0"), (3, "e0⊗e0⊗w1")],
            vec![(2, "e0⊗w1⊗e0"), (3, "e0⊗e0⊗w1"), (4, "w1⊗w1⊗e0")],
            vec![(3, "e0⊗e0⊗w1"), (5, "w1⊗e0⊗w1")],
            vec![(6, "e0⊗w1⊗w1")],
            vec![(6, "e0⊗w1⊗w1"), (7, "w1⊗w1⊗w1")],
        ];
        let expected: Vec<Vec<(u64, String)>> = expected
            .into_iter()
            .map(|t| t.into_iter().map(|(w, l)| (w, l.to_string())).collect())
            .collect();
        assert_eq!(rendered, expected);
    }
}
