//! The filtered cochain model whose spectral sequence is studied here.
//!
//! A basis monomial picks one generator per coordinate: from `B`, `C`, `E`
//! or `W` (with the unit allowed only for the unreduced variant). Its
//! support is the set of `C` and `W` positions and must be a face of `K`;
//! its filtration is the lex weight of the support. The differential
//! replaces one `E` by its `δ`-image, which strictly raises the weight.

use std::collections::BTreeMap;

use crate::graded_algebra::pair::{CoordGen, Part};
use crate::graded_algebra::PairData;
use crate::simplicial::{lex_weight, Simplex, SimplicialComplex, VertexSet};
use crate::Variant;

use super::SpectralError;

/// One generator per coordinate; `None` outside the coordinate set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<Option<CoordGen>>);

/// Integral cochain of the model.
pub type Chain = BTreeMap<Monomial, i64>;

/// Per-coordinate part of a block key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SkeletonSlot {
    Absent,
    /// A fixed `B` or `C` generator.
    Fixed(CoordGen),
    /// An `E` generator or its `δ`-image.
    Pair(usize),
}

/// Block key: the differential never changes it.
pub type Skeleton = Vec<SkeletonSlot>;

/// A `δ`-invariant summand of the model.
#[derive(Clone, Debug)]
pub struct Block {
    pub skeleton: Skeleton,
    /// Coordinates carrying an `E`/`W` pair.
    pub pairs: VertexSet,
    /// Coordinates carrying a `C` generator.
    pub sigma: Simplex,
    /// Coordinates carrying a `B` generator (including the unit).
    pub b_positions: VertexSet,
    /// Elements indexed by the set `γ ⊆ pairs` of `W` positions.
    pub elements: Vec<Monomial>,
    pub gammas: Vec<Simplex>,
}

#[derive(Clone, Debug)]
pub struct ChainModel {
    k: SimplicialComplex,
    pair: PairData,
    variant: Variant,
    coords: VertexSet,
}

fn add(chain: &mut Chain, m: Monomial, c: i64) {
    if c == 0 {
        return;
    }
    let e = chain.entry(m.clone()).or_insert(0);
    *e += c;
    if *e == 0 {
        chain.remove(&m);
    }
}

impl ChainModel {
    /// Model of the given variant restricted to the coordinates `coords`
    /// (with `K` replaced by the full subcomplex on `coords`).
    pub fn new(
        k: &SimplicialComplex,
        pair: &PairData,
        variant: Variant,
        coords: VertexSet,
    ) -> Result<ChainModel, SpectralError> {
        if pair.m() != k.m() {
            return Err(SpectralError::VertexCount {
                pair: pair.m(),
                complex: k.m(),
            });
        }
        let coords = coords.intersection(Simplex::full(k.m()));
        Ok(ChainModel {
            k: k.full_subcomplex(coords),
            pair: pair.clone(),
            variant,
            coords,
        })
    }

    pub fn full(k: &SimplicialComplex, pair: &PairData, variant: Variant) -> Result<ChainModel, SpectralError> {
        Self::new(k, pair, variant, Simplex::full(k.m()))
    }

    pub fn m(&self) -> usize {
        self.k.m()
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.k
    }

    pub fn pair(&self) -> &PairData {
        &self.pair
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn coords(&self) -> VertexSet {
        self.coords
    }

    /// Generators allowed at coordinate `i` (1-based).
    pub fn choices(&self, i: usize) -> Vec<CoordGen> {
        if !self.coords.contains(i) {
            return Vec::new();
        }
        let v = self.pair.vertex(i);
        v.basis()
            .into_iter()
            .filter(|&g| self.variant == Variant::Product || !v.is_unit(g))
            .collect()
    }

    pub fn support(&self, x: &Monomial) -> Simplex {
        let mut s = Simplex::EMPTY;
        for (i, g) in x.0.iter().enumerate() {
            if let Some(g) = g {
                if matches!(g.part, Part::C | Part::W) {
                    s = s.with(i + 1);
                }
            }
        }
        s
    }

    pub fn degree(&self, x: &Monomial) -> i64 {
        x.0.iter()
            .enumerate()
            .filter_map(|(i, g)| g.map(|g| self.pair.vertex(i + 1).deg(g)))
            .sum()
    }

    pub fn weight(&self, x: &Monomial) -> u64 {
        lex_weight(self.support(x), self.m())
    }

    pub fn is_valid(&self, x: &Monomial) -> bool {
        x.0.len() == self.m()
            && x.0.iter().enumerate().all(|(i, g)| match g {
                None => !self.coords.contains(i + 1),
                Some(g) => self.choices(i + 1).contains(g),
            })
            && self.k.contains(self.support(x))
    }

    /// Differential of one monomial.
    pub fn differential(&self, x: &Monomial) -> Vec<(Monomial, i64)> {
        let supp = self.support(x);
        let mut out = Vec::new();
        let mut parity = 0i64;
        for (i, g) in x.0.iter().enumerate() {
            let Some(g) = *g else { continue };
            let v = self.pair.vertex(i + 1);
            if let Some(w) = v.delta(g) {
                if self.k.contains(supp.with(i + 1)) {
                    let mut y = x.clone();
                    y.0[i] = Some(w);
                    out.push((y, if parity % 2 == 0 { 1 } else { -1 }));
                }
            }
            parity += v.deg(g);
        }
        out
    }

    pub fn coboundary(&self, c: &Chain) -> Chain {
        let mut out = Chain::new();
        for (x, &a) in c {
            for (y, s) in self.differential(x) {
                add(&mut out, y, s * a);
            }
        }
        out
    }

    /// Product of monomials: coordinatewise products with the Koszul sign,
    /// dropping terms whose support is not a face.
    pub fn product(&self, x: &Monomial, y: &Monomial) -> Vec<(Monomial, i64)> {
        let m = self.m();
        // Sign of moving each y_j past x_i for i > j.
        let mut swaps = 0i64;
        let mut ydeg = 0i64;
        for i in 0..m {
            if let Some(g) = x.0[i] {
                swaps += ydeg * self.pair.vertex(i + 1).deg(g);
            }
            if let Some(g) = y.0[i] {
                ydeg += self.pair.vertex(i + 1).deg(g);
            }
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        let mut partial: Vec<(Vec<Option<CoordGen>>, i64)> = vec![(Vec::with_capacity(m), sign)];
        for i in 0..m {
            match (x.0[i], y.0[i]) {
                (None, None) => {
                    for p in partial.iter_mut() {
                        p.0.push(None);
                    }
                }
                (Some(a), Some(b)) => {
                    let prod = self.pair.vertex(i + 1).coord_product(a, b);
                    if prod.is_empty() {
                        return Vec::new();
                    }
                    let mut next = Vec::with_capacity(partial.len() * prod.len());
                    for (p, c) in &partial {
                        for &(g, k) in &prod {
                            let mut q = p.clone();
                            q.push(Some(g));
                            next.push((q, c * k));
                        }
                    }
                    partial = next;
                }
                _ => return Vec::new(),
            }
        }
        partial
            .into_iter()
            .map(|(p, c)| (Monomial(p), c))
            .filter(|(p, _)| self.k.contains(self.support(p)))
            .collect()
    }

    pub fn product_chains(&self, x: &Chain, y: &Chain) -> Chain {
        let mut out = Chain::new();
        for (a, &ca) in x {
            for (b, &cb) in y {
                for (p, s) in self.product(a, b) {
                    add(&mut out, p, s * ca * cb);
                }
            }
        }
        out
    }

    pub fn unit(&self) -> Option<Monomial> {
        if self.variant != Variant::Product {
            return None;
        }
        Some(Monomial(
            (1..=self.m())
                .map(|i| self.coords.contains(i).then(|| self.pair.vertex(i).unit()))
                .collect(),
        ))
    }

    /// Tensor label such as `e0⊗w1⊗e0`.
    pub fn label(&self, x: &Monomial) -> String {
        let parts: Vec<&str> = x
            .0
            .iter()
            .enumerate()
            .filter_map(|(i, g)| g.map(|g| self.pair.vertex(i + 1).label(g)))
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("⊗")
        }
    }

    pub fn skeleton(&self, x: &Monomial) -> Skeleton {
        x.0.iter()
            .map(|g| match g {
                None => SkeletonSlot::Absent,
                Some(g) if matches!(g.part, Part::E | Part::W) => SkeletonSlot::Pair(g.index),
                Some(g) => SkeletonSlot::Fixed(*g),
            })
            .collect()
    }

    /// All basis monomials, in block order.
    pub fn enumerate(&self) -> Vec<Monomial> {
        self.blocks().into_iter().flat_map(|b| b.elements).collect()
    }

    /// All blocks, ordered by skeleton.
    pub fn blocks(&self) -> Vec<Block> {
        let m = self.m();
        let slot_choices: Vec<Vec<SkeletonSlot>> = (1..=m)
            .map(|i| {
                let ch = self.choices(i);
                if !self.coords.contains(i) {
                    return vec![SkeletonSlot::Absent];
                }
                let mut out: Vec<SkeletonSlot> = ch
                    .iter()
                    .filter(|g| matches!(g.part, Part::B | Part::C))
                    .map(|&g| SkeletonSlot::Fixed(g))
                    .collect();
                out.extend(
                    ch.iter()
                        .filter(|g| g.part == Part::E)
                        .map(|g| SkeletonSlot::Pair(g.index)),
                );
                out
            })
            .collect();
        let mut out = Vec::new();
        let mut cur: Skeleton = Vec::with_capacity(m);
        self.blocks_rec(&slot_choices, &mut cur, Simplex::EMPTY, &mut out);
        out
    }

    fn blocks_rec(
        &self,
        choices: &[Vec<SkeletonSlot>],
        cur: &mut Skeleton,
        sigma: Simplex,
        out: &mut Vec<Block>,
    ) {
        let i = cur.len();
        if i == choices.len() {
            out.push(self.block_of(cur.clone()));
            return;
        }
        for &slot in &choices[i] {
            let next_sigma = match slot {
                SkeletonSlot::Fixed(g) if g.part == Part::C => sigma.with(i + 1),
                _ => sigma,
            };
            if !self.k.contains(next_sigma) {
                continue;
            }
            cur.push(slot);
            self.blocks_rec(choices, cur, next_sigma, out);
            cur.pop();
        }
    }

    /// Builds the block of a skeleton.
    pub fn block_of(&self, skeleton: Skeleton) -> Block {
        let mut pairs = Simplex::EMPTY;
        let mut sigma = Simplex::EMPTY;
        let mut b_positions = Simplex::EMPTY;
        for (i, s) in skeleton.iter().enumerate() {
            match s {
                SkeletonSlot::Pair(_) => pairs = pairs.with(i + 1),
                SkeletonSlot::Fixed(g) if g.part == Part::C => sigma = sigma.with(i + 1),
                SkeletonSlot::Fixed(_) => b_positions = b_positions.with(i + 1),
                SkeletonSlot::Absent => {}
            }
        }
        let mut gammas: Vec<Simplex> = pairs
            .subsets()
            .filter(|g| self.k.contains(g.union(sigma)))
            .collect();
        gammas.sort_by_key(|g| lex_weight(g.union(sigma), self.m()));
        let elements = gammas
            .iter()
            .map(|g| {
                Monomial(
                    skeleton
                        .iter()
                        .enumerate()
                        .map(|(i, s)| match *s {
                            SkeletonSlot::Absent => None,
                            SkeletonSlot::Fixed(x) => Some(x),
                            SkeletonSlot::Pair(e) => Some(CoordGen::new(
                                if g.contains(i + 1) { Part::W } else { Part::E },
                                e,
                            )),
                        })
                        .collect(),
                )
            })
            .collect();
        Block {
            skeleton,
            pairs,
            sigma,
            b_positions,
            elements,
            gammas,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::Preset;

    fn three_points() -> SimplicialComplex {
        SimplicialComplex::from_facets(3, &[vec![1], vec![2], vec![3]]).unwrap()
    }

    #[test]
    fn smash_model_of_three_points() {
        let k = three_points();
        let model = ChainModel::full(&k, &Preset::DiskSphere1.data(3), Variant::Smash).unwrap();
        let all = model.enumerate();
        let labels: Vec<(u64, String)> = all.iter().map(|x| (model.weight(x), model.label(x))).collect();
        assert_eq!(
            labels,
            vec![
                (0, "e0⊗e0⊗e0".to_string()),
                (1, "w1⊗e0⊗e0".to_string()),
                (2, "e0⊗w1⊗e0".to_string()),
                (3, "e0⊗e0⊗w1".to_string()),
            ]
        );
        let d = model.differential(&all[0]);
        assert_eq!(d.len(), 3);
        assert!(d.iter().all(|(_, s)| *s == 1));
    }

    #[test]
    fn differential_squares_to_zero() {
        let k = SimplicialComplex::polygon(4);
        for preset in Preset::ALL {
            for variant in [Variant::Product, Variant::Smash] {
                let model = ChainModel::full(&k, &preset.data(4), variant).unwrap();
                for x in model.enumerate() {
                    let mut c = Chain::new();
                    c.insert(x.clone(), 1);
                    let dd = model.coboundary(&model.coboundary(&c));
                    assert!(dd.is_empty(), "{}", model.label(&x));
                    for (y, _) in model.differential(&x) {
                        assert!(model.weight(&y) > model.weight(&x));
                        assert_eq!(model.degree(&y), model.degree(&x) + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn block_sizes_add_up() {
        let k = SimplicialComplex::polygon(5);
        let model = ChainModel::full(&k, &Preset::Mixed.data(5), Variant::Product).unwrap();
        let total: usize = model.blocks().iter().map(|b| b.elements.len()).sum();
        assert_eq!(total, model.enumerate().len());
        assert!(model.enumerate().iter().all(|x| model.is_valid(x)));
    }
}
