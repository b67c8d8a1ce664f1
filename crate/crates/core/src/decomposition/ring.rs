//! Products in the decomposition basis.
//!
//! A basis element `n ⊗ a_1 ⊗ ... ⊗ a_m` is lifted to a cocycle of the
//! filtered cochain model: a link cocycle `Σ c_γ y_γ` of `C_N` becomes
//! `Σ ± c_γ m(γ)` where `m(γ)` has `W` on `γ`, `E` on `J - γ` and the fixed
//! `B`/`C` generators on `I`. Products are taken there and the result is
//! split into blocks, each of which is again a link cocycle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::graded_algebra::pair::{CoordGen, Part};
use crate::graded_algebra::{CohomologyBasis, PairData};
use crate::realmac_chain::CkBlock;
use crate::simplicial::{Simplex, SimplicialComplex, VertexSet};
use crate::spectral::{Chain, ChainModel, Monomial};
use crate::Variant;

use super::{index_pairs, summand_factors, DecompositionError};

/// A basis element: summand `(set, sigma)`, link class and one generator
/// per coordinate (`E` generators on the complement of `set`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisKey {
    pub set: VertexSet,
    pub sigma: Simplex,
    pub link_degree: usize,
    /// Free classes first, then torsion classes.
    pub link_index: usize,
    pub gens: Vec<CoordGen>,
}

/// Integer combination of basis elements; torsion coordinates are reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingElement {
    pub terms: BTreeMap<BasisKey, i64>,
}

impl RingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: BasisKey) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(key, 1);
        RingElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: BasisKey, c: i64, order: Option<i64>) {
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e += c;
        if let Some(o) = order {
            *e = e.rem_euclid(o);
        }
        if *e == 0 {
            self.terms.remove(&key);
        }
    }
}

struct LinkData {
    block: CkBlock,
    bases: Vec<CohomologyBasis>,
    index: Vec<HashMap<Simplex, usize>>,
}

/// The multiplicative structure on the decomposition, over the integers.
pub struct DecompositionRing {
    model: ChainModel,
    variant: Variant,
    links: HashMap<(VertexSet, Simplex), LinkData>,
}

impl DecompositionRing {
    pub fn new(k: &SimplicialComplex, pair: &PairData, variant: Variant) -> Result<Self, DecompositionError> {
        let model = ChainModel::full(k, pair, variant)?;
        let m = k.m();
        let mut links = HashMap::new();
        for (set, sigma) in index_pairs(k) {
            let n = k.link_complement(set, sigma)?;
            let block = CkBlock::new(&n, Simplex::full(m).difference(set));
            let bases = block.integral_cohomology()?;
            let index = block
                .gens_by_degree
                .iter()
                .map(|g| g.iter().enumerate().map(|(i, &s)| (s, i)).collect())
                .collect();
            links.insert((set, sigma), LinkData { block, bases, index });
        }
        Ok(DecompositionRing { model, variant, links })
    }

    pub fn model(&self) -> &ChainModel {
        &self.model
    }

    fn pair(&self) -> &PairData {
        self.model.pair()
    }

    /// All basis elements, ordered by summand, link class and generators.
    pub fn basis(&self) -> Vec<BasisKey> {
        let mut out = Vec::new();
        for (set, sigma) in index_pairs(self.model.complex()) {
            let factors = summand_factors(self.pair(), self.variant, set, sigma);
            if factors.iter().any(|f| f.is_empty()) {
                continue;
            }
            let link = &self.links[&(set, sigma)];
            let mut choices: Vec<Vec<CoordGen>> = vec![Vec::new()];
            for f in &factors {
                choices = choices
                    .into_iter()
                    .flat_map(|c| {
                        f.iter().map(move |&g| {
                            let mut c = c.clone();
                            c.push(g);
                            c
                        })
                    })
                    .collect();
            }
            for (d, b) in link.bases.iter().enumerate() {
                for idx in 0..b.len() {
                    for gens in &choices {
                        out.push(BasisKey {
                            set,
                            sigma,
                            link_degree: d,
                            link_index: idx,
                            gens: gens.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn degree(&self, key: &BasisKey) -> i64 {
        let gens: i64 = key
            .gens
            .iter()
            .enumerate()
            .map(|(i, &g)| self.pair().vertex(i + 1).deg(g))
            .sum();
        gens + key.link_degree as i64
    }

    /// Order of the link class, if it is a torsion class.
    pub fn torsion_order(&self, key: &BasisKey) -> Option<i64> {
        let b = &self.links[&(key.set, key.sigma)].bases[key.link_degree];
        key.link_index
            .checked_sub(b.rank())
            .map(|t| b.torsion[t].0)
    }

    /// Label such as `[S1:0] b4⊗e2⊗e2`.
    pub fn label(&self, key: &BasisKey) -> String {
        let gens: Vec<&str> = key
            .gens
            .iter()
            .enumerate()
            .map(|(i, &g)| self.pair().vertex(i + 1).label(g))
            .collect();
        format!(
            "n{}{}[{}]({})",
            key.link_degree,
            match self.torsion_order(key) {
                Some(o) => format!("/{o}"),
                None => String::new(),
            },
            key.link_index,
            gens.join("⊗")
        )
    }

    /// `(-1)^{|fixed generators left of v| + |E generators of J left of v|}`,
    /// accumulated over `v ∈ γ`.
    fn lift_sign(&self, gens: &[CoordGen], gamma: Simplex) -> i64 {
        let mut parity = 0i64;
        for v in gamma.vertices() {
            for (i, &g) in gens.iter().enumerate().take(v - 1) {
                parity += self.pair().vertex(i + 1).deg(g);
            }
        }
        if parity % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn monomial(&self, gens: &[CoordGen], gamma: Simplex) -> Monomial {
        Monomial(
            gens.iter()
                .enumerate()
                .map(|(i, &g)| {
                    Some(if gamma.contains(i + 1) {
                        CoordGen::new(Part::W, g.index)
                    } else {
                        g
                    })
                })
                .collect(),
        )
    }

    /// The cocycle of the model representing a basis element.
    pub fn lift(&self, key: &BasisKey) -> Result<Chain, DecompositionError> {
        let link = self
            .links
            .get(&(key.set, key.sigma))
            .ok_or_else(|| DecompositionError::NotInBasis(format!("{key:?}")))?;
        let b = link
            .bases
            .get(key.link_degree)
            .ok_or_else(|| DecompositionError::NotInBasis(format!("{key:?}")))?;
        let rep = if key.link_index < b.rank() {
            &b.free[key.link_index]
        } else {
            &b.torsion
                .get(key.link_index - b.rank())
                .ok_or_else(|| DecompositionError::NotInBasis(format!("{key:?}")))?
                .1
        };
        let mut out = Chain::new();
        for (i, &c) in rep.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let gamma = link.block.gens_by_degree[key.link_degree][i];
            out.insert(self.monomial(&key.gens, gamma), c * self.lift_sign(&key.gens, gamma));
        }
        Ok(out)
    }

    /// Class of a model cocycle in the decomposition basis.
    pub fn project(&self, chain: &Chain) -> Result<RingElement, DecompositionError> {
        type Group = (VertexSet, Simplex, Vec<CoordGen>, usize);
        let mut groups: BTreeMap<Group, Vec<(Simplex, i64)>> = BTreeMap::new();
        for (x, &c) in chain {
            let mut set = Simplex::EMPTY;
            let mut sigma = Simplex::EMPTY;
            let mut gamma = Simplex::EMPTY;
            let mut gens = Vec::with_capacity(x.0.len());
            for (i, g) in x.0.iter().enumerate() {
                let g = g.ok_or_else(|| DecompositionError::NotInBasis(self.model.label(x)))?;
                let v = self.pair().vertex(i + 1);
                if self.variant == Variant::Smash && v.is_unit(g) {
                    return Err(DecompositionError::NotInBasis(self.model.label(x)));
                }
                match g.part {
                    Part::B => set = set.with(i + 1),
                    Part::C => {
                        set = set.with(i + 1);
                        sigma = sigma.with(i + 1);
                    }
                    Part::E => {}
                    Part::W => gamma = gamma.with(i + 1),
                }
                gens.push(match g.part {
                    Part::W => CoordGen::new(Part::E, g.index),
                    _ => g,
                });
            }
            let sign = self.lift_sign(&gens, gamma);
            groups
                .entry((set, sigma, gens, gamma.len()))
                .or_default()
                .push((gamma, c * sign));
        }
        let mut out = RingElement::zero();
        for ((set, sigma, gens, deg), terms) in groups {
            let link = self
                .links
                .get(&(set, sigma))
                .ok_or_else(|| DecompositionError::NotInBasis(format!("({set}, {sigma})")))?;
            let Some(index) = link.index.get(deg) else {
                return Err(DecompositionError::NotInBasis(format!("degree {deg}")));
            };
            let mut v = vec![0i64; index.len()];
            for (gamma, c) in terms {
                let i = index
                    .get(&gamma)
                    .ok_or_else(|| DecompositionError::NotInBasis(format!("{gamma}")))?;
                v[*i] += c;
            }
            let b = &link.bases[deg];
            let coords = b.coordinates(&v)?;
            for (idx, &c) in coords.iter().enumerate() {
                let key = BasisKey {
                    set,
                    sigma,
                    link_degree: deg,
                    link_index: idx,
                    gens: gens.clone(),
                };
                let order = idx.checked_sub(b.rank()).map(|t| b.torsion[t].0);
                out.add_term(key, c, order);
            }
        }
        Ok(out)
    }

    pub fn product_keys(&self, x: &BasisKey, y: &BasisKey) -> Result<RingElement, DecompositionError> {
        let p = self.model.product_chains(&self.lift(x)?, &self.lift(y)?);
        self.project(&p)
    }

    pub fn product(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, DecompositionError> {
        let mut out = RingElement::zero();
        for (a, &ca) in &x.terms {
            for (b, &cb) in &y.terms {
                for (key, c) in self.product_keys(a, b)?.terms {
                    let order = self.torsion_order(&key);
                    out.add_term(key, c * ca * cb, order);
                }
            }
        }
        Ok(out)
    }

    /// The unit class (product variant only).
    pub fn unit(&self) -> Option<BasisKey> {
        self.model.unit()?;
        let m = self.model.m();
        Some(BasisKey {
            set: Simplex::full(m),
            sigma: Simplex::EMPTY,
            link_degree: 0,
            link_index: 0,
            gens: (1..=m).map(|i| self.pair().vertex(i).unit()).collect(),
        })
    }

    pub fn format(&self, x: &RingElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, &c)) in x.terms.iter().enumerate() {
            let (neg, mag) = (c < 0, c.abs());
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != 1 {
                out.push_str(&format!("{mag}·"));
            }
            out.push_str(&self.label(k));
        }
        out
    }
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}:{})", self.set, self.sigma, self.link_degree, self.link_index)
    }
}
