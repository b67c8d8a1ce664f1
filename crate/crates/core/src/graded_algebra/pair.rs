//! Cohomological data of a pair `(X, A)` at each vertex.
//!
//! Each vertex carries graded bases `E`, `B`, `C`, `W` with
//! `H*(A) = E ⊕ B`, `H*(X) = B ⊕ C`, `H̃*(X/A) = C ⊕ W` and a degree one
//! bijection `δ: E -> W`. The unit `1` lives in `B`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reserved label of the unit.
pub const UNIT_LABEL: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub label: String,
    pub deg: i64,
}

/// Explicit `δ` target; when absent, `W` is derived from `E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaSpec {
    pub label: String,
    pub deg: i64,
    pub from: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub gen: String,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSpec {
    pub a: String,
    pub b: String,
    pub result: Vec<TermSpec>,
}

/// Per-vertex input record.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    #[serde(rename = "E", default)]
    pub e: Vec<GeneratorSpec>,
    #[serde(rename = "B", default)]
    pub b: Vec<GeneratorSpec>,
    #[serde(rename = "C", default)]
    pub c: Vec<GeneratorSpec>,
    #[serde(rename = "W", default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<DeltaSpec>>,
    #[serde(rename = "productX", default)]
    pub product_x: Vec<ProductSpec>,
    #[serde(rename = "productA", default)]
    pub product_a: Vec<ProductSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<i64>,
}

/// Either one record used at every vertex, or one record per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairSpec {
    PerVertex { vertices: Vec<VertexSpec> },
    Uniform(VertexSpec),
}

impl PairSpec {
    pub fn from_json(text: &str) -> Result<PairSpec, PairError> {
        serde_json::from_str(text).map_err(|e| PairError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error("malformed pair data: {0}")]
    Parse(String),
    #[error("pair data lists {given} vertices, complex has {m}")]
    VertexCount { given: usize, m: usize },
    #[error("vertex {vertex}: B must contain the unit \"1\" in degree 0")]
    MissingUnit { vertex: usize },
    #[error("vertex {vertex}: label {label:?} is used twice")]
    DuplicateLabel { vertex: usize, label: String },
    #[error("vertex {vertex}: label {label:?} is reserved for the unit of B")]
    ReservedLabel { vertex: usize, label: String },
    #[error("vertex {vertex}: generator {label:?} has negative degree {deg}")]
    NegativeDegree { vertex: usize, label: String, deg: i64 },
    #[error("vertex {vertex}: unknown generator {label:?} in {context}")]
    UnknownGenerator { vertex: usize, label: String, context: String },
    #[error("vertex {vertex}: δ({from}) = {label} has degree {deg}, expected {expected}")]
    DeltaDegree { vertex: usize, from: String, label: String, deg: i64, expected: i64 },
    #[error("vertex {vertex}: δ is not a bijection E -> W ({reason})")]
    DeltaNotBijective { vertex: usize, reason: String },
    #[error("vertex {vertex}: {table} product {a}·{b} is not homogeneous ({gen} has degree {deg}, expected {expected})")]
    Inhomogeneous { vertex: usize, table: &'static str, a: String, b: String, gen: String, deg: i64, expected: i64 },
    #[error("vertex {vertex}: {table} product {a}·{b} lands in degree {deg} above max_degree {max}")]
    DegreeBound { vertex: usize, table: &'static str, a: String, b: String, deg: i64, max: i64 },
    #[error("vertex {vertex}: {table} product {a}·{b} listed twice")]
    DuplicateProduct { vertex: usize, table: &'static str, a: String, b: String },
    #[error("vertex {vertex}: {table} product with the unit must be the identity ({a}·{b})")]
    UnitLaw { vertex: usize, table: &'static str, a: String, b: String },
    #[error("vertex {vertex}: {table} product {a}·{b} involves {label:?}, which is not in {ring}")]
    WrongRing { vertex: usize, table: &'static str, a: String, b: String, label: String, ring: &'static str },
    #[error("vertex {vertex}: {table} is not graded commutative at {a}·{b}")]
    NotCommutative { vertex: usize, table: &'static str, a: String, b: String },
    #[error("vertex {vertex}: {table} is not associative at ({a}·{b})·{c}")]
    NotAssociative { vertex: usize, table: &'static str, a: String, b: String, c: String },
    #[error("vertex {vertex}: C is not an ideal of H*(X): {a}·{b} has a B component")]
    NotAnIdeal { vertex: usize, a: String, b: String },
    #[error("vertex {vertex}: restriction H*(X) -> H*(A) is not multiplicative at {a}·{b}")]
    RestrictionNotMultiplicative { vertex: usize, a: String, b: String },
    #[error("vertex {vertex}: cochain model is not {property} at {detail}")]
    CoordinateAlgebra { vertex: usize, property: &'static str, detail: String },
}

/// Which basis a generator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    B,
    C,
    E,
    W,
}

/// A basis element at one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordGen {
    pub part: Part,
    pub index: usize,
}

impl CoordGen {
    pub fn new(part: Part, index: usize) -> Self {
        CoordGen { part, index }
    }
}

/// Sparse integer combination of basis elements, sorted and without zeros.
pub type Combination = Vec<(CoordGen, i64)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub deg: i64,
}

/// Validated data at one vertex.
#[derive(Clone, Debug)]
pub struct VertexData {
    pub e: Vec<Generator>,
    pub b: Vec<Generator>,
    pub c: Vec<Generator>,
    /// `w[i] = δ(e[i])`.
    pub w: Vec<Generator>,
    unit: usize,
    product_x: HashMap<(CoordGen, CoordGen), Combination>,
    product_a: HashMap<(CoordGen, CoordGen), Combination>,
    pub max_degree: Option<i64>,
}

/// Validated pair data for all vertices.
#[derive(Clone, Debug)]
pub struct PairData {
    vertices: Vec<VertexData>,
}

/// All problems found in a pair description.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub errors: Vec<PairError>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.errors.is_empty() {
            return write!(f, "ok");
        }
        for (i, e) in self.errors.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Checks a description against `m` vertices, collecting every error.
pub fn validate_pair_data(spec: &PairSpec, m: usize) -> ValidationReport {
    let mut report = ValidationReport::default();
    let records: Vec<&VertexSpec> = match spec {
        PairSpec::Uniform(v) => vec![v; m],
        PairSpec::PerVertex { vertices } => {
            if vertices.len() != m {
                report.errors.push(PairError::VertexCount {
                    given: vertices.len(),
                    m,
                });
                return report;
            }
            vertices.iter().collect()
        }
    };
    // Identical records need only be checked once.
    let mut seen: Vec<(&VertexSpec, usize)> = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        if seen.iter().any(|(r, _)| *r == *rec) {
            continue;
        }
        seen.push((rec, i));
        if let Err(errs) = VertexData::build(rec, i + 1) {
            report.errors.extend(errs);
        }
    }
    report
}

impl PairData {
    /// Validates and builds; reports the first error.
    pub fn new(spec: &PairSpec, m: usize) -> Result<PairData, PairError> {
        let records: Vec<&VertexSpec> = match spec {
            PairSpec::Uniform(v) => vec![v; m],
            PairSpec::PerVertex { vertices } => {
                if vertices.len() != m {
                    return Err(PairError::VertexCount {
                        given: vertices.len(),
                        m,
                    });
                }
                vertices.iter().collect()
            }
        };
        let mut out: Vec<VertexData> = Vec::with_capacity(m);
        let mut cache: Vec<(&VertexSpec, usize)> = Vec::new();
        for (i, rec) in records.iter().enumerate() {
            if let Some(&(_, j)) = cache.iter().find(|(r, _)| *r == *rec) {
                let copy = out[j].clone();
                out.push(copy);
                continue;
            }
            let v = VertexData::build(rec, i + 1).map_err(|mut e| e.swap_remove(0))?;
            cache.push((rec, i));
            out.push(v);
        }
        Ok(PairData { vertices: out })
    }

    pub fn uniform(spec: &VertexSpec, m: usize) -> Result<PairData, PairError> {
        Self::new(&PairSpec::Uniform(spec.clone()), m)
    }

    pub fn m(&self) -> usize {
        self.vertices.len()
    }

    /// Data at vertex `i` (1-based).
    pub fn vertex(&self, i: usize) -> &VertexData {
        &self.vertices[i - 1]
    }

    pub fn vertices(&self) -> &[VertexData] {
        &self.vertices
    }

    /// True when every `E` is empty.
    pub fn has_no_e(&self) -> bool {
        self.vertices.iter().all(|v| v.e.is_empty())
    }

    /// First vertex with a nonempty `E`.
    pub fn first_vertex_with_e(&self) -> Option<usize> {
        self.vertices.iter().position(|v| !v.e.is_empty()).map(|i| i + 1)
    }
}

fn add_into(acc: &mut BTreeMap<CoordGen, i64>, comb: &[(CoordGen, i64)], k: i64) {
    for &(g, c) in comb {
        let e = acc.entry(g).or_insert(0);
        *e += c * k;
        if *e == 0 {
            acc.remove(&g);
        }
    }
}

fn to_comb(acc: BTreeMap<CoordGen, i64>) -> Combination {
    acc.into_iter().filter(|e| e.1 != 0).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Table {
    X,
    A,
}

impl Table {
    fn name(self) -> &'static str {
        match self {
            Table::X => "productX",
            Table::A => "productA",
        }
    }

    fn ring(self) -> &'static str {
        match self {
            Table::X => "H*(X) = B ⊕ C",
            Table::A => "H*(A) = E ⊕ B",
        }
    }

    fn allows(self, p: Part) -> bool {
        matches!(
            (self, p),
            (Table::X, Part::B) | (Table::X, Part::C) | (Table::A, Part::B) | (Table::A, Part::E)
        )
    }
}

impl VertexData {
    fn build(spec: &VertexSpec, vertex: usize) -> Result<VertexData, Vec<PairError>> {
        let mut errs = Vec::new();
        let conv = |list: &[GeneratorSpec]| -> Vec<Generator> {
            list.iter()
                .map(|g| Generator {
                    label: g.label.clone(),
                    deg: g.deg,
                })
                .collect()
        };
        let e = conv(&spec.e);
        let b = conv(&spec.b);
        let c = conv(&spec.c);

        let unit = b.iter().position(|g| g.label == UNIT_LABEL);
        match unit {
            Some(u) if b[u].deg == 0 => {}
            _ => errs.push(PairError::MissingUnit { vertex }),
        }
        for g in e.iter().chain(&c) {
            if g.label == UNIT_LABEL {
                errs.push(PairError::ReservedLabel {
                    vertex,
                    label: g.label.clone(),
                });
            }
        }
        for g in e.iter().chain(&b).chain(&c) {
            if g.deg < 0 {
                errs.push(PairError::NegativeDegree {
                    vertex,
                    label: g.label.clone(),
                    deg: g.deg,
                });
            }
        }

        let mut labels: HashMap<String, CoordGen> = HashMap::new();
        let mut register = |label: &str, g: CoordGen, errs: &mut Vec<PairError>| {
            if labels.insert(label.to_string(), g).is_some() {
                errs.push(PairError::DuplicateLabel {
                    vertex,
                    label: label.to_string(),
                });
            }
        };
        for (i, g) in b.iter().enumerate() {
            register(&g.label, CoordGen::new(Part::B, i), &mut errs);
        }
        for (i, g) in c.iter().enumerate() {
            register(&g.label, CoordGen::new(Part::C, i), &mut errs);
        }
        for (i, g) in e.iter().enumerate() {
            register(&g.label, CoordGen::new(Part::E, i), &mut errs);
        }

        // δ and W.
        let w: Vec<Generator> = match &spec.w {
            None => e
                .iter()
                .map(|g| Generator {
                    label: format!("δ{}", g.label),
                    deg: g.deg + 1,
                })
                .collect(),
            Some(ws) => {
                let mut slots: Vec<Option<Generator>> = vec![None; e.len()];
                for d in ws {
                    let Some(i) = e.iter().position(|g| g.label == d.from) else {
                        errs.push(PairError::DeltaNotBijective {
                            vertex,
                            reason: format!("{} is not an E generator", d.from),
                        });
                        continue;
                    };
                    if d.deg != e[i].deg + 1 {
                        errs.push(PairError::DeltaDegree {
                            vertex,
                            from: d.from.clone(),
                            label: d.label.clone(),
                            deg: d.deg,
                            expected: e[i].deg + 1,
                        });
                    }
                    if slots[i].is_some() {
                        errs.push(PairError::DeltaNotBijective {
                            vertex,
                            reason: format!("{} has two images", d.from),
                        });
                    }
                    slots[i] = Some(Generator {
                        label: d.label.clone(),
                        deg: d.deg,
                    });
                }
                let mut out = Vec::new();
                for (i, s) in slots.into_iter().enumerate() {
                    match s {
                        Some(g) => out.push(g),
                        None => {
                            errs.push(PairError::DeltaNotBijective {
                                vertex,
                                reason: format!("{} has no image", e[i].label),
                            });
                            out.push(Generator {
                                label: format!("δ{}", e[i].label),
                                deg: e[i].deg + 1,
                            });
                        }
                    }
                }
                out
            }
        };
        for (i, g) in w.iter().enumerate() {
            register(&g.label, CoordGen::new(Part::W, i), &mut errs);
        }
        if !errs.is_empty() {
            return Err(errs);
        }

        let mut v = VertexData {
            e,
            b,
            c,
            w,
            unit: unit.unwrap_or(0),
            product_x: HashMap::new(),
            product_a: HashMap::new(),
            max_degree: spec.max_degree,
        };
        v.product_x = v.build_table(Table::X, &spec.product_x, &labels, vertex, &mut errs);
        v.product_a = v.build_table(Table::A, &spec.product_a, &labels, vertex, &mut errs);
        if !errs.is_empty() {
            return Err(errs);
        }
        v.check_table_axioms(Table::X, vertex, &mut errs);
        v.check_table_axioms(Table::A, vertex, &mut errs);
        v.check_ideal(vertex, &mut errs);
        v.check_restriction(vertex, &mut errs);
        if errs.is_empty() {
            v.check_coordinate_algebra(vertex, &mut errs);
        }
        if errs.is_empty() {
            Ok(v)
        } else {
            Err(errs)
        }
    }

    fn build_table(
        &self,
        table: Table,
        entries: &[ProductSpec],
        labels: &HashMap<String, CoordGen>,
        vertex: usize,
        errs: &mut Vec<PairError>,
    ) -> HashMap<(CoordGen, CoordGen), Combination> {
        let mut out: HashMap<(CoordGen, CoordGen), Combination> = HashMap::new();
        let context = table.name();
        let lookup = |label: &str, errs: &mut Vec<PairError>, a: &str, b: &str| -> Option<CoordGen> {
            match labels.get(label) {
                None => {
                    errs.push(PairError::UnknownGenerator {
                        vertex,
                        label: label.to_string(),
                        context: context.to_string(),
                    });
                    None
                }
                Some(&g) if !table.allows(g.part) => {
                    errs.push(PairError::WrongRing {
                        vertex,
                        table: context,
                        a: a.to_string(),
                        b: b.to_string(),
                        label: label.to_string(),
                        ring: table.ring(),
                    });
                    None
                }
                Some(&g) => Some(g),
            }
        };
        for p in entries {
            let ga = lookup(&p.a, errs, &p.a, &p.b);
            let gb = lookup(&p.b, errs, &p.a, &p.b);
            let (Some(ga), Some(gb)) = (ga, gb) else { continue };
            let expected = self.deg(ga) + self.deg(gb);
            let mut acc = BTreeMap::new();
            let mut ok = true;
            for t in &p.result {
                let Some(g) = lookup(&t.gen, errs, &p.a, &p.b) else {
                    ok = false;
                    continue;
                };
                if self.deg(g) != expected {
                    errs.push(PairError::Inhomogeneous {
                        vertex,
                        table: context,
                        a: p.a.clone(),
                        b: p.b.clone(),
                        gen: t.gen.clone(),
                        deg: self.deg(g),
                        expected,
                    });
                    ok = false;
                }
                add_into(&mut acc, &[(g, 1)], t.coeff);
            }
            if !ok {
                continue;
            }
            let comb = to_comb(acc);
            if let Some(max) = self.max_degree {
                if expected > max && !comb.is_empty() {
                    errs.push(PairError::DegreeBound {
                        vertex,
                        table: context,
                        a: p.a.clone(),
                        b: p.b.clone(),
                        deg: expected,
                        max,
                    });
                    continue;
                }
            }
            if self.is_unit(ga) || self.is_unit(gb) {
                let other = if self.is_unit(ga) { gb } else { ga };
                if comb != vec![(other, 1)] {
                    errs.push(PairError::UnitLaw {
                        vertex,
                        table: context,
                        a: p.a.clone(),
                        b: p.b.clone(),
                    });
                }
                continue;
            }
            if out.insert((ga, gb), comb).is_some() {
                errs.push(PairError::DuplicateProduct {
                    vertex,
                    table: context,
                    a: p.a.clone(),
                    b: p.b.clone(),
                });
            }
        }
        // Fill in reversed entries by graded commutativity, check listed pairs.
        let keys: Vec<(CoordGen, CoordGen)> = out.keys().copied().collect();
        for (a, b) in keys {
            let sign = if self.deg(a) * self.deg(b) % 2 == 0 { 1 } else { -1 };
            let flipped: Combination = out[&(a, b)].iter().map(|&(g, c)| (g, c * sign)).collect();
            match out.get(&(b, a)) {
                Some(existing) => {
                    if *existing != flipped {
                        errs.push(PairError::NotCommutative {
                            vertex,
                            table: context,
                            a: self.label(a).to_string(),
                            b: self.label(b).to_string(),
                        });
                    }
                }
                None => {
                    out.insert((b, a), flipped);
                }
            }
        }
        out
    }

    fn basis_of(&self, table: Table) -> Vec<CoordGen> {
        let mut out: Vec<CoordGen> = (0..self.b.len()).map(|i| CoordGen::new(Part::B, i)).collect();
        match table {
            Table::X => out.extend((0..self.c.len()).map(|i| CoordGen::new(Part::C, i))),
            Table::A => out.extend((0..self.e.len()).map(|i| CoordGen::new(Part::E, i))),
        }
        out
    }

    fn table_mult(&self, table: Table, a: CoordGen, b: CoordGen) -> Combination {
        if self.is_unit(a) {
            return vec![(b, 1)];
        }
        if self.is_unit(b) {
            return vec![(a, 1)];
        }
        let t = match table {
            Table::X => &self.product_x,
            Table::A => &self.product_a,
        };
        t.get(&(a, b)).cloned().unwrap_or_default()
    }

    fn comb_mult(
        &self,
        f: impl Fn(CoordGen, CoordGen) -> Combination,
        x: &[(CoordGen, i64)],
        y: &[(CoordGen, i64)],
    ) -> Combination {
        let mut acc = BTreeMap::new();
        for &(a, ca) in x {
            for &(b, cb) in y {
                add_into(&mut acc, &f(a, b), ca * cb);
            }
        }
        to_comb(acc)
    }

    fn check_table_axioms(&self, table: Table, vertex: usize, errs: &mut Vec<PairError>) {
        let basis = self.basis_of(table);
        let name = table.name();
        for &a in &basis {
            if self.deg(a) % 2 != 0 && !self.table_mult(table, a, a).is_empty() {
                errs.push(PairError::NotCommutative {
                    vertex,
                    table: name,
                    a: self.label(a).to_string(),
                    b: self.label(a).to_string(),
                });
            }
        }
        let f = |a, b| self.table_mult(table, a, b);
        for &a in &basis {
            for &b in &basis {
                let ab = f(a, b);
                for &c in &basis {
                    let left = self.comb_mult(f, &ab, &[(c, 1)]);
                    let bc = f(b, c);
                    let right = self.comb_mult(f, &[(a, 1)], &bc);
                    if left != right {
                        errs.push(PairError::NotAssociative {
                            vertex,
                            table: name,
                            a: self.label(a).to_string(),
                            b: self.label(b).to_string(),
                            c: self.label(c).to_string(),
                        });
                        return;
                    }
                }
            }
        }
    }

    fn check_ideal(&self, vertex: usize, errs: &mut Vec<PairError>) {
        let basis = self.basis_of(Table::X);
        for &a in &basis {
            for &b in &basis {
                if a.part != Part::C && b.part != Part::C {
                    continue;
                }
                if self
                    .table_mult(Table::X, a, b)
                    .iter()
                    .any(|(g, _)| g.part == Part::B)
                {
                    errs.push(PairError::NotAnIdeal {
                        vertex,
                        a: self.label(a).to_string(),
                        b: self.label(b).to_string(),
                    });
                }
            }
        }
    }

    fn check_restriction(&self, vertex: usize, errs: &mut Vec<PairError>) {
        for i in 0..self.b.len() {
            for j in 0..self.b.len() {
                let (a, b) = (CoordGen::new(Part::B, i), CoordGen::new(Part::B, j));
                let mut x = self.table_mult(Table::X, a, b);
                x.retain(|(g, _)| g.part == Part::B);
                if x != self.table_mult(Table::A, a, b) {
                    errs.push(PairError::RestrictionNotMultiplicative {
                        vertex,
                        a: self.label(a).to_string(),
                        b: self.label(b).to_string(),
                    });
                }
            }
        }
    }

    /// Brute-force associativity and Leibniz rule of the per-vertex cochain model.
    fn check_coordinate_algebra(&self, vertex: usize, errs: &mut Vec<PairError>) {
        let basis = self.basis();
        let f = |a, b| self.coord_product(a, b);
        for &a in &basis {
            for &b in &basis {
                let ab = f(a, b);
                for &c in &basis {
                    let left = self.comb_mult(f, &ab, &[(c, 1)]);
                    let right = self.comb_mult(f, &[(a, 1)], &f(b, c));
                    if left != right {
                        errs.push(PairError::CoordinateAlgebra {
                            vertex,
                            property: "associative",
                            detail: format!(
                                "({}·{})·{}",
                                self.label(a),
                                self.label(b),
                                self.label(c)
                            ),
                        });
                        return;
                    }
                }
                // d(ab) = d(a) b + (-1)^{|a|} a d(b)
                let lhs = self.comb_delta(&ab);
                let mut acc = BTreeMap::new();
                add_into(&mut acc, &self.comb_mult(f, &self.comb_delta(&[(a, 1)]), &[(b, 1)]), 1);
                let sign = if self.deg(a) % 2 == 0 { 1 } else { -1 };
                add_into(&mut acc, &self.comb_mult(f, &[(a, 1)], &self.comb_delta(&[(b, 1)])), sign);
                if lhs != to_comb(acc) {
                    errs.push(PairError::CoordinateAlgebra {
                        vertex,
                        property: "a derivation",
                        detail: format!("{}·{}", self.label(a), self.label(b)),
                    });
                    return;
                }
            }
        }
    }

    /// Every basis element: `B` (unit first among equals), `C`, `E`, `W`.
    pub fn basis(&self) -> Vec<CoordGen> {
        let mut out = Vec::new();
        out.extend((0..self.b.len()).map(|i| CoordGen::new(Part::B, i)));
        out.extend((0..self.c.len()).map(|i| CoordGen::new(Part::C, i)));
        out.extend((0..self.e.len()).map(|i| CoordGen::new(Part::E, i)));
        out.extend((0..self.w.len()).map(|i| CoordGen::new(Part::W, i)));
        out
    }

    pub fn unit(&self) -> CoordGen {
        CoordGen::new(Part::B, self.unit)
    }

    pub fn is_unit(&self, g: CoordGen) -> bool {
        g.part == Part::B && g.index == self.unit
    }

    /// Non-unit elements of `B`.
    pub fn reduced_b(&self) -> Vec<CoordGen> {
        (0..self.b.len())
            .filter(|&i| i != self.unit)
            .map(|i| CoordGen::new(Part::B, i))
            .collect()
    }

    pub fn generator(&self, g: CoordGen) -> &Generator {
        match g.part {
            Part::B => &self.b[g.index],
            Part::C => &self.c[g.index],
            Part::E => &self.e[g.index],
            Part::W => &self.w[g.index],
        }
    }

    pub fn deg(&self, g: CoordGen) -> i64 {
        self.generator(g).deg
    }

    pub fn label(&self, g: CoordGen) -> &str {
        &self.generator(g).label
    }

    /// Product in `H*(X)` of two elements of `B ⊕ C`.
    pub fn product_x(&self, a: CoordGen, b: CoordGen) -> Combination {
        self.table_mult(Table::X, a, b)
    }

    /// Product in `H*(A)` of two elements of `E ⊕ B`.
    pub fn product_a(&self, a: CoordGen, b: CoordGen) -> Combination {
        self.table_mult(Table::A, a, b)
    }

    /// `δ` extended by zero on `B`, `C` and `W`.
    pub fn delta(&self, g: CoordGen) -> Option<CoordGen> {
        (g.part == Part::E).then(|| CoordGen::new(Part::W, g.index))
    }

    fn comb_delta(&self, x: &[(CoordGen, i64)]) -> Combination {
        let mut acc = BTreeMap::new();
        for &(g, c) in x {
            if let Some(w) = self.delta(g) {
                add_into(&mut acc, &[(w, 1)], c);
            }
        }
        to_comb(acc)
    }

    /// Product of the per-vertex cochain model with basis `B ∪ C ∪ E ∪ W`
    /// and differential `e ↦ δ(e)`.
    pub fn coord_product(&self, x: CoordGen, y: CoordGen) -> Combination {
        use Part::*;
        if self.is_unit(x) {
            return vec![(y, 1)];
        }
        if self.is_unit(y) {
            return vec![(x, 1)];
        }
        match (x.part, y.part) {
            (B | C, B | C) => self.product_x(x, y),
            (E | B, E | B) => self.product_a(x, y),
            (E, C) | (C, E) => Vec::new(),
            (W, E) | (W, B) => {
                let e = CoordGen::new(E, x.index);
                self.comb_delta(&self.product_a(e, y))
            }
            (B, W) => {
                let e = CoordGen::new(E, y.index);
                let sign = if self.deg(x) % 2 == 0 { 1 } else { -1 };
                self.comb_delta(&self.product_a(x, e))
                    .into_iter()
                    .map(|(g, c)| (g, c * sign))
                    .collect()
            }
            (E, W) | (W, W) | (W, C) | (C, W) => Vec::new(),
        }
    }
}

/// Built-in pair data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `(D^1, S^0)`: `E = {e0}`, `B = {1}`, `C = ∅`.
    DiskSphere1,
    /// `(D^2, S^1)`: `E = {e1}`, `B = {1}`, `C = ∅`.
    DiskSphere2,
    /// `H*(A) = {1, e2, b4}`, `H*(X) = {1, b4, c6}`, trivial products.
    Mixed,
    /// `E = ∅`: `(CP^2, pt)` with `C = {c2, c4}`, `c2² = c4`.
    ProjectivePlane,
}

fn gens(list: &[(&str, i64)]) -> Vec<GeneratorSpec> {
    list.iter()
        .map(|&(l, d)| GeneratorSpec {
            label: l.to_string(),
            deg: d,
        })
        .collect()
}

fn delta_of(from: &str, label: &str, deg: i64) -> DeltaSpec {
    DeltaSpec {
        label: label.to_string(),
        deg,
        from: from.to_string(),
    }
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::DiskSphere1,
        Preset::DiskSphere2,
        Preset::Mixed,
        Preset::ProjectivePlane,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::DiskSphere1 => "d1s0",
            Preset::DiskSphere2 => "d2s1",
            Preset::Mixed => "mixed",
            Preset::ProjectivePlane => "cp2",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn vertex_spec(self) -> VertexSpec {
        match self {
            Preset::DiskSphere1 => VertexSpec {
                e: gens(&[("e0", 0)]),
                b: gens(&[(UNIT_LABEL, 0)]),
                w: Some(vec![delta_of("e0", "w1", 1)]),
                product_a: vec![ProductSpec {
                    a: "e0".into(),
                    b: "e0".into(),
                    result: vec![TermSpec {
                        gen: "e0".into(),
                        coeff: 1,
                    }],
                }],
                ..Default::default()
            },
            Preset::DiskSphere2 => VertexSpec {
                e: gens(&[("e1", 1)]),
                b: gens(&[(UNIT_LABEL, 0)]),
                w: Some(vec![delta_of("e1", "w2", 2)]),
                ..Default::default()
            },
            Preset::Mixed => VertexSpec {
                e: gens(&[("e2", 2)]),
                b: gens(&[(UNIT_LABEL, 0), ("b4", 4)]),
                c: gens(&[("c6", 6)]),
                w: Some(vec![delta_of("e2", "w3", 3)]),
                ..Default::default()
            },
            Preset::ProjectivePlane => VertexSpec {
                b: gens(&[(UNIT_LABEL, 0)]),
                c: gens(&[("c2", 2), ("c4", 4)]),
                product_x: vec![ProductSpec {
                    a: "c2".into(),
                    b: "c2".into(),
                    result: vec![TermSpec {
                        gen: "c4".into(),
                        coeff: 1,
                    }],
                }],
                ..Default::default()
            },
        }
    }

    pub fn spec(self) -> PairSpec {
        PairSpec::Uniform(self.vertex_spec())
    }

    pub fn data(self, m: usize) -> PairData {
        PairData::new(&self.spec(), m).expect("presets are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for p in Preset::ALL {
            let r = validate_pair_data(&p.spec(), 3);
            assert!(r.is_ok(), "{}: {r}", p.name());
        }
    }

    #[test]
    fn json_roundtrip() {
        let text = Preset::Mixed.spec().to_json();
        let back = PairSpec::from_json(&text).unwrap();
        assert_eq!(back, Preset::Mixed.spec());
    }

    #[test]
    fn missing_unit() {
        let mut v = Preset::DiskSphere2.vertex_spec();
        v.b.clear();
        let r = validate_pair_data(&PairSpec::Uniform(v), 2);
        assert!(matches!(r.errors[0], PairError::MissingUnit { vertex: 1 }));
    }

    #[test]
    fn delta_degree_error() {
        let mut v = Preset::Mixed.vertex_spec();
        v.w = Some(vec![delta_of("e2", "w", 2)]);
        let r = validate_pair_data(&PairSpec::Uniform(v), 1);
        assert!(r
            .errors
            .iter()
            .any(|e| matches!(e, PairError::DeltaDegree { deg: 2, expected: 3, .. })));
    }

    #[test]
    fn delta_bijection_error() {
        let mut v = Preset::Mixed.vertex_spec();
        v.w = Some(vec![]);
        let r = validate_pair_data(&PairSpec::Uniform(v), 1);
        assert!(matches!(r.errors[0], PairError::DeltaNotBijective { .. }));
    }

    #[test]
    fn c_must_be_an_ideal() {
        let mut v = Preset::ProjectivePlane.vertex_spec();
        v.b.push(GeneratorSpec {
            label: "b4".into(),
            deg: 4,
        });
        v.product_x[0].result[0].gen = "b4".into();
        let r = validate_pair_data(&PairSpec::Uniform(v), 1);
        assert!(r.errors.iter().any(|e| matches!(e, PairError::NotAnIdeal { .. })));
    }

    #[test]
    fn odd_squares_vanish() {
        let mut v = Preset::DiskSphere2.vertex_spec();
        v.b.push(GeneratorSpec {
            label: "b2".into(),
            deg: 2,
        });
        v.product_a.push(ProductSpec {
            a: "e1".into(),
            b: "e1".into(),
            result: vec![TermSpec {
                gen: "b2".into(),
                coeff: 1,
            }],
        });
        let r = validate_pair_data(&PairSpec::Uniform(v), 1);
        assert!(r
            .errors
            .iter()
            .any(|e| matches!(e, PairError::NotCommutative { .. })));
    }

    #[test]
    fn inhomogeneous_and_unknown() {
        let mut v = Preset::ProjectivePlane.vertex_spec();
        v.product_x[0].result[0].gen = "c2".into();
        let r = validate_pair_data(&PairSpec::Uniform(v.clone()), 1);
        assert!(matches!(r.errors[0], PairError::Inhomogeneous { .. }));
        v.product_x[0].result[0].gen = "nope".into();
        let r = validate_pair_data(&PairSpec::Uniform(v), 1);
        assert!(matches!(r.errors[0], PairError::UnknownGenerator { .. }));
    }

    #[test]
    fn degree_bound() {
        let mut v = Preset::ProjectivePlane.vertex_spec();
        v.max_degree = Some(2);
        let r = validate_pair_data(&PairSpec::Uniform(v), 1);
        assert!(matches!(r.errors[0], PairError::DegreeBound { .. }));
    }

    #[test]
    fn e_times_c_is_rejected_in_tables() {
        let mut v = Preset::Mixed.vertex_spec();
        v.product_x.push(ProductSpec {
            a: "e2".into(),
            b: "c6".into(),
            result: vec![],
        });
        let r = validate_pair_data(&PairSpec::Uniform(v), 1);
        assert!(matches!(r.errors[0], PairError::WrongRing { .. }));
    }

    #[test]
    fn vertex_count_mismatch() {
        let spec = PairSpec::PerVertex {
            vertices: vec![Preset::DiskSphere1.vertex_spec()],
        };
        assert!(matches!(
            PairData::new(&spec, 2),
            Err(PairError::VertexCount { given: 1, m: 2 })
        ));
    }

    #[test]
    fn coordinate_products_of_disk_pair() {
        let d = Preset::DiskSphere1.data(1);
        let v = d.vertex(1);
        let e = CoordGen::new(Part::E, 0);
        let w = CoordGen::new(Part::W, 0);
        assert_eq!(v.coord_product(e, e), vec![(e, 1)]);
        assert_eq!(v.coord_product(w, e), vec![(w, 1)]);
        assert!(v.coord_product(e, w).is_empty());
        assert!(v.coord_product(w, w).is_empty());
        assert_eq!(v.coord_product(v.unit(), w), vec![(w, 1)]);
    }

    #[test]
    fn e_times_c_vanishes() {
        let d = Preset::Mixed.data(1);
        let v = d.vertex(1);
        let e = CoordGen::new(Part::E, 0);
        let c = CoordGen::new(Part::C, 0);
        assert!(v.coord_product(e, c).is_empty());
        assert!(v.coord_product(c, e).is_empty());
    }

    #[test]
    fn reverse_entries_are_inferred() {
        let mut v = Preset::ProjectivePlane.vertex_spec();
        v.c.push(GeneratorSpec {
            label: "c6".into(),
            deg: 6,
        });
        v.product_x.push(ProductSpec {
            a: "c2".into(),
            b: "c4".into(),
            result: vec![TermSpec {
                gen: "c6".into(),
                coeff: 1,
            }],
        });
        let d = PairData::uniform(&v, 1).unwrap();
        let x = d.vertex(1);
        let c2 = CoordGen::new(Part::C, 0);
        let c4 = CoordGen::new(Part::C, 1);
        assert_eq!(x.product_x(c4, c2), vec![(CoordGen::new(Part::C, 2), 1)]);
    }
}
