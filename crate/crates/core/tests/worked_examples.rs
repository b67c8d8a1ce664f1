use polyprod::decomposition::{self, DecompositionRing, RingElement};
use polyprod::graded_algebra::pair::{CoordGen, Part};
use polyprod::graded_algebra::{PairSpec, Rationals};
use polyprod::realmac_chain::{build_ck, ck_cohomology, genus, genus_ngon};
use polyprod::spectral::{self, ChainModel, Monomial, SpectralSequence};
use polyprod::{Coefficients, PairData, Preset, Simplex, SimplicialComplex, Variant};

fn two_edges() -> SimplicialComplex {
    SimplicialComplex::from_facets(3, &[vec![1, 2], vec![1, 3]]).unwrap()
}

fn mono(model: &ChainModel, labels: &[&str]) -> Monomial {
    Monomial(
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let v = model.pair().vertex(i + 1);
                Some(v.basis().into_iter().find(|&g| v.label(g) == *l).unwrap())
            })
            .collect(),
    )
}

#[test]
fn mixed_data_series_on_two_edges() {
    let k = two_edges();
    let pair = Preset::Mixed.data(3);
    let expected = "t^9+t^11+3t^12+5t^14+2t^16";
    let d = decomposition::poincare(&k, &pair, Variant::Smash, Coefficients::Integers).unwrap();
    assert_eq!(d.to_string(), expected);
    let e = spectral::einfty_series(&k, &pair, Variant::Smash, &Rationals).unwrap();
    assert_eq!(e.to_string(), expected);
    let ss = SpectralSequence::build_e1(ChainModel::full(&k, &pair, Variant::Smash).unwrap(), Rationals).unwrap();
    let pages = ss.run_to_einfty().unwrap();
    assert_eq!(ss.series(pages.last().unwrap()).to_string(), expected);
}

#[test]
fn mixed_data_summand_degrees() {
    let d = decomposition::decompose(&two_edges(), &Preset::Mixed.data(3), Variant::Smash, Coefficients::Integers)
        .unwrap();
    let find = |set: &[usize], sigma: &[usize]| {
        d.summands
            .iter()
            .find(|s| s.set == Simplex::from_vertices(set).unwrap() && s.sigma == Simplex::from_vertices(sigma).unwrap())
            .map(|s| s.series.to_string())
    };
    assert_eq!(find(&[1], &[]).as_deref(), Some("t^9"));
    assert_eq!(find(&[1, 2, 3], &[1, 2]).as_deref(), Some("t^16"));
    assert_eq!(find(&[1, 2, 3], &[1, 3]).as_deref(), Some("t^16"));
    assert_eq!(find(&[1, 2, 3], &[2, 3]), None);
}

#[test]
fn square_moment_angle_complex() {
    let k = SimplicialComplex::polygon(4);
    let pair = Preset::DiskSphere2.data(4);
    let d = decomposition::poincare(&k, &pair, Variant::Product, Coefficients::Integers).unwrap();
    assert_eq!(d.to_string(), "1+2t^3+t^6");
    let e = spectral::einfty_series(&k, &pair, Variant::Product, &Rationals).unwrap();
    assert_eq!(e, d);
}

#[test]
fn polygon_genus_and_betti_numbers() {
    for n in 4..=8 {
        let k = SimplicialComplex::polygon(n);
        let g = genus(&k).unwrap();
        assert_eq!(g, genus_ngon(n).unwrap());
        assert_eq!(g, 1 + (n as i128 - 4) * (1 << (n - 3)));
        let h = ck_cohomology(&build_ck(&k), Coefficients::Integers).unwrap();
        assert_eq!(h.betti(), vec![1, 2 * g as usize, 1]);
    }
}

#[test]
fn single_vertex_smash_basis() {
    let k = SimplicialComplex::simplex(1);
    let model = ChainModel::full(&k, &Preset::Mixed.data(1), Variant::Smash).unwrap();
    let mut labels: Vec<String> = model.enumerate().iter().map(|x| model.label(x)).collect();
    labels.sort();
    assert_eq!(labels, vec!["b4", "c6", "e2", "w3"]);
}

#[test]
fn supports_outside_the_complex_are_excluded() {
    let k = two_edges();
    let model = ChainModel::full(&k, &Preset::Mixed.data(3), Variant::Smash).unwrap();
    let bad = mono(&model, &["b4", "c6", "c6"]);
    assert!(!model.is_valid(&bad));
    assert!(model.enumerate().iter().all(|x| model.support(x) != Simplex::from_vertices(&[2, 3]).unwrap()));
    let good = mono(&model, &["c6", "c6", "b4"]);
    assert!(model.is_valid(&good));
    assert!(model.differential(&good).is_empty());
}

#[test]
fn coboundary_of_three_point_bottom_class() {
    let k = SimplicialComplex::from_facets(3, &[vec![1], vec![2], vec![3]]).unwrap();
    let model = ChainModel::full(&k, &Preset::DiskSphere1.data(3), Variant::Smash).unwrap();
    let x = mono(&model, &["e0", "e0", "e0"]);
    let d: Vec<(String, i64)> = model.differential(&x).into_iter().map(|(y, c)| (model.label(&y), c)).collect();
    assert_eq!(
        d,
        vec![
            ("w1⊗e0⊗e0".to_string(), 1),
            ("e0⊗w1⊗e0".to_string(), 1),
            ("e0⊗e0⊗w1".to_string(), 1)
        ]
    );
    // Degree-zero factors give no Koszul signs. No edges: the classes of filtration 1 have no targets.
    assert!(model.differential(&mono(&model, &["w1", "e0", "e0"])).is_empty());
}

#[test]
fn wedge_pair_split_by_unit_positions() {
    // Two points, H*(A) = {1, e1}, H*(X) = {1, c3}, δ(e1) = w2.
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/wedge_two_points.json")).unwrap();
    let spec = PairSpec::from_json(&text).unwrap();
    let pair = PairData::new(&spec, 2).unwrap();
    let k = SimplicialComplex::from_facets(2, &[vec![1], vec![2]]).unwrap();
    let ss = SpectralSequence::build_e1(ChainModel::full(&k, &pair, Variant::Product).unwrap(), Rationals).unwrap();
    let e1 = ss.e1().unwrap();
    let split = ss.split_by_subcomplex(&e1).unwrap();
    let sizes: Vec<(Vec<usize>, usize)> = split
        .iter()
        .map(|(set, d)| (set.to_vec(), d.values().sum()))
        .collect();
    assert_eq!(
        sizes,
        vec![(vec![], 1), (vec![1], 3), (vec![2], 3), (vec![1, 2], 5)]
    );
}

#[test]
fn exterior_times_kernel_vanishes() {
    let k = SimplicialComplex::from_facets(2, &[vec![1], vec![2]]).unwrap();
    let pair = Preset::Mixed.data(2);
    let v = pair.vertex(1);
    let e = CoordGen::new(Part::E, 0);
    let c = CoordGen::new(Part::C, 0);
    assert!(v.coord_product(e, c).is_empty());
    assert!(v.coord_product(c, e).is_empty());
    let ring = DecompositionRing::new(&k, &pair, Variant::Product).unwrap();
    let basis = ring.basis();
    let with_e: Vec<_> = basis.iter().filter(|b| b.gens[0].part == Part::E).cloned().collect();
    let with_c: Vec<_> = basis.iter().filter(|b| b.gens[0].part == Part::C).cloned().collect();
    assert!(!with_e.is_empty() && !with_c.is_empty());
    for x in &with_e {
        for y in &with_c {
            assert!(ring.product_keys(x, y).unwrap().is_zero());
            assert!(ring.product_keys(y, x).unwrap().is_zero());
        }
    }
    let one = RingElement::basis(ring.unit().unwrap());
    assert_eq!(ring.product(&one, &one).unwrap(), one);
}
