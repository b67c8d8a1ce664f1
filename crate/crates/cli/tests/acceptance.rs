//! End-to-end acceptance checks. Runs without the libtest harness and
//! prints one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use polyprod::cube_oracle::compare_with_ck;
use polyprod::decomposition::{self, DecompositionRing};
use polyprod::graded_algebra::field::{rank, Field};
use polyprod::graded_algebra::pair::{CoordGen, Part};
use polyprod::graded_algebra::snf::abs_determinant;
use polyprod::graded_algebra::{IntegerMatrix, PairSpec, Rationals};
use polyprod::realmac_chain::{self, build_ck, cai_product, ck_cohomology, coboundary, Cochain, TsKey};
use polyprod::simplicial::enumerate_complexes;
use polyprod::spectral::{ChainModel, Page, SpectralSequence};
use polyprod::{Coefficients, PairData, Preset, Simplex, SimplicialComplex, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn polyprod(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_polyprod"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).trim().to_string(),
        String::from_utf8_lossy(&out.stderr).trim().to_string(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn random_complex(rng: &mut ChaCha8Rng, m: usize) -> SimplicialComplex {
    let n = rng.gen_range(0..=2 * m);
    let faces: Vec<Simplex> = (0..n)
        .map(|_| {
            let size = rng.gen_range(1..=m.min(4));
            let mut s = Simplex::EMPTY;
            while s.len() < size {
                s = s.with(rng.gen_range(1..=m));
            }
            s
        })
        .collect();
    SimplicialComplex::from_faces(m, faces).expect("vertices in range")
}

/// Every complex on at most four vertices plus 200 seeded random ones on five or six.
fn corpus() -> Vec<SimplicialComplex> {
    let mut out: Vec<SimplicialComplex> = (1..=4).flat_map(enumerate_complexes).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    for _ in 0..200 {
        let m = rng.gen_range(5..=6);
        out.push(random_complex(&mut rng, m));
    }
    out
}

fn chi(groups: &[polyprod::graded_algebra::HomologyGroup]) -> i128 {
    groups
        .iter()
        .map(|g| if g.degree % 2 == 0 { g.rank as i128 } else { -(g.rank as i128) })
        .sum()
}

fn page_squares_to_zero<F: Field>(f: &F, page: &Page<F>) -> bool {
    page.blocks.iter().all(|b| {
        let mut out: BTreeMap<(usize, usize), F::Elem> = BTreeMap::new();
        for (src, mid, c1) in &b.differential {
            for (mid2, dst, c2) in &b.differential {
                if mid == mid2 {
                    let e = out.entry((*src, *dst)).or_insert_with(|| f.zero());
                    *e = f.add(e, &f.mul(c1, c2));
                }
            }
        }
        out.values().all(|v| f.is_zero(v))
    })
}

fn criterion_1() -> Check {
    let expected = "t^9+t^11+3t^12+5t^14+2t^16";
    let start = Instant::now();
    let (code, out, err) = polyprod(&[
        "poincare",
        path_str(&data("two_edges.json")),
        path_str(&data("mixed.json")),
    ]);
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("exit {code}: {err}"))?;
    ensure(out == expected, || format!("got {out}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))
}

fn criterion_2() -> Check {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    for n in 4..=10usize {
        let k = SimplicialComplex::polygon(n);
        let file = dir.join(format!("ngon{n}.json"));
        std::fs::write(&file, serde_json::to_string(&k.to_spec()).expect("serializable")).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let (code, out, err) = polyprod(&["genus", path_str(&file)]);
        let g = 1 + (n as i128 - 4) * (1i128 << (n - 3));
        let chi = (4 - n as i128) * (1i128 << (n - 2));
        ensure(code == 0, || format!("n = {n}: exit {code}: {err}"))?;
        ensure(out == format!("genus {g}, chi {chi}"), || format!("n = {n}: got {out}"))?;
        let h = ck_cohomology(&build_ck(&k), Coefficients::Integers).map_err(|e| e.to_string())?;
        ensure(h.betti() == vec![1, 2 * g as usize, 1], || format!("n = {n}: betti {:?}", h.betti()))?;
        ensure(h.groups.iter().all(|g| g.torsion.is_empty()), || format!("n = {n}: torsion"))?;
        ensure(realmac_chain::euler_characteristic(&k) == chi, || format!("n = {n}: formula"))?;
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(30), || format!("n = {n}: took {elapsed:?}"))?;
    }
    Ok(())
}

fn criteria_3_and_4(corpus: &[SimplicialComplex]) -> (Check, Check) {
    let results: Vec<(Check, Check)> = corpus
        .par_iter()
        .map(|k| {
            let cmp = match compare_with_ck(k, Coefficients::Integers) {
                Ok(c) => c,
                Err(e) => return (Err(e.to_string()), Err(e.to_string())),
            };
            let formula = realmac_chain::euler_characteristic(k);
            let c3 = ensure(formula == chi(&cmp.ck) && formula == chi(&cmp.oracle), || {
                format!("{k:?}: formula {formula}, C_K {}, oracle {}", chi(&cmp.ck), chi(&cmp.oracle))
            });
            let c4 = ensure(cmp.agrees(), || format!("{k:?}: oracle {:?} vs C_K {:?}", cmp.oracle, cmp.ck));
            (c3, c4)
        })
        .collect();
    let first = |pick: fn(&(Check, Check)) -> &Check| -> Check {
        results.iter().map(pick).find(|c| c.is_err()).cloned().unwrap_or(Ok(()))
    };
    (first(|r| &r.0), first(|r| &r.1))
}

fn criterion_5() -> Check {
    let k = SimplicialComplex::polygon(4);
    let pair = Preset::DiskSphere2.data(4);
    let d = decomposition::poincare(&k, &pair, Variant::Product, Coefficients::Integers).map_err(|e| e.to_string())?;
    ensure(d.to_string() == "1+2t^3+t^6", || format!("decomposition gives {d}"))?;
    let ss = SpectralSequence::build_e1(ChainModel::full(&k, &pair, Variant::Product).map_err(|e| e.to_string())?, Rationals)
        .map_err(|e| e.to_string())?;
    let pages = ss.run_to_einfty().map_err(|e| e.to_string())?;
    let e = ss.series(pages.last().expect("pages"));
    ensure(e == d, || format!("E_inf gives {e}"))?;
    let (code, out, err) = polyprod(&[
        "poincare",
        path_str(&data("square.json")),
        path_str(&data("d2s1.json")),
        "--variant",
        "z",
        "--check",
    ]);
    ensure(code == 0 && out == "1+2t^3+t^6", || format!("cli: exit {code}, {out} {err}"))
}

/// Criterion 6 together with the page part of criterion 7 and the
/// collapse part of criterion 8 (they share the page computations).
fn spectral_sweep(corpus: &[SimplicialComplex]) -> (Check, Check, Check) {
    let presets = [Preset::DiskSphere1, Preset::Mixed, Preset::ProjectivePlane];
    let results: Vec<(Check, Check, Check)> = corpus
        .par_iter()
        .flat_map(|k| {
            presets
                .iter()
                .flat_map(|&p| [(k, p, Variant::Product), (k, p, Variant::Smash)])
                .collect::<Vec<_>>()
        })
        .map(|(k, preset, variant)| {
            let tag = format!("{k:?} {} {variant:?}", preset.name());
            let pair = preset.data(k.m());
            let run = || -> Result<(Check, Check, Check), String> {
                let d = decomposition::poincare(k, &pair, variant, Coefficients::Rationals).map_err(|e| e.to_string())?;
                let ss = SpectralSequence::build_e1(ChainModel::full(k, &pair, variant).map_err(|e| e.to_string())?, Rationals)
                    .map_err(|e| e.to_string())?;
                let pages = ss.run_to_einfty().map_err(|e| e.to_string())?;
                let e = ss.series(pages.last().expect("pages"));
                let c6 = ensure(e == d, || format!("{tag}: E_inf {e}, decomposition {d}"));
                let c7 = ensure(pages.iter().all(|p| page_squares_to_zero(&Rationals, p)), || {
                    format!("{tag}: d_r d_r != 0")
                });
                let c8 = if preset == Preset::ProjectivePlane {
                    ensure(pages.iter().all(|p| ss.differential_count(p) == 0), || {
                        format!("{tag}: nonzero differential")
                    })
                } else {
                    Ok(())
                };
                Ok((c6, c7, c8))
            };
            run().unwrap_or_else(|e| (Err(format!("{tag}: {e}")), Err(e.clone()), Err(e)))
        })
        .collect();
    let first = |pick: fn(&(Check, Check, Check)) -> &Check| -> Check {
        results.iter().map(pick).find(|c| c.is_err()).cloned().unwrap_or(Ok(()))
    };
    (first(|r| &r.0), first(|r| &r.1), first(|r| &r.2))
}

fn random_cochain(rng: &mut ChaCha8Rng, gens: &[TsKey], degree: usize) -> Cochain {
    let of_degree: Vec<TsKey> = gens.iter().copied().filter(|g| g.degree() == degree).collect();
    let mut c = Cochain::new();
    if of_degree.is_empty() {
        return c;
    }
    for _ in 0..rng.gen_range(1..=5) {
        let g = of_degree[rng.gen_range(0..of_degree.len())];
        *c.entry(g).or_insert(0) += rng.gen_range(-3..=3);
    }
    c.retain(|_, v| *v != 0);
    c
}

fn combine(a: &Cochain, b: &Cochain, sign: i64) -> Cochain {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(*k).or_insert(0) += sign * v;
    }
    out.retain(|_, v| *v != 0);
    out
}

fn criterion_7(corpus: &[SimplicialComplex], pages: Check) -> Check {
    for k in corpus {
        let d = build_ck(k).differential_matrix();
        ensure(d.mul(&d).map_err(|e| e.to_string())?.is_zero(), || format!("{k:?}: d d != 0 on C_K"))?;
    }
    pages?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 1200 {
        let m = rng.gen_range(2..=6);
        let k = random_complex(&mut rng, m);
        let ck = build_ck(&k);
        for _ in 0..20 {
            let p = rng.gen_range(0..=2);
            let q = rng.gen_range(0..=2);
            let x = random_cochain(&mut rng, ck.generators(), p);
            let y = random_cochain(&mut rng, ck.generators(), q);
            let lhs = coboundary(&k, &cai_product(&k, &x, &y));
            let sign = if p % 2 == 0 { 1 } else { -1 };
            let rhs = combine(
                &cai_product(&k, &coboundary(&k, &x), &y),
                &cai_product(&k, &x, &coboundary(&k, &y)),
                sign,
            );
            ensure(lhs == rhs, || format!("{k:?}: Leibniz fails for {x:?}, {y:?}"))?;
            checked += 1;
        }
    }
    let expected: Vec<Vec<(u64, &str)>> = vec![
        vec![(0, "e0⊗e0⊗e0"), (1, "w1⊗e0⊗e0"), (2, "e0⊗w1⊗e0"), (3, "e0⊗e0⊗w1")],
        vec![(2, "e0⊗w1⊗e0"), (3, "e0⊗e0⊗w1"), (4, "w1⊗w1⊗e0")],
        vec![(3, "e0⊗e0⊗w1"), (5, "w1⊗e0⊗w1")],
        vec![(6, "e0⊗w1⊗w1")],
        vec![(6, "e0⊗w1⊗w1"), (7, "w1⊗w1⊗w1")],
    ];
    let (code, out, err) = polyprod(&[
        "ss-run",
        path_str(&data("triangle.json")),
        "--incremental",
        "--format",
        "json",
    ]);
    ensure(code == 0, || format!("ss-run: exit {code}: {err}"))?;
    let tables: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let tables = tables.as_array().ok_or("ss-run: expected a list")?;
    ensure(tables.len() == expected.len(), || format!("{} tables", tables.len()))?;
    for (i, (t, want)) in tables.iter().zip(&expected).enumerate() {
        for w in 0..=7u64 {
            let got: Vec<&str> = t["cells"][w.to_string()]
                .as_array()
                .map(|v| v.iter().filter_map(|c| c["label"].as_str()).collect())
                .unwrap_or_default();
            let want: Vec<&str> = want.iter().filter(|(f, _)| *f == w).map(|(_, l)| *l).collect();
            ensure(got == want, || format!("table {}, filtration {w}: {got:?} != {want:?}", i + 1))?;
        }
    }
    Ok(())
}

fn criterion_8(corpus: &[SimplicialComplex], collapse: Check) -> Check {
    collapse?;
    corpus
        .par_iter()
        .map(|k| {
            let pair = Preset::ProjectivePlane.data(k.m());
            let sr = decomposition::sr_presentation(k, &pair).map_err(|e| e.to_string())?;
            let d = decomposition::poincare(k, &pair, Variant::Product, Coefficients::Rationals).map_err(|e| e.to_string())?;
            ensure(sr.quotient == d, || format!("{k:?}: quotient {}, decomposition {d}", sr.quotient))
        })
        .find_any(|c| c.is_err())
        .unwrap_or(Ok(()))
}

fn criterion_9() -> Check {
    let (code, out, err) = polyprod(&["rmac-ring", path_str(&data("ngon5.json")), "--format", "json"]);
    ensure(code == 0, || format!("rmac-ring: exit {code}: {err}"))?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure(v["pairing_rank"] == 10 && v["abs_determinant"] == 1, || format!("rmac-ring: {v}"))?;

    // The same pairing from the decomposition ring, which multiplies in
    // the filtered cochain model rather than with the Cai product.
    let k = SimplicialComplex::polygon(5);
    let ring = DecompositionRing::new(&k, &Preset::DiskSphere1.data(5), Variant::Product).map_err(|e| e.to_string())?;
    let basis = ring.basis();
    let h1: Vec<_> = basis.iter().filter(|b| ring.degree(b) == 1).cloned().collect();
    let h2: Vec<_> = basis.iter().filter(|b| ring.degree(b) == 2).cloned().collect();
    ensure(h1.len() == 10 && h2.len() == 1, || format!("dims {} {}", h1.len(), h2.len()))?;
    let mut rows = Vec::new();
    for a in &h1 {
        let mut row = Vec::new();
        for b in &h1 {
            let p = ring.product_keys(a, b).map_err(|e| e.to_string())?;
            row.push(p.terms.get(&h2[0]).copied().unwrap_or(0));
        }
        rows.push(row);
    }
    let qrows: Vec<_> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Rationals.from_i64(x)).collect())
        .collect();
    ensure(rank(&Rationals, &qrows) == 10, || "pairing rank below 10".into())?;
    let det = abs_determinant(&IntegerMatrix::from_rows(&rows)).map_err(|e| e.to_string())?;
    ensure(det == 1, || format!("|det| = {det}"))?;

    // E·C vanishes in every coordinate algebra, and ring products of
    // classes with E and C in the same coordinate are zero.
    let mut pairs: Vec<PairData> = Preset::ALL.iter().map(|p| p.data(2)).collect();
    let wedge = std::fs::read_to_string(data("wedge_two_points.json")).map_err(|e| e.to_string())?;
    pairs.push(PairData::new(&PairSpec::from_json(&wedge).map_err(|e| e.to_string())?, 2).map_err(|e| e.to_string())?);
    let two_points = SimplicialComplex::from_facets(2, &[vec![1], vec![2]]).map_err(|e| e.to_string())?;
    for pair in &pairs {
        for v in pair.vertices() {
            for i in 0..v.e.len() {
                for j in 0..v.c.len() {
                    let (e, c) = (CoordGen::new(Part::E, i), CoordGen::new(Part::C, j));
                    ensure(v.coord_product(e, c).is_empty() && v.coord_product(c, e).is_empty(), || {
                        "E·C != 0".into()
                    })?;
                }
            }
        }
        let ring = DecompositionRing::new(&two_points, pair, Variant::Product).map_err(|e| e.to_string())?;
        let basis = ring.basis();
        for x in basis.iter().filter(|b| b.gens[0].part == Part::E) {
            for y in basis.iter().filter(|b| b.gens[0].part == Part::C) {
                let p = ring.product_keys(x, y).map_err(|e| e.to_string())?;
                ensure(p.is_zero(), || format!("{} · {} = {}", ring.label(x), ring.label(y), ring.format(&p)))?;
            }
        }
    }
    Ok(())
}

fn main() {
    let started = Instant::now();
    let corpus = corpus();
    let (c3, c4) = criteria_3_and_4(&corpus);
    let (c6, pages, collapse) = spectral_sweep(&corpus);
    let results = vec![
        ("mixed data on two edges, Poincaré series", criterion_1()),
        ("polygon genus, Betti numbers and Euler characteristic", criterion_2()),
        ("Euler formula against C_K and the cubical oracle", c3),
        ("C_K cohomology equals oracle cohomology over Z", c4),
        ("moment-angle complex of the square", criterion_5()),
        ("spectral E_inf totals equal decomposition totals", c6),
        ("differentials square to zero, Leibniz, incremental tables", criterion_7(&corpus, pages)),
        ("collapse and Stanley-Reisner quotient dimensions", criterion_8(&corpus, collapse)),
        ("pentagon pairing and vanishing of E·C", criterion_9()),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(()) => println!("criterion {} ({name}): PASS", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {e}", i + 1);
            }
        }
    }
    println!(
        "{} complexes in corpus, {} of {} criteria passed in {:.1?}",
        corpus.len(),
        results.len() - failed,
        results.len(),
        started.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
