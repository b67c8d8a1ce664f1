#![allow(dead_code)]

use polyprod::simplicial::enumerate_complexes;
use polyprod::{Simplex, SimplicialComplex};
use proptest::prelude::*;
use rand::Rng;

/// Random complex on `[m]` generated by up to `2m` random faces of size at most 4.
pub fn random_complex<R: Rng>(rng: &mut R, m: usize) -> SimplicialComplex {
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
    SimplicialComplex::from_faces(m, faces).unwrap()
}

pub fn small_corpus() -> Vec<SimplicialComplex> {
    (1..=3).flat_map(enumerate_complexes).collect()
}

/// Proptest strategy: a complex on `[m]` for `m` in the given range.
pub fn complex_strategy(lo: usize, hi: usize) -> impl Strategy<Value = SimplicialComplex> {
    (lo..=hi).prop_flat_map(|m| {
        prop::collection::vec(1u64..(1u64 << m), 0..=2 * m).prop_map(move |masks| {
            let faces = masks.into_iter().map(|x| {
                // Keep faces small so links stay interesting.
                let mut s = Simplex::EMPTY;
                for v in Simplex(x).vertices().take(4) {
                    s = s.with(v);
                }
                s
            });
            SimplicialComplex::from_faces(m, faces).unwrap()
        })
    })
}
