//! Seeded generators for random instances. Every generator takes the RNG
//! explicitly; [`substream`] gives independent per-trial streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Elem, FieldSpec};
use crate::frame::{Arc, LabelledDigraph};
use crate::linalg::Mat;
use crate::matroid::ReprMatroid;

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `index` of the generator seeded by `seed`.
pub fn substream(seed: u64, index: u64) -> InstanceRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// A well-mixed child seed (SplitMix64 finalizer over `seed` and `index`).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn elem<R: Rng>(f: &FieldSpec, rng: &mut R) -> Elem {
    Elem(rng.random_range(0..f.q()))
}

pub fn unit<R: Rng>(f: &FieldSpec, rng: &mut R) -> Elem {
    Elem(rng.random_range(1..f.q()))
}

pub fn vector<R: Rng>(f: &FieldSpec, len: usize, rng: &mut R) -> Vec<Elem> {
    (0..len).map(|_| elem(f, rng)).collect()
}

pub fn matrix<R: Rng>(f: &FieldSpec, rows: usize, cols: usize, rng: &mut R) -> Mat {
    let mut m = Mat::zeros(f, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, elem(f, rng));
        }
    }
    m
}

/// A uniformly random `rank x n` generator, resampled until it has full row
/// rank.
pub fn matroid<R: Rng>(f: &FieldSpec, n: usize, rank: usize, rng: &mut R) -> ReprMatroid {
    assert!(rank <= n, "rank {rank} exceeds ground size {n}");
    loop {
        let m = matrix(f, rank, n, rng);
        if m.rank() == rank {
            return ReprMatroid::new(m).expect("default labels are unique");
        }
    }
}

/// A random labelled digraph on `vertices` vertices with `edges` arcs.
///
/// When `connected`, the first `vertices - 1` arcs form a random spanning
/// tree. A `loop_fraction` share of the remaining arcs are loops.
pub fn labelled_digraph<R: Rng>(
    f: &FieldSpec,
    vertices: usize,
    edges: usize,
    connected: bool,
    loop_fraction: f64,
    rng: &mut R,
) -> LabelledDigraph {
    assert!(vertices > 0, "need at least one vertex");
    let mut arcs = Vec::with_capacity(edges);
    let push = |arcs: &mut Vec<Arc>, tail, head, label| {
        let id = format!("e{}", arcs.len());
        arcs.push(Arc {
            id,
            tail,
            head,
            label,
        });
    };
    if connected {
        for v in 1..vertices.min(edges + 1) {
            let u = rng.random_range(0..v);
            let (tail, head) = if rng.random_bool(0.5) { (u, v) } else { (v, u) };
            push(&mut arcs, tail, head, unit(f, rng));
        }
    }
    while arcs.len() < edges {
        let tail = rng.random_range(0..vertices);
        let head = if vertices == 1 || rng.random_bool(loop_fraction.clamp(0.0, 1.0)) {
            tail
        } else {
            let h = rng.random_range(0..vertices - 1);
            if h >= tail {
                h + 1
            } else {
                h
            }
        };
        push(&mut arcs, tail, head, unit(f, rng));
    }
    LabelledDigraph::new(
        f.clone(),
        (0..vertices).map(|v| format!("v{v}")).collect(),
        arcs,
    )
    .expect("generated arcs are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_reproduce() {
        let f = FieldSpec::of_order(4).unwrap();
        let a = matrix(&f, 3, 5, &mut rng(9));
        let b = matrix(&f, 3, 5, &mut rng(9));
        assert_eq!(a, b);
        let s0 = vector(&f, 8, &mut substream(1, 0));
        let s1 = vector(&f, 8, &mut substream(1, 1));
        assert_ne!(s0, s1);
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
    }

    #[test]
    fn random_matroid_has_requested_rank() {
        let f = FieldSpec::of_order(2).unwrap();
        let mut r = rng(3);
        for k in 0..=5 {
            assert_eq!(matroid(&f, 5, k, &mut r).rank(), k);
        }
    }

    #[test]
    fn connected_digraphs_are_connected() {
        let f = FieldSpec::of_order(3).unwrap();
        let mut r = rng(5);
        for _ in 0..20 {
            let g = labelled_digraph(&f, 6, 9, true, 0.2, &mut r);
            assert!(g.is_connected());
            assert_eq!(g.arcs().len(), 9);
            assert!(g.arcs().iter().all(|a| !a.label.is_zero()));
        }
    }
}
