//! Generators shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rectcover::covers::enumerate_maximal_rectangles;
use rectcover::{BooleanMatrix, Covering, Rectangle};

/// `s(1) = 0`, `s(n+1) = s(n) + ⌊log₂ n⌋ + 2`.
pub fn s(n: usize) -> usize {
    (1..n).map(|t| t.ilog2() as usize + 2).sum()
}

/// Matrices up to `max_rows × max_cols` with at least one 1-entry.
pub fn matrix(max_rows: usize, max_cols: usize, density: f64) -> impl Strategy<Value = BooleanMatrix> {
    (1..=max_rows, 1..=max_cols, any::<u64>()).prop_map(move |(r, c, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cells: Vec<bool> = (0..r * c).map(|_| rng.gen_bool(density)).collect();
        let mut a = BooleanMatrix::from_fn(r, c, |i, j| cells[i * c + j]).unwrap();
        if a.ones_count() == 0 {
            a.set(rng.gen_range(0..r), rng.gen_range(0..c), true);
        }
        a
    })
}

/// A random valid covering: some maximal rectangles, random sub-rectangles
/// of them, and singletons for whatever is left uncovered.
pub fn random_covering(a: &BooleanMatrix, seed: u64) -> Covering {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rects = Vec::new();
    for r in enumerate_maximal_rectangles(a).unwrap() {
        if rng.gen_bool(0.4) {
            let rows: Vec<usize> = r.rows().iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
            let cols: Vec<usize> = r.cols().iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
            if !rows.is_empty() && !cols.is_empty() && rng.gen_bool(0.5) {
                rects.push(Rectangle::new(rows, cols).unwrap());
            } else {
                rects.push(r);
            }
        }
    }
    let mut left: Vec<(usize, usize)> = a
        .ones()
        .filter(|&(i, j)| !rects.iter().any(|r: &Rectangle| r.contains(i, j)))
        .collect();
    left.shuffle(&mut rng);
    for (i, j) in left {
        rects.push(Rectangle::new([i], [j]).unwrap());
    }
    Covering::new(a.dims(), rects)
}
