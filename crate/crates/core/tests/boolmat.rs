mod common;

use proptest::prelude::*;
use rectcover::boolmat::{disjointness, kneser_submatrix, kronecker, subsets_lex, triangular};
use rectcover::BooleanMatrix;

#[test]
fn disjointness_matches_both_definitions() {
    // D_{k+1} = ((D_k, D_k), (D_k, 0))
    let mut rec = BooleanMatrix::from_rows(&[vec![1]]).unwrap();
    for k in 0..=10 {
        let d = disjointness(k).unwrap();
        assert_eq!(d, rec, "k={k}");
        let n = 1usize << k;
        for i in 0..n {
            for j in 0..n {
                assert_eq!(d.get(i, j), i & j == 0);
            }
        }
        rec = BooleanMatrix::from_fn(2 * n, 2 * n, |i, j| !(i >= n && j >= n) && rec.get(i % n, j % n)).unwrap();
    }
}

#[test]
fn popcount_blocks_are_kneser_submatrices() {
    for k in 0..=8 {
        let d = disjointness(k).unwrap();
        for x in 0..=k {
            for y in 0..=k {
                let rows = subsets_lex(k, x);
                let cols = subsets_lex(k, y);
                let block = kneser_submatrix(k, x, y).unwrap();
                assert_eq!(block.dims(), (rows.len(), cols.len()));
                for (a, &r) in rows.iter().enumerate() {
                    for (b, &c) in cols.iter().enumerate() {
                        assert_eq!(block.get(a, b), d.get(r as usize, c as usize), "k={k} x={x} y={y}");
                    }
                }
            }
        }
    }
}

#[test]
fn triangular_is_strictly_upper() {
    for n in 1..=40 {
        let t = triangular(n).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(t.get(i, j), i < j);
            }
        }
    }
}

proptest! {
    #[test]
    fn kronecker_dimensions_and_entries(k in common::matrix(4, 4, 0.5), m in common::matrix(4, 4, 0.5)) {
        let p = kronecker(&k, &m).unwrap();
        prop_assert_eq!(p.dims(), (k.rows() * m.rows(), k.cols() * m.cols()));
        prop_assert_eq!(p.ones_count(), k.ones_count() * m.ones_count());
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                let want = k.get(i / m.rows(), j / m.cols()) && m.get(i % m.rows(), j % m.cols());
                prop_assert_eq!(p.get(i, j), want);
            }
        }
    }

    #[test]
    fn text_round_trip(a in common::matrix(6, 6, 0.5)) {
        prop_assert_eq!(a.to_bm_string().parse::<BooleanMatrix>().unwrap(), a);
    }
}
