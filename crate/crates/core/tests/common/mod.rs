#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toric_faces::ratlinalg::IntVector;
use toric_faces::WeightSystem;

/// Rank by Gauss-Jordan elimination over the rationals.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for x in m[rank].iter_mut() {
            *x = &*x / &pivot;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..cols {
                    let sub = &f * &m[rank][k];
                    m[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn pick(rows: &[Vec<i64>], idx: &[usize]) -> Vec<Vec<i64>> {
    idx.iter().map(|&i| rows[i].clone()).collect()
}

/// Flats as sorted member lists: the closure of every subset, deduplicated.
pub fn oracle_flats(rows: &[Vec<i64>]) -> Vec<(usize, Vec<usize>)> {
    let n = rows.len();
    let mut out = std::collections::BTreeSet::new();
    for mask in 0u32..1 << n {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let r = rational_rank(&pick(rows, &idx));
        let closure: Vec<usize> = (0..n)
            .filter(|&j| {
                let mut with = pick(rows, &idx);
                with.push(rows[j].clone());
                rational_rank(&with) == r
            })
            .collect();
        out.insert((r, closure));
    }
    out.into_iter().collect()
}

pub fn weight_system(k: usize, rows: &[Vec<i64>]) -> WeightSystem {
    WeightSystem::new(k, rows.iter().map(|r| IntVector::from(r.clone())).collect()).unwrap()
}

/// `(k, rows)` with 1 <= n <= max_n, 1 <= k <= max_k, entries in [-3, 3],
/// every row nonzero.
pub fn random_rows(rng: &mut ChaCha8Rng, max_n: usize, max_k: usize) -> (usize, Vec<Vec<i64>>) {
    let k = rng.gen_range(1..=max_k);
    let n = rng.gen_range(1..=max_n);
    let rows = (0..n)
        .map(|_| loop {
            let r: Vec<i64> = (0..k).map(|_| rng.gen_range(-3..=3)).collect();
            if r.iter().any(|&x| x != 0) {
                break r;
            }
        })
        .collect();
    (k, rows)
}

pub fn rows_strategy(max_n: usize, max_k: usize) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1..=max_k).prop_flat_map(move |k| {
        let row = prop::collection::vec(-3i64..=3, k).prop_filter("nonzero", |r| r.iter().any(|&x| x != 0));
        (Just(k), prop::collection::vec(row, 1..=max_n))
    })
}
