#![allow(dead_code)]

use groupoid_hk::linalg::IntMatrix;
use groupoid_hk::models::{FiniteGroupoid, GroupTable};
use groupoid_hk::span::FiniteSpan;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn models_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn groups() -> Vec<GroupTable> {
    vec![
        GroupTable::cyclic(1),
        GroupTable::cyclic(2),
        GroupTable::cyclic(3),
        GroupTable::cyclic(4),
        GroupTable::product(&GroupTable::cyclic(2), &GroupTable::cyclic(2)),
        GroupTable::symmetric3(),
    ]
}

/// Named finite groupoids used wherever "the corpus" is meant.
pub fn corpus() -> Vec<(String, FiniteGroupoid)> {
    let z2 = GroupTable::cyclic(2);
    let mut out = vec![
        ("pair(1)".to_string(), FiniteGroupoid::pair(1)),
        ("pair(2)".into(), FiniteGroupoid::pair(2)),
        ("pair(3)".into(), FiniteGroupoid::pair(3)),
        ("trivial(3)".into(), FiniteGroupoid::trivial(3)),
        ("Z/2".into(), FiniteGroupoid::group(&z2)),
        ("Z/3".into(), FiniteGroupoid::group(&GroupTable::cyclic(3))),
        ("Z/4".into(), FiniteGroupoid::group(&GroupTable::cyclic(4))),
        (
            "Z/2 x Z/2".into(),
            FiniteGroupoid::group(&GroupTable::product(&z2, &z2)),
        ),
        (
            "S3".into(),
            FiniteGroupoid::group(&GroupTable::symmetric3()),
        ),
        ("Z/2 x pair(2)".into(), FiniteGroupoid::transitive(&z2, 2)),
    ];
    out.push((
        "pair(2) + Z/3 + trivial(1)".into(),
        FiniteGroupoid::disjoint_union(&[
            FiniteGroupoid::pair(2),
            FiniteGroupoid::group(&GroupTable::cyclic(3)),
            FiniteGroupoid::trivial(1),
        ]),
    ));
    out
}

/// A disjoint union of transitive groupoids with at most `max_arrows`
/// arrows, arrows shuffled. Returns the groupoid and its number of
/// components.
pub fn random_groupoid(rng: &mut ChaCha8Rng, max_arrows: usize) -> (FiniteGroupoid, usize) {
    let groups = groups();
    let mut parts = Vec::new();
    let mut arrows = 0;
    loop {
        let g = groups.choose(rng).unwrap();
        let n = rng.gen_range(1..=3);
        let size = g.order() * n * n;
        if arrows + size > max_arrows {
            if parts.is_empty() {
                continue;
            }
            break;
        }
        arrows += size;
        parts.push(FiniteGroupoid::transitive(g, n));
        if rng.gen_bool(0.3) {
            break;
        }
    }
    let g = FiniteGroupoid::disjoint_union(&parts);
    let mut perm: Vec<usize> = (0..g.arrow_count()).collect();
    perm.shuffle(rng);
    (g.reorder_arrows(&perm), parts.len())
}

/// Nonnegative square matrix, size ≤ `max_size`, entries ≤ `max_entry`,
/// with no zero row or column.
pub fn random_sft_matrix(rng: &mut ChaCha8Rng, max_size: usize, max_entry: i64) -> IntMatrix {
    loop {
        let n = rng.gen_range(1..=max_size);
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..=max_entry)).collect())
            .collect();
        let m = IntMatrix::from_rows(&rows).unwrap();
        if (0..n).all(|i| !m.is_zero_row(i) && !m.is_zero_col(i)) {
            return m;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, max_size: usize, bound: i64) -> IntMatrix {
    let r = rng.gen_range(0..=max_size);
    let c = rng.gen_range(0..=max_size);
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows_with_cols(&rows, c).unwrap()
}

pub fn random_span(rng: &mut ChaCha8Rng, left: usize, right: usize, max_mid: usize) -> FiniteSpan {
    let mid = if left == 0 || right == 0 {
        0
    } else {
        rng.gen_range(0..=max_mid)
    };
    let left_leg = (0..mid).map(|_| rng.gen_range(0..left)).collect();
    let right_leg = (0..mid).map(|_| rng.gen_range(0..right)).collect();
    FiniteSpan::new(left, right, left_leg, right_leg).unwrap()
}
