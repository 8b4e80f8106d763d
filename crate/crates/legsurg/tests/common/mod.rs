//! Shared helpers for the integration tests: fixture paths and random
//! surgery diagrams.

#![allow(dead_code)]

use std::path::PathBuf;

use legsurg::invariants::{summary, InvariantSummary};
use legsurg::kirby::PairSpec;
use legsurg::rational::rat;
use legsurg::surgery::{SurgeryComponent, SurgeryDiagram};
use proptest::prelude::*;

pub fn fixture(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(path)
}

pub fn read_fixture(path: &str) -> String {
    std::fs::read_to_string(fixture(path)).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// Rotation numbers with the parity of `tb + 1` and `|rot| ≤ |tb| + 1`.
pub fn rotations(tb: i64) -> impl Iterator<Item = i64> {
    let m = tb.abs() + 1;
    (-m..=m).step_by(2)
}

/// `(tb, rot)` of a Legendrian unknot-like abstract knot, `tb ∈ [lo, hi]`.
pub fn classical(lo: i64, hi: i64) -> impl Strategy<Value = (i64, i64)> {
    (lo..=hi).prop_flat_map(|tb| {
        let m = tb.abs() + 1;
        (Just(tb), 0..=m).prop_map(move |(tb, k)| (tb, -m + 2 * k))
    })
}

/// Contact coefficients `±1, ±1/2, ±1/3`.
pub fn unit_coefficient() -> impl Strategy<Value = (i64, i64)> {
    (prop_oneof![Just(1i64), Just(-1i64)], 1i64..=3)
}

/// Diagrams with `1..=max_k` abstract components, `|lk| ≤ 3` and
/// coefficients in `{±1, ±1/2, ±1/3}`.
pub fn small_diagram(max_k: usize) -> impl Strategy<Value = SurgeryDiagram> {
    (1..=max_k).prop_flat_map(|k| {
        (
            proptest::collection::vec((classical(-4, 1), unit_coefficient()), k),
            proptest::collection::vec(-3i64..=3, k * (k - 1) / 2),
        )
            .prop_map(move |(knots, upper)| {
                let components = knots
                    .iter()
                    .enumerate()
                    .map(|(i, &((tb, rot), (s, n)))| {
                        SurgeryComponent::abstract_knot(&format!("k{i}"), tb, rot, rat(s, n))
                    })
                    .collect();
                let mut linking = vec![vec![0; k]; k];
                let pairs = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j)));
                for ((i, j), &l) in pairs.zip(&upper) {
                    linking[i][j] = l;
                    linking[j][i] = l;
                }
                SurgeryDiagram::new(components, linking).expect("generated diagram is valid")
            })
    })
}

/// A move to apply to a generated diagram.
#[derive(Debug, Clone)]
pub enum RandomMove {
    /// Introduce a cancelling pair, then cancel it again.
    Pair(PairSpec),
    /// Slide component `i` over component `j`.
    Slide { i: usize, j: usize, eps: i8 },
}

pub fn random_move(k: usize) -> BoxedStrategy<RandomMove> {
    let pair =
        (classical(-3, 0), 1u64..=3, prop_oneof![Just(1i64), Just(-1i64)], proptest::collection::vec(-2i64..=2, k))
            .prop_map(|((tb, rot), n, sign, linking)| {
                RandomMove::Pair(PairSpec { tb, rot, n, sign, linking, front: None })
            });
    if k < 2 {
        return pair.boxed();
    }
    let slide = (0..k, 1..k, prop_oneof![Just(1i8), Just(-1i8)]).prop_map(move |(i, d, eps)| RandomMove::Slide {
        i,
        j: (i + d) % k,
        eps,
    });
    prop_oneof![pair, slide].boxed()
}

pub fn diagram_and_move(max_k: usize) -> impl Strategy<Value = (SurgeryDiagram, RandomMove)> {
    small_diagram(max_k).prop_flat_map(|d| {
        let k = d.len();
        (Just(d), random_move(k))
    })
}

/// Applies the move and returns every diagram it passes through (the input
/// excluded).
pub fn apply(d: &SurgeryDiagram, mv: &RandomMove) -> legsurg::Result<Vec<SurgeryDiagram>> {
    use legsurg::kirby::{cancel_pair, handle_slide, introduce_cancelling_pair};
    match mv {
        RandomMove::Pair(spec) => {
            let with_pair = introduce_cancelling_pair(d, spec)?;
            let k = d.len();
            let back = cancel_pair(&with_pair, k, k + 1)?;
            Ok(vec![with_pair, back])
        }
        RandomMove::Slide { i, j, eps } => Ok(vec![handle_slide(d, *i, *j, *eps)?]),
    }
}

/// `(H1, Euler orbits, d3 multiset)` of a diagram.
pub fn key(d: &SurgeryDiagram) -> InvariantSummary {
    summary(d).expect("diagram evaluates")
}
