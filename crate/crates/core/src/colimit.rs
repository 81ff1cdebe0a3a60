//! Invariants of colimits of free abelian groups along integer matrices.
//!
//! A colimit such as `ℤ[1/2] = colim(ℤ --2--> ℤ --2--> …)` has no finite
//! presentation, so it is never materialized. Only its rank and a
//! torsion certificate are computed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// `ℤ^{d₀} → ℤ^{d₁} → … → ℤ^{dₗ} --tail--> ℤ^{dₗ} --tail--> …`
///
/// `connecting[i]` is a `d_{i+1} × d_i` matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductiveSystem {
    stage_dims: Vec<usize>,
    connecting: Vec<IntMatrix>,
    tail: IntMatrix,
}

impl InductiveSystem {
    pub fn new(
        stage_dims: Vec<usize>,
        connecting: Vec<IntMatrix>,
        tail: IntMatrix,
    ) -> Result<Self> {
        let Some(&last) = stage_dims.last() else {
            return Err(Error::ShapeMismatch("system has no stages".into()));
        };
        if connecting.len() + 1 != stage_dims.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} stages need {} connecting maps, got {}",
                stage_dims.len(),
                stage_dims.len() - 1,
                connecting.len()
            )));
        }
        for (i, c) in connecting.iter().enumerate() {
            if c.shape() != (stage_dims[i + 1], stage_dims[i]) {
                return Err(Error::ShapeMismatch(format!(
                    "connecting map {i} is {}x{}, expected {}x{}",
                    c.rows(),
                    c.cols(),
                    stage_dims[i + 1],
                    stage_dims[i]
                )));
            }
        }
        if tail.shape() != (last, last) {
            return Err(Error::ShapeMismatch(format!(
                "tail is {}x{}, expected {last}x{last}",
                tail.rows(),
                tail.cols()
            )));
        }
        Ok(Self {
            stage_dims,
            connecting,
            tail,
        })
    }

    /// `ℤⁿ --M--> ℤⁿ --M--> …`
    pub fn stationary(tail: IntMatrix) -> Result<Self> {
        Self::new(vec![tail.rows()], Vec::new(), tail)
    }

    pub fn stage_dims(&self) -> &[usize] {
        &self.stage_dims
    }

    pub fn connecting(&self) -> &[IntMatrix] {
        &self.connecting
    }

    pub fn tail(&self) -> &IntMatrix {
        &self.tail
    }

    /// Map from stage `k` to stage `k + 1` of the unrolled sequence.
    pub fn stage_map(&self, k: usize) -> &IntMatrix {
        self.connecting.get(k).unwrap_or(&self.tail)
    }

    /// Default certification depth: listed stages plus tail size.
    pub fn default_certification_stage(&self) -> usize {
        self.stage_dims.len() + self.tail.rows()
    }

    /// The same system with `extra` copies of the tail moved into the listed
    /// stages.
    pub fn unroll(&self, extra: usize) -> Self {
        let n = self.tail.rows();
        let mut out = self.clone();
        for _ in 0..extra {
            out.stage_dims.push(n);
            out.connecting.push(self.tail.clone());
        }
        out
    }

    /// Telescopes to stages `0, 2, 4, …` by composing consecutive maps; the
    /// tail becomes its square.
    pub fn telescope_pairs(&self) -> Self {
        let sys = if self.connecting.len() % 2 == 1 {
            self.unroll(1)
        } else {
            self.clone()
        };
        let stage_dims = sys.stage_dims.iter().step_by(2).copied().collect();
        let connecting = sys
            .connecting
            .chunks(2)
            .map(|pair| &pair[1] * &pair[0])
            .collect();
        let tail = &sys.tail * &sys.tail;
        Self {
            stage_dims,
            connecting,
            tail,
        }
    }

    /// Stagewise direct sum; the shorter system is unrolled to match.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let len = self.stage_dims.len().max(other.stage_dims.len());
        let a = self.unroll(len - self.stage_dims.len());
        let b = other.unroll(len - other.stage_dims.len());
        Self {
            stage_dims: a
                .stage_dims
                .iter()
                .zip(&b.stage_dims)
                .map(|(x, y)| x + y)
                .collect(),
            connecting: a
                .connecting
                .iter()
                .zip(&b.connecting)
                .map(|(x, y)| x.block_diag(y))
                .collect(),
            tail: a.tail.block_diag(&b.tail),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColimitInvariants {
    pub rank: usize,
    pub torsion_free: bool,
    pub verified_stage: usize,
}

/// Rank of `Mᵏ` for `k` the size of `M`; the image rank of powers is
/// nonincreasing and constant from `k = size` on.
pub fn eventual_rank(tail: &IntMatrix) -> usize {
    let n = tail.rows();
    tail.pow(n).expect("square tail").rank()
}

/// Invariants certified at the system's default stage.
pub fn colimit_invariants(sys: &InductiveSystem) -> ColimitInvariants {
    colimit_invariants_at(sys, 0)
}

/// Invariants with the torsion certificate recorded at stage
/// `max(min_stage, default)`.
///
/// The colimit only depends on the tail, so its rank is the eventual rank of
/// the tail. Every stage is free and a direct limit of torsion-free groups is
/// torsion-free, so `torsion_free` holds at every certified stage.
pub fn colimit_invariants_at(sys: &InductiveSystem, min_stage: usize) -> ColimitInvariants {
    ColimitInvariants {
        rank: eventual_rank(&sys.tail),
        torsion_free: true,
        verified_stage: min_stage.max(sys.default_certification_stage()),
    }
}

/// Rank of the map induced on the colimit by `endo`, a square matrix on the
/// tail stage commuting with the tail.
pub fn map_on_colimit_rank(sys: &InductiveSystem, endo: &IntMatrix) -> Result<usize> {
    let n = sys.tail.rows();
    if endo.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!(
            "endomorphism is {}x{}, tail stage has dimension {n}",
            endo.rows(),
            endo.cols()
        )));
    }
    if endo * &sys.tail != &sys.tail * endo {
        return Err(Error::CommutationFailure {
            stage: sys.stage_dims.len() - 1,
        });
    }
    // The colimit tensored with ℚ is the eventual image of the tail, which
    // `endo` preserves.
    let eventual_image = sys.tail.pow(n)?;
    Ok((endo * &eventual_image).rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn stationary(rows: &[&[i64]]) -> InductiveSystem {
        InductiveSystem::stationary(m(rows)).unwrap()
    }

    /// Every power rank out to `3n`, asserting stabilization from `n` on.
    fn rank_oracle(tail: &IntMatrix) -> usize {
        let n = tail.rows();
        let ranks: Vec<usize> = (0..=3 * n).map(|k| tail.pow(k).unwrap().rank()).collect();
        let stable = ranks[3 * n];
        assert!(ranks[n..].iter().all(|&r| r == stable));
        stable
    }

    #[test]
    fn dyadic() {
        let inv = colimit_invariants(&stationary(&[&[2]]));
        assert_eq!(inv.rank, 1);
        assert!(inv.torsion_free);
        assert_eq!(inv.verified_stage, 2);
        assert_eq!(
            colimit_invariants_at(&stationary(&[&[2]]), 5).verified_stage,
            5
        );
    }

    #[test]
    fn zero_tail() {
        assert_eq!(colimit_invariants(&stationary(&[&[0]])).rank, 0);
    }

    #[test]
    fn golden_mean() {
        let inv = colimit_invariants(&stationary(&[&[1, 1], &[1, 0]]));
        assert_eq!(inv.rank, 2);
        assert!(inv.torsion_free);
    }

    #[test]
    fn nilpotent_part_is_dropped() {
        let tail = m(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 3]]);
        assert_eq!(eventual_rank(&tail), 1);
        assert_eq!(rank_oracle(&tail), 1);
    }

    #[test]
    fn listed_stages_do_not_affect_rank() {
        let sys = InductiveSystem::new(vec![1, 2], vec![m(&[&[1], &[0]])], IntMatrix::identity(2))
            .unwrap();
        assert_eq!(colimit_invariants(&sys).rank, 2);
    }

    #[test]
    fn shape_errors() {
        assert!(InductiveSystem::new(vec![], vec![], IntMatrix::zeros(0, 0)).is_err());
        assert!(InductiveSystem::new(vec![1, 2], vec![], IntMatrix::identity(2)).is_err());
        assert!(
            InductiveSystem::new(vec![1, 2], vec![m(&[&[1, 0]])], IntMatrix::identity(2)).is_err()
        );
        assert!(InductiveSystem::new(vec![2], vec![], IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn endomorphism_ranks() {
        let sys = stationary(&[&[1, 1], &[1, 0]]);
        assert_eq!(
            map_on_colimit_rank(&sys, &IntMatrix::identity(2)).unwrap(),
            2
        );
        assert_eq!(
            map_on_colimit_rank(&sys, &IntMatrix::zeros(2, 2)).unwrap(),
            0
        );
        // id - shift on ℤ[1/2], with the shift re-indexed to multiplication by 1.
        let dyadic = stationary(&[&[2]]);
        let endo = &IntMatrix::identity(1) - &IntMatrix::identity(1);
        assert_eq!(map_on_colimit_rank(&dyadic, &endo).unwrap(), 0);
        assert!(matches!(
            map_on_colimit_rank(&sys, &IntMatrix::identity(3)),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            map_on_colimit_rank(&sys, &m(&[&[1, 0], &[0, 0]])),
            Err(Error::CommutationFailure { stage: 0 })
        ));
    }

    fn nonneg_square() -> impl Strategy<Value = IntMatrix> {
        (1usize..5).prop_flat_map(|n| {
            proptest::collection::vec(0i64..=3, n * n).prop_map(move |v| {
                IntMatrix::new(n, n, v.into_iter().map(Into::into).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_matches_oracle(tail in nonneg_square()) {
            let sys = InductiveSystem::stationary(tail.clone()).unwrap();
            prop_assert_eq!(colimit_invariants(&sys).rank, rank_oracle(&tail));
        }

        #[test]
        fn telescoping_preserves_invariants(tail in nonneg_square(), extra in 0usize..3) {
            let sys = InductiveSystem::stationary(tail).unwrap().unroll(extra);
            let a = colimit_invariants(&sys);
            let b = colimit_invariants(&sys.telescope_pairs());
            prop_assert_eq!(a.rank, b.rank);
            prop_assert_eq!(a.torsion_free, b.torsion_free);
        }

        #[test]
        fn direct_sum_adds(a in nonneg_square(), b in nonneg_square(), extra in 0usize..3) {
            let sa = InductiveSystem::stationary(a).unwrap().unroll(extra);
            let sb = InductiveSystem::stationary(b).unwrap();
            let sum = sa.direct_sum(&sb);
            prop_assert_eq!(
                colimit_invariants(&sum).rank,
                colimit_invariants(&sa).rank + colimit_invariants(&sb).rank
            );
        }

        #[test]
        fn rank_independent_of_power(tail in nonneg_square()) {
            let n = tail.rows();
            prop_assert_eq!(tail.pow(n).unwrap().rank(), tail.pow(2 * n).unwrap().rank());
        }
    }
}
