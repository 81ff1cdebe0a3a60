//! Smith normal form over the integers.
//!
//! Pivots are chosen as the entry of smallest nonzero absolute value in the
//! active submatrix, ties broken by the lowest row-major index. The same
//! input therefore always produces the same transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d₁ | d₂ | … | dᵣ`, all nonnegative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries `d₁..d_min(rows, cols)`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let w = reduce(m, Track::Full);
    SnfResult {
        u: w.u.expect("tracked"),
        d: w.a,
        v: w.v.expect("tracked"),
    }
}

/// Nonzero diagonal entries only, without computing transforms.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let w = reduce(m, Track::None);
    let n = w.a.rows().min(w.a.cols());
    (0..n)
        .map(|i| w.a.get(i, i).clone())
        .take_while(|d| !d.is_zero())
        .collect()
}

/// Result with the inverse of `V` as well, for expressing vectors in the
/// basis given by the columns of `V`.
pub(crate) struct RightReduction {
    pub d: IntMatrix,
    pub v_inv: IntMatrix,
}

pub(crate) fn smith_right(m: &IntMatrix) -> RightReduction {
    let w = reduce(m, Track::Right);
    RightReduction {
        d: w.a,
        v_inv: w.v_inv.expect("tracked"),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Track {
    None,
    Right,
    Full,
}

struct Work {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(i, j);
        }
    }

    /// `row[target] += q * row[source]`
    fn add_row(&mut self, target: usize, source: usize, q: &BigInt) {
        self.a.add_row_multiple(target, source, q);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(target, source, q);
        }
    }

    /// `col[target] += q * col[source]`; on `V⁻¹` this is
    /// `row[source] -= q * row[target]`.
    fn add_col(&mut self, target: usize, source: usize, q: &BigInt) {
        self.a.add_col_multiple(target, source, q);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(target, source, q);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.add_row_multiple(source, target, &-q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }
}

fn reduce(m: &IntMatrix, track: Track) -> Work {
    let (rows, cols) = m.shape();
    let mut w = Work {
        a: m.clone(),
        u: (track == Track::Full).then(|| IntMatrix::identity(rows)),
        v: (track == Track::Full).then(|| IntMatrix::identity(cols)),
        v_inv: (track == Track::Right).then(|| IntMatrix::identity(cols)),
    };

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_pivot(&w.a, t) else {
                return w;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let pivot = w.a.get(t, t).clone();

            let mut clean = true;
            for i in t + 1..rows {
                let x = w.a.get(i, t);
                if x.is_zero() {
                    continue;
                }
                let q = x / &pivot;
                w.add_row(i, t, &-q);
                clean &= w.a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let x = w.a.get(t, j);
                if x.is_zero() {
                    continue;
                }
                let q = x / &pivot;
                w.add_col(j, t, &-q);
                clean &= w.a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }

            // Pivot row and column are clear; enforce divisibility of the rest.
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !w.a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
    }
    w
}

fn min_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => x.abs() < a.get(bi, bj).abs(),
            };
            if better {
                best = Some((i, j));
            }
        }
    }
    best
}
