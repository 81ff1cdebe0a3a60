//! Spans of finite sets `L ← M → R`, their composition by pullback, and the
//! transfer matrices they induce on free abelian groups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::models::{nerve_tower, FiniteGroupoid};

/// Sets are `{0, …, n−1}`; legs are total maps given by their values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSpan {
    pub left: usize,
    pub right: usize,
    pub left_leg: Vec<usize>,
    pub right_leg: Vec<usize>,
}

impl FiniteSpan {
    pub fn new(
        left: usize,
        right: usize,
        left_leg: Vec<usize>,
        right_leg: Vec<usize>,
    ) -> Result<Self> {
        if left_leg.len() != right_leg.len() {
            return Err(Error::ShapeMismatch(format!(
                "legs have {} and {} values",
                left_leg.len(),
                right_leg.len()
            )));
        }
        for (leg, size, name) in [(&left_leg, left, "left"), (&right_leg, right, "right")] {
            if let Some(&v) = leg.iter().find(|&&v| v >= size) {
                return Err(Error::ShapeMismatch(format!(
                    "{name} leg takes value {v} in a set of size {size}"
                )));
            }
        }
        Ok(Self {
            left,
            right,
            left_leg,
            right_leg,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            left: n,
            right: n,
            left_leg: (0..n).collect(),
            right_leg: (0..n).collect(),
        }
    }

    /// The span `X ←id− X −f→ Y` of a map.
    pub fn of_map(domain: usize, codomain: usize, f: Vec<usize>) -> Result<Self> {
        Self::new(domain, codomain, (0..domain).collect(), f)
    }

    pub fn mid(&self) -> usize {
        self.left_leg.len()
    }

    /// Sum of two spans, on disjoint unions of the three sets.
    pub fn disjoint_union(&self, other: &FiniteSpan) -> FiniteSpan {
        let mut left_leg = self.left_leg.clone();
        left_leg.extend(other.left_leg.iter().map(|&x| x + self.left));
        let mut right_leg = self.right_leg.clone();
        right_leg.extend(other.right_leg.iter().map(|&y| y + self.right));
        FiniteSpan {
            left: self.left + other.left,
            right: self.right + other.right,
            left_leg,
            right_leg,
        }
    }

    /// A bijection `σ` of mids with `other.leg ∘ σ = self.leg` for both legs,
    /// searched exhaustively. Mids larger than 8 are not searched.
    pub fn isomorphism_to(&self, other: &FiniteSpan) -> Option<Vec<usize>> {
        if self.left != other.left || self.right != other.right || self.mid() != other.mid() {
            return None;
        }
        if self.mid() > 8 {
            return None;
        }
        let n = self.mid();
        let mut sigma = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            a: &FiniteSpan,
            b: &FiniteSpan,
            z: usize,
            sigma: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if z == sigma.len() {
                return true;
            }
            for w in 0..sigma.len() {
                if !used[w] && a.left_leg[z] == b.left_leg[w] && a.right_leg[z] == b.right_leg[w] {
                    used[w] = true;
                    sigma[z] = w;
                    if go(a, b, z + 1, sigma, used) {
                        return true;
                    }
                    used[w] = false;
                }
            }
            false
        }
        go(self, other, 0, &mut sigma, &mut used).then_some(sigma)
    }
}

/// `s2 ∘ s1`: the mid is `{(z₁, z₂) : right₁(z₁) = left₂(z₂)}` in
/// lexicographic order.
pub fn compose(s2: &FiniteSpan, s1: &FiniteSpan) -> Result<FiniteSpan> {
    if s1.right != s2.left {
        return Err(Error::BoundaryMismatch(format!(
            "first span ends in a set of size {}, second starts in a set of size {}",
            s1.right, s2.left
        )));
    }
    let mut left_leg = Vec::new();
    let mut right_leg = Vec::new();
    for z1 in 0..s1.mid() {
        for z2 in 0..s2.mid() {
            if s1.right_leg[z1] == s2.left_leg[z2] {
                left_leg.push(s1.left_leg[z1]);
                right_leg.push(s2.right_leg[z2]);
            }
        }
    }
    Ok(FiniteSpan {
        left: s1.left,
        right: s2.right,
        left_leg,
        right_leg,
    })
}

/// `T[y][x] = #{z : left(z) = x, right(z) = y}`: pull back along the left
/// leg, sum over the fibres of the right leg.
pub fn transfer_matrix(s: &FiniteSpan) -> IntMatrix {
    let mut t = IntMatrix::zeros(s.right, s.left);
    for (&x, &y) in s.left_leg.iter().zip(&s.right_leg) {
        t.add_to(y, x, 1);
    }
    t
}

/// `G⁽ⁿ⁾ ←id− G⁽ⁿ⁾ −dᵢ→ G⁽ⁿ⁻¹⁾`, whose transfer is `(dᵢ)_*`.
pub fn face_span(g: &FiniteGroupoid, n: usize, i: usize) -> Result<FiniteSpan> {
    if n == 0 {
        return Err(Error::IndexOutOfRange { index: 0, max: 0 });
    }
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let tower = nerve_tower(g, n);
    let level = &tower[n];
    Ok(FiniteSpan {
        left: level.len(),
        right: tower[n - 1].len(),
        left_leg: (0..level.len()).collect(),
        right_leg: level.faces[i].clone(),
    })
}

/// `Σᵢ (−1)ⁱ T(face_span(G, n, i))`.
pub fn alternating_face_transfer(g: &FiniteGroupoid, n: usize) -> Result<IntMatrix> {
    let mut acc: Option<IntMatrix> = None;
    for i in 0..=n {
        let t = transfer_matrix(&face_span(g, n, i)?);
        acc = Some(match acc {
            None => t,
            Some(a) if i % 2 == 0 => &a + &t,
            Some(a) => &a - &t,
        });
    }
    Ok(acc.expect("n >= 1"))
}
