use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::smith::{invariant_factors, smith_right};
use crate::error::{Error, Result};

/// Finitely generated abelian group `ℤ^rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/dₖ` in
/// invariant-factor form: every `dᵢ ≥ 2` and `d₁ | d₂ | …`.
///
/// The form is canonical, so derived equality is group isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    rank: usize,
    #[serde(with = "crate::bigint_serde::vec")]
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    /// `ℤ/n`; `n = 0` gives `ℤ` and `n = ±1` the zero group.
    pub fn cyclic(n: i64) -> Self {
        Self::from_cyclic_orders(0, [BigInt::from(n)])
    }

    /// Canonical form of `ℤ^rank ⊕ ⨁ ℤ/nᵢ` for arbitrary orders `nᵢ`
    /// (order 0 contributes a free summand, order ±1 nothing).
    pub fn from_cyclic_orders<I: IntoIterator<Item = BigInt>>(rank: usize, orders: I) -> Self {
        let orders: Vec<BigInt> = orders.into_iter().map(|n| n.abs()).collect();
        let extra_free = orders.iter().filter(|n| n.is_zero()).count();
        let finite: Vec<BigInt> = orders.into_iter().filter(|n| n > &BigInt::one()).collect();
        let k = finite.len();
        let factors = invariant_factors(&IntMatrix::diagonal(k, k, finite));
        Self {
            rank: rank + extra_free,
            torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
        }
    }

    /// Validating constructor for already-canonical data.
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        if torsion.iter().any(|d| d < &BigInt::from(2)) {
            return Err(Error::DimensionMismatch(
                "torsion invariant factors must be at least 2".into(),
            ));
        }
        if torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::DimensionMismatch(
                "torsion invariant factors must form a divisibility chain".into(),
            ));
        }
        Ok(Self { rank, torsion })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_cyclic_orders(
            self.rank + other.rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }

    /// `self ⊗ other`, summand by summand on cyclic decompositions.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut orders = Vec::new();
        for d in &self.torsion {
            orders.extend(std::iter::repeat_n(d.clone(), other.rank));
        }
        for e in &other.torsion {
            orders.extend(std::iter::repeat_n(e.clone(), self.rank));
        }
        for d in &self.torsion {
            for e in &other.torsion {
                orders.push(d.gcd(e));
            }
        }
        Self::from_cyclic_orders(self.rank * other.rank, orders)
    }

    /// `Tor(self, other)`: only the torsion parts contribute, `ℤ/gcd(d, e)`.
    pub fn tor(&self, other: &Self) -> Self {
        let mut orders = Vec::new();
        for d in &self.torsion {
            for e in &other.torsion {
                orders.push(d.gcd(e));
            }
        }
        Self::from_cyclic_orders(0, orders)
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Cokernel of `M : ℤ^cols → ℤ^rows`.
pub fn cokernel(m: &IntMatrix) -> FgAbelianGroup {
    let factors = invariant_factors(m);
    FgAbelianGroup {
        rank: m.rows() - factors.len(),
        torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Rank of the kernel of `M : ℤ^cols → ℤ^rows`; the kernel is free.
pub fn kernel_rank(m: &IntMatrix) -> usize {
    m.cols() - invariant_factors(m).len()
}

/// `ker(boundary_in) / im(boundary_out)` for
/// `C_{n+1} --boundary_out--> C_n --boundary_in--> C_{n-1}`.
pub fn chain_homology(boundary_in: &IntMatrix, boundary_out: &IntMatrix) -> Result<FgAbelianGroup> {
    if boundary_in.cols() != boundary_out.rows() {
        return Err(Error::DimensionMismatch(format!(
            "outgoing boundary is {}x{} but incoming boundary expects {} rows",
            boundary_out.rows(),
            boundary_out.cols(),
            boundary_in.cols()
        )));
    }
    let composite = boundary_in.checked_mul(boundary_out)?;
    if !composite.is_zero() {
        return Err(Error::NotAComplex(
            "composite of consecutive boundaries is nonzero".into(),
        ));
    }
    // Columns r.. of V span ker(boundary_in) as a saturated sublattice, so the
    // image of boundary_out has coordinates in rows r.. of V⁻¹ · boundary_out.
    let red = smith_right(boundary_in);
    let r = (0..red.d.rows().min(red.d.cols()))
        .take_while(|&i| !red.d.get(i, i).is_zero())
        .count();
    let n = boundary_in.cols();
    let coords = &red.v_inv * boundary_out;
    debug_assert!(coords.row_block(0..r).is_zero());
    Ok(cokernel(&coords.row_block(r..n)))
}
