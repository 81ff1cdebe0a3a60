//! Groupoid homology with integer coefficients.
//!
//! Finite groupoids use the unnormalized chain complex of the nerve,
//! `∂ₙ = Σᵢ (−1)ⁱ (dᵢ)_*`. The infinite classes use their known two-term
//! complexes or dimension groups.

use serde::{Deserialize, Serialize};

use crate::colimit::{colimit_invariants_at, ColimitInvariants};
use crate::error::{Error, Result};
use crate::linalg::{chain_homology, cokernel, kernel_rank, FgAbelianGroup, IntMatrix};
use crate::models::{
    nerve_size, nerve_tower, BratteliModel, CantorZModel, FiniteGroupoid, GroupoidModel,
    NerveLevel, SftModel,
};
use crate::options::ComputeOptions;

/// One homology or K-theory group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GroupRepr", try_from = "GroupRepr")]
pub enum DegreeGroup {
    Fg(FgAbelianGroup),
    /// A colimit known only through its invariants.
    Colimit(ColimitInvariants),
    /// Rank only; torsion was dropped.
    Rational {
        rank: usize,
    },
}

impl DegreeGroup {
    pub fn rank(&self) -> usize {
        match self {
            Self::Fg(g) => g.rank(),
            Self::Colimit(c) => c.rank,
            Self::Rational { rank } => *rank,
        }
    }

    pub fn as_fg(&self) -> Option<&FgAbelianGroup> {
        match self {
            Self::Fg(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Fg(g) => g.is_zero(),
            Self::Colimit(c) => c.rank == 0 && c.torsion_free,
            Self::Rational { rank } => *rank == 0,
        }
    }

    pub fn zero() -> Self {
        Self::Fg(FgAbelianGroup::zero())
    }

    pub fn free(rank: usize) -> Self {
        Self::Fg(FgAbelianGroup::free(rank))
    }
}

impl std::fmt::Display for DegreeGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Fg(g) => write!(f, "{g}"),
            Self::Colimit(c) => {
                let tf = if c.torsion_free {
                    "torsion-free"
                } else {
                    "torsion unknown"
                };
                write!(
                    f,
                    "colimit of rank {} ({tf}, verified up to stage {})",
                    c.rank, c.verified_stage
                )
            }
            Self::Rational { rank } => write!(f, "rank {rank} (rational)"),
        }
    }
}

/// Flat JSON form shared by the three variants.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupRepr {
    rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    torsion: Option<Vec<crate::bigint_serde::Integer>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    torsion_free: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    torsion_verified_up_to_stage: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rational_only: Option<bool>,
}

impl From<DegreeGroup> for GroupRepr {
    fn from(g: DegreeGroup) -> Self {
        let mut repr = GroupRepr {
            rank: g.rank(),
            torsion: None,
            torsion_free: None,
            torsion_verified_up_to_stage: None,
            rational_only: None,
        };
        match g {
            DegreeGroup::Fg(g) => {
                repr.torsion = Some(
                    g.torsion()
                        .iter()
                        .cloned()
                        .map(crate::bigint_serde::Integer)
                        .collect(),
                )
            }
            DegreeGroup::Colimit(c) => {
                repr.torsion_free = Some(c.torsion_free);
                repr.torsion_verified_up_to_stage = Some(c.verified_stage);
            }
            DegreeGroup::Rational { .. } => repr.rational_only = Some(true),
        }
        repr
    }
}

impl TryFrom<GroupRepr> for DegreeGroup {
    type Error = String;

    fn try_from(r: GroupRepr) -> std::result::Result<Self, String> {
        match (r.torsion, r.torsion_verified_up_to_stage, r.rational_only) {
            (Some(t), None, None) if r.torsion_free.is_none() => {
                FgAbelianGroup::new(r.rank, t.into_iter().map(|x| x.0).collect())
                    .map(DegreeGroup::Fg)
                    .map_err(|e| e.to_string())
            }
            (None, Some(stage), None) => Ok(DegreeGroup::Colimit(ColimitInvariants {
                rank: r.rank,
                torsion_free: r.torsion_free.unwrap_or(false),
                verified_stage: stage,
            })),
            (None, None, Some(true)) if r.torsion_free.is_none() => {
                Ok(DegreeGroup::Rational { rank: r.rank })
            }
            _ => Err("group must have exactly one of torsion, torsion_verified_up_to_stage, rational_only".into()),
        }
    }
}

/// `H₀, …, H_max_degree`, with a structural flag for vanishing above.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedGroup {
    pub by_degree: Vec<DegreeGroup>,
    pub vanishing_above: bool,
}

impl GradedGroup {
    pub fn max_degree(&self) -> usize {
        self.by_degree.len().saturating_sub(1)
    }

    pub fn degree(&self, n: usize) -> Option<&DegreeGroup> {
        self.by_degree.get(n)
    }

    /// Homology of a point: `ℤ` in degree 0.
    pub fn point() -> Self {
        Self {
            by_degree: vec![DegreeGroup::free(1)],
            vanishing_above: true,
        }
    }

    pub fn is_finitely_generated(&self) -> bool {
        self.by_degree.iter().all(|g| g.as_fg().is_some())
    }
}

/// Matrix of `∂ₙ : ℤ^{G⁽ⁿ⁾} → ℤ^{G⁽ⁿ⁻¹⁾}` in the nerve's enumeration order.
pub fn boundary_matrix(g: &FiniteGroupoid, n: usize) -> IntMatrix {
    assert!(n >= 1, "boundary_matrix needs n >= 1");
    let tower = nerve_tower(g, n);
    boundary_from_level(tower[n - 1].len(), &tower[n])
}

fn boundary_from_level(lower: usize, level: &NerveLevel) -> IntMatrix {
    let mut m = IntMatrix::zeros(lower, level.len());
    for (i, face) in level.faces.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for (k, &f) in face.iter().enumerate() {
            m.add_to(f, k, sign);
        }
    }
    m
}

/// `H₀ … H_max_degree` from the nerve complex, which needs degree
/// `max_degree + 1` of the nerve.
pub fn homology_finite(
    g: &FiniteGroupoid,
    max_degree: usize,
    size_bound: usize,
) -> Result<GradedGroup> {
    let top = max_degree + 1;
    for n in 0..=top {
        let size = nerve_size(g, n);
        if size > size_bound as u128 {
            return Err(Error::SizeBoundExceeded {
                degree: n,
                size,
                bound: size_bound,
            });
        }
    }
    let tower = nerve_tower(g, top);
    let boundaries: Vec<IntMatrix> = (1..=top)
        .map(|n| boundary_from_level(tower[n - 1].len(), &tower[n]))
        .collect();
    let mut by_degree = vec![DegreeGroup::Fg(cokernel(&boundaries[0]))];
    for n in 1..=max_degree {
        let h = chain_homology(&boundaries[n - 1], &boundaries[n])?;
        by_degree.push(DegreeGroup::Fg(h));
    }
    Ok(GradedGroup {
        by_degree,
        vanishing_above: false,
    })
}

pub fn homology_sft(a: &SftModel) -> Result<GradedGroup> {
    ensure_valid(a.violations())?;
    let m = a.one_minus_transpose();
    Ok(GradedGroup {
        by_degree: vec![
            DegreeGroup::Fg(cokernel(&m)),
            DegreeGroup::free(kernel_rank(&m)),
        ],
        vanishing_above: true,
    })
}

pub fn homology_af(b: &BratteliModel, stage: usize) -> Result<GradedGroup> {
    ensure_valid(b.violations())?;
    let sys = b.inductive_system().expect("validated shapes");
    Ok(GradedGroup {
        by_degree: vec![DegreeGroup::Colimit(colimit_invariants_at(&sys, stage))],
        vanishing_above: true,
    })
}

/// `H₀` is the coinvariant group, identified with the dimension group of the
/// diagram; `H₁ = ℤ` for every minimal Cantor system.
pub fn homology_cantor_z(c: &CantorZModel, stage: usize) -> Result<GradedGroup> {
    c.simplicity_certificate()
        .map_err(Error::SimplicityNotCertified)?;
    ensure_valid(c.diagram.violations())?;
    let sys = c.diagram.inductive_system().expect("validated shapes");
    Ok(GradedGroup {
        by_degree: vec![
            DegreeGroup::Colimit(colimit_invariants_at(&sys, stage)),
            DegreeGroup::free(1),
        ],
        vanishing_above: true,
    })
}

/// Whether Künneth products keep torsion or only ranks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KunnethMode {
    Exact,
    RationalOnly,
}

/// `Hₙ = ⨁_{p+q=n} Hₚ ⊗ H'_q ⊕ ⨁_{p+q=n−1} Tor(Hₚ, H'_q)`.
///
/// With both factors vanishing above their range, the result covers every
/// nonzero degree unless `max_degree` cuts it short. A truncated factor
/// limits the result to the degrees it determines.
pub fn homology_product(
    h1: &GradedGroup,
    h2: &GradedGroup,
    max_degree: usize,
    mode: KunnethMode,
) -> Result<GradedGroup> {
    if mode == KunnethMode::Exact {
        for h in [h1, h2] {
            if let Some(n) = h.by_degree.iter().position(|g| g.as_fg().is_none()) {
                return Err(Error::NotFinitelyGenerated { degree: n });
            }
        }
    }
    let get = |h: &GradedGroup, n: usize| -> DegreeGroup {
        h.degree(n).cloned().unwrap_or_else(DegreeGroup::zero)
    };
    let entry = |n: usize| -> DegreeGroup {
        match mode {
            KunnethMode::RationalOnly => {
                let rank = (0..=n)
                    .map(|p| get(h1, p).rank() * get(h2, n - p).rank())
                    .sum();
                DegreeGroup::Rational { rank }
            }
            KunnethMode::Exact => {
                let mut sum = FgAbelianGroup::zero();
                for p in 0..=n {
                    let (a, b) = (get(h1, p), get(h2, n - p));
                    sum = sum.direct_sum(
                        &a.as_fg()
                            .expect("checked")
                            .tensor(b.as_fg().expect("checked")),
                    );
                }
                for p in 0..n {
                    let (a, b) = (get(h1, p), get(h2, n - 1 - p));
                    sum = sum
                        .direct_sum(&a.as_fg().expect("checked").tor(b.as_fg().expect("checked")));
                }
                DegreeGroup::Fg(sum)
            }
        }
    };

    let (top1, top2) = (h1.max_degree(), h2.max_degree());
    let (top, vanishing) = if h1.vanishing_above && h2.vanishing_above {
        let natural = top1 + top2;
        // One more degree can carry a Tor term.
        let natural = if entry(natural + 1).is_zero() {
            natural
        } else {
            natural + 1
        };
        if max_degree >= natural {
            (natural, true)
        } else {
            (max_degree, false)
        }
    } else {
        let determined = match (h1.vanishing_above, h2.vanishing_above) {
            (false, false) => top1.min(top2),
            (false, true) => top1,
            _ => top2,
        };
        (determined.min(max_degree), false)
    };
    Ok(GradedGroup {
        by_degree: (0..=top).map(entry).collect(),
        vanishing_above: vanishing,
    })
}

/// Homology of any supported model.
pub fn homology_of(model: &GroupoidModel, opts: &ComputeOptions) -> Result<GradedGroup> {
    let h = match model {
        GroupoidModel::Finite(g) => {
            ensure_valid(g.violations())?;
            homology_finite(g, opts.max_degree, opts.size_bound)?
        }
        GroupoidModel::Sft(a) => homology_sft(a)?,
        GroupoidModel::Af(b) => homology_af(b, opts.stage)?,
        GroupoidModel::CantorZ(c) => homology_cantor_z(c, opts.stage)?,
        GroupoidModel::Product(a, b) => {
            let (ha, hb) = (homology_of(a, opts)?, homology_of(b, opts)?);
            let mode =
                if opts.rational_only || !ha.is_finitely_generated() || !hb.is_finitely_generated()
                {
                    KunnethMode::RationalOnly
                } else {
                    KunnethMode::Exact
                };
            homology_product(
                &ha,
                &hb,
                opts.max_degree.max(ha.max_degree() + hb.max_degree() + 1),
                mode,
            )?
        }
    };
    Ok(if opts.rational_only {
        rationalize(h)
    } else {
        h
    })
}

/// Drops torsion, keeping ranks.
pub fn rationalize(h: GradedGroup) -> GradedGroup {
    GradedGroup {
        by_degree: h
            .by_degree
            .into_iter()
            .map(|g| DegreeGroup::Rational { rank: g.rank() })
            .collect(),
        vanishing_above: h.vanishing_above,
    }
}

pub(crate) fn ensure_valid(violations: Vec<crate::models::Violation>) -> Result<()> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidModel(violations))
    }
}
