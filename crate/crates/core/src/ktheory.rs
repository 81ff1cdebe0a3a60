//! K-theory of reduced groupoid C*-algebras from the classical formulas of
//! each model class. Nothing here looks at homology; it is the independent
//! side of the comparison.

use serde::{Deserialize, Serialize};

use crate::colimit::colimit_invariants_at;
use crate::error::{Error, Result};
use crate::homology::{ensure_valid, DegreeGroup, KunnethMode};
use crate::linalg::{cokernel, kernel_rank, FgAbelianGroup};
use crate::models::{BratteliModel, CantorZModel, FiniteGroupoid, GroupoidModel, SftModel};
use crate::options::ComputeOptions;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KPair {
    pub k0: DegreeGroup,
    pub k1: DegreeGroup,
}

impl KPair {
    /// K-theory of `ℂ`.
    pub fn point() -> Self {
        Self {
            k0: DegreeGroup::free(1),
            k1: DegreeGroup::zero(),
        }
    }

    pub fn ranks(&self) -> (usize, usize) {
        (self.k0.rank(), self.k1.rank())
    }

    pub fn is_finitely_generated(&self) -> bool {
        self.k0.as_fg().is_some() && self.k1.as_fg().is_some()
    }
}

pub const FINITE_K_FORMULA: &str = "the C*-algebra of a finite principal groupoid is a direct sum of full matrix algebras, one per orbit, so K0 = Z^orbits and K1 = 0";
pub const SFT_K_FORMULA: &str =
    "Cuntz-Krieger: K0(O_A) = coker(I - A^t) and K1(O_A) = ker(I - A^t)";
pub const AF_K_FORMULA: &str =
    "Elliott: K0 of an AF algebra is the dimension group of its Bratteli diagram and K1 = 0";
pub const CANTOR_Z_K_FORMULA: &str = "Pimsner-Voiculescu with Putnam's Bratteli-Vershik model: K0(C(X) x Z) is the dimension group of the diagram and K1 = Z for a minimal Cantor system";
pub const KUNNETH_K_FORMULA: &str =
    "Schochet's Kunneth theorem for tensor products, valid for algebras in the bootstrap class";

pub fn k_finite_principal(g: &FiniteGroupoid) -> Result<KPair> {
    ensure_valid(g.violations())?;
    if let Some((u, &order)) = g
        .isotropy_orders()
        .iter()
        .enumerate()
        .find(|(_, &k)| k != 1)
    {
        return Err(Error::NotPrincipal {
            unit: g.units()[u].clone(),
            order,
        });
    }
    Ok(KPair {
        k0: DegreeGroup::free(g.orbit_count()),
        k1: DegreeGroup::zero(),
    })
}

pub fn k_sft(a: &SftModel) -> Result<KPair> {
    ensure_valid(a.violations())?;
    let n = a.matrix.rows();
    let mut m = crate::linalg::IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            // (I − Aᵗ)[i][j] = δᵢⱼ − A[j][i]
            m.set(i, j, m.get(i, j) - a.matrix.get(j, i));
        }
    }
    Ok(KPair {
        k0: DegreeGroup::Fg(cokernel(&m)),
        k1: DegreeGroup::free(kernel_rank(&m)),
    })
}

pub fn k_af(b: &BratteliModel, stage: usize) -> Result<KPair> {
    ensure_valid(b.violations())?;
    let sys = b.inductive_system().expect("validated shapes");
    Ok(KPair {
        k0: DegreeGroup::Colimit(colimit_invariants_at(&sys, stage)),
        k1: DegreeGroup::zero(),
    })
}

pub fn k_cantor_z(c: &CantorZModel, stage: usize) -> Result<KPair> {
    c.simplicity_certificate()
        .map_err(Error::SimplicityNotCertified)?;
    ensure_valid(c.diagram.violations())?;
    let sys = c.diagram.inductive_system().expect("validated shapes");
    Ok(KPair {
        k0: DegreeGroup::Colimit(colimit_invariants_at(&sys, stage)),
        k1: DegreeGroup::free(1),
    })
}

/// ℤ/2-graded Künneth formula:
/// `K₀ = K₀⊗K₀' ⊕ K₁⊗K₁' ⊕ Tor(K₀, K₁') ⊕ Tor(K₁, K₀')` and
/// `K₁ = K₀⊗K₁' ⊕ K₁⊗K₀' ⊕ Tor(K₀, K₀') ⊕ Tor(K₁, K₁')`.
pub fn k_product(a: &KPair, b: &KPair, mode: KunnethMode) -> Result<KPair> {
    match mode {
        KunnethMode::RationalOnly => {
            let ((a0, a1), (b0, b1)) = (a.ranks(), b.ranks());
            Ok(KPair {
                k0: DegreeGroup::Rational {
                    rank: a0 * b0 + a1 * b1,
                },
                k1: DegreeGroup::Rational {
                    rank: a0 * b1 + a1 * b0,
                },
            })
        }
        KunnethMode::Exact => {
            let fg = |g: &DegreeGroup, degree: usize| -> Result<FgAbelianGroup> {
                g.as_fg()
                    .cloned()
                    .ok_or(Error::NotFinitelyGenerated { degree })
            };
            let (a0, a1, b0, b1) = (fg(&a.k0, 0)?, fg(&a.k1, 1)?, fg(&b.k0, 0)?, fg(&b.k1, 1)?);
            let k0 = a0
                .tensor(&b0)
                .direct_sum(&a1.tensor(&b1))
                .direct_sum(&a0.tor(&b1))
                .direct_sum(&a1.tor(&b0));
            let k1 = a0
                .tensor(&b1)
                .direct_sum(&a1.tensor(&b0))
                .direct_sum(&a0.tor(&b0))
                .direct_sum(&a1.tor(&b1));
            Ok(KPair {
                k0: DegreeGroup::Fg(k0),
                k1: DegreeGroup::Fg(k1),
            })
        }
    }
}

/// K-theory of any supported model.
pub fn ktheory_of(model: &GroupoidModel, opts: &ComputeOptions) -> Result<KPair> {
    let k = match model {
        GroupoidModel::Finite(g) => k_finite_principal(g)?,
        GroupoidModel::Sft(a) => k_sft(a)?,
        GroupoidModel::Af(b) => k_af(b, opts.stage)?,
        GroupoidModel::CantorZ(c) => k_cantor_z(c, opts.stage)?,
        GroupoidModel::Product(a, b) => {
            let (ka, kb) = (ktheory_of(a, opts)?, ktheory_of(b, opts)?);
            let mode =
                if opts.rational_only || !ka.is_finitely_generated() || !kb.is_finitely_generated()
                {
                    KunnethMode::RationalOnly
                } else {
                    KunnethMode::Exact
                };
            k_product(&ka, &kb, mode)?
        }
    };
    Ok(if opts.rational_only {
        KPair {
            k0: DegreeGroup::Rational { rank: k.k0.rank() },
            k1: DegreeGroup::Rational { rank: k.k1.rank() },
        }
    } else {
        k
    })
}

/// Provenance strings for the formulas used on `model`.
pub fn k_formulas(model: &GroupoidModel) -> Vec<&'static str> {
    match model {
        GroupoidModel::Finite(_) => vec![FINITE_K_FORMULA],
        GroupoidModel::Sft(_) => vec![SFT_K_FORMULA],
        GroupoidModel::Af(_) => vec![AF_K_FORMULA],
        GroupoidModel::CantorZ(_) => vec![CANTOR_Z_K_FORMULA],
        GroupoidModel::Product(a, b) => {
            let mut out = k_formulas(a);
            for f in k_formulas(b) {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
            out.push(KUNNETH_K_FORMULA);
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;
    use crate::models::GroupTable;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn fg(rank: usize, torsion: &[i64]) -> DegreeGroup {
        DegreeGroup::Fg(FgAbelianGroup::from_cyclic_orders(
            rank,
            torsion.iter().map(|&d| d.into()),
        ))
    }

    fn pair(k0: DegreeGroup, k1: DegreeGroup) -> KPair {
        KPair { k0, k1 }
    }

    #[test]
    fn finite_principal() {
        let k = k_finite_principal(&FiniteGroupoid::pair(3)).unwrap();
        assert_eq!(k, pair(fg(1, &[]), fg(0, &[])));
        let k = k_finite_principal(&FiniteGroupoid::trivial(2)).unwrap();
        assert_eq!(k, pair(fg(2, &[]), fg(0, &[])));
        let err = k_finite_principal(&FiniteGroupoid::group(&GroupTable::cyclic(2))).unwrap_err();
        assert_eq!(
            err,
            Error::NotPrincipal {
                unit: "x0".into(),
                order: 2
            }
        );
    }

    #[test]
    fn cuntz_krieger() {
        assert_eq!(
            k_sft(&SftModel::new(m(&[&[1, 1], &[1, 1]]))).unwrap(),
            pair(fg(0, &[]), fg(0, &[]))
        );
        assert_eq!(
            k_sft(&SftModel::new(m(&[&[3]]))).unwrap(),
            pair(fg(0, &[2]), fg(0, &[]))
        );
        assert_eq!(
            k_sft(&SftModel::new(m(&[&[1, 1], &[1, 0]]))).unwrap(),
            pair(fg(0, &[]), fg(0, &[]))
        );
        // O_n has K0 = Z/(n-1)
        assert_eq!(k_sft(&SftModel::new(m(&[&[5]]))).unwrap().k0, fg(0, &[4]));
    }

    #[test]
    fn af_and_cantor() {
        let k = k_af(&BratteliModel::stationary(m(&[&[2]])), 0).unwrap();
        assert_eq!(k.ranks(), (1, 0));
        assert!(matches!(k.k0, DegreeGroup::Colimit(ref c) if c.torsion_free));
        assert_eq!(
            k_af(&BratteliModel::stationary(IntMatrix::identity(1)), 0)
                .unwrap()
                .ranks(),
            (1, 0)
        );
        assert_eq!(
            k_af(&BratteliModel::stationary(m(&[&[1, 1], &[1, 0]])), 0)
                .unwrap()
                .ranks(),
            (2, 0)
        );

        let odo = CantorZModel::new(BratteliModel::stationary(m(&[&[2]])));
        let k = k_cantor_z(&odo, 0).unwrap();
        assert_eq!(k.ranks(), (1, 1));
        assert_eq!(k.k1, fg(1, &[]));
        let fib = CantorZModel::new(BratteliModel::stationary(m(&[&[1, 1], &[1, 0]])));
        assert_eq!(k_cantor_z(&fib, 0).unwrap().ranks(), (2, 1));
        let split = CantorZModel::new(BratteliModel::stationary(m(&[&[1, 0], &[0, 1]])));
        assert!(matches!(
            k_cantor_z(&split, 0),
            Err(Error::SimplicityNotCertified(_))
        ));
    }

    #[test]
    fn graded_kunneth() {
        let circle = pair(fg(1, &[]), fg(1, &[]));
        let p = k_product(&circle, &circle, KunnethMode::Exact).unwrap();
        assert_eq!(p, pair(fg(2, &[]), fg(2, &[])));

        let o3 = pair(fg(0, &[2]), fg(0, &[]));
        assert_eq!(
            k_product(&o3, &KPair::point(), KunnethMode::Exact).unwrap(),
            o3
        );
        assert_eq!(
            k_product(&KPair::point(), &circle, KunnethMode::Exact).unwrap(),
            circle
        );

        let p = k_product(&o3, &o3, KunnethMode::Exact).unwrap();
        assert_eq!(p, pair(fg(0, &[2]), fg(0, &[2])));

        let colim = pair(
            DegreeGroup::Colimit(crate::colimit::ColimitInvariants {
                rank: 1,
                torsion_free: true,
                verified_stage: 2,
            }),
            fg(1, &[]),
        );
        assert!(matches!(
            k_product(&colim, &circle, KunnethMode::Exact),
            Err(Error::NotFinitelyGenerated { degree: 0 })
        ));
        let r = k_product(&colim, &circle, KunnethMode::RationalOnly).unwrap();
        assert_eq!(r.ranks(), (2, 2));
    }
}
