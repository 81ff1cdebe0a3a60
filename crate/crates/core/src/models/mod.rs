//! Supported ample-groupoid classes.
//!
//! Finite groupoids are handled through their nerve. The infinite classes
//! (shifts of finite type, AF, Cantor minimal systems) are described by
//! integer matrices and carry class-level facts as cited metadata.

mod classes;
mod finite;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use classes::{BratteliModel, CantorZModel, SftModel, DEFAULT_SIMPLICITY_DEPTH};
pub use finite::{nerve, nerve_size, nerve_tower, Arrow, FiniteGroupoid, GroupTable, NerveLevel};

/// A violated invariant, located by a JSON pointer into the model document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub pointer: String,
    pub code: String,
    pub message: String,
}

impl Violation {
    pub fn new(pointer: String, code: &str, message: String) -> Self {
        Self {
            pointer,
            code: code.to_string(),
            message,
        }
    }

    fn prefixed(mut self, prefix: &str) -> Self {
        self.pointer = format!("{prefix}{}", self.pointer);
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() {
            "/"
        } else {
            &self.pointer
        };
        write!(f, "{at}: {}", self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupoidModel {
    Finite(FiniteGroupoid),
    Sft(SftModel),
    Af(BratteliModel),
    CantorZ(CantorZModel),
    Product(Box<GroupoidModel>, Box<GroupoidModel>),
}

impl GroupoidModel {
    pub fn product(a: GroupoidModel, b: GroupoidModel) -> Self {
        Self::Product(Box::new(a), Box::new(b))
    }

    /// One-line description used in reports.
    pub fn summary(&self) -> String {
        match self {
            Self::Finite(g) => format!(
                "finite groupoid ({} units, {} arrows)",
                g.unit_count(),
                g.arrow_count()
            ),
            Self::Sft(a) => format!("shift of finite type, A = {}", a.matrix),
            Self::Af(b) => format!("AF groupoid, levels {:?}, tail {}", b.level_sizes, b.tail),
            Self::CantorZ(c) => format!(
                "Cantor minimal Z-system, levels {:?}, tail {}",
                c.diagram.level_sizes, c.diagram.tail
            ),
            Self::Product(a, b) => format!("product of [{}] and [{}]", a.summary(), b.summary()),
        }
    }

    /// Whether the class guarantees `Hₙ = 0` above a fixed degree.
    pub fn has_vanishing_homology(&self) -> bool {
        match self {
            Self::Finite(_) => false,
            Self::Sft(_) | Self::Af(_) | Self::CantorZ(_) => true,
            Self::Product(a, b) => a.has_vanishing_homology() && b.has_vanishing_homology(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate(model: &GroupoidModel) -> ValidationReport {
    fn collect(model: &GroupoidModel) -> Vec<Violation> {
        match model {
            GroupoidModel::Finite(g) => g.violations(),
            GroupoidModel::Sft(a) => a.violations(),
            GroupoidModel::Af(b) => b.violations(),
            GroupoidModel::CantorZ(c) => c.violations(),
            GroupoidModel::Product(a, b) => {
                let mut out: Vec<Violation> = collect(a)
                    .into_iter()
                    .map(|v| v.prefixed("/factors/0"))
                    .collect();
                out.extend(collect(b).into_iter().map(|v| v.prefixed("/factors/1")));
                out
            }
        }
    }
    ValidationReport {
        violations: collect(model),
    }
}

/// Whether a fact was computed from the model or is a cited theorem about
/// its class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Computed,
    Declared,
}

impl Basis {
    fn and(self, other: Basis) -> Basis {
        if self == Basis::Computed && other == Basis::Computed {
            Basis::Computed
        } else {
            Basis::Declared
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropyReport {
    pub torsion_free: bool,
    pub basis: Basis,
    pub detail: Vec<String>,
}

pub const SFT_ISOTROPY: &str = "isotropy groups of the Deaconu-Renault groupoid of a shift of finite type are trivial or infinite cyclic, hence torsion-free";
pub const AF_ISOTROPY: &str = "AF groupoids are principal (trivial isotropy), hence torsion-free";
pub const CANTOR_Z_ISOTROPY: &str = "a minimal homeomorphism of the Cantor set has no periodic points, so the transformation groupoid is principal";

pub fn isotropy_report(model: &GroupoidModel) -> IsotropyReport {
    match model {
        GroupoidModel::Finite(g) => {
            let orders = g.isotropy_orders();
            let detail: Vec<String> = orders
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 1)
                .map(|(u, k)| format!("unit {} has isotropy group of order {k}", g.units()[u]))
                .collect();
            IsotropyReport {
                torsion_free: detail.is_empty(),
                basis: Basis::Computed,
                detail: if detail.is_empty() {
                    vec!["all isotropy groups are trivial".into()]
                } else {
                    detail
                },
            }
        }
        GroupoidModel::Sft(_) => declared(SFT_ISOTROPY),
        GroupoidModel::Af(_) => declared(AF_ISOTROPY),
        GroupoidModel::CantorZ(_) => declared(CANTOR_Z_ISOTROPY),
        GroupoidModel::Product(a, b) => {
            let (ra, rb) = (isotropy_report(a), isotropy_report(b));
            let mut detail = ra.detail;
            for d in rb.detail {
                if !detail.contains(&d) {
                    detail.push(d);
                }
            }
            IsotropyReport {
                torsion_free: ra.torsion_free && rb.torsion_free,
                basis: ra.basis.and(rb.basis),
                detail,
            }
        }
    }
}

fn declared(fact: &str) -> IsotropyReport {
    IsotropyReport {
        torsion_free: true,
        basis: Basis::Declared,
        detail: vec![fact.to_string()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    #[test]
    fn isotropy() {
        let pair = GroupoidModel::Finite(FiniteGroupoid::pair(2));
        let r = isotropy_report(&pair);
        assert!(r.torsion_free);
        assert_eq!(r.basis, Basis::Computed);

        let z2 = GroupoidModel::Finite(FiniteGroupoid::group(&GroupTable::cyclic(2)));
        let r = isotropy_report(&z2);
        assert!(!r.torsion_free);
        assert_eq!(r.detail, vec!["unit x0 has isotropy group of order 2"]);

        let sft = GroupoidModel::Sft(SftModel::new(IntMatrix::from_rows(&[[2]]).unwrap()));
        let r = isotropy_report(&sft);
        assert!(r.torsion_free);
        assert_eq!(r.basis, Basis::Declared);
        assert_eq!(r.detail, vec![SFT_ISOTROPY]);

        let prod = GroupoidModel::product(sft, z2);
        let r = isotropy_report(&prod);
        assert!(!r.torsion_free);
        assert_eq!(r.basis, Basis::Declared);
    }

    #[test]
    fn product_violations_are_located() {
        let bad = GroupoidModel::Sft(SftModel::new(IntMatrix::from_rows(&[[0]]).unwrap()));
        let good = GroupoidModel::Finite(FiniteGroupoid::pair(2));
        let report = validate(&GroupoidModel::product(good, bad));
        assert!(!report.is_ok());
        assert!(report
            .violations
            .iter()
            .all(|v| v.pointer.starts_with("/factors/1/matrix")));
    }
}
