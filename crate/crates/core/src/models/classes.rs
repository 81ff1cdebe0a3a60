//! Shifts of finite type, Bratteli diagrams and Cantor minimal systems.

use num_traits::{One, Signed};

use super::Violation;
use crate::colimit::InductiveSystem;
use crate::linalg::IntMatrix;

/// The Deaconu–Renault groupoid of the one-sided edge shift of a
/// nonnegative square matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SftModel {
    pub matrix: IntMatrix,
}

impl SftModel {
    pub fn new(matrix: IntMatrix) -> Self {
        Self { matrix }
    }

    /// `I − Aᵗ`, whose cokernel and kernel carry both homology and K-theory.
    pub fn one_minus_transpose(&self) -> IntMatrix {
        &IntMatrix::identity(self.matrix.rows()) - &self.matrix.transpose()
    }

    pub fn violations(&self) -> Vec<Violation> {
        let a = &self.matrix;
        let mut out = Vec::new();
        if !a.is_square() {
            out.push(Violation::new(
                "/matrix".into(),
                "not_square",
                format!("matrix is {}x{}, not square", a.rows(), a.cols()),
            ));
            return out;
        }
        if a.rows() == 0 {
            out.push(Violation::new(
                "/matrix".into(),
                "empty",
                "matrix is empty".into(),
            ));
            return out;
        }
        out.extend(nonnegativity("/matrix", a));
        out.extend(no_zero_lines("/matrix", a));
        out
    }
}

/// Bratteli diagram `ℤ^{n₀} → ℤ^{n₁} → … → ℤ^{nₗ} --tail--> …` with
/// nonnegative incidence matrices; `incidences[i]` is `n_{i+1} × n_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BratteliModel {
    pub level_sizes: Vec<usize>,
    pub incidences: Vec<IntMatrix>,
    pub tail: IntMatrix,
}

impl BratteliModel {
    pub fn stationary(tail: IntMatrix) -> Self {
        Self {
            level_sizes: vec![tail.rows()],
            incidences: Vec::new(),
            tail,
        }
    }

    pub fn inductive_system(&self) -> Option<InductiveSystem> {
        InductiveSystem::new(
            self.level_sizes.clone(),
            self.incidences.clone(),
            self.tail.clone(),
        )
        .ok()
    }

    /// Shape and sign problems; every vertex must emit an edge and every
    /// vertex past level 0 must receive one.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if let Err(e) = InductiveSystem::new(
            self.level_sizes.clone(),
            self.incidences.clone(),
            self.tail.clone(),
        ) {
            out.push(Violation::new("/incidences".into(), "shape", e.to_string()));
            return out;
        }
        if self.level_sizes.contains(&0) {
            out.push(Violation::new(
                "/levels".into(),
                "empty_level",
                "a level has no vertices".into(),
            ));
        }
        for (i, m) in self.incidences.iter().enumerate() {
            let at = format!("/incidences/{i}");
            out.extend(nonnegativity(&at, m));
            out.extend(no_zero_lines(&at, m));
        }
        out.extend(nonnegativity("/tail", &self.tail));
        out.extend(no_zero_lines("/tail", &self.tail));
        out
    }
}

pub const DEFAULT_SIMPLICITY_DEPTH: usize = 3;

/// A minimal ℤ-action on the Cantor set, presented by a simple Bratteli
/// diagram whose dimension group is the coinvariant group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorZModel {
    pub diagram: BratteliModel,
    /// Largest telescoping power tried when certifying simplicity.
    pub depth: usize,
}

impl CantorZModel {
    pub fn new(diagram: BratteliModel) -> Self {
        Self {
            diagram,
            depth: DEFAULT_SIMPLICITY_DEPTH,
        }
    }

    /// The smallest `k ≤ depth` with `tailᵏ` strictly positive, provided
    /// the path space is infinite; otherwise a reason.
    pub fn simplicity_certificate(&self) -> Result<usize, String> {
        let tail = &self.diagram.tail;
        if !tail.is_square() || tail.rows() == 0 {
            return Err("tail is not a nonempty square matrix".into());
        }
        if tail.rows() == 1 && tail.get(0, 0).is_one() {
            return Err(
                "tail [1] has a single infinite path; the path space is not a Cantor set".into(),
            );
        }
        let mut power = tail.clone();
        for k in 1..=self.depth {
            if power.is_strictly_positive() {
                return Ok(k);
            }
            power = &power * tail;
        }
        Err(format!(
            "no power tail^k with k <= {} has all entries positive",
            self.depth
        ))
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = self.diagram.violations();
        if out.is_empty() {
            if let Err(reason) = self.simplicity_certificate() {
                out.push(Violation::new("/tail".into(), "not_simple", reason));
            }
        }
        out
    }
}

fn nonnegativity(at: &str, m: &IntMatrix) -> Vec<Violation> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m.get(i, j).is_negative() {
                out.push(Violation::new(
                    format!("{at}/{i}/{j}"),
                    "negative_entry",
                    format!("entry ({i}, {j}) is negative"),
                ));
            }
        }
    }
    out
}

fn no_zero_lines(at: &str, m: &IntMatrix) -> Vec<Violation> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        if m.is_zero_row(i) {
            out.push(Violation::new(
                format!("{at}/{i}"),
                "zero_row",
                format!("row {i} is zero"),
            ));
        }
    }
    for j in 0..m.cols() {
        if m.is_zero_col(j) {
            out.push(Violation::new(
                at.to_string(),
                "zero_column",
                format!("column {j} is zero"),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn sft_checks() {
        assert!(SftModel::new(m(&[&[1, 1], &[1, 1]]))
            .violations()
            .is_empty());
        let v = SftModel::new(m(&[&[1, 0, 0], &[1, 1, 0], &[0, 1, 1]])).violations();
        assert_eq!(v.len(), 0);
        let v = SftModel::new(m(&[&[1, 1, 0], &[1, 1, 0], &[1, 0, 0]])).violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].code, "zero_column");
        assert_eq!(v[0].message, "column 2 is zero");
        let v = SftModel::new(m(&[&[0]])).violations();
        assert_eq!(
            v.iter().map(|x| x.code.as_str()).collect::<Vec<_>>(),
            ["zero_row", "zero_column"]
        );
        assert_eq!(
            SftModel::new(m(&[&[1, 2]])).violations()[0].code,
            "not_square"
        );
        assert_eq!(
            SftModel::new(m(&[&[1, -1], &[1, 1]])).violations()[0].code,
            "negative_entry"
        );
    }

    #[test]
    fn simplicity() {
        let dyadic = CantorZModel::new(BratteliModel::stationary(m(&[&[2]])));
        assert_eq!(dyadic.simplicity_certificate(), Ok(1));
        let fib = CantorZModel::new(BratteliModel::stationary(m(&[&[1, 1], &[1, 0]])));
        assert_eq!(fib.simplicity_certificate(), Ok(2));
        let point = CantorZModel::new(BratteliModel::stationary(m(&[&[1]])));
        assert!(point.simplicity_certificate().is_err());
        let split = CantorZModel::new(BratteliModel::stationary(m(&[&[2, 0], &[0, 2]])));
        assert!(split.simplicity_certificate().is_err());
        assert_eq!(split.violations()[0].code, "not_simple");
        // primitive, but only at the fourth power
        let slow = m(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        let mut c = CantorZModel::new(BratteliModel::stationary(slow));
        assert!(c.simplicity_certificate().is_err());
        c.depth = 10;
        assert!(c.simplicity_certificate().is_ok());
    }

    #[test]
    fn bratteli_checks() {
        let ok = BratteliModel {
            level_sizes: vec![1, 2],
            incidences: vec![m(&[&[1], &[1]])],
            tail: m(&[&[1, 1], &[0, 1]]),
        };
        assert!(ok.violations().is_empty());
        let bad_shape = BratteliModel {
            level_sizes: vec![1, 2],
            incidences: vec![m(&[&[1, 1]])],
            tail: IntMatrix::identity(2),
        };
        assert_eq!(bad_shape.violations()[0].code, "shape");
    }
}
