//! The HK comparison: periodicized homology against K-theory, with
//! preconditions, rational and integral verdicts, and the rank counts that
//! follow from it.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{homology_of, DegreeGroup, GradedGroup};
use crate::ktheory::{k_formulas, ktheory_of, KPair};
use crate::linalg::FgAbelianGroup;
use crate::models::{isotropy_report, validate, Basis, GroupoidModel, SftModel};
use crate::options::ComputeOptions;

pub const TORSION_FREE_HYPOTHESIS: &str = "the rational comparison requires the isotropy to be a torsion-free group for all units; this model has torsion isotropy, so no rational verdict is given";
pub const FINITE_BAUM_CONNES: &str =
    "finite groupoids are proper, so the Baum-Connes assembly map is an isomorphism";
pub const AMENABLE_BAUM_CONNES: &str =
    "the groupoid is amenable, and Tu's theorem gives Baum-Connes for amenable groupoids";
pub const PRODUCT_BAUM_CONNES: &str =
    "products of amenable groupoids are amenable, so Tu's theorem applies";
pub const SMALE_IDENTIFICATION: &str = "for a shift of finite type viewed as a Smale space with totally disconnected stable sets, stable Putnam homology H^s_n agrees with H_n of the unstable groupoid";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Framing {
    Groupoid,
    Smale,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Match,
    Mismatch,
    PreconditionFailed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum NotApplicable {
    NotApplicable,
}

/// `true`, `false` or `"not_applicable"` in JSON.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntegralMatch {
    Decided(bool),
    #[serde(with = "not_applicable")]
    NotApplicable,
}

mod not_applicable {
    use super::NotApplicable;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        NotApplicable::NotApplicable.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        NotApplicable::deserialize(d).map(|_| ())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityRanks {
    pub even: usize,
    pub odd: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preconditions {
    pub torsion_free: bool,
    pub torsion_free_basis: Basis,
    pub isotropy: Vec<String>,
    pub baum_connes: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HkReport {
    pub model: String,
    pub framing: Framing,
    pub preconditions: Preconditions,
    pub homology: GradedGroup,
    pub ktheory: Option<KPair>,
    pub periodicized_ranks: ParityRanks,
    pub k_ranks: Option<ParityRanks>,
    pub rational_match: Option<bool>,
    pub integral_match: IntegralMatch,
    pub verdict: Verdict,
    /// Set when homology was only computed through this degree.
    pub verified_up_to_degree: Option<usize>,
    pub notes: Vec<String>,
    pub assumed_by_theorem: Vec<String>,
}

/// `(Σ rank H_{2k}, Σ rank H_{2k+1})`.
pub fn periodicize(h: &GradedGroup, acknowledge_truncation: bool) -> Result<ParityRanks> {
    if !h.vanishing_above && !acknowledge_truncation {
        return Err(Error::TruncationUnsound(h.max_degree()));
    }
    let mut r = ParityRanks { even: 0, odd: 0 };
    for (n, g) in h.by_degree.iter().enumerate() {
        if n % 2 == 0 {
            r.even += g.rank();
        } else {
            r.odd += g.rank();
        }
    }
    Ok(r)
}

/// `⊕ₖ H_{i+2k}` as a canonical group, when every term is finitely
/// generated and the list is complete.
fn periodic_sum(h: &GradedGroup, parity: usize) -> Option<FgAbelianGroup> {
    if !h.vanishing_above {
        return None;
    }
    let mut sum = FgAbelianGroup::zero();
    for g in h.by_degree.iter().skip(parity).step_by(2) {
        sum = sum.direct_sum(g.as_fg()?);
    }
    Some(sum)
}

fn baum_connes(model: &GroupoidModel) -> &'static str {
    match model {
        GroupoidModel::Finite(_) => FINITE_BAUM_CONNES,
        GroupoidModel::Product(..) => PRODUCT_BAUM_CONNES,
        _ => AMENABLE_BAUM_CONNES,
    }
}

fn assumed(model: &GroupoidModel, torsion_basis: Basis, isotropy: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    if torsion_basis == Basis::Declared {
        for d in isotropy {
            if !out.contains(d) {
                out.push(d.clone());
            }
        }
    }
    out.push(baum_connes(model).to_string());
    out.extend(k_formulas(model).into_iter().map(String::from));
    out
}

/// Runs both engines on `model` and compares them.
pub fn check(model: &GroupoidModel, opts: &ComputeOptions) -> Result<HkReport> {
    let report = validate(model);
    if !report.is_ok() {
        return Err(Error::InvalidModel(report.violations));
    }
    let iso = isotropy_report(model);
    let homology = homology_of(model, opts)?;
    let truncated = !homology.vanishing_above;
    let periodicized_ranks = periodicize(&homology, true)?;
    let verified_up_to_degree = truncated.then(|| homology.max_degree());
    let mut notes = Vec::new();
    if truncated {
        notes.push(format!(
            "homology is computed through degree {} only; the comparison is verified up to that degree",
            homology.max_degree()
        ));
    }

    let preconditions = Preconditions {
        torsion_free: iso.torsion_free,
        torsion_free_basis: iso.basis,
        isotropy: iso.detail.clone(),
        baum_connes: baum_connes(model).to_string(),
    };
    let assumed_by_theorem = assumed(model, iso.basis, &iso.detail);

    if !iso.torsion_free {
        notes.push(TORSION_FREE_HYPOTHESIS.to_string());
        let ktheory = match ktheory_of(model, opts) {
            Ok(k) => Some(k),
            Err(e) => {
                notes.push(format!("K-theory not computed: {e}"));
                None
            }
        };
        return Ok(HkReport {
            model: model.summary(),
            framing: Framing::Groupoid,
            preconditions,
            k_ranks: ktheory.as_ref().map(k_ranks),
            homology,
            ktheory,
            periodicized_ranks,
            rational_match: None,
            integral_match: IntegralMatch::NotApplicable,
            verdict: Verdict::PreconditionFailed,
            verified_up_to_degree,
            notes,
            assumed_by_theorem,
        });
    }

    let ktheory = ktheory_of(model, opts)?;
    let kr = k_ranks(&ktheory);
    let rational_match = kr == periodicized_ranks;

    let integral_match = match (
        periodic_sum(&homology, 0),
        periodic_sum(&homology, 1),
        ktheory.k0.as_fg(),
        ktheory.k1.as_fg(),
    ) {
        (Some(h0), Some(h1), Some(k0), Some(k1)) => IntegralMatch::Decided(&h0 == k0 && &h1 == k1),
        _ => {
            notes.push(if truncated {
                "integral comparison needs the full homology; it is not applicable to truncated homology".to_string()
            } else {
                "integral comparison needs finitely generated groups; a colimit or rational-only group is present".to_string()
            });
            IntegralMatch::NotApplicable
        }
    };
    if integral_match == IntegralMatch::Decided(false) {
        notes.push(
            "K-theory and periodicized homology differ integrally; this does not affect the rational verdict"
                .to_string(),
        );
    }
    let verdict = if rational_match {
        Verdict::Match
    } else {
        Verdict::Mismatch
    };
    Ok(HkReport {
        model: model.summary(),
        framing: Framing::Groupoid,
        preconditions,
        homology,
        ktheory: Some(ktheory),
        periodicized_ranks,
        k_ranks: Some(kr),
        rational_match: Some(rational_match),
        integral_match,
        verdict,
        verified_up_to_degree,
        notes,
        assumed_by_theorem,
    })
}

fn k_ranks(k: &KPair) -> ParityRanks {
    ParityRanks {
        even: k.k0.rank(),
        odd: k.k1.rank(),
    }
}

/// Total `E²` rank per parity set against `rank Kᵢ ⊗ ℚ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralRanks {
    /// `Σ_{p+q even} rank E²_{p,q}`; only even `q` contribute.
    pub e2_even: usize,
    pub e2_odd: usize,
    pub k0_rank: Option<usize>,
    pub k1_rank: Option<usize>,
    /// `None` when the precondition fails.
    pub degenerates: Option<bool>,
    pub verified_up_to_degree: Option<usize>,
}

pub fn spectral_degeneration_ranks(
    model: &GroupoidModel,
    opts: &ComputeOptions,
) -> Result<SpectralRanks> {
    let r = check(model, opts)?;
    // E²_{p,q} = H_p for even q and 0 for odd q, so the parity-p+q total is
    // the periodicized rank.
    Ok(SpectralRanks {
        e2_even: r.periodicized_ranks.even,
        e2_odd: r.periodicized_ranks.odd,
        k0_rank: r.k_ranks.map(|k| k.even),
        k1_rank: r.k_ranks.map(|k| k.odd),
        degenerates: r.rational_match,
        verified_up_to_degree: r.verified_up_to_degree,
    })
}

/// The check on the groupoid of `a`, reported in Putnam-homology terms.
pub fn smale_check(a: &SftModel, opts: &ComputeOptions) -> Result<HkReport> {
    let mut r = check(&GroupoidModel::Sft(a.clone()), opts)?;
    r.framing = Framing::Smale;
    r.model = format!("Smale space of the two-sided shift, A = {}", a.matrix);
    let p = r.periodicized_ranks;
    let k = r.k_ranks.expect("torsion-free class");
    r.notes.push(format!(
        "rank K_0 = {} and sum of rank H^s_(2k) = {}; rank K_1 = {} and sum of rank H^s_(2k+1) = {}",
        k.even, p.even, k.odd, p.odd
    ));
    r.assumed_by_theorem
        .insert(0, SMALE_IDENTIFICATION.to_string());
    Ok(r)
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Dimensions of the word-length pieces of `Sym(E₀) ⊗ Λ(E₁)`, for word
/// lengths `0..=word_truncation`, split by ℤ/2-degree (number of odd
/// letters mod 2).
pub fn ucom_graded_dims(
    even_dim: usize,
    odd_dim: usize,
    word_truncation: usize,
) -> Vec<(BigUint, BigUint)> {
    // dim Sym^a of an e-dimensional space is C(e + a − 1, a).
    let sym = |a: usize| -> BigUint {
        match (even_dim, a) {
            (_, 0) => BigUint::one(),
            (0, _) => BigUint::zero(),
            (e, a) => binomial(e + a - 1, a),
        }
    };
    (0..=word_truncation)
        .map(|len| {
            let (mut even, mut odd) = (BigUint::zero(), BigUint::zero());
            for b in 0..=len.min(odd_dim) {
                let term = sym(len - b) * binomial(odd_dim, b);
                if b.is_multiple_of(2) {
                    even += term;
                } else {
                    odd += term;
                }
            }
            (even, odd)
        })
        .collect()
}

/// Group shown for `⊕ₖ H_{i+2k}` in text output, if it is a single
/// canonical group.
pub fn periodic_group(h: &GradedGroup, parity: usize) -> Option<DegreeGroup> {
    periodic_sum(h, parity).map(DegreeGroup::Fg)
}
