//! Command-line surface. `run` does all the work and returns what should
//! be written, so the binary is a thin shell around it.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hk::{check, smale_check, spectral_degeneration_ranks, ucom_graded_dims, Verdict};
use crate::homology::{homology_of, GradedGroup};
use crate::io::{
    ensure_valid_model, parse_json, parse_model, read_model, render_homology, render_ktheory,
    render_report, render_spectral, span_from_value,
};
use crate::ktheory::{k_formulas, ktheory_of, KPair};
use crate::models::{FiniteGroupoid, GroupoidModel};
use crate::options::{ComputeOptions, DEFAULT_MAX_DEGREE, DEFAULT_SIZE_BOUND, DEFAULT_STAGE};
use crate::span::{alternating_face_transfer, compose, transfer_matrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, Parser)]
#[command(
    name = "groupoid-hk",
    version,
    about = "Groupoid homology, K-theory and HK comparisons in exact arithmetic"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Clone, Debug, Args)]
pub struct Flags {
    /// Highest homology degree computed for finite groupoids.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEGREE)]
    pub max_degree: usize,
    /// Stage up to which colimit torsion certificates are recorded.
    #[arg(long, global = true, default_value_t = DEFAULT_STAGE)]
    pub stage: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report ranks only.
    #[arg(long, global = true)]
    pub rational_only: bool,
    /// Largest nerve level enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_BOUND)]
    pub size_bound: usize,
    /// Telescoping depth for simplicity of Cantor models; overrides the file.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Groupoid homology of a model.
    Homology { input: PathBuf },
    /// K-theory of the reduced C*-algebra of a model.
    Ktheory { input: PathBuf },
    /// Compare K-theory with periodicized homology.
    HkCheck {
        input: PathBuf,
        /// Report the spectral-sequence rank totals instead.
        #[arg(long)]
        spectral: bool,
    },
    /// The comparison for the Smale space of an SFT model.
    SmaleCheck { input: PathBuf },
    /// Compose spans and compare transfer matrices, or cross-check the
    /// face spans of a finite groupoid against its boundary matrices.
    SpanCheck { input: PathBuf },
    /// Word-length dimensions of the free graded-commutative algebra on the
    /// rational K-theory of a model (or on given dimensions).
    FullgroupDims {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        words: usize,
        #[arg(long, requires = "odd", conflicts_with = "input")]
        even: Option<usize>,
        #[arg(long, requires = "even", conflicts_with = "input")]
        odd: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Flags {
    fn options(&self) -> ComputeOptions {
        ComputeOptions {
            max_degree: self.max_degree,
            stage: self.stage,
            size_bound: self.size_bound,
            rational_only: self.rational_only,
        }
    }
}

#[derive(Serialize)]
struct HomologyOutput<'a> {
    model: String,
    homology: &'a GradedGroup,
}

#[derive(Serialize)]
struct KtheoryOutput<'a> {
    model: String,
    ktheory: &'a KPair,
    assumed_by_theorem: Vec<&'static str>,
}

#[derive(Serialize)]
struct SpanComposition {
    spans: usize,
    composite_transfer: crate::linalg::IntMatrix,
    product_of_transfers: crate::linalg::IntMatrix,
    equal: bool,
}

#[derive(Serialize)]
struct FaceCheck {
    degree: usize,
    equal: bool,
}

#[derive(Serialize)]
struct FaceChecks {
    model: String,
    degrees: Vec<FaceCheck>,
}

#[derive(Serialize)]
struct WordDims {
    word_length: usize,
    even: crate::bigint_serde::Integer,
    odd: crate::bigint_serde::Integer,
}

#[derive(Serialize)]
struct FullgroupOutput {
    even_generators: usize,
    odd_generators: usize,
    dims: Vec<WordDims>,
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("serializable output");
            s.push('\n');
            s
        }
        Format::Text => text(),
    }
}

fn load_model(path: &PathBuf, flags: &Flags) -> Result<GroupoidModel> {
    let text = read(path)?;
    let mut model = read_model(&text)?;
    if let Some(d) = flags.depth {
        set_depth(&mut model, d);
    }
    ensure_valid_model(model)
}

fn set_depth(model: &mut GroupoidModel, depth: usize) {
    match model {
        GroupoidModel::CantorZ(c) => c.depth = depth,
        GroupoidModel::Product(a, b) => {
            set_depth(a, depth);
            set_depth(b, depth);
        }
        _ => {}
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Schema {
        pointer: "/".into(),
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::NotPrincipal { .. } => EXIT_PRECONDITION,
        _ => EXIT_INPUT,
    }
}

/// Runs one command.
pub fn run(config: &RunConfig) -> RunOutcome {
    match run_inner(config) {
        Ok((code, stdout)) => RunOutcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => RunOutcome {
            code: error_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Match => EXIT_OK,
        Verdict::Mismatch => EXIT_MISMATCH,
        Verdict::PreconditionFailed => EXIT_PRECONDITION,
    }
}

fn run_inner(config: &RunConfig) -> Result<(i32, String)> {
    let flags = &config.flags;
    let opts = flags.options();
    let format = flags.format;
    match &config.command {
        Command::Homology { input } => {
            let model = load_model(input, flags)?;
            let h = homology_of(&model, &opts)?;
            let out = HomologyOutput {
                model: model.summary(),
                homology: &h,
            };
            Ok((
                EXIT_OK,
                emit(format, &out, || {
                    format!("model: {}\nhomology:\n{}", out.model, render_homology(&h))
                }),
            ))
        }
        Command::Ktheory { input } => {
            let model = load_model(input, flags)?;
            let k = ktheory_of(&model, &opts)?;
            let out = KtheoryOutput {
                model: model.summary(),
                ktheory: &k,
                assumed_by_theorem: k_formulas(&model),
            };
            Ok((
                EXIT_OK,
                emit(format, &out, || {
                    format!("model: {}\nK-theory:\n{}", out.model, render_ktheory(&k))
                }),
            ))
        }
        Command::HkCheck { input, spectral } => {
            let model = load_model(input, flags)?;
            if *spectral {
                let s = spectral_degeneration_ranks(&model, &opts)?;
                let code = match s.degenerates {
                    Some(true) => EXIT_OK,
                    Some(false) => EXIT_MISMATCH,
                    None => EXIT_PRECONDITION,
                };
                return Ok((code, emit(format, &s, || render_spectral(&s))));
            }
            let r = check(&model, &opts)?;
            Ok((
                verdict_code(r.verdict),
                emit(format, &r, || render_report(&r)),
            ))
        }
        Command::SmaleCheck { input } => {
            let model = load_model(input, flags)?;
            let GroupoidModel::Sft(a) = &model else {
                return Err(Error::Schema {
                    pointer: "/model".into(),
                    message: "smale-check takes an sft model".into(),
                });
            };
            let r = smale_check(a, &opts)?;
            Ok((
                verdict_code(r.verdict),
                emit(format, &r, || render_report(&r)),
            ))
        }
        Command::SpanCheck { input } => span_check(input, flags),
        Command::FullgroupDims {
            input,
            words,
            even,
            odd,
        } => {
            let (e, o) = match (input, even, odd) {
                (Some(path), _, _) => {
                    let model = load_model(path, flags)?;
                    let r = check(&model, &opts)?;
                    match r.k_ranks {
                        Some(k) if r.verdict != Verdict::PreconditionFailed => (k.even, k.odd),
                        _ => {
                            let s = emit(format, &r, || render_report(&r));
                            return Ok((EXIT_PRECONDITION, s));
                        }
                    }
                }
                (None, Some(e), Some(o)) => (*e, *o),
                _ => {
                    return Err(Error::Schema {
                        pointer: "/".into(),
                        message: "fullgroup-dims needs a model file or --even and --odd".into(),
                    })
                }
            };
            let dims = ucom_graded_dims(e, o, *words);
            let out = FullgroupOutput {
                even_generators: e,
                odd_generators: o,
                dims: dims
                    .into_iter()
                    .enumerate()
                    .map(|(n, (a, b))| WordDims {
                        word_length: n,
                        even: crate::bigint_serde::Integer(a.into()),
                        odd: crate::bigint_serde::Integer(b.into()),
                    })
                    .collect(),
            };
            let text = || {
                let mut s = format!("generators: {e} even, {o} odd\n");
                for d in &out.dims {
                    s.push_str(&format!(
                        "  length {}: even {}, odd {}\n",
                        d.word_length, d.even.0, d.odd.0
                    ));
                }
                s
            };
            Ok((EXIT_OK, emit(format, &out, text)))
        }
    }
}

fn span_check(input: &PathBuf, flags: &Flags) -> Result<(i32, String)> {
    let text = read(input)?;
    let doc = parse_json(&text)?;
    if let Some(spans) = doc.get("spans") {
        let Value::Array(items) = spans else {
            return Err(Error::Schema {
                pointer: "/spans".into(),
                message: "expected an array".into(),
            });
        };
        if items.is_empty() {
            return Err(Error::Schema {
                pointer: "/spans".into(),
                message: "no spans given".into(),
            });
        }
        let spans = items
            .iter()
            .enumerate()
            .map(|(i, v)| span_from_value(v, &format!("/spans/{i}")))
            .collect::<Result<Vec<_>>>()?;
        // spans are listed in the order they are applied
        let mut composite = spans[0].clone();
        let mut product = transfer_matrix(&spans[0]);
        for s in &spans[1..] {
            composite = compose(s, &composite)?;
            product = &transfer_matrix(s) * &product;
        }
        let composite_transfer = transfer_matrix(&composite);
        let out = SpanComposition {
            spans: spans.len(),
            equal: composite_transfer == product,
            composite_transfer,
            product_of_transfers: product,
        };
        let code = if out.equal { EXIT_OK } else { EXIT_MISMATCH };
        let s = emit(flags.format, &out, || {
            format!(
                "composite transfer: {}\nproduct of transfers: {}\nequal: {}\n",
                out.composite_transfer, out.product_of_transfers, out.equal
            )
        });
        return Ok((code, s));
    }
    let model = parse_model(&text)?;
    let GroupoidModel::Finite(g) = &model else {
        return Err(Error::Schema {
            pointer: "/model".into(),
            message: "span-check takes {\"spans\": [...]} or a finite model".into(),
        });
    };
    let degrees = face_checks(g, flags.max_degree, flags.size_bound)?;
    let all = degrees.iter().all(|d| d.equal);
    let out = FaceChecks {
        model: model.summary(),
        degrees,
    };
    let s = emit(flags.format, &out, || {
        let mut s = format!("model: {}\n", out.model);
        for d in &out.degrees {
            s.push_str(&format!(
                "  degree {}: alternating face transfer = boundary: {}\n",
                d.degree, d.equal
            ));
        }
        s
    });
    Ok((if all { EXIT_OK } else { EXIT_MISMATCH }, s))
}

fn face_checks(g: &FiniteGroupoid, max_degree: usize, size_bound: usize) -> Result<Vec<FaceCheck>> {
    (1..=max_degree)
        .map(|n| {
            let size = crate::models::nerve_size(g, n);
            if size > size_bound as u128 {
                return Err(Error::SizeBoundExceeded {
                    degree: n,
                    size,
                    bound: size_bound,
                });
            }
            Ok(FaceCheck {
                degree: n,
                equal: alternating_face_transfer(g, n)? == crate::homology::boundary_matrix(g, n),
            })
        })
        .collect()
}
