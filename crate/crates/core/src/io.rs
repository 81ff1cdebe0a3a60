//! Model documents (JSON) and the text rendering of results.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::hk::{periodic_group, HkReport, IntegralMatch, SpectralRanks};
use crate::homology::GradedGroup;
use crate::ktheory::KPair;
use crate::linalg::IntMatrix;
use crate::models::{
    validate, Arrow, BratteliModel, CantorZModel, FiniteGroupoid, GroupTable, GroupoidModel,
    SftModel, Violation,
};
use crate::span::FiniteSpan;

/// Parses and validates a model document.
pub fn parse_model(text: &str) -> Result<GroupoidModel> {
    ensure_valid_model(read_model(text)?)
}

/// Parses a model document without checking model invariants.
pub fn read_model(text: &str) -> Result<GroupoidModel> {
    model_from_value(&parse_json(text)?, "")
}

pub fn ensure_valid_model(model: GroupoidModel) -> Result<GroupoidModel> {
    let report = validate(&model);
    if report.is_ok() {
        Ok(model)
    } else {
        Err(Error::InvalidModel(report.violations))
    }
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn schema(pointer: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: if pointer.is_empty() {
            "/".into()
        } else {
            pointer.into()
        },
        message: message.into(),
    }
}

fn object<'a>(v: &'a Value, at: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| schema(at, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(at, format!("missing field \"{key}\"")))
}

fn only_fields(obj: &Map<String, Value>, allowed: &[&str], at: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(
            &format!("{at}/{k}"),
            format!("unknown field \"{k}\""),
        )),
        None => Ok(()),
    }
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(at, "expected an array"))
}

fn string<'a>(v: &'a Value, at: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(at, "expected a string"))
}

fn count(v: &Value, at: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| schema(at, "expected a nonnegative integer"))
}

fn integer(v: &Value, at: &str) -> Result<BigInt> {
    if let Some(n) = v.as_i64() {
        return Ok(n.into());
    }
    if let Some(n) = v.as_u64() {
        return Ok(n.into());
    }
    v.as_str()
        .and_then(|s| s.parse::<BigInt>().ok())
        .ok_or_else(|| schema(at, "expected an integer"))
}

pub fn matrix_from_value(v: &Value, at: &str) -> Result<IntMatrix> {
    let rows = array(v, at)?;
    let mut entries = Vec::new();
    let mut cols = None;
    for (i, row) in rows.iter().enumerate() {
        let row_at = format!("{at}/{i}");
        let row = array(row, &row_at)?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(schema(
                    &row_at,
                    format!("row has {} entries, expected {c}", row.len()),
                ))
            }
            _ => {}
        }
        for (j, x) in row.iter().enumerate() {
            entries.push(integer(x, &format!("{row_at}/{j}"))?);
        }
    }
    IntMatrix::new(rows.len(), cols.unwrap_or(0), entries)
}

fn prefixed(violations: Vec<Violation>, at: &str) -> Error {
    Error::InvalidModel(
        violations
            .into_iter()
            .map(|mut v| {
                v.pointer = format!("{at}{}", v.pointer);
                v
            })
            .collect(),
    )
}

/// Builds a model from a JSON value located at `at`. Groupoid axioms are
/// checked later by `validate`.
pub fn model_from_value(v: &Value, at: &str) -> Result<GroupoidModel> {
    let obj = object(v, at)?;
    let kind = string(field(obj, "model", at)?, &format!("{at}/model"))?;
    match kind {
        "finite" => finite_from_object(obj, at).map(GroupoidModel::Finite),
        "sft" => {
            only_fields(obj, &["model", "matrix"], at)?;
            let m = matrix_from_value(field(obj, "matrix", at)?, &format!("{at}/matrix"))?;
            Ok(GroupoidModel::Sft(SftModel::new(m)))
        }
        "af" => {
            only_fields(obj, &["model", "levels", "incidences", "tail"], at)?;
            bratteli_from_object(obj, at).map(GroupoidModel::Af)
        }
        "cantor_z" => {
            only_fields(obj, &["model", "levels", "incidences", "tail", "depth"], at)?;
            let diagram = bratteli_from_object(obj, at)?;
            let mut c = CantorZModel::new(diagram);
            if let Some(d) = obj.get("depth") {
                c.depth = count(d, &format!("{at}/depth"))?;
            }
            Ok(GroupoidModel::CantorZ(c))
        }
        "product" => {
            only_fields(obj, &["model", "factors"], at)?;
            let factors_at = format!("{at}/factors");
            let factors = array(field(obj, "factors", at)?, &factors_at)?;
            if factors.len() != 2 {
                return Err(schema(&factors_at, "a product takes exactly two factors"));
            }
            let a = model_from_value(&factors[0], &format!("{factors_at}/0"))?;
            let b = model_from_value(&factors[1], &format!("{factors_at}/1"))?;
            Ok(GroupoidModel::product(a, b))
        }
        other => Err(schema(
            &format!("{at}/model"),
            format!("unknown model \"{other}\"; expected finite, sft, af, cantor_z or product"),
        )),
    }
}

fn bratteli_from_object(obj: &Map<String, Value>, at: &str) -> Result<BratteliModel> {
    let tail = matrix_from_value(field(obj, "tail", at)?, &format!("{at}/tail"))?;
    let level_sizes = match obj.get("levels") {
        Some(v) => {
            let a = array(v, &format!("{at}/levels"))?;
            a.iter()
                .enumerate()
                .map(|(i, x)| count(x, &format!("{at}/levels/{i}")))
                .collect::<Result<Vec<_>>>()?
        }
        None => vec![tail.rows()],
    };
    let incidences = match obj.get("incidences") {
        Some(v) => array(v, &format!("{at}/incidences"))?
            .iter()
            .enumerate()
            .map(|(i, m)| matrix_from_value(m, &format!("{at}/incidences/{i}")))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let b = BratteliModel {
        level_sizes,
        incidences,
        tail,
    };
    if b.inductive_system().is_none() {
        let v = b.violations();
        return Err(prefixed(v, at));
    }
    Ok(b)
}

fn finite_from_object(obj: &Map<String, Value>, at: &str) -> Result<FiniteGroupoid> {
    if let Some(p) = obj.get("preset") {
        only_fields(obj, &["model", "preset", "size"], at)?;
        let preset_at = format!("{at}/preset");
        let size = count(field(obj, "size", at)?, &format!("{at}/size"))?;
        return match string(p, &preset_at)? {
            "pair" => Ok(FiniteGroupoid::pair(size)),
            "trivial" => Ok(FiniteGroupoid::trivial(size)),
            "cyclic" if size >= 1 => Ok(FiniteGroupoid::group(&GroupTable::cyclic(size))),
            "cyclic" => Err(schema(
                &format!("{at}/size"),
                "a cyclic group needs order at least 1",
            )),
            other => Err(schema(
                &preset_at,
                format!("unknown preset \"{other}\"; expected pair, trivial or cyclic"),
            )),
        };
    }
    only_fields(
        obj,
        &["model", "units", "arrows", "composition", "inverse"],
        at,
    )?;

    let units_at = format!("{at}/units");
    let mut unit_index = BTreeMap::new();
    let mut units = Vec::new();
    for (i, u) in array(field(obj, "units", at)?, &units_at)?
        .iter()
        .enumerate()
    {
        let name = string(u, &format!("{units_at}/{i}"))?;
        if unit_index.insert(name.to_string(), i).is_some() {
            return Err(schema(
                &format!("{units_at}/{i}"),
                format!("duplicate unit \"{name}\""),
            ));
        }
        units.push(name.to_string());
    }

    let arrows_at = format!("{at}/arrows");
    let mut arrow_index = BTreeMap::new();
    let mut arrows = Vec::new();
    for (k, a) in array(field(obj, "arrows", at)?, &arrows_at)?
        .iter()
        .enumerate()
    {
        let a_at = format!("{arrows_at}/{k}");
        let a = object(a, &a_at)?;
        only_fields(a, &["id", "source", "target"], &a_at)?;
        let id = string(field(a, "id", &a_at)?, &format!("{a_at}/id"))?;
        let unit = |key: &str| -> Result<usize> {
            let key_at = format!("{a_at}/{key}");
            let name = string(field(a, key, &a_at)?, &key_at)?;
            unit_index
                .get(name)
                .copied()
                .ok_or_else(|| schema(&key_at, format!("unknown unit \"{name}\"")))
        };
        let (source, target) = (unit("source")?, unit("target")?);
        if arrow_index.insert(id.to_string(), k).is_some() {
            return Err(schema(
                &format!("{a_at}/id"),
                format!("duplicate arrow \"{id}\""),
            ));
        }
        arrows.push(Arrow {
            id: id.to_string(),
            source,
            target,
        });
    }
    let arrow = |v: &Value, at: &str| -> Result<usize> {
        let name = string(v, at)?;
        arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| schema(at, format!("unknown arrow \"{name}\"")))
    };

    let comp_at = format!("{at}/composition");
    let mut composition = Vec::new();
    for (k, t) in array(field(obj, "composition", at)?, &comp_at)?
        .iter()
        .enumerate()
    {
        let t_at = format!("{comp_at}/{k}");
        let t = array(t, &t_at)?;
        if t.len() != 3 {
            return Err(schema(&t_at, "expected [g, h, g·h]"));
        }
        composition.push((
            arrow(&t[0], &format!("{t_at}/0"))?,
            arrow(&t[1], &format!("{t_at}/1"))?,
            arrow(&t[2], &format!("{t_at}/2"))?,
        ));
    }

    let mut declared_inverse = vec![None; arrows.len()];
    if let Some(inv) = obj.get("inverse") {
        let inv_at = format!("{at}/inverse");
        for (key, value) in object(inv, &inv_at)? {
            let key_at = format!("{inv_at}/{key}");
            let a = arrow(&Value::String(key.clone()), &key_at)?;
            declared_inverse[a] = Some(arrow(value, &key_at)?);
        }
    }
    FiniteGroupoid::from_table(units, arrows, &composition, declared_inverse)
        .map_err(|v| prefixed(v, at))
}

/// Writes a finite groupoid in the document format.
pub fn finite_to_value(g: &FiniteGroupoid) -> Value {
    let arrows = g.arrows();
    let units = g.units();
    let mut composition = Vec::new();
    for a in 0..arrows.len() {
        for b in 0..arrows.len() {
            if let Some(c) = g.compose(a, b) {
                composition.push(serde_json::json!([
                    arrows[a].id,
                    arrows[b].id,
                    arrows[c].id
                ]));
            }
        }
    }
    let inverse: Map<String, Value> = (0..arrows.len())
        .filter_map(|a| {
            g.inverse(a)
                .map(|b| (arrows[a].id.clone(), Value::String(arrows[b].id.clone())))
        })
        .collect();
    serde_json::json!({
        "model": "finite",
        "units": units,
        "arrows": arrows.iter().map(|a| serde_json::json!({
            "id": a.id,
            "source": units[a.source],
            "target": units[a.target],
        })).collect::<Vec<_>>(),
        "composition": composition,
        "inverse": inverse,
    })
}

pub fn span_from_value(v: &Value, at: &str) -> Result<FiniteSpan> {
    let obj = object(v, at)?;
    only_fields(obj, &["left", "right", "left_leg", "right_leg"], at)?;
    let left = count(field(obj, "left", at)?, &format!("{at}/left"))?;
    let right = count(field(obj, "right", at)?, &format!("{at}/right"))?;
    let leg = |key: &str| -> Result<Vec<usize>> {
        let key_at = format!("{at}/{key}");
        array(field(obj, key, at)?, &key_at)?
            .iter()
            .enumerate()
            .map(|(i, x)| count(x, &format!("{key_at}/{i}")))
            .collect()
    };
    FiniteSpan::new(left, right, leg("left_leg")?, leg("right_leg")?)
        .map_err(|e| schema(at, e.to_string()))
}

pub fn render_homology(h: &GradedGroup) -> String {
    let mut out = String::new();
    for (n, g) in h.by_degree.iter().enumerate() {
        let _ = writeln!(out, "  H_{n} = {g}");
    }
    if h.vanishing_above {
        let _ = writeln!(out, "  H_n = 0 for n > {}", h.max_degree());
    } else {
        let _ = writeln!(out, "  (not computed above degree {})", h.max_degree());
    }
    out
}

pub fn render_ktheory(k: &KPair) -> String {
    format!("  K_0 = {}\n  K_1 = {}\n", k.k0, k.k1)
}

pub fn render_report(r: &HkReport) -> String {
    let mut out = String::new();
    let h = if r.framing == crate::hk::Framing::Smale {
        "H^s"
    } else {
        "H"
    };
    let _ = writeln!(out, "model: {}", r.model);
    let basis = match r.preconditions.torsion_free_basis {
        crate::models::Basis::Computed => "computed",
        crate::models::Basis::Declared => "declared",
    };
    let _ = writeln!(
        out,
        "torsion-free isotropy: {} ({basis})",
        if r.preconditions.torsion_free {
            "yes"
        } else {
            "no"
        }
    );
    for d in &r.preconditions.isotropy {
        let _ = writeln!(out, "  {d}");
    }
    let _ = writeln!(out, "Baum-Connes: {}", r.preconditions.baum_connes);
    let _ = writeln!(out, "homology:");
    out.push_str(&render_homology(&r.homology).replace("H_", &format!("{h}_")));
    match &r.ktheory {
        Some(k) => {
            let _ = writeln!(out, "K-theory:");
            out.push_str(&render_ktheory(k));
        }
        None => {
            let _ = writeln!(out, "K-theory: not computed");
        }
    }
    let p = r.periodicized_ranks;
    let _ = writeln!(
        out,
        "periodicized ranks (even, odd): ({}, {})",
        p.even, p.odd
    );
    if let Some(k) = r.k_ranks {
        let _ = writeln!(out, "K-theory ranks (even, odd): ({}, {})", k.even, k.odd);
    }
    if let (Some(e), Some(o)) = (
        periodic_group(&r.homology, 0),
        periodic_group(&r.homology, 1),
    ) {
        let _ = writeln!(out, "periodicized homology: even {e}, odd {o}");
    }
    let yn = |b: bool| if b { "true" } else { "false" };
    let _ = writeln!(
        out,
        "rational match: {}",
        r.rational_match.map_or("not decided", yn)
    );
    let _ = writeln!(
        out,
        "integral match: {}",
        match r.integral_match {
            IntegralMatch::Decided(b) => yn(b),
            IntegralMatch::NotApplicable => "not applicable",
        }
    );
    let verdict = match r.verdict {
        crate::hk::Verdict::Match => "match",
        crate::hk::Verdict::Mismatch => "mismatch",
        crate::hk::Verdict::PreconditionFailed => "precondition failed",
    };
    match r.verified_up_to_degree {
        Some(d) => {
            let _ = writeln!(out, "verdict: {verdict} (verified up to degree {d})");
        }
        None => {
            let _ = writeln!(out, "verdict: {verdict}");
        }
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    for a in &r.assumed_by_theorem {
        let _ = writeln!(out, "assumed: {a}");
    }
    out
}

pub fn render_spectral(s: &SpectralRanks) -> String {
    let show = |k: Option<usize>| k.map_or("?".to_string(), |k| k.to_string());
    let mut out = String::new();
    let _ = writeln!(
        out,
        "E2 total rank, even: {} vs rank K_0: {}",
        s.e2_even,
        show(s.k0_rank)
    );
    let _ = writeln!(
        out,
        "E2 total rank, odd: {} vs rank K_1: {}",
        s.e2_odd,
        show(s.k1_rank)
    );
    let _ = writeln!(
        out,
        "degenerates rationally: {}",
        match s.degenerates {
            Some(true) => "yes",
            Some(false) => "no",
            None => "not decided",
        }
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sft_and_product() {
        let m = parse_model(r#"{"model":"sft","matrix":[[1,1],[1,1]]}"#).unwrap();
        assert!(matches!(m, GroupoidModel::Sft(_)));
        let p = parse_model(
            r#"{"model":"product","factors":[{"model":"sft","matrix":[[1]]},{"model":"cantor_z","tail":[[2]]}]}"#,
        )
        .unwrap();
        assert!(matches!(p, GroupoidModel::Product(..)));
    }

    #[test]
    fn zero_row_is_reported() {
        let err = parse_model(r#"{"model":"sft","matrix":[[0]]}"#).unwrap_err();
        let Error::InvalidModel(v) = &err else {
            panic!("{err:?}")
        };
        assert_eq!(v[0].pointer, "/matrix/0");
        assert!(err.to_string().contains("row 0 is zero"));
    }

    #[test]
    fn parse_and_schema_errors() {
        match parse_model("{\n  \"model\": \"sft\",\n  \"matrix\": [[1,]]\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_model(r#"{"model":"sft","matrix":[[1,2],[3]]}"#),
            Err(Error::Schema {
                pointer: "/matrix/1".into(),
                message: "row has 1 entries, expected 2".into()
            })
        );
        assert!(matches!(
            parse_model(r#"{"model":"product","factors":[{"model":"sft","matrix":[[1]]},{"model":"sft"}]}"#),
            Err(Error::Schema { pointer, .. }) if pointer == "/factors/1"
        ));
        assert!(matches!(
            parse_model(r#"{"model":"blob"}"#),
            Err(Error::Schema { pointer, .. }) if pointer == "/model"
        ));
        assert!(matches!(
            parse_model(r#"{"model":"sft","matrix":[[1]],"extra":1}"#),
            Err(Error::Schema { pointer, .. }) if pointer == "/extra"
        ));
    }

    #[test]
    fn finite_document() {
        let text = r#"{
          "model": "finite",
          "units": ["x", "y"],
          "arrows": [
            {"id": "1x", "source": "x", "target": "x"},
            {"id": "1y", "source": "y", "target": "y"},
            {"id": "a", "source": "x", "target": "y"},
            {"id": "b", "source": "y", "target": "x"}
          ],
          "composition": [
            ["1x","1x","1x"], ["1y","1y","1y"],
            ["a","1x","a"], ["1y","a","a"], ["b","1y","b"], ["1x","b","b"],
            ["a","b","1y"], ["b","a","1x"]
          ],
          "inverse": {"a": "b", "b": "a", "1x": "1x", "1y": "1y"}
        }"#;
        let GroupoidModel::Finite(g) = parse_model(text).unwrap() else {
            panic!()
        };
        assert_eq!(g.orbit_count(), 1);

        let missing = text.replace(r#"["b","a","1x"]"#, r#"["1x","1x","1x"]"#);
        let err = parse_model(&missing).unwrap_err();
        assert!(err.to_string().contains("composition b·a missing"), "{err}");

        let back = serde_json::to_string(&finite_to_value(&g)).unwrap();
        assert_eq!(parse_model(&back).unwrap(), GroupoidModel::Finite(g));
    }

    #[test]
    fn presets() {
        let m = parse_model(r#"{"model":"finite","preset":"cyclic","size":2}"#).unwrap();
        let GroupoidModel::Finite(g) = m else {
            panic!()
        };
        assert_eq!(g.isotropy_orders(), vec![2]);
        assert!(parse_model(r#"{"model":"finite","preset":"wheel","size":2}"#).is_err());
    }

    #[test]
    fn big_entries() {
        let m = matrix_from_value(&serde_json::json!([["123456789012345678901234567890"]]), "")
            .unwrap();
        assert_eq!(m.get(0, 0).to_string(), "123456789012345678901234567890");
    }
}
