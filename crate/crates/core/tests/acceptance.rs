//! One line per acceptance criterion. Run with `cargo test --test acceptance`.

mod common;

use std::process::Command;

use groupoid_hk::hk::{
    check, smale_check, ucom_graded_dims, HkReport, IntegralMatch, ParityRanks, Verdict,
};
use groupoid_hk::homology::{boundary_matrix, homology_finite, homology_sft, DegreeGroup};
use groupoid_hk::ktheory::k_sft;
use groupoid_hk::linalg::{smith_normal_form, FgAbelianGroup, IntMatrix};
use groupoid_hk::models::{FiniteGroupoid, GroupTable, GroupoidModel, SftModel};
use groupoid_hk::options::ComputeOptions;
use groupoid_hk::span::{alternating_face_transfer, compose, transfer_matrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_groupoid-hk"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

fn model_path(name: &str) -> String {
    common::models_dir()
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn fg(rank: usize, torsion: &[i64]) -> FgAbelianGroup {
    FgAbelianGroup::from_cyclic_orders(rank, torsion.iter().map(|&d| BigInt::from(d)))
}

fn sft(rows: &[&[i64]]) -> SftModel {
    SftModel::new(IntMatrix::from_rows(rows).unwrap())
}

fn o2_instance() -> Outcome {
    let (code, out) = cli(&["hk-check", &model_path("o2.json")]);
    ensure(code == 0, || format!("exit code {code}"))?;
    let r: HkReport = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let k = r.ktheory.as_ref().ok_or("no K-theory")?;
    ensure(k.k0.is_zero() && k.k1.is_zero(), || {
        format!("K = ({}, {})", k.k0, k.k1)
    })?;
    ensure(
        r.homology.vanishing_above && r.homology.by_degree.iter().all(DegreeGroup::is_zero),
        || "nonzero homology".into(),
    )?;
    ensure(r.integral_match == IntegralMatch::Decided(true), || {
        format!("integral_match {:?}", r.integral_match)
    })?;
    Ok("K0 = K1 = 0, all H_n = 0, integral_match true".into())
}

fn sft_guard() -> Outcome {
    let mut rng = common::rng(2);
    let opts = ComputeOptions::default();
    for trial in 0..50 {
        let a = SftModel::new(common::random_sft_matrix(&mut rng, 6, 3));
        let h = homology_sft(&a).map_err(|e| e.to_string())?;
        let k = k_sft(&a).map_err(|e| e.to_string())?;
        ensure(
            h.by_degree.len() == 2 && h.by_degree[0] == k.k0 && h.by_degree[1] == k.k1,
            || format!("trial {trial}: engines disagree on A = {}", a.matrix),
        )?;
        let r = check(&GroupoidModel::Sft(a.clone()), &opts).map_err(|e| e.to_string())?;
        ensure(r.integral_match == IntegralMatch::Decided(true), || {
            format!("trial {trial}: integral_match false for A = {}", a.matrix)
        })?;
    }
    Ok("50 random SFTs: integral_match true, coker/ker agree".into())
}

fn rank_identity() -> Outcome {
    let one = GroupoidModel::Sft(sft(&[&[1]]));
    let r = check(
        &GroupoidModel::product(one.clone(), one),
        &ComputeOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let ranks: Vec<usize> = r.homology.by_degree.iter().map(DegreeGroup::rank).collect();
    ensure(ranks == [1, 2, 1], || format!("homology ranks {ranks:?}"))?;
    let k = r.k_ranks.ok_or("no K ranks")?;
    ensure(k == ParityRanks { even: 2, odd: 2 }, || {
        format!("K ranks {k:?}")
    })?;
    ensure(k.even == ranks[0] + ranks[2] && k.odd == ranks[1], || {
        "rank identity fails".into()
    })?;
    Ok("rank K0 = 2 = 1 + 1, rank K1 = 2 = 2".into())
}

fn cantor_instance() -> Outcome {
    for stage in ["3", "5"] {
        let (code, out) = cli(&[
            "hk-check",
            "--stage",
            stage,
            &model_path("dyadic_odometer.json"),
        ]);
        ensure(code == 0, || format!("exit code {code}"))?;
        let r: HkReport = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        ensure(r.rational_match == Some(true), || {
            "rational_match not true".into()
        })?;
        let both = ParityRanks { even: 1, odd: 1 };
        ensure(
            r.periodicized_ranks == both && r.k_ranks == Some(both),
            || format!("ranks {:?} vs {:?}", r.periodicized_ranks, r.k_ranks),
        )?;
        match &r.homology.by_degree[0] {
            DegreeGroup::Colimit(c) => ensure(
                c.torsion_free && c.verified_stage >= stage.parse::<usize>().unwrap(),
                || format!("certificate {c:?}"),
            )?,
            other => return Err(format!("H0 = {other}")),
        }
        ensure(out.contains("\"torsion_verified_up_to_stage\""), || {
            "certificate missing from JSON".into()
        })?;
    }
    Ok("ranks (1,1) = (1,1), H0 torsion-free at stage >= 3".into())
}

fn smale_identification() -> Outcome {
    let opts = ComputeOptions::default();
    let r = smale_check(&sft(&[&[1, 1], &[1, 0]]), &opts).map_err(|e| e.to_string())?;
    let k = r.ktheory.as_ref().ok_or("no K-theory")?;
    ensure(
        r.homology.by_degree.iter().all(DegreeGroup::is_zero) && k.k0.is_zero() && k.k1.is_zero(),
        || "golden mean: nonzero group".into(),
    )?;
    let zero = ParityRanks { even: 0, odd: 0 };
    ensure(
        r.periodicized_ranks == zero && r.k_ranks == Some(zero),
        || "0 = 0 fails".into(),
    )?;

    let (code, out) = cli(&["smale-check", &model_path("circle.json")]);
    ensure(code == 0, || format!("exit code {code}"))?;
    let r: HkReport = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let one = ParityRanks { even: 1, odd: 1 };
    ensure(
        r.periodicized_ranks == one && r.k_ranks == Some(one),
        || format!("[[1]]: {:?} vs {:?}", r.periodicized_ranks, r.k_ranks),
    )?;
    Ok("[[1,1],[1,0]]: all zero, 0 = 0; [[1]]: (1,1) = (1,1)".into())
}

fn torsion_precondition() -> Outcome {
    let (code, out) = cli(&["hk-check", &model_path("z2group.json")]);
    ensure(code == 2, || format!("exit code {code}"))?;
    let r: HkReport = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::PreconditionFailed, || {
        format!("verdict {:?}", r.verdict)
    })?;
    ensure(out.contains("a torsion-free group for all"), || {
        "hypothesis not cited".into()
    })?;
    let g = FiniteGroupoid::group(&GroupTable::cyclic(2));
    let h = homology_finite(&g, 3, 1_000_000).map_err(|e| e.to_string())?;
    let expected: Vec<DegreeGroup> = [fg(1, &[]), fg(0, &[2]), fg(0, &[]), fg(0, &[2])]
        .into_iter()
        .map(DegreeGroup::Fg)
        .collect();
    ensure(
        h.by_degree == expected && r.homology.by_degree == expected,
        || {
            format!(
                "homology {:?}",
                h.by_degree
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
            )
        },
    )?;
    Ok("exit 2, hypothesis cited, H = (Z, Z/2, 0, Z/2)".into())
}

fn chain_soundness() -> Outcome {
    for (name, g) in common::corpus() {
        for n in 1..=3 {
            let comp = &boundary_matrix(&g, n) * &boundary_matrix(&g, n + 1);
            ensure(comp.is_zero(), || format!("{name}: d_{n} d_{} != 0", n + 1))?;
        }
    }
    let mut rng = common::rng(7);
    for trial in 0..100 {
        let (g, components) = common::random_groupoid(&mut rng, 30);
        let h = homology_finite(&g, 0, 1_000_000).map_err(|e| e.to_string())?;
        ensure(h.by_degree[0] == DegreeGroup::free(components), || {
            format!(
                "trial {trial}: H0 = {} with {components} orbits",
                h.by_degree[0]
            )
        })?;
        ensure(g.orbit_count() == components, || {
            format!("trial {trial}: orbit count")
        })?;
    }
    Ok(format!(
        "dd = 0 on {} corpus groupoids for n <= 3; H0 = Z^orbits on 100 random groupoids",
        common::corpus().len()
    ))
}

fn span_functoriality() -> Outcome {
    use rand::Rng;
    let mut rng = common::rng(11);
    let pairs = 600;
    for trial in 0..pairs {
        let (x, y, z) = (
            rng.gen_range(0..=6),
            rng.gen_range(0..=6),
            rng.gen_range(0..=6),
        );
        let s1 = common::random_span(&mut rng, x, y, 6);
        let s2 = common::random_span(&mut rng, y, z, 6);
        let composite = compose(&s2, &s1).map_err(|e| e.to_string())?;
        ensure(
            transfer_matrix(&composite) == &transfer_matrix(&s2) * &transfer_matrix(&s1),
            || format!("trial {trial}: {s1:?} then {s2:?}"),
        )?;
        let t = transfer_matrix(&s1.disjoint_union(&s2));
        ensure(
            t == transfer_matrix(&s1).block_diag(&transfer_matrix(&s2)),
            || format!("trial {trial}: disjoint union not block diagonal"),
        )?;
    }
    Ok(format!(
        "{pairs} span pairs: T(s2 s1) = T(s2) T(s1); disjoint union is block diagonal"
    ))
}

fn boundary_cross_validation() -> Outcome {
    let corpus = common::corpus();
    for (name, g) in &corpus {
        for n in 1..=3 {
            let t = alternating_face_transfer(g, n).map_err(|e| e.to_string())?;
            ensure(t == boundary_matrix(g, n), || format!("{name}: degree {n}"))?;
        }
    }
    Ok(format!("{} corpus groupoids, n <= 3", corpus.len()))
}

fn fullgroup_dims() -> Outcome {
    let r = check(
        &GroupoidModel::Sft(sft(&[&[1, 1], &[1, 1]])),
        &ComputeOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let k = r.k_ranks.ok_or("no K ranks")?;
    let dims = ucom_graded_dims(k.even, k.odd, 8);
    ensure(dims[0].0.is_one() && dims[0].1.is_zero(), || {
        "length 0 is not the unit".into()
    })?;
    ensure(
        dims[1..].iter().all(|(e, o)| e.is_zero() && o.is_zero()),
        || "nonzero dimension above length 0".into(),
    )?;
    let (code, out) = cli(&[
        "fullgroup-dims",
        &model_path("o2.json"),
        "--words",
        "5",
        "--format",
        "text",
    ]);
    ensure(code == 0, || format!("exit code {code}"))?;
    ensure(
        out.contains("length 0: even 1, odd 0") && out.contains("length 5: even 0, odd 0"),
        || format!("CLI output {out}"),
    )?;
    Ok("K(O2) = 0 gives dims (1,0) at length 0 and (0,0) above".into())
}

fn snf_oracle() -> Outcome {
    let mut rng = common::rng(13);
    for trial in 0..1000 {
        let m = common::random_matrix(&mut rng, 8, 9);
        let s = smith_normal_form(&m);
        ensure(&(&s.u * &m) * &s.v == s.d, || {
            format!("trial {trial}: U M V != D for {m}")
        })?;
        for (name, x) in [("U", &s.u), ("V", &s.v)] {
            let det = x.determinant().map_err(|e| e.to_string())?;
            ensure(det.abs().is_one(), || {
                format!("trial {trial}: det {name} = {det}")
            })?;
        }
        let (r, c) = m.shape();
        for i in 0..r {
            for j in 0..c {
                ensure(i == j || s.d.get(i, j).is_zero(), || {
                    format!("trial {trial}: D not diagonal")
                })?;
            }
        }
        let diag = s.diagonal();
        ensure(diag.iter().all(|d| !d.is_negative()), || {
            format!("trial {trial}: negative diagonal")
        })?;
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            };
            ensure(ok, || {
                format!("trial {trial}: divisibility fails in {diag:?}")
            })?;
        }
    }
    Ok("1000 random matrices up to 8x8".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("O2 instance", o2_instance),
        ("SFT exactness guard", sft_guard),
        ("rank identity for a product", rank_identity),
        ("Cantor-Z instance", cantor_instance),
        ("Smale identification", smale_identification),
        ("torsion precondition", torsion_precondition),
        ("chain-complex soundness", chain_soundness),
        ("span functoriality", span_functoriality),
        ("boundary cross-validation", boundary_cross_validation),
        ("full-group dimension count", fullgroup_dims),
        ("SNF oracle", snf_oracle),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
