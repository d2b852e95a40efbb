//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::process::Command;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use support::{random_complex, random_matrix, random_primitive, MapKind};
use tilecoh::cellcx::{les_exactness, DegreeResult, FilteredComplex};
use tilecoh::datasets::{self, ComplexRun, RunOutput};
use tilecoh::indsys::{classify_limit, limit_mod_p_rank, relevant_primes, InductiveSystem, LimitDescriptor};
use tilecoh::intlinalg::{snf, IntMatrix};
use tilecoh::onedim::{h1_tiling_space, OneDimReport};
use tilecoh::rotfib::RotationReport;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn tilecoh(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tilecoh")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn json(args: &[&str]) -> Result<Value, String> {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out) = tilecoh(&full);
    if code != 0 {
        return Err(format!("`tilecoh {}` exited with {code}", args.join(" ")));
    }
    serde_json::from_str(&out).map_err(|e| format!("bad json: {e}"))
}

fn field<T: serde::de::DeserializeOwned>(v: &Value, key: &str) -> Result<T, String> {
    serde_json::from_value(v.get(key).cloned().ok_or(format!("missing `{key}`"))?).map_err(|e| format!("{key}: {e}"))
}

fn want(label: &str, got: &LimitDescriptor, expected: &str) -> Result<(), String> {
    let e = LimitDescriptor::parse(expected).map_err(|e| e.to_string())?;
    if got.text_eq(&e) {
        Ok(())
    } else {
        Err(format!("{label}: got {got}, expected {expected}"))
    }
}

fn want_result(label: &str, got: &DegreeResult, expected: &str) -> Result<(), String> {
    match got.descriptor() {
        Some(d) => want(label, d, expected),
        None => Err(format!("{label}: unresolved {}", got.text())),
    }
}

fn ensure(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn onedim(rules: &str) -> Result<(OneDimReport, String), String> {
    let v = json(&["onedim", rules])?;
    let RunOutput::OneDim(r) = field::<RunOutput>(&v, "result")? else { return Err("not a one-dim result".into()) };
    let (_, text) = tilecoh(&["onedim", rules]);
    Ok((*r, text))
}

fn criterion_1() -> Outcome {
    let (r, text) = onedim("a->bb,b->ba")?;
    want("H^1", &r.h1, "Z[1/2] + Z")?;
    ensure(r.vertex_stratum.tags == ["contractible"], "vertex stratum not contractible")?;
    ensure(r.tile_system == IntMatrix::from_rows(&[[0, 2], [1, 1]]), "tile system matrix")?;
    want("tile limit", &r.tile_limit, "Z + Z[1/2]")?;
    ensure(text.contains("vertex stratum: contractible"), "text report lacks the vertex stratum line")?;
    ensure(
        text.contains("tile system: (Z^2, [[0,2],[1,1]]) limit Z + Z[1/2]"),
        "text report lacks the tile system line",
    )?;
    Ok(format!("H^1 = {}", r.h1))
}

fn criterion_2() -> Outcome {
    let (r, _) = onedim("a->ab,b->ba")?;
    want("H^1", &r.h1, "Z[1/2] + Z")?;
    let tags = &r.vertex_stratum.tags;
    ensure(tags.iter().any(|t| t == "circle") && tags.iter().any(|t| t == "reflection"), "S0 tags")?;
    ensure(
        r.attribution.iter().any(|a| a.summand == "Z" && a.source == "S0 circle"),
        "Z summand not attributed to the S0 circle",
    )?;
    ensure(r.attribution.iter().any(|a| a.summand == "Z[1/2]" && a.source == "tile cells"), "Z[1/2] attribution")?;
    Ok(format!("H^1 = {}, S0 tags {}", r.h1, tags.join("+")))
}

fn complex_run(name: &str) -> Result<(ComplexRun, Value), String> {
    let v = json(&["builtin", name, "--strict-checkpoints"])?;
    let RunOutput::Complex(r) = field::<RunOutput>(&v, "result")? else { return Err("not a complex result".into()) };
    Ok((*r, v))
}

fn checkpoints_pass(v: &Value) -> Result<usize, String> {
    let reports: Vec<datasets::CheckpointReport> = field(v, "checkpoints")?;
    let mut n = 0;
    for rep in &reports {
        for c in &rep.results {
            ensure(c.pass, &format!("checkpoint {}: got {}, expected {}", c.stage, c.actual, c.expected))?;
            n += 1;
        }
    }
    Ok(n)
}

fn criterion_3() -> Outcome {
    let (r, v) = complex_run("chair")?;
    let n = checkpoints_pass(&v)?;
    let s = &r.les.strata;
    for (q, e) in ["Z", "Z^4", "0"].iter().enumerate() {
        want(&format!("H^{q} of S0 eventual range"), &s[0].direct[q], e)?;
    }
    let c = &s[0].eventual_range_counts;
    let euler = c[0] as i64 - c[1] as i64 + c[2] as i64;
    ensure(euler == -3, &format!("Euler characteristic {euler}"))?;
    want("pair H^1", &s[1].pair[1], "Z[1/2]^2")?;
    want("pair H^2", &s[1].pair[2], "Z^4")?;
    let det = s[1].connecting.iter().find(|c| c.source_degree == 1).and_then(|c| c.limit_determinant.clone());
    ensure(det == Some(BigInt::from(3)), &format!("|det delta| = {det:?}"))?;
    want_result("H^2 of the edge stratum", &s[1].results[2], "Z/3")?;
    want_result("final H^1", &r.finals[1], "Z[1/2]^2")?;
    want_result("final H^2", &r.finals[2], "(1/3)Z[1/4] + Z[1/2]^2")?;
    let note = "generator rescaled by 1/3; torsion Z₃ absorbed";
    ensure(r.finals[2].descriptor().is_some_and(|d| d.annotations.iter().any(|a| a == note)), "extension annotation")?;
    Ok(format!("{n} checkpoints, H^2 = {}", r.finals[2].text()))
}

fn stratum0_block(cx: &FilteredComplex, k: usize, rows: &[String], cols: &[String]) -> IntMatrix {
    let idx = |ids: &[String]| ids.iter().map(|i| cx.cell_index(i).expect("cell exists").1).collect::<Vec<_>>();
    cx.boundary(k).select(&idx(rows), &idx(cols))
}

fn criterion_4() -> Outcome {
    let ds = datasets::load("pinwheel").map_err(|e| e.to_string())?;
    let datasets::Payload::Complex(cx) = &ds.payload else { return Err("pinwheel is not a complex".into()) };
    let d1 = IntMatrix::from_rows(&[
        [-1, 1, 0, 0, -1, 0, 1, 0],
        [1, -1, 0, 0, 0, -1, 0, 1],
        [0, 0, -1, 1, 1, 0, -1, 0],
        [0, 0, 1, -1, 0, 1, 0, -1],
    ]);
    let d2 = IntMatrix::from_rows(&[
        [1, 1, 0, 1, 1, 2, 1, 1],
        [1, 1, 1, 0, 2, 1, 1, 1],
        [1, 1, 1, 0, 2, 1, 1, 1],
        [1, 1, 0, 1, 1, 2, 1, 1],
        [1, 1, 1, 0, 1, 0, 1, 1],
        [1, 1, 0, 1, 0, 1, 1, 1],
        [1, 1, 0, 1, 0, 1, 1, 1],
        [1, 1, 1, 0, 1, 0, 1, 1],
    ]);
    let verts: Vec<String> = ["B_R", "B_L", "S_R", "S_L"].iter().map(|s| s.to_string()).collect();
    let edges: Vec<String> = (1..=8).map(|i| format!("e{i}")).collect();
    let faces: Vec<String> = (1..=8).map(|i| format!("f{i}")).collect();
    ensure(stratum0_block(cx, 1, &verts, &edges) == d1, "boundary_1 differs from the literal matrix")?;
    ensure(stratum0_block(cx, 2, &edges, &faces) == d2, "boundary_2 differs from the literal matrix")?;

    let (r, v) = complex_run("pinwheel")?;
    let n = checkpoints_pass(&v)?;
    let s = &r.les.strata;
    for (q, e) in ["Z", "Z^2", "Z^5"].iter().enumerate() {
        want(&format!("H^{q} of Xi_0"), &s[0].direct[q], e)?;
    }
    want("H^2 of (Xi_1, Xi_0)", &s[1].pair[2], "Z[1/3]^2")?;
    let delta = s[2].connecting.iter().find(|c| c.source_degree == 1).ok_or("no delta from H^1")?;
    let img = &delta.image_basis;
    ensure(
        img.cols() == 1 && (img.col(0) == [2, -2].map(BigInt::from) || img.col(0) == [-2, 2].map(BigInt::from)),
        &format!("delta image basis {img:?}"),
    )?;
    want("cokernel of delta", &delta.cokernel_limit, "Z[1/5] + Z/2")?;
    want_result("final H^1", &r.finals[1], "Z")?;
    want_result("final H^2", &r.finals[2], "Z[1/5] + Z[1/3]^2 + Z^5 + Z/2")?;
    Ok(format!("{n} checkpoints, H^2 = {}", r.finals[2].text()))
}

fn rotation(name: &str) -> Result<RotationReport, String> {
    let v = json(&["builtin", name, "--strict-checkpoints"])?;
    checkpoints_pass(&v)?;
    match field::<RunOutput>(&v, "result")? {
        RunOutput::Rotation(r) => Ok(*r),
        _ => Err(format!("{name} is not a rotation result")),
    }
}

fn criterion_5() -> Outcome {
    let cases: [(&str, &[&str]); 3] = [
        ("chair-rot", &["Z", "Z", "(1/3)Z[1/4]", "(1/3)Z[1/4]"]),
        ("penrose-rot", &["Z", "Z^2", "Z^3 + Z/5", "Z^2"]),
        ("pinwheel-rot", &["Z", "Z^2", "Z[1/5] + Z[1/3]^2 + Z^6 + (Z/2)^5", "Z[1/5] + Z[1/3]^2 + Z^5 + Z/2"]),
    ];
    for (name, expected) in cases {
        let r = rotation(name)?;
        ensure(r.h_rot.len() == expected.len(), &format!("{name}: {} degrees", r.h_rot.len()))?;
        for (k, e) in expected.iter().enumerate() {
            want_result(&format!("{name} H^{k}"), &r.h_rot[k], e)?;
        }
    }
    let r = rotation("pinwheel-rot")?;
    ensure(r.e_inf.annotations.iter().any(|a| a.contains("d2")), "pinwheel d2 annotation missing")?;
    Ok("chair, Penrose and pinwheel rotation hulls".into())
}

fn criterion_6() -> Outcome {
    let v = json(&["rot", "--variant", "8,1", "--variant", "7,4"])?;
    let cmp: tilecoh::rotfib::VariantComparison = field(&v, "variants")?;
    let oracle = |m: i64, n: i64| (m * m + n * n - 2 * (m - n).abs(), m * m + n * n - 2 * (m + n));
    let got: Vec<(i64, i64)> = cmp.variants.iter().map(|f| (f.edge_factor, f.tile_factor)).collect();
    ensure(got == [(51, 47), (59, 43)], &format!("factors {got:?}"))?;
    ensure(got == [oracle(8, 1), oracle(7, 4)], "factors disagree with the closed form")?;
    want("(8,1) edge", &cmp.variants[0].edge_contribution, "Z[1/51]^2")?;
    want("(8,1) tile", &cmp.variants[0].tile_contribution, "Z[1/47]")?;
    want("(7,4) edge", &cmp.variants[1].edge_contribution, "Z[1/59]^2")?;
    want("(7,4) tile", &cmp.variants[1].tile_contribution, "Z[1/43]")?;
    ensure(cmp.distinguished == [(0, 1)], "variants not distinguished")?;
    ensure(cmp.conclusion.starts_with("distinguished"), &cmp.conclusion)?;
    Ok(cmp.conclusion)
}

fn mod_p_check(sys: &InductiveSystem, checked: &mut usize) -> Result<(), String> {
    let d = classify_limit(sys);
    if !d.classified {
        return Ok(());
    }
    for p in relevant_primes(sys, &d, 23) {
        let oracle = limit_mod_p_rank(sys, p).map_err(|e| e.to_string())?;
        let claimed = d.p_rank(&BigInt::from(p)).expect("classified");
        ensure(oracle == claimed, &format!("{d}: p = {p}, descriptor {claimed}, oracle {oracle}"))?;
        *checked += 1;
    }
    Ok(())
}

fn complex_systems(cx: &FilteredComplex) -> Result<Vec<InductiveSystem>, String> {
    let mut out = vec![];
    for k in 0..cx.stratum_count() {
        out.extend(cx.stratum_systems(k).map_err(|e| e.to_string())?.systems);
        if k > 0 {
            out.extend(cx.pair_systems(k).map_err(|e| e.to_string())?.systems);
            out.extend(cx.pair_systems_er(k).map_err(|e| e.to_string())?.systems);
        }
    }
    Ok(out)
}

fn criterion_7() -> Outcome {
    let mut systems: Vec<InductiveSystem> = vec![];

    // (a) Smith normal form.
    let mut rng = ChaCha8Rng::seed_from_u64(7001);
    for i in 0..1000 {
        let a = random_matrix(&mut rng, 6, 20);
        let f = snf(&a);
        ensure(f.u.mul(&a).mul(&f.v) == f.d, &format!("(a) matrix {i}: U A V != D"))?;
        let chain = f.diagonal.windows(2).all(|w| {
            if w[0] == BigInt::from(0) {
                w[1] == w[0]
            } else {
                &w[1] % &w[0] == BigInt::from(0)
            }
        });
        ensure(chain, &format!("(a) matrix {i}: divisibility chain"))?;
    }

    // (b) LES exactness on random filtered complexes.
    let mut splices = 0;
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(7100 + seed);
        let cx = random_complex(&mut rng, MapKind::Mixed);
        ensure(cx.validate().valid, &format!("(b) complex {seed} invalid"))?;
        for c in les_exactness(&cx).map_err(|e| format!("(b) complex {seed}: {e}"))? {
            ensure(c.holds(), &format!("(b) complex {seed}: {c:?}"))?;
            splices += 1;
        }
        systems.extend(complex_systems(&cx)?);
    }

    // (c) Two routes for one-dimensional substitutions.
    let mut rng = ChaCha8Rng::seed_from_u64(7300);
    for _ in 0..20 {
        let s = random_primitive(&mut rng);
        let r = h1_tiling_space(&s).map_err(|e| format!("(c) {s}: {e}"))?;
        ensure(r.h1.text_eq(&r.h1_four_term), &format!("(c) {s}: {} vs {}", r.h1, r.h1_four_term))?;
        systems.push(InductiveSystem::free(r.tile_system.clone()));
        systems.extend(complex_systems(&tilecoh::onedim::build_bd_complex(&s).map_err(|e| e.to_string())?)?);
    }

    // (d) Mod-p oracle over every classified limit seen, datasets included.
    for name in ["chair", "pinwheel", "thue-morse", "period-doubling", "fibonacci"] {
        let ds = datasets::load(name).map_err(|e| e.to_string())?;
        let cx = match &ds.payload {
            datasets::Payload::Complex(cx) => cx.clone(),
            datasets::Payload::OneDim(s) => tilecoh::onedim::build_bd_complex(s).map_err(|e| e.to_string())?,
            _ => continue,
        };
        systems.extend(complex_systems(&cx)?);
    }
    let mut checked = 0;
    for s in &systems {
        mod_p_check(s, &mut checked)?;
    }
    Ok(format!("1000 SNF, {splices} splices, 20 substitutions, {checked} mod-p checks over {} systems", systems.len()))
}

fn criterion_8() -> Outcome {
    let mut lines = vec![];
    for name in ["chair-rot", "penrose-rot", "pinwheel-rot"] {
        let r = rotation(name)?;
        let base: Vec<usize> = r.h_omega0.iter().map(LimitDescriptor::free_rank).collect();
        for (k, h) in r.h_rot.iter().enumerate() {
            let d = h.descriptor().ok_or(format!("{name} H^{k} unresolved"))?;
            let expect =
                base.get(k).copied().unwrap_or(0) + if k > 0 { base.get(k - 1).copied().unwrap_or(0) } else { 0 };
            ensure(d.free_rank() == expect, &format!("{name} H^{k}: rank {} vs {expect}", d.free_rank()))?;
        }
        ensure(r.ranks_consistent(), &format!("{name}: internal rank check"))?;
        lines.push(name);
    }
    Ok(lines.join(", "))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("one-dim period doubling", criterion_1),
        ("one-dim Thue-Morse attribution", criterion_2),
        ("chair checkpoints", criterion_3),
        ("pinwheel checkpoints", criterion_4),
        ("rotation hulls", criterion_5),
        ("pinwheel variants", criterion_6),
        ("property suites", criterion_7),
        ("real rank check", criterion_8),
    ];
    let mut failed = vec![];
    for (i, (name, f)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        match f() {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} ({:.1?})", i + 1, started.elapsed()),
            Err(why) => {
                println!("criterion {} FAIL {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
