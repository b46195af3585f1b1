use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use twogroup_cli::fixture::{FixtureFile, Payload};
use twogroup_cli::{export_structure, load_fixture, load_structure, run_suite, CliError, FixtureKind, Suite};

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twogroup-cli-tests-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn bundled_fixtures_load() {
    let f1 = load_fixture(&fixture_path("f1_z2.cm")).unwrap();
    assert_eq!(f1.kind(), FixtureKind::Finite);
    assert_eq!(f1.arrow_size(), 4);

    let f3 = load_fixture(&fixture_path("f3_affine.m2g")).unwrap();
    assert_eq!(f3.kind(), FixtureKind::Matrix);
    // Two 2x2 affine blocks, two dimensions each.
    assert_eq!(f3.arrow_size(), 4);
}

#[test]
fn truncated_fixture_is_a_parse_error() {
    let text = fs::read_to_string(fixture_path("f3_affine.m2g")).unwrap();
    let path = scratch("truncated.m2g");
    fs::write(&path, &text[..text.len() / 2]).unwrap();
    match load_fixture(&path) {
        Err(CliError::Parse { path: p, line, .. }) => {
            assert_eq!(p, path);
            assert!(line > 1);
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn validation_errors_carry_the_field_path() {
    let text = fs::read_to_string(fixture_path("f2_z3_z2.cm")).unwrap();
    let mut file: FixtureFile = serde_json::from_str(&text).unwrap();
    if let Payload::Finite { crossed_module } = &mut file.payload {
        // Not an automorphism of Z/3.
        crossed_module.action[1] = vec![0, 1, 1];
    }
    let path = scratch("bad_action.cm");
    fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    match load_fixture(&path) {
        Err(CliError::Validation { field, .. }) => assert_eq!(field, "crossed_module.action"),
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn matrix_suites_reject_finite_fixtures() {
    let f1 = load_fixture(&fixture_path("f1_z2.cm")).unwrap();
    for suite in [Suite::Lie, Suite::Invariance, Suite::Limit] {
        assert!(matches!(run_suite(&f1, suite), Err(CliError::IncompatibleSuite { .. })));
    }
    let f4 = load_fixture(&fixture_path("f4_so2.m2g")).unwrap();
    assert!(matches!(
        run_suite(&f4, Suite::Finite),
        Err(CliError::IncompatibleSuite { .. })
    ));
    assert!(matches!(
        export_structure(&f1, &scratch("never.json")),
        Err(CliError::IncompatibleSuite { .. })
    ));
}

#[test]
fn reports_are_deterministic_and_sorted() {
    for name in ["f2_z3_z2.cm", "f4_so2.m2g"] {
        let f = load_fixture(&fixture_path(name)).unwrap();
        let a = run_suite(&f, Suite::All).unwrap().report;
        let b = run_suite(&f, Suite::All).unwrap().report;
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let ids: Vec<&str> = a.laws.iter().map(|l| l.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted, "ids are sorted and unique");
    }
}

#[test]
fn suites_partition_the_matrix_laws() {
    let f = load_fixture(&fixture_path("f4_so2.m2g")).unwrap();
    let all = run_suite(&f, Suite::All).unwrap().report;
    let mut union = Vec::new();
    for suite in [Suite::Lie, Suite::Invariance, Suite::Limit] {
        let r = run_suite(&f, suite).unwrap().report;
        union.extend(r.laws.into_iter().filter(|l| l.id != "numerics.richardson"));
    }
    union.sort_by(|a, b| a.id.cmp(&b.id));
    let without: Vec<_> = all
        .laws
        .iter()
        .filter(|l| l.id != "numerics.richardson")
        .cloned()
        .collect();
    assert_eq!(union, without);
}

#[test]
fn export_round_trips_bit_for_bit() {
    let f3 = load_fixture(&fixture_path("f3_affine.m2g")).unwrap();
    let path = scratch("f3_structure.json");
    let written = export_structure(&f3, &path).unwrap();
    let read = load_structure(&path).unwrap();
    let bits = |d: &twogroup::lie2::StructureDocument| -> Vec<u64> {
        let mut out = Vec::new();
        for t in [&d.bracket0, &d.bracket1] {
            out.extend(t.iter().flatten().flatten().map(|v| v.to_bits()));
        }
        for m in [&d.ds, &d.dt, &d.d1] {
            out.extend(m.iter().flatten().map(|v| v.to_bits()));
        }
        out
    };
    assert_eq!(bits(&written), bits(&read));
    assert_eq!(written, read);
    assert_eq!(read.bracket1.len(), 4);
    assert!(read
        .bracket1
        .iter()
        .all(|m| m.len() == 4 && m.iter().all(|r| r.len() == 4)));
}

#[test]
fn abelian_export_has_zero_brackets_and_projection_maps() {
    let f4 = load_fixture(&fixture_path("f4_so2.m2g")).unwrap();
    let doc = export_structure(&f4, &scratch("f4_structure.json")).unwrap();
    assert!(doc
        .bracket0
        .iter()
        .chain(&doc.bracket1)
        .flatten()
        .flatten()
        .all(|v| v.abs() <= 1e-12));
    // g1 = so2 + so2 with (h, g) stored as diag(h, g): s reads g, t reads h g.
    let close = |a: &[Vec<f64>], b: &[[f64; 2]]| {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(r, e)| r.iter().zip(e).all(|(x, y)| (x - y).abs() <= 1e-9))
    };
    assert!(close(&doc.ds, &[[0.0, 1.0]]), "{:?}", doc.ds);
    assert!(close(&doc.dt, &[[1.0, 1.0]]), "{:?}", doc.dt);
}

#[test]
fn io_errors_name_the_path() {
    let f4 = load_fixture(&fixture_path("f4_so2.m2g")).unwrap();
    let blocker = scratch("not_a_directory");
    fs::write(&blocker, "").unwrap();
    let target = blocker.join("out.json");
    match export_structure(&f4, &target) {
        Err(e @ CliError::Io { .. }) => assert!(e.to_string().contains(&*target.to_string_lossy())),
        other => panic!("expected an I/O error, got {other:?}"),
    }
    assert!(matches!(load_fixture(&scratch("missing.cm")), Err(CliError::Io { .. })));
}

fn run_binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_twogroup"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

#[test]
fn exit_status_follows_the_laws() {
    let f2 = fixture_path("f2_z3_z2.cm");
    let report = scratch("f2_report.json");
    let (code, stdout) = run_binary(&[
        "check",
        f2.to_str().unwrap(),
        "--suite",
        "finite",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("finite.interchange"));
    let saved: twogroup_cli::RunOutput = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(saved.report.passed);

    // An unattainable bound makes one law fail.
    let text = fs::read_to_string(fixture_path("f4_so2.m2g")).unwrap();
    let mut file: serde_json::Value = serde_json::from_str(&text).unwrap();
    file["tolerances"] = serde_json::json!({ "functoriality": 0.0, "j_inverse": 0.0 });
    let strict = scratch("f4_strict.m2g");
    fs::write(&strict, file.to_string()).unwrap();
    let (code, stdout) = run_binary(&["check", strict.to_str().unwrap(), "--suite", "lie", "--samples", "8"]);
    assert_eq!(code, 1, "{stdout}");
    assert!(stdout.contains("FAIL"));

    let (code, _) = run_binary(&["check", fixture_path("f1_z2.cm").to_str().unwrap(), "--suite", "lie"]);
    assert_eq!(code, 2);
}

#[test]
fn export_command_writes_a_document() {
    let out = scratch("cli_export.json");
    let (code, _) = run_binary(&[
        "export",
        fixture_path("f4_so2.m2g").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(load_structure(&out).unwrap().g1_dim, 2);
}
