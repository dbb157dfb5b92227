mod common;

use std::path::Path;
use std::process::{Command, Output};

use hopf_galois::cli::{Failure, FixtureDoc, Status};
use hopf_galois::galois::{ContextDoc, Mode};
use hopf_galois::groups::FiniteGroup;
use hopf_galois::Error;
use serde_json::Value;

fn hgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture_arg(name: &str) -> String {
    common::fixture_path(name).to_string_lossy().into_owned()
}

fn run(cmd: &str, fixture: &str, extra: &[&str]) -> Output {
    let path = fixture_arg(fixture);
    let mut args = vec![cmd, "--fixture", path.as_str()];
    args.extend_from_slice(extra);
    hgs(&args)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn enumerate_reports_the_census() {
    let out = run("enumerate", "s3_split", &[]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["tool"], "hgs");
    assert_eq!(v["status"], "success");
    assert_eq!(v["result"]["count"], 5);
    let subs = v["result"]["subgroups"].as_array().unwrap();
    assert_eq!(subs.iter().filter(|s| s["lambda"] == true).count(), 1);
    assert_eq!(subs.iter().filter(|s| s["rho"] == true).count(), 1);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for (cmd, fixture, extra) in [
        ("nbg", "s3_field", vec!["--seed", "7", "--samples", "20"]),
        ("theorem", "s3_split_orbit", vec![]),
        ("hopf-order", "s3_split_thin_order", vec![]),
        ("enumerate", "q8_split", vec!["--format", "markdown"]),
    ] {
        let a = run(cmd, fixture, &extra);
        let b = run(cmd, fixture, &extra);
        assert_eq!(code(&a), 0, "{cmd}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn seed_changes_the_nbg_samples() {
    let a = json(&run("nbg", "s3_split", &["--seed", "1", "--samples", "10"]));
    let b = json(&run("nbg", "s3_split", &["--seed", "2", "--samples", "10"]));
    assert_ne!(a["result"], b["result"]);
    assert_eq!(a["config"]["seed"], 1);
}

#[test]
fn out_file_and_markdown() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.md");
    let p = path.to_string_lossy().into_owned();
    let out = run(
        "theorem",
        "s3_split",
        &["--format", "markdown", "--out", &p],
    );
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with('#'), "{text}");
    assert!(text.contains("both-free"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run("theorem", "s3_split_augmented", &[])), 5);
    assert_eq!(code(&run("theorem", "s3_split_unstable", &[])), 2);
    assert_eq!(code(&run("hopf-order", "s3_split_nonunital_order", &[])), 2);
    assert_eq!(code(&run("theorem", "s3_split", &["--box", "0"])), 5);
    assert_eq!(code(&run("theorem", "no_such_fixture", &[])), 1);
    assert_eq!(
        code(&run("nbg", "s3_split", &["--verify-only", "x.json"])),
        2
    );
    // a contradiction can only come from a failed internal check
    let f: Failure = Error::ClaimFailed {
        index: 0,
        claim: "action".into(),
        witness: String::new(),
    }
    .into();
    assert_eq!(f.status, Status::Contradiction);
    assert_eq!(f.status.code(), 4);
}

fn write_fixture(dir: &Path, name: &str, doc: &FixtureDoc) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(doc).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn enumeration_budget_gives_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let doc = FixtureDoc {
        context: ContextDoc {
            group: FiniteGroup::cyclic(13).to_doc(),
            mode: Mode::Split,
            mult: None,
            one: None,
            auto: None,
        },
        lattice: None,
        order: None,
    };
    let path = write_fixture(dir.path(), "c13.json", &doc);
    let out = hgs(&["enumerate", "--fixture", &path]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn corrupted_fixtures_give_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(common::fixture_path("s3_field_orbit")).unwrap();

    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["mult"][2][3][1] = Value::String("7/2".into());
    let bad_mult = dir.path().join("mult.json");
    std::fs::write(&bad_mult, v.to_string()).unwrap();

    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["group"]["table"][1][1] = Value::from(1);
    let bad_group = dir.path().join("group.json");
    std::fs::write(&bad_group, v.to_string()).unwrap();

    let not_json = dir.path().join("junk.json");
    std::fs::write(&not_json, "{ nope").unwrap();

    for path in [bad_mult, bad_group, not_json] {
        let p = path.to_string_lossy().into_owned();
        let out = hgs(&["theorem", "--fixture", &p]);
        assert_eq!(code(&out), 2, "{p}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn verify_only_accepts_genuine_and_rejects_tampered_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("theorem.json");
    let rp = report.to_string_lossy().into_owned();
    assert_eq!(code(&run("theorem", "s3_field_orbit", &["--out", &rp])), 0);

    let out = run("theorem", "s3_field_orbit", &["--verify-only", &rp]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["result"]["valid"], 6);
    assert_eq!(v["result"]["checked"], 6);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let images = doc["result"]["certificates"][0]["certificate"]["images"]
        .as_array_mut()
        .unwrap();
    images.swap(0, 1);
    images[0] = images[2].clone();
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, doc.to_string()).unwrap();
    let tp = tampered.to_string_lossy().into_owned();
    let out = run("theorem", "s3_field_orbit", &["--verify-only", &tp]);
    assert_eq!(code(&out), 6);
    assert_eq!(json(&out)["result"]["valid"], 5);

    // the genuine report does not certify a different lattice
    let out = run("theorem", "s3_split_orbit", &["--verify-only", &rp]);
    assert_ne!(code(&out), 0);
}

#[test]
fn hopf_order_report() {
    let v = json(&run("hopf-order", "s3_split_thin_order", &[]));
    assert_eq!(v["result"]["kg_hopf"], true);
    assert_eq!(v["result"]["supplied_order"]["hopf"], false);
}
