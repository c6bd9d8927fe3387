//! End-to-end checks of the command-line interface and its exit codes.

use std::path::Path;
use std::process::{Command, Output};

use narayana_concat::pipeline::ProofCertificate;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_narayana-concat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn emit(dir: &Path, name: &str, extra: &[&str]) -> (Output, std::path::PathBuf) {
    let path = dir.join(name);
    let mut args = vec!["prove", "--emit", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    (run(&args), path)
}

type Edit = Box<dyn FnOnce(&mut ProofCertificate)>;

fn write_tampered(src: &Path, dst: &Path, edit: impl FnOnce(&mut ProofCertificate)) {
    let mut cert = ProofCertificate::from_json(&std::fs::read_to_string(src).unwrap()).unwrap();
    edit(&mut cert);
    std::fs::write(dst, cert.to_json()).unwrap();
}

#[test]
fn search_lists_the_seven_solutions() {
    let out = run(&["search", "--max-n", "250"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for v in ["13", "19", "28", "41", "60", "88", "277"] {
        assert!(
            text.contains(&format!("N_n = {v} ")),
            "{v} missing from\n{text}"
        );
    }
    assert!(text.contains("7 solutions"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["search"])), 1);
    assert_eq!(code(&run(&["reduce", "--stage", "3"])), 1);
    assert_eq!(code(&run(&["prove", "--cutoff", "10"])), 1);
    assert_eq!(code(&run(&["oracle", "--max-digits", "1"])), 1);
}

#[test]
fn bounds_and_reduce_report() {
    let out = run(&["bounds"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("n bound"));
    let out = run(&["bounds", "--paper-constants"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("(paper)"));
    let out = run(&[
        "reduce",
        "--stage",
        "1",
        "--big-m",
        "100000000000000000000000000000",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("m1 <= 34"), "{}", stdout(&out));
}

#[test]
fn oracle_passes() {
    let out = run(&["oracle", "--max-digits", "8"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("oracle passed"));
}

#[test]
fn prove_emit_verify_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let (out, cert) = emit(dir.path(), "cert.json", &[]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("solutions: {13, 19, 28, 41, 60, 88, 277}"));
    assert_eq!(code(&run(&["verify", cert.to_str().unwrap()])), 0);

    let bad = dir.path().join("bad.json");
    let edits: [(&str, Edit); 4] = [
        (
            "deleted solution",
            Box::new(|c| {
                c.low_range.solutions.pop();
            }),
        ),
        (
            "eps sign",
            Box::new(|c| {
                let f = &mut c
                    .reduction
                    .as_mut()
                    .unwrap()
                    .stage2
                    .as_mut()
                    .unwrap()
                    .families[7];
                f.eps = format!("-{}", f.eps);
            }),
        ),
        ("verdict", Box::new(|c| c.verdict.closed = false)),
        (
            "stage 2 bound",
            Box::new(|c| {
                c.reduction
                    .as_mut()
                    .unwrap()
                    .stage2
                    .as_mut()
                    .unwrap()
                    .n_bound = "100".into()
            }),
        ),
    ];
    for (what, edit) in edits {
        write_tampered(&cert, &bad, edit);
        assert_eq!(
            code(&run(&["verify", bad.to_str().unwrap()])),
            3,
            "{what} accepted"
        );
    }
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&run(&["verify", bad.to_str().unwrap()])), 3);
    assert_eq!(
        code(&run(&[
            "verify",
            dir.path().join("missing.json").to_str().unwrap()
        ])),
        3
    );
}

#[test]
fn starved_precision_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let (out, cert) = emit(
        dir.path(),
        "starved.json",
        &["--precision-bits", "64", "--max-bits", "64"],
    );
    assert_eq!(code(&out), 4, "{}", stdout(&out));
    let cert = ProofCertificate::from_json(&std::fs::read_to_string(cert).unwrap()).unwrap();
    assert!(!cert.verdict.closed);
    assert_eq!(cert.verdict.failure_kind.as_deref(), Some("precision"));
}

#[test]
fn paper_mode_closes() {
    let out = run(&["prove", "--paper-constants", "--jobs", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("m1 <= 34"));
}
