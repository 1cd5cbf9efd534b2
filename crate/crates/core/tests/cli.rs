use std::path::Path;
use std::process::{Command, Output};

fn mobi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mobi"))
        .args(args)
        .output()
        .unwrap()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_golden_file_passes() {
    let out = mobi(&["check", &data("golden.mobi"), "--samples", "50"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let reports = json(&out);
    assert!(reports.as_array().unwrap().len() >= 13);
}

#[test]
fn malformed_files_are_usage_errors_with_positions() {
    for (file, position) in [
        ("syntax_error.mobi", ":6:26:"),
        ("unbound.mobi", ":6:28:"),
        ("shape_mismatch.mobi", ":11:26:"),
    ] {
        let out = mobi(&["check", &data(file)]);
        assert_eq!(out.status.code(), Some(2), "{file}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(position), "{file}: {err}");
    }
    assert_eq!(
        mobi(&["check", "/nonexistent/file.mobi"]).status.code(),
        Some(2)
    );
}

#[test]
fn catalog_list_is_json_with_every_kind() {
    let out = mobi(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let entries = json(&out);
    let kinds: Vec<&str> = entries
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["kind"].as_str().unwrap())
        .collect();
    for kind in ["algebra", "space", "ring", "module"] {
        assert!(
            kinds.iter().any(|k| k.eq_ignore_ascii_case(kind)),
            "{kind} missing from {kinds:?}"
        );
    }
}

#[test]
fn catalog_check_exit_codes() {
    assert_eq!(
        mobi(&["catalog", "check", "projectile-space", "--samples", "30"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        mobi(&[
            "catalog",
            "check",
            "zmod-algebra",
            "--param",
            "m=5",
            "--exhaustive"
        ])
        .status
        .code(),
        Some(0)
    );
    let affine = mobi(&[
        "catalog",
        "check",
        "nonaffine-complex-space",
        "--affine",
        "--samples",
        "30",
    ]);
    assert_eq!(affine.status.code(), Some(1));
    assert_eq!(
        mobi(&["catalog", "check", "no-such-thing"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mobi(&["catalog", "check", "zmod-algebra", "--param", "m=4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mobi(&["catalog", "check", "projectile-space", "--param", "bogus=1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn text_report_has_one_line_per_law() {
    let out = mobi(&[
        "catalog",
        "check",
        "rational-line-algebra",
        "--report",
        "text",
        "--samples",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 8);
    assert!(
        text.lines()
            .all(|l| l.starts_with("rational-line-algebra ")),
        "{text}"
    );
}

#[test]
fn convert_and_roundtrip() {
    let ok = mobi(&[
        "convert",
        "space-to-module",
        "projectile-space",
        "--samples",
        "30",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = mobi(&[
        "convert",
        "space-to-module",
        "nonaffine-complex-space",
        "--samples",
        "30",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(
        mobi(&[
            "convert",
            "module-to-space",
            "plane-module",
            "--samples",
            "30"
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        mobi(&["convert", "space-to-module", "plane-module"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mobi(&["roundtrip", "tri-module", "--samples", "30"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        mobi(&["roundtrip", "projectile-space", "--samples", "30"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn search_prints_models() {
    let out = mobi(&["search", "--size", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 1);
    assert_eq!(mobi(&["search", "--size", "9"]).status.code(), Some(2));
}

#[test]
fn trace_writes_csv_with_unix_line_endings() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let out = mobi(&[
        "trace",
        "projectile-space",
        "--from",
        "(0, 0)",
        "--to",
        "(1, 1)",
        "--steps",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(!csv.contains('\r'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,c1,c2");
    assert_eq!(lines.len(), 6);
    // x + a(y - x) + a(1 - a)(t - s)^2 with k = 1
    assert_eq!(
        lines[1..],
        [
            "0,0,0",
            "0.25,0.4375,0.25",
            "0.5,0.75,0.5",
            "0.75,0.9375,0.75",
            "1,1,1"
        ]
    );
}

#[test]
fn help_goes_to_stdout() {
    let out = mobi(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("catalog"));
    assert_eq!(mobi(&["frobnicate"]).status.code(), Some(2));
}
