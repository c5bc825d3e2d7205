//! Exit statuses and reproducibility of the command-line tool.

use std::process::Command;

use tempfile::tempdir;

fn qjinv(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qjinv")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn every_subcommand_succeeds() {
    let runs: &[&[&str]] = &[
        &["unit", "--p", "3", "--a", "0,0,1", "--prec", "20"],
        &["lattice", "--p", "3", "--a", "0,0,1", "--degbound", "6"],
        &["zeta", "--p", "3", "--a", "0,0,1", "--prec", "20"],
        &["jeps", "--p", "3", "--a", "0,0,1", "--nmax", "2", "--prec", "20"],
        &["jqt", "--p", "3", "--a", "0,0,1", "--prec", "20"],
        &["norm", "--p", "3", "--a", "0,0,1", "--prec", "20"],
        &["classnum", "--p", "3", "--a", "0,0,1"],
        &["minpoly", "--p", "3", "--a", "0,1", "--prec", "40", "--degbound", "2,2"],
        &["portrait", "--p", "3", "--a", "0,0,1", "--prec", "20", "--format", "csv"],
    ];
    for args in runs {
        let (code, out) = qjinv(args);
        assert_eq!(code, 0, "{args:?}");
        assert!(out.contains(env!("CARGO_PKG_VERSION")), "{args:?} output lacks the version");
    }
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        &["bogus"][..],
        &["jqt", "--p", "4", "--a", "0,1"],
        &["jqt", "--p", "3", "--a", "1"],
        &["jqt", "--p", "3", "--a", "0,2"],
        &["jqt", "--p", "3", "--a", "0,1", "--prec", "0"],
        &["jqt", "--p", "3", "--a", "0,1", "--b", "0"],
        &["jqt", "--p", "3", "--a", "0,1", "--format", "xml"],
    ] {
        assert_eq!(qjinv(args).0, 1, "{args:?}");
    }
    assert_eq!(qjinv(&["--help"]).0, 0);
}

#[test]
fn route_disagreement_exits_with_two() {
    // two layers cannot reach 30 coefficients
    let (code, _) = qjinv(&["jqt", "--p", "3", "--a", "0,0,1", "--prec", "30", "--nmax", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn artifacts_are_byte_identical() {
    let dir = tempdir().unwrap();
    for (k, args) in [
        &["norm", "--p", "3", "--a", "0,0,1", "--prec", "20", "--seed", "5"][..],
        &["portrait", "--p", "2", "--a", "1,1,1", "--prec", "16", "--format", "csv"],
    ]
    .iter()
    .enumerate()
    {
        let paths: Vec<_> = (0..2).map(|r| dir.path().join(format!("{k}-{r}.out"))).collect();
        for p in &paths {
            let mut full = args.to_vec();
            full.extend(["--out", p.to_str().unwrap()]);
            assert_eq!(qjinv(&full).0, 0);
        }
        let a = std::fs::read(&paths[0]).unwrap();
        assert_eq!(a, std::fs::read(&paths[1]).unwrap(), "{args:?}");
        let text = String::from_utf8(a).unwrap();
        assert!(text.contains("\"seed\"") && text.contains("\"prec\""), "config not embedded");
    }
}

#[test]
fn rational_jeps_reports_infinity() {
    let (code, out) = qjinv(&["jeps", "--p", "3", "--a", "0,1", "--b", "0", "--nmax", "4", "--prec", "12"]);
    assert_eq!(code, 0);
    assert!(out.contains("INFINITY"), "{out}");
}
