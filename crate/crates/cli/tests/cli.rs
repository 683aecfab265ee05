use std::path::PathBuf;
use std::process::Command;

use clint_cli::{run_args, ResultRecord, RingSpecFile, Status, Value};
use clint_core::Error;

const CUSP: &str = r#"version = 1
field = "F5"

[ring]
family = "semigroup"
generators = [2, 3]

[ideals]
I = "(t^4, t^5)"

[closures]
tight = "tight[dim1]"
"#;

const CUBIC: &str = r#"version = 1
field = "F5"

[ring]
family = "hypersurface"
variables = ["x", "y", "z"]
rule = "x^3 -> -(y^3 + z^3)"
"#;

const BRANCHES: &str = r#"version = 1
field = "F3^2"
precision = [3, 3]

[ring]
family = "presented"
variables = ["x", "y"]
relations = ["x*y"]

[ideals]
m = "(x, y)"
"two powers" = "(x^2, y^2)"

[closures]
b = "module[B=A/(x^2, y)]"
"#;

fn write_spec(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-specs");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// Runs the library entry point with `--json` and returns the record.
fn record(args: &[&str]) -> ResultRecord {
    let mut full = vec!["clint", "--json"];
    full.extend_from_slice(args);
    let (out, code) = run_args(full);
    let rec: ResultRecord = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}"));
    assert_eq!(rec.exit_code, code);
    rec
}

fn ideal_output(rec: &ResultRecord, label: &str) -> Vec<String> {
    match rec.outputs.iter().find(|o| o.label == label).map(|o| &o.value) {
        Some(Value::Ideal { generators }) => generators.clone(),
        other => panic!("no ideal output {label}: {other:?} in {rec:?}"),
    }
}

fn exit_of(args: &[&str], caps: Option<&str>) -> i32 {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_clint"));
    cmd.args(args);
    match caps {
        Some(c) => cmd.env("CLINT_CAPS", c),
        None => cmd.env_remove("CLINT_CAPS"),
    };
    cmd.output().unwrap().status.code().unwrap()
}

fn parse_error(text: &str) -> (usize, usize, String) {
    match RingSpecFile::parse(text) {
        Err(Error::Parse { line, column, message }) => (line, column, message),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

/// Brute-force symmetry: with F the largest gap, exactly one of x and
/// F - x lies in the semigroup for every 0 <= x <= F.
fn symmetric_by_gaps(gens: &[u32]) -> bool {
    let bound = 200usize;
    let mut member = vec![false; bound];
    member[0] = true;
    for n in 1..bound {
        member[n] = gens.iter().any(|&g| g as usize <= n && member[n - g as usize]);
    }
    let frob = (0..bound).rev().find(|&n| !member[n]).unwrap();
    (0..=frob).all(|x| member[x] != member[frob - x])
}

#[test]
fn semigroup_specs_report_gorenstein_by_gap_symmetry() {
    let cases: &[&[u32]] =
        &[&[2, 3], &[3, 4, 5], &[3, 5], &[3, 4], &[4, 5, 6], &[2, 5], &[4, 6, 7], &[5, 6, 7, 8, 9], &[3, 7, 8]];
    for gens in cases {
        let list: Vec<String> = gens.iter().map(u32::to_string).collect();
        let text = format!(
            "version = 1\nfield = \"F5\"\n\n[ring]\nfamily = \"semigroup\"\ngenerators = [{}]\n",
            list.join(", ")
        );
        let model = RingSpecFile::parse(&text).unwrap().build().unwrap();
        assert_eq!(model.meta().gorenstein, symmetric_by_gaps(gens), "{gens:?}");
    }
    let model = RingSpecFile::parse(CUSP).unwrap().build().unwrap();
    assert!(model.meta().gorenstein);
}

#[test]
fn negative_exponent_is_reported_at_the_minus_sign() {
    let text = CUSP.replace("(t^4, t^5)", "(t^4, t^-1)");
    let (line, column, message) = parse_error(&text);
    let minus = text.lines().nth(8).unwrap().find('-').unwrap();
    assert_eq!((line, column), (9, minus + 1), "{message}");
}

#[test]
fn spec_errors_are_positioned() {
    let (l, c, _) = parse_error(&CUSP.replace("version = 1", "version = 2"));
    assert_eq!((l, c), (1, 11));
    let (l, c, _) = parse_error(&CUSP.replace("\"F5\"", "\"F6\""));
    assert_eq!((l, c), (2, 9));
    let (l, c, m) = parse_error(&CUSP.replace("semigroup", "toric"));
    assert_eq!((l, c), (5, 10));
    assert!(m.contains("unsupported ring family"));
    let (l, _, _) = parse_error(&CUSP.replace("[ring]", "[ring"));
    assert_eq!(l, 4);
    let (l, c, _) = parse_error(&CUBIC.replace("z^3)", "z^^3)"));
    assert_eq!((l, c), (7, 26));
    let (l, c, _) = parse_error(&CUSP.replace("tight[dim1]", "tight[dim2]"));
    assert_eq!((l, c), (12, 16));
    let (l, _, m) = parse_error(&CUSP.replace("[ideals]", "extra = 1\n[ideals]"));
    assert_eq!(l, 8, "{m}");
}

#[test]
fn canonical_files_round_trip_byte_identically() {
    for text in [CUSP, CUBIC, BRANCHES] {
        let parsed = RingSpecFile::parse(text).unwrap();
        assert_eq!(parsed.to_canonical_string(), text);
    }
    let messy = "version=1\nfield='F25'\n[ring]\ngenerators=[3,4,5]\nfamily='semigroup'\n[closures]\nz='integral'\n";
    let once = RingSpecFile::parse(messy).unwrap();
    let printed = once.to_canonical_string();
    let twice = RingSpecFile::parse(&printed).unwrap();
    assert_eq!(once, twice);
    assert_eq!(twice.to_canonical_string(), printed);
    assert!(printed.contains("field = \"F5^2\""));
}

#[test]
fn hull_of_a_two_generated_ideal_in_the_cusp() {
    let spec = write_spec("cusp.toml", CUSP);
    let s = spec.to_str().unwrap();
    let rec = record(&["hull", "--spec", s, "--closure", "tight[dim1]", "--ideal", "(t^4,t^5)"]);
    assert_eq!(rec.status, Status::Ok);
    assert_eq!(ideal_output(&rec, "hull"), ["t^2", "t^3"]);
    // named ideal and closure resolve to the same inputs
    let named = record(&["hull", "--spec", s, "--closure", "tight", "--ideal", "I", "--mode", "cross-check"]);
    assert_eq!(ideal_output(&named, "hull"), ["t^2", "t^3"]);
}

#[test]
fn identity_interior_returns_the_ideal() {
    let spec = write_spec("cusp.toml", CUSP);
    let s = spec.to_str().unwrap();
    for ideal in ["(t^4, t^5)", "(t^2 + 3*t^3)", "(t^3, t^4)", "(t^6)"] {
        let rec = record(&["interior", "--spec", s, "--closure", "identity", "--ideal", ideal]);
        let again = record(&["closure", "--spec", s, "--closure", "identity", "--ideal", ideal]);
        assert_eq!(ideal_output(&rec, "interior"), ideal_output(&again, "closure"), "{ideal}");
    }
}

#[test]
fn core_cross_check_agrees() {
    let spec = write_spec("cusp.toml", CUSP);
    let s = spec.to_str().unwrap();
    for ideal in ["(t^2)", "(t^2, t^3)", "(t^3, t^4)", "(t^4 + t^5)"] {
        for closure in ["integral", "identity", "module[B=k]", "module[B=random]"] {
            let rec = record(&[
                "core",
                "--spec",
                s,
                "--closure",
                closure,
                "--ideal",
                ideal,
                "--precision",
                "8",
                "--mode",
                "cross-check",
            ]);
            assert_eq!(rec.status, Status::Ok, "{closure} {ideal}: {:?}", rec.error);
        }
    }
    let b = write_spec("branches.toml", BRANCHES);
    let rec = record(&[
        "core",
        "--spec",
        b.to_str().unwrap(),
        "--closure",
        "b",
        "--ideal",
        "two powers",
        "--mode",
        "cross-check",
    ]);
    assert_eq!(rec.status, Status::Ok, "{:?}", rec.error);
}

#[test]
fn integral_core_of_the_square_of_the_maximal_ideal() {
    // (t^2, t^3) has the minimal reductions (t^2 + a t^3); their
    // intersection at precision 8 is (t^4, t^5) + (t^8): brute force below
    let spec = write_spec("cusp.toml", CUSP);
    let rec = record(&[
        "reductions",
        "--spec",
        spec.to_str().unwrap(),
        "--closure",
        "integral",
        "--ideal",
        "(t^2,t^3)",
        "--precision",
        "8",
    ]);
    let members = match &rec.outputs[0].value {
        Value::Ideals { members } => members.clone(),
        v => panic!("{v:?}"),
    };
    assert_eq!(members.len(), 5);
    assert!(members.iter().all(|m| m.len() == 1 && m[0].starts_with("t^2")));
    let core = record(&[
        "core",
        "--spec",
        spec.to_str().unwrap(),
        "--closure",
        "integral",
        "--ideal",
        "(t^2,t^3)",
        "--precision",
        "8",
    ]);
    assert_eq!(ideal_output(&core, "core"), ["t^4", "t^5"]);
}

#[test]
fn output_generators_reparse_to_the_same_ideal() {
    let spec = write_spec("cusp.toml", CUSP);
    let s = spec.to_str().unwrap();
    let runs: Vec<(Vec<&str>, &str)> = vec![
        (vec!["hull", "--closure", "tight", "--ideal", "(t^6, t^7)"], "hull"),
        (vec!["interior", "--closure", "tight", "--ideal", "(t^3 + 2*t^4)"], "interior"),
        (vec!["closure", "--closure", "integral", "--ideal", "(t^4 + t^5)"], "closure"),
        (vec!["closure", "--closure", "module[B=random]", "--ideal", "(t^4 + t^5)", "--seed", "9"], "closure"),
        (vec!["core", "--closure", "integral", "--ideal", "(t^2, t^3)", "--precision", "9"], "core"),
        (vec!["testideal", "--closure", "tight"], "test_ideal"),
    ];
    for (mut args, label) in runs {
        args.extend(["--spec", s]);
        let rec = record(&args);
        let gens = ideal_output(&rec, label);
        let expect = format!("({})", gens.join(", "));
        args.extend(["--expect", &expect]);
        let again = record(&args);
        assert_eq!(again.status, Status::Ok, "{args:?}: {:?}", again.error);
    }
}

#[test]
fn records_are_deterministic_apart_from_timing() {
    let spec = write_spec("cusp.toml", CUSP);
    let s = spec.to_str().unwrap();
    let b = write_spec("branches.toml", BRANCHES);
    let commands: Vec<Vec<&str>> = vec![
        vec!["check", "--spec", s, "--closure", "module[B=random]", "--precision", "7", "--seed", "11"],
        vec!["trivial-check", "--spec", s, "--closure", "frobenius", "--samples", "4", "--seed", "5"],
        vec!["reductions", "--spec", s, "--closure", "integral", "--ideal", "(t^2, t^3)", "--mode", "cross-check"],
        vec!["dual", "--spec", b.to_str().unwrap(), "--ideal", "m", "--closure", "b"],
        vec!["cospread", "--spec", s, "--closure", "integral", "--ideal", "I", "--mode", "cross-check"],
    ];
    for args in commands {
        let mut a = record(&args);
        let mut b = record(&args);
        assert_eq!(a.status, Status::Ok, "{args:?}: {:?}", a.error);
        a.elapsed_ms = 0;
        b.elapsed_ms = 0;
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn exit_codes_follow_the_error_class() {
    let cusp = write_spec("cusp.toml", CUSP);
    let cubic = write_spec("cubic.toml", CUBIC);
    let bad = write_spec("bad.toml", &CUSP.replace("(t^4, t^5)", "(t^-1)"));
    let (c, k, x) = (cusp.to_str().unwrap(), cubic.to_str().unwrap(), bad.to_str().unwrap());
    assert_eq!(exit_of(&["closure", "--spec", c, "--closure", "integral", "--ideal", "I"], None), 0);
    assert_eq!(exit_of(&["closure", "--spec", x, "--closure", "integral", "--ideal", "I"], None), 1);
    assert_eq!(exit_of(&["closure", "--spec", c, "--closure", "integral", "--ideal", "(0)"], None), 1);
    assert_eq!(exit_of(&["closure", "--spec", c, "--closure", "nonsense", "--ideal", "I"], None), 1);
    assert_eq!(exit_of(&["hull", "--spec", c], None), 1);
    assert_eq!(exit_of(&["interior", "--spec", c, "--closure", "tight", "--ideal", "I", "--t-max", "3"], None), 2);
    assert_eq!(exit_of(&["closure", "--spec", k, "--closure", "frobenius[e_max=1]", "--ideal", "(y, z)"], None), 2);
    assert_eq!(exit_of(&["closure", "--spec", k, "--closure", "tight[dim1]", "--ideal", "(y, z)"], None), 3);
    assert_eq!(exit_of(&["interior", "--spec", c, "--closure", "collapse", "--ideal", "I"], None), 3);
    assert_eq!(exit_of(&["check", "--spec", c, "--closure", "identity", "--precision", "8"], Some("lattice=5")), 4);
    assert_eq!(
        exit_of(&["hull", "--spec", c, "--closure", "tight", "--ideal", "I", "--expect", "(t^3, t^4)"], None),
        5
    );
}

#[test]
fn broken_closure_is_rejected_with_a_certificate() {
    let spec = write_spec("cusp.toml", CUSP);
    let rec = record(&["check", "--spec", spec.to_str().unwrap(), "--closure", "broken", "--precision", "6"]);
    let verdict = rec.outputs.iter().find(|o| o.label == "verdict").unwrap();
    assert!(matches!(&verdict.value, Value::Text { value } if value.starts_with("rejected")));
    assert!(rec.notes.iter().any(|n| n.contains("fails extensive") && n.ends_with("replays: true")));
}

#[test]
fn hom_test_and_test_ideal_agree() {
    let spec = write_spec("cusp.toml", CUSP);
    let s = spec.to_str().unwrap();
    for (element, member) in [("t^2", true), ("t^3", true), ("1", false), ("t^2 + 1", false)] {
        for e in ["1", "2"] {
            let rec = record(&[
                "hom-test",
                "--spec",
                s,
                "--element",
                element,
                "--ideal",
                "(t^6 + 2*t^7)",
                "--exponent",
                e,
                "--test-element",
                "t^2",
            ]);
            let got = rec.outputs.iter().find(|o| o.label == "member").unwrap();
            assert_eq!(got.value, Value::Flag { value: member }, "{element} e={e}");
        }
    }
}

#[test]
fn suite_rows_all_pass() {
    let rec = record(&["suite"]);
    assert_eq!(rec.status, Status::Ok, "{}", rec.to_text());
    let rows =
        rec.outputs.iter().filter(|o| matches!(&o.value, Value::Text { value } if value.starts_with("pass"))).count();
    assert!(rows >= 30);
    let only = record(&["suite", "--only", "xy=0 F3"]);
    assert_eq!(only.outputs.iter().find(|o| o.label == "rows").unwrap().value, Value::Count { value: 4 });
}
