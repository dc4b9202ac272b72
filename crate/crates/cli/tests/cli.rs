use std::process::Command;

fn lprim(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lprim"))
        .args(args)
        .env_remove("LPRIM_ABS_TOL")
        .env_remove("LPRIM_REL_TOL")
        .env_remove("LPRIM_THREADS")
        .output()
        .expect("spawn lprim");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn last_value(csv: &str, column: &str) -> f64 {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == column).unwrap_or_else(|| panic!("no {column} in {header:?}"));
    lines.last().unwrap().split(',').nth(i).unwrap().parse().unwrap()
}

#[test]
fn norm_of_gaussian() {
    let (code, out, err) = lprim(&["norm", "--p", "2", "--f", "exp(-x^2)"]);
    assert_eq!(code, 0, "{err}");
    // (π/2)^(1/4)
    let v = last_value(&out, "value");
    assert!((v - 1.1195151349).abs() < 1e-8, "{out}");
}

#[test]
fn pairing_example() {
    let (code, out, err) = lprim(&["pair", "--p", "1", "--F", "indicator(0,1)", "--g", "exp(-x)"]);
    assert_eq!(code, 0, "{err}");
    let v = last_value(&out, "value");
    assert!((v - ((-1f64).exp() - 1.0)).abs() < 1e-8, "{out}");
}

#[test]
fn csv_is_deterministic_with_header() {
    let args = ["reconstruct", "--F", "indicator(0,1)", "--p", "2", "--n", "8", "--x", "0.25,0.5,0.75"];
    let (c1, a, _) = lprim(&args);
    let (c2, b, _) = lprim(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.lines().count() >= 2);
    // 17 significant digits.
    let cell = a.lines().nth(1).unwrap().split(',').last().unwrap();
    let mantissa = cell.split(['e', 'E']).next().unwrap().trim_start_matches('-').replace('.', "");
    assert_eq!(mantissa.len(), 17, "{cell}");
}

#[test]
fn json_output_parses() {
    let (code, out, err) = lprim(&["--format", "json", "norm", "--p", "1", "--f", "indicator(0,2)"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.is_object(), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(lprim(&["norm", "--p", "2", "--f", "exp(-x^2"]).0, 1);
    assert_eq!(lprim(&["no-such-command"]).0, 1);
    assert_eq!(lprim(&["norm", "--p", "0.5", "--f", "exp(-x^2)"]).0, 1);
    assert_eq!(lprim(&["--help"]).0, 0);
    // A false expectation is an assertion failure.
    let (code, _, err) = lprim(&["--expect", "3", "norm", "--p", "1", "--f", "indicator(0,1)"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, err) = lprim(&["--expect", "1", "norm", "--p", "1", "--f", "indicator(0,1)"]);
    assert_eq!(code, 0, "{err}");
}

#[test]
fn descriptor_files() {
    let dir = std::env::temp_dir().join(format!("lprim-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("f.json");
    std::fs::write(&f, r#"{"primitive": "indicator(0,1)", "p": 1}"#).unwrap();
    let g = dir.join("g.json");
    std::fs::write(&g, r#"{"density": "exp(-abs(x))", "q": "inf"}"#).unwrap();
    let fa = format!("@{}", f.display());
    let ga = format!("@{}", g.display());
    let (code, out, err) = lprim(&["pair", "--F", &fa, "--g", &ga]);
    assert_eq!(code, 0, "{err}");
    assert!((last_value(&out, "value") - ((-1f64).exp() - 1.0)).abs() < 1e-8, "{out}");
    let atoms = r#"{"atoms": [[1, 0, 1]]}"#;
    let (code, out, err) = lprim(&["pair", "--F", atoms, "--p", "1", "--g", "exp(-x)"]);
    assert_eq!(code, 0, "{err}");
    assert!((last_value(&out, "value") - ((-1f64).exp() - 1.0)).abs() < 1e-8, "{out}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_single_suite() {
    let (code, out, err) = lprim(&["verify", "--suite", "pairing"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.lines().next().unwrap().contains("suite"), "{out}");
}
