//! One line per acceptance criterion: the suites behind it must pass in
//! full, within the stated wall-clock budget.

use std::process::Command;
use std::time::{Duration, Instant};

use lprim::Config;
use lprim_cli::suites::run_named;

struct Criterion {
    label: &'static str,
    suites: &'static [&'static str],
    budget: Option<Duration>,
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

const CRITERIA: &[Criterion] = &[
    Criterion { label: "pairing exactness", suites: &["pairing"], budget: secs(1) },
    Criterion { label: "norm formulas", suites: &["norms"], budget: secs(5) },
    Criterion { label: "dual norm", suites: &["dualnorm"], budget: secs(30) },
    Criterion { label: "Hölder suite", suites: &["holder"], budget: secs(120) },
    Criterion { label: "lattice / L-space", suites: &["lattice"], budget: None },
    Criterion { label: "reconstruction", suites: &["reconstruct"], budget: None },
    Criterion {
        label: "convolution exhibits",
        suites: &["conv-exhibits", "conv-young", "star-algebra"],
        budget: None,
    },
    Criterion {
        label: "Fourier exhibits",
        suites: &["fourier-exhibits", "fourier-rl", "parseval"],
        budget: secs(120),
    },
    Criterion { label: "higher order", suites: &["higher"], budget: None },
    Criterion {
        label: "Poisson",
        suites: &["poisson-exact", "poisson-boundary"],
        budget: secs(180),
    },
];

fn line(ok: bool, label: &str, elapsed: Duration, note: &str) -> bool {
    println!(
        "{} {label:<22} {:>8.2}s {note}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    ok
}

#[test]
fn acceptance() {
    let cfg = Config::default();
    let mut all_ok = true;
    for c in CRITERIA {
        let names: Vec<String> = c.suites.iter().map(|s| s.to_string()).collect();
        let t = Instant::now();
        let result = run_named(&names, &cfg);
        let elapsed = t.elapsed();
        let (ok, note) = match result {
            Err(e) => (false, e),
            Ok(items) => {
                let failed: Vec<String> = items
                    .iter()
                    .filter(|a| !a.passed)
                    .map(|a| format!("{}: {} ({})", a.suite, a.name, a.detail))
                    .collect();
                let slow = c.budget.is_some_and(|b| elapsed >= b);
                let mut note = format!("{} checks", items.len());
                if !failed.is_empty() {
                    note = format!("{note}; failed: {}", failed.join("; "));
                }
                if slow {
                    note = format!("{note}; over budget {:?}", c.budget.unwrap());
                }
                (!items.is_empty() && failed.is_empty() && !slow, note)
            }
        };
        all_ok &= line(ok, c.label, elapsed, &note);
    }

    let budget = Duration::from_secs(600);
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_lprim"))
        .args(["verify", "--suite", "all"])
        .env_remove("LPRIM_ABS_TOL")
        .env_remove("LPRIM_REL_TOL")
        .output()
        .expect("spawn lprim");
    let elapsed = t.elapsed();
    let code = out.status.code().unwrap_or(-1);
    let ok = code == 0 && elapsed < budget;
    all_ok &= line(ok, "verify --suite all", elapsed, &format!("exit {code}"));

    assert!(all_ok, "acceptance criteria failed");
}
