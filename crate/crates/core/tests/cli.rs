//! End-to-end runs of the `orbitkit` binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn limit_of_sqrt_affine() {
    let o = run(&["limit", "--spec", "sqrt_affine(c=2)", "--t0", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("2.46740110027233"), "{text}");
    assert!(text.contains("± "), "{text}");
}

#[test]
fn mobius_limit_is_exact() {
    let o = run(&[
        "mobius-limit",
        "--spec",
        "mobius(a=2,b=15,d=0)",
        "--t0",
        "2",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("4.8 (exact-formula)"), "{text}");
}

#[test]
fn phi_series_csv() {
    let o = run(&["phi-series", "--c", "6", "--terms", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,numerator,denominator,decimal");
    assert!(lines[6].starts_with("5,97,31573395000,"), "{text}");
}

#[test]
fn orbit_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orbit.csv");
    let o = run(&[
        "orbit",
        "--spec",
        "sqrt_affine(c=2)",
        "--t0",
        "0",
        "--n",
        "3",
        "--format",
        "csv",
        "--precision",
        "double",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "n,t_n");
    assert!(lines[1].starts_with("0,0"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# candidate limit\ncommand = limit\nspec = sqrt_affine(c=2)\nt0 = 5\nformat = csv\n",
    )
    .unwrap();
    let from_file = run(&["--config", cfg.to_str().unwrap()]);
    assert!(
        from_file.status.success(),
        "{}",
        String::from_utf8_lossy(&from_file.stderr)
    );
    let overridden = run(&["--config", cfg.to_str().unwrap(), "--t0", "0"]);
    assert!(overridden.status.success());
    let a = stdout(&from_file);
    let b = stdout(&overridden);
    assert!(a.starts_with("value,abs_error_bound,method,n_used"), "{a}");
    assert!(
        b.lines().nth(1).unwrap().starts_with("2.46740110027233"),
        "{b}"
    );
    assert_ne!(a, b);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        run(&["limit", "--spec", "bogus(x=1)", "--t0", "0"])
            .status
            .code(),
        Some(2)
    );
    // Starting at the fixed point makes the sequence identically zero.
    let o = run(&["limit", "--spec", "sqrt_affine(c=2)", "--t0", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
    let o = run(&[
        "limit",
        "--spec",
        "sqrt_affine(c=2)",
        "--t0",
        "0",
        "--terms",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn repro_passes_and_is_deterministic() {
    let a = run(&["repro"]);
    let b = run(&["repro"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(
        stdout(&a).lines().filter(|l| l.starts_with("PASS")).count(),
        13
    );
}
