use std::process::{Command, Output};

fn lrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrp"))
        .args(args)
        .env_remove("RS_CONFIG")
        .output()
        .expect("spawn lrp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(o: &Output, name: &str) -> String {
    let text = stdout(o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no {name} in {header:?}"));
    row[i].to_string()
}

fn num(o: &Output, name: &str) -> f64 {
    field(o, name).parse().unwrap()
}

#[test]
fn sigma_zero_values() {
    let o = lrp(&["sigma-zero"]);
    assert!(o.status.success());
    assert!((num(&o, "u0") - 3.658_874_4).abs() < 1e-6);
    assert!((num(&o, "exponent") - 0.273_308_1).abs() < 1e-6);
}

#[test]
fn dilog_at_minus_one() {
    let o = lrp(&["dilog", "--x", "-1"]);
    assert!(o.status.success());
    assert!((num(&o, "li2") + std::f64::consts::PI.powi(2) / 12.0).abs() < 1e-13);
    assert_eq!(lrp(&["dilog", "--x", "1.5"]).status.code(), Some(2));
}

#[test]
fn sieve_count_small_window() {
    let o = lrp(&["sieve-count", "--x", "30", "--y", "10", "--z", "3"]);
    assert!(stdout(&o).starts_with("X,Y,Z,exact,asymptotic,main_bound\n30,10,3,3,,"));
    let o = lrp(&["sieve-count", "--x", "1000", "--y", "100", "--z", "20", "--asymptotic"]);
    let (exact, asym) = (num(&o, "exact"), num(&o, "asymptotic"));
    // the difference of two main terms; only its sign and scale are meaningful this low
    assert!(exact > 0.0 && asym > 0.0 && asym < 10.0 * exact, "{exact} {asym}");
}

#[test]
fn exit_codes() {
    assert_eq!(lrp(&["sigma-eval", "--u", "2", "--step-h", "0.3"]).status.code(), Some(2));
    assert_eq!(lrp(&["mean-value", "--y", "1", "--u", "1"]).status.code(), Some(2));
    assert_eq!(lrp(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(lrp(&["sigma-eval"]).status.code(), Some(64));
    let o = lrp(&["density", "--input", "/nonexistent/eigen.tsv", "--x", "10"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(!o.stderr.is_empty());
}

#[test]
fn domain_and_guard_errors_exit_two() {
    assert_eq!(lrp(&["buchstab", "--u", "0.5"]).status.code(), Some(2));
    let o = lrp(&["c-constant", "--cutoff", "1e12", "--prime-limit-guard", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(lrp(&["sigma-eval", "--u", "1e9"]).status.code(), Some(2));
}

#[test]
fn computation_error_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.tsv");
    let p = path.to_str().unwrap();
    assert!(lrp(&["synth", "--limit", "100", "--out", p]).status.success());
    let o = lrp(&["s-sums", "--input", p, "--x", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("101"));
}

#[test]
fn help_for_every_subcommand() {
    assert_eq!(lrp(&["--help"]).status.code(), Some(0));
    assert_eq!(lrp(&["--version"]).status.code(), Some(0));
    for sub in [
        "sigma-zero",
        "sigma-eval",
        "buchstab",
        "dilog",
        "sieve-count",
        "mean-value",
        "c-constant",
        "density",
        "synth",
        "least-prime",
        "s-sums",
        "identity-check",
        "dump-grid",
    ] {
        assert_eq!(lrp(&[sub, "--help"]).status.code(), Some(0), "{sub}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["identity-check", "--trials", "300", "--seed", "7"];
    let (a, b) = (lrp(&args), lrp(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(field(&a, "ok"), "true");
}

#[test]
fn json_uses_csv_field_names() {
    let csv = lrp(&["c-constant", "--cutoff", "1000"]);
    let json = lrp(&["--format", "json", "c-constant", "--cutoff", "1000"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let header = stdout(&csv).lines().next().unwrap().to_string();
    let obj = v[0].as_object().unwrap();
    for k in header.split(',') {
        assert!(obj.contains_key(k), "{k}");
    }
    assert_eq!(obj.len(), header.split(',').count());
    assert!((v[0]["value"].as_f64().unwrap() - num(&csv, "value")).abs() < 1e-15);
}

#[test]
fn config_file_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# test\noutput_format = json\nstep_h = 0.001\n").unwrap();
    let o = lrp(&["--config", cfg.to_str().unwrap(), "dilog", "--x", "0.5"]);
    assert!(stdout(&o).trim_start().starts_with('['));
    let o = Command::new(env!("CARGO_BIN_EXE_lrp"))
        .args(["dilog", "--x", "0.5"])
        .env("RS_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(stdout(&o).trim_start().starts_with('['));
    let o = lrp(&["--config", cfg.to_str().unwrap(), "--format", "csv", "dilog", "--x", "0.5"]);
    assert!(stdout(&o).starts_with("x,li2\n"));

    std::fs::write(&cfg, "step_h = 0.001\nbogus = 1\n").unwrap();
    let o = lrp(&["--config", cfg.to_str().unwrap(), "sigma-zero"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains('2'));
}

#[test]
fn synth_density_least_prime_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eigen.tsv");
    let p = path.to_str().unwrap();
    let o = lrp(&["synth", "--limit", "20000", "--seed", "3", "--violate", "2:2.5,3:-3", "--out", p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(num(&o, "records") as u64, 2262);

    let d = lrp(&["density", "--input", p, "--x", "20000"]);
    assert!(d.status.success());
    assert_eq!(num(&d, "pi_X") as u64, 2262);
    assert_eq!(num(&d, "ramanujan_count") as u64, 2260);
    let nine = num(&d, "mean_nine");
    assert!((nine - 10.0).abs() < 1.0, "{nine}");

    let l = lrp(&["least-prime", "--input", p]);
    assert!(l.status.success());
    assert_eq!(field(&l, "found"), "true");
    assert_eq!(field(&l, "p"), "5");

    let s = lrp(&["s-sums", "--input", p, "--x", "1000"]);
    assert!(s.status.success());
    assert!((num(&s, "S") - (num(&s, "S_plus") + num(&s, "S_minus"))).abs() < 1e-6 * num(&s, "S_plus"));

    let far = lrp(&["density", "--input", p, "--x", "1e6"]);
    assert_eq!(far.status.code(), Some(2));
}

#[test]
fn least_prime_none_found_is_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tsv");
    let p = path.to_str().unwrap();
    assert!(lrp(&["synth", "--limit", "5", "--violate", "2:3,3:3,5:-2.5", "--out", p]).status.success());
    let o = lrp(&["least-prime", "--input", p]);
    assert!(o.status.success());
    assert_eq!(field(&o, "found"), "false");
}
