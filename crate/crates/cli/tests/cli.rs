use std::process::{Command, Output};

fn recoupling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recoupling"))
        .args(args)
        .env_remove("RECOUPLING_CACHE_DIR")
        .output()
        .expect("running the CLI")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = recoupling(&a);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn sixj_prints_exact_and_float() {
    let v = json(&["sixj", "1", "1", "1", "1", "1", "1"]);
    assert_eq!(v["value"]["exact"], "+sqrt(1/36)");
    assert_eq!(v["value"]["surd"], "1/6");
    assert_eq!(v["value"]["value"].as_f64().unwrap(), 1.0 / 6.0);
    let pretty = stdout(&recoupling(&["sixj", "1", "1", "1", "1", "1", "1"]));
    assert!(pretty.contains("+sqrt(1/36)") && pretty.contains("0.16666666666666666"), "{pretty}");
}

#[test]
fn violated_triad_is_zero_with_a_note() {
    let v = json(&["sixj", "1", "1", "3", "1", "1", "1"]);
    assert_eq!(v["value"]["sign"], 0);
    assert_eq!(v["note"], "triad violated");
}

#[test]
fn decimal_and_fraction_syntax_agree() {
    let a = recoupling(&["threej", "3/2", "1", "1/2", "-1/2", "1", "-1/2", "--format", "json"]);
    let b = recoupling(&["threej", "1.5", "1", "0.5", "-0.5", "1", "-0.5", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(recoupling(&["sixj", "1", "x", "1", "1", "1", "1"]).status.code(), Some(2));
    assert_eq!(recoupling(&["sixj", "1", "1/3", "1", "1", "1", "1"]).status.code(), Some(2));
    assert_eq!(recoupling(&["spectrum", "1/2", "1/2", "1/2", "5/2"]).status.code(), Some(3));
    assert_eq!(recoupling(&["threej", "1/2", "1/2", "1", "1", "0", "-1"]).status.code(), Some(3));
    assert_eq!(recoupling(&["alpha", "1", "1", "1", "1", "--ell", "7"]).status.code(), Some(3));
    assert_eq!(recoupling(&["plotdata", "bogus"]).status.code(), Some(2));
    assert_eq!(recoupling(&["--tol", "0", "spectrum", "1", "1", "1", "1"]).status.code(), Some(2));
    assert_eq!(recoupling(&["check", "limits", "--base", "nope:1"]).status.code(), Some(2));
}

#[test]
fn spin_half_spectrum() {
    let v = json(&["spectrum", "1/2", "1/2", "1/2", "1/2", "--no-cache"]);
    let lam: Vec<f64> = v["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let s = 3f64.sqrt() / 16.0;
    assert_eq!(lam.len(), 2);
    assert!((lam[0] - s).abs() < 1e-15 && (lam[1] + s).abs() < 1e-15);
    assert!(stdout(&recoupling(&["spectrum", "1/2", "1/2", "1/2", "1/2"])).contains("0.108253"));
}

#[test]
fn cache_serves_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let run = |sides: [&str; 4]| {
        let mut a = vec!["--cache-dir", d, "spectrum"];
        a.extend(sides);
        a.extend(["--vectors", "--format", "csv"]);
        recoupling(&a)
    };
    let first = run(["2", "5/2", "3", "7/2"]);
    let second = run(["2", "5/2", "3", "7/2"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("served from cache"));
    // the Regge image shares the cache entry
    let regge = run(["7/2", "3", "5/2", "2"]);
    assert!(regge.status.success());
    assert!(String::from_utf8_lossy(&regge.stderr).contains("served from cache"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let env = Command::new(env!("CARGO_BIN_EXE_recoupling"))
        .args(["spectrum", "2", "5/2", "3", "7/2", "--vectors", "--format", "csv"])
        .env("RECOUPLING_CACHE_DIR", d)
        .output()
        .unwrap();
    assert_eq!(env.stdout, first.stdout);
    assert!(String::from_utf8_lossy(&env.stderr).contains("served from cache"));
}

#[test]
fn checks_pass_on_small_sweeps() {
    for suite in ["families", "algebra", "triangular"] {
        let v = json(&["check", suite, "--max-2j", "6"]);
        assert_eq!(v["pass"], true, "{suite}");
        assert_eq!(v["cases"].as_array().unwrap().len(), 160);
    }
    let v = json(&["check", "algebra", "--max-2j", "6", "--rep", "sym", "--jobs", "2"]);
    for c in v["cases"].as_array().unwrap() {
        assert!(c["relative_residual"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn degenerate_limit_base_is_skipped() {
    let o = recoupling(&["check", "limits", "--base", "iia:0,2,2s+1/2,2s", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let case = &v["cases"][0];
    assert_eq!(case["status"], "skipped");
    assert!(case["points"].as_array().unwrap().iter().all(|p| p["note"].is_string()));
}

#[test]
fn plotdata_shapes() {
    let out = stdout(&recoupling(&["plotdata", "eigenfunctions", "1/2", "1/2", "1/2", "1/2"]));
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with('#'));
    assert_eq!(lines[1], "ell,psi_k0,psi_k1");
    assert_eq!(lines.len(), 4);

    let out = stdout(&recoupling(&["plotdata", "alpha-profile", "1", "3/2", "2", "5/2"]));
    let rows: Vec<f64> = out.lines().skip(2).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|a| *a > 0.0));

    let out = stdout(&recoupling(&["plotdata", "convergence", "--base", "iiib:1,3/2,2s+1/2,2s", "--scales", "1,2,4"]));
    assert_eq!(out.lines().count(), 2 + 3);
    let out = stdout(&recoupling(&["plotdata", "convergence", "--base", "iia:0,2,2s+1/2,2s"]));
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn regge_and_families() {
    let v = json(&["regge", "1", "2", "3", "3", "3", "3"]);
    assert_eq!(v["equal_value"], true);
    let v = json(&["regge", "4", "3/2", "1", "5/2"]);
    assert_eq!(v["canonical"]["canonical"], true);
    let v = json(&["overlap", "3/2", "2", "5/2", "3", "--family", "II.B", "--rep", "sym"]);
    assert!(v["orthogonality_deviation"].as_f64().unwrap() < 1e-12);
    let v = json(&["overlap", "1/2", "1/2", "1/2", "1/2", "--ell", "0", "--ell-tilde", "1"]);
    assert_eq!(v["entries"][0]["value"]["surd"], "1/2*sqrt(3)");
}
