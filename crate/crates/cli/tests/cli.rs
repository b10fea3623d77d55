use std::process::{Command, Output};

use serde_json::Value;

fn rcgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcgen"))
        .args(args)
        .env_remove("RCGEN_SEED")
        .output()
        .expect("spawn rcgen")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON record per line"))
        .collect()
}

fn complex(v: &Value) -> (f64, f64) {
    (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

fn close(got: (f64, f64), want: (f64, f64), tol: f64) -> bool {
    (got.0 - want.0).hypot(got.1 - want.1) <= tol * want.0.hypot(want.1).max(1.0)
}

#[test]
fn eval_f_ell_matches_closed_form() {
    let out = rcgen(&["eval", "--fn", "f_ell 1", "--z", "0+2i", "--t", "0.1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rec = &records(&out)[0];
    // 2 t (z + i)^{-4} at z = 2i is 0.2 / 81
    assert!(close(complex(&rec["value"]), (0.2 / 81.0, 0.0), 1e-10));
    assert!(rec["nodes"].as_u64().unwrap() >= 8);
}

#[test]
fn eval_constant_is_constant() {
    let out = rcgen(&["eval", "--fn", "const 1", "--z", "1+1i", "--t", "0.2"]);
    assert!(out.status.success());
    assert!(close(complex(&records(&out)[0]["value"]), (1.0, 0.0), 1e-12));
}

#[test]
fn inadmissible_parameters_exit_with_domain_code() {
    let out = rcgen(&["eval", "--fn", "f_ell 1", "--z", "0+0.5i", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain"));
    let out = rcgen(&["eval", "--fn", "f_ell 1", "--z", "0-1i", "--t", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_with_one() {
    for args in [
        &["eval", "--fn", "sine 2", "--z", "0", "--t", "0.1"][..],
        &["eval", "--fn", "const 1", "--z", "1+", "--t", "0.1"],
        &["verify", "--suite", "everything"],
        &["frobnicate"],
        &["series", "--fn", "const 1", "--z", "0", "-L", "40"],
        &["verify", "--suite", "hardy", "--format", "xml"],
    ] {
        assert_eq!(rcgen(args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(rcgen(&["--help"]).status.code(), Some(0));
}

#[test]
fn series_of_f_2() {
    let out = rcgen(&["series", "--fn", "f_ell 2", "--z", "0.5+1i", "-L", "4"]);
    assert!(out.status.success());
    let recs = records(&out);
    assert_eq!(recs.len(), 6);
    let z = (0.5f64, 1.0f64);
    // 6 (z + i)^{-6}
    let (r, th) = (z.0.hypot(z.1 + 1.0), (z.1 + 1.0).atan2(z.0));
    let want = (6.0 * r.powi(-6) * (-6.0 * th).cos(), 6.0 * r.powi(-6) * (-6.0 * th).sin());
    for (l, rec) in recs[..5].iter().enumerate() {
        assert_eq!(rec["l"].as_u64(), Some(l as u64));
        let target = if l == 2 { want } else { (0.0, 0.0) };
        assert!(close(complex(&rec["jet"]), target, 1e-12), "ℓ={l}");
        assert!(close(complex(&rec["quadrature"]), target, 1e-9), "ℓ={l}");
    }
    assert!(recs[5]["max_disagreement"].as_f64().unwrap() < 1e-9);
}

#[test]
fn series_of_simple_polynomials() {
    let out = rcgen(&["series", "--fn", "const 1", "--z", "0.3", "-L", "4"]);
    let jets: Vec<_> = records(&out)[..5].iter().map(|r| complex(&r["jet"])).collect();
    assert_eq!(jets, vec![(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);

    let out = rcgen(&["series", "--fn", "poly 1,1:1", "--z", "0", "--order", "3"]);
    let jets: Vec<_> = records(&out)[..4].iter().map(|r| complex(&r["jet"])).collect();
    assert_eq!(jets, vec![(0.0, 0.0), (0.0, 0.0), (-2.0, 0.0), (0.0, 0.0)]);
}

#[test]
fn exp_profile_is_an_eigenfunction() {
    let out = rcgen(&["series", "--fn", "exp-profile 1 2", "--z", "0.3+1i", "-L", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    let c2 = complex(&recs[2]["jet"]).0.hypot(complex(&recs[2]["jet"]).1);
    assert!(c2 > 1e-3);
    for l in [0, 1, 3, 4] {
        let (re, im) = complex(&recs[l]["jet"]);
        assert!(re.hypot(im) < 1e-10 * c2, "ℓ={l}");
    }
}

#[test]
fn verify_suites_pass() {
    for suite in ["holography", "hardy", "residues"] {
        let out = rcgen(&["verify", "--suite", suite]);
        assert!(out.status.success(), "{suite}: {}", String::from_utf8_lossy(&out.stderr));
        let recs = records(&out);
        assert!(!recs.is_empty());
        for r in &recs {
            assert!(r["name"].as_str().unwrap().starts_with(suite));
            assert_eq!(r["passed"], Value::Bool(true));
        }
    }
}

#[test]
fn failing_checks_exit_with_four() {
    let out = rcgen(&["verify", "--suite", "pde", "--jet-cap", "4"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed"));
}

#[test]
fn csv_output_has_a_header() {
    let out = rcgen(&["verify", "--suite", "holography", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,criterion,residual,tolerance,passed,detail"));
    assert_eq!(lines.count(), 3);

    let out = rcgen(&["eval", "--fn", "const 2", "--z", "1+1i", "--t", "0.1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("value_re,value_im,err_estimate,contour_radius,nodes\n"));
}

#[test]
fn seed_precedence_is_file_then_env_then_flag() {
    let dir = std::env::temp_dir().join(format!("rcgen-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("run.conf");
    std::fs::write(&config, "# seeds\nseed = 3\nformat = json\n").unwrap();
    let config = config.to_str().unwrap();

    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_rcgen"));
        cmd.args(["verify", "--suite", "covariance", "--config", config]).args(extra);
        match env {
            Some(seed) => cmd.env("RCGEN_SEED", seed),
            None => cmd.env_remove("RCGEN_SEED"),
        };
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let plain = |seed: &str| rcgen(&["verify", "--suite", "covariance", "--seed", seed]).stdout;

    assert_eq!(run(None, &[]), plain("3"));
    assert_eq!(run(Some("5"), &[]), plain("5"));
    assert_eq!(run(Some("5"), &["--seed", "9"]), plain("9"));
    assert_ne!(plain("3"), plain("5"));
    std::fs::remove_dir_all(&dir).unwrap();
}
