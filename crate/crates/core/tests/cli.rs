use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hrlab::harness::{FibrationModel, SearchReport};
use hrlab::{HermitianOneOneForm, Instance};
use serde_json::Value;
use tempfile::TempDir;

fn hrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hrlab"))
        .args(args)
        .env_remove("HRLAB_TOL")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write_json<T: serde::Serialize>(dir: &TempDir, name: &str, v: &T) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn check_passes_on_classical_instance() {
    let dir = TempDir::new().unwrap();
    let f = write_json(&dir, "c.json", &Instance::classical(2, 2, 1, 1).unwrap());
    let o = hrlab(&["check", s(&f), "--count", "500"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["all_pass"], true);
    for k in [
        "hl",
        "hrr",
        "ld",
        "nondegeneracy",
        "local_estimate",
        "homotopy",
    ] {
        assert_eq!(v["checks"][k]["verdict"], true, "{k}");
    }
}

#[test]
fn report_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let f = write_json(
        &dir,
        "c.json",
        &Instance::random_seeded(3, 2, 1, 0, 4).unwrap(),
    );
    let out = dir.path().join("r.json");
    let o = hrlab(&[
        "--report",
        s(&out),
        "check",
        s(&f),
        "--steps",
        "0",
        "--count",
        "0",
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["all_pass"], true);
    assert!(v["checks"].get("homotopy").is_none());
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&hrlab(&["check", s(&bad)])), 2);
    assert_eq!(
        code(&hrlab(&["check", s(&dir.path().join("missing.json"))])),
        2
    );

    // p + q > m
    let w = HermitianOneOneForm::identity(3);
    let v = serde_json::json!({"n": 3, "m": 1, "p": 1, "q": 1, "omega": w, "alphas": []});
    let f = write_json(&dir, "pq.json", &v);
    let o = hrlab(&["check", s(&f)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("p + q"));

    // hypotheses fail unless validation is skipped
    let neg = HermitianOneOneForm::diag(&[1.0, -1.0, 1.0]);
    let v = serde_json::json!({"n": 3, "m": 1, "p": 0, "q": 0, "omega": w, "alphas": [neg, w]});
    let f = write_json(&dir, "neg.json", &v);
    assert_eq!(code(&hrlab(&["check", s(&f)])), 2);
    let o = hrlab(&[
        "check",
        s(&f),
        "--no-validate",
        "--steps",
        "0",
        "--count",
        "0",
    ]);
    assert!(matches!(code(&o), 0 | 1));

    assert_eq!(
        code(&hrlab(&[
            "--tol",
            "2",
            "search",
            "--mode",
            "arbitrary-omega"
        ])),
        2
    );
    assert_eq!(code(&hrlab(&["frobnicate"])), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_hrlab"))
        .args(["search", "--mode", "arbitrary-omega", "--budget", "1"])
        .env("HRLAB_TOL", "banana")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn random_sweep_is_seed_deterministic() {
    let args = [
        "random", "--n-min", "2", "--n-max", "3", "--count", "2", "--seed", "7",
    ];
    let a = hrlab(&args);
    let b = hrlab(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["counters"]["failed"], 0);
    // n = 2: 10 tuples, n = 3: 20 tuples
    assert_eq!(v["counters"]["checked"], 60);
    let c = hrlab(&[
        "random", "--n-min", "2", "--n-max", "3", "--count", "2", "--seed", "8",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn random_sweep_from_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = serde_json::json!({
        "n_min": 2, "n_max": 4, "constraint": "classical",
        "tuples": [[4, 3, 1, 1]], "count": 3, "seed": 1,
        "options": {"steps": 4, "samples": 100, "seed": 0}
    });
    let f = write_json(&dir, "cfg.json", &cfg);
    let o = hrlab(&["random", "--config", s(&f)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["counters"]["checked"], 3);
    assert_eq!(v["results"][0]["tuple"], serde_json::json!([4, 3, 1, 1]));
    let bad = write_json(
        &dir,
        "bad.json",
        &serde_json::json!({"n_min": 4, "n_max": 2}),
    );
    assert_eq!(code(&hrlab(&["random", "--config", s(&bad)])), 2);
}

#[test]
fn fibration_with_identity_forms() {
    let dir = TempDir::new().unwrap();
    let model = FibrationModel {
        n: 3,
        m: 2,
        p: 1,
        q: 0,
        base_forms: vec![HermitianOneOneForm::identity(2); 2],
        fiber_form: HermitianOneOneForm::identity(3),
    };
    let f = write_json(&dir, "fib.json", &model);
    let o = hrlab(&["fibration", s(&f), "--count", "200", "--steps", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["all_pass"], true);

    let mut bad = model.clone();
    bad.base_forms[0] = HermitianOneOneForm::diag(&[1.0, -1.0]);
    let f = write_json(&dir, "bad.json", &bad);
    assert_eq!(code(&hrlab(&["fibration", s(&f)])), 2);
}

#[test]
fn search_budget_zero_is_empty() {
    for mode in ["arbitrary-omega", "basis-intersection"] {
        let o = hrlab(&["search", "--mode", mode, "--budget", "0"]);
        assert_eq!(code(&o), 0);
        let r: SearchReport = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(r.samples, 0);
        assert!(r.findings.is_empty());
    }
}

#[test]
fn search_without_perturbation_finds_nothing() {
    let o = hrlab(&[
        "search",
        "--mode",
        "arbitrary-omega",
        "--budget",
        "20",
        "--perturbation",
        "0",
    ]);
    assert_eq!(code(&o), 0);
    let r: SearchReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.samples, 20);
    assert!(r.findings.is_empty());
}

#[test]
fn search_findings_replay() {
    let o = hrlab(&[
        "search",
        "--mode",
        "arbitrary-omega",
        "--budget",
        "40",
        "--seed",
        "3",
    ]);
    assert_eq!(code(&o), 0);
    let again = hrlab(&[
        "search",
        "--mode",
        "arbitrary-omega",
        "--budget",
        "40",
        "--seed",
        "3",
    ]);
    assert_eq!(o.stdout, again.stdout);
    let r: SearchReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!r.findings.is_empty());
    let dir = TempDir::new().unwrap();
    for (k, f) in r.findings.iter().take(3).enumerate() {
        let hrlab::harness::Finding::ArbitraryOmega {
            instance, hl, hrr, ..
        } = f
        else {
            panic!("wrong finding kind");
        };
        let p = write_json(&dir, &format!("f{k}.json"), instance);
        let c = hrlab(&[
            "check",
            s(&p),
            "--no-validate",
            "--steps",
            "0",
            "--count",
            "0",
        ]);
        let v = stdout_json(&c);
        assert_eq!(v["checks"]["hl"]["verdict"], *hl);
        assert_eq!(v["checks"]["hrr"]["verdict"], *hrr);
        assert_eq!(code(&c), 1);
    }
}

#[test]
fn deform_two_steps() {
    let dir = TempDir::new().unwrap();
    let f = write_json(
        &dir,
        "i.json",
        &Instance::random_seeded(2, 2, 1, 1, 9).unwrap(),
    );
    let o = hrlab(&["deform", s(&f), "--steps", "2"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 2);
    assert_eq!(pts[0]["t"], 0.0);
    assert_eq!(pts[1]["t"], 1.0);
    for pt in pts {
        assert_eq!(pt["signature"], serde_json::json!([3, 0, 0]));
    }
    assert_eq!(code(&hrlab(&["deform", s(&f), "--steps", "1"])), 2);
}

#[test]
fn restrict_standard_instance() {
    let dir = TempDir::new().unwrap();
    let f = write_json(&dir, "i.json", &Instance::classical(3, 2, 1, 0).unwrap());
    let h = write_json(
        &dir,
        "h.json",
        &serde_json::json!({"v": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}),
    );
    let o = hrlab(&["restrict", s(&f), "--hyperplane", s(&h)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["all_pass"], true);
    for row in v["identity_residuals"].as_array().unwrap() {
        for r in row.as_array().unwrap() {
            assert!(r.as_f64().unwrap() < 1e-10);
        }
    }
    // sampled hyperplane
    assert_eq!(code(&hrlab(&["restrict", s(&f), "--seed", "5"])), 0);

    let top = write_json(&dir, "top.json", &Instance::classical(3, 3, 1, 1).unwrap());
    let out = dir.path().join("r.json");
    let o = hrlab(&["--report", s(&out), "restrict", s(&top)]);
    assert_eq!(code(&o), 2);
    assert!(out.exists());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}
