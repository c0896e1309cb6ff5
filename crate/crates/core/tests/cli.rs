use std::path::PathBuf;
use std::process::{Command, Output};

fn cxqp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cxqp"))
        .args(args)
        .env_remove("CXQP_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("cxqp-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn file(&self, name: &str, body: &str) -> String {
        let path = self.0.join(name);
        std::fs::write(&path, body).unwrap();
        path.to_str().unwrap().to_owned()
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn vp_prints_valuation() {
    let o = cxqp(&["vp", "--p", "5", "250"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3\n");
    assert_eq!(stdout(&cxqp(&["vp", "--p", "3", "0"])), "inf\n");
    assert_eq!(stdout(&cxqp(&["vp", "--p", "3", "18/5"])), "2\n");
}

#[test]
fn embed_and_norm() {
    assert_eq!(stdout(&cxqp(&["embed", "--p", "3", "--N", "3", "--", "-1"])), "3^0 * [2,2,2]\n");
    assert_eq!(stdout(&cxqp(&["embed", "--p", "3", "--N", "2", "1/3"])), "3^-1 * [1,0]\n");
    assert_eq!(stdout(&cxqp(&["norm", "--p", "5", "5"])), "1/5\n");
    assert_eq!(stdout(&cxqp(&["norm", "--p", "3", "3^-2 * [1]"])), "9\n");
}

#[test]
fn gamma_of_two() {
    let o = cxqp(&["gamma", "--p", "2", "--N", "6", "2"]);
    assert_eq!(stdout(&o), "2^0 * [1,1,0,1,0,1]\nv=0\n");
}

#[test]
fn hensel_root() {
    let o = cxqp(&["hensel-root", "--p", "3", "--q", "2", "--N", "5", "4"]);
    assert_eq!(stdout(&o), "3^0 * [1,2,2,2,2]\n");
    let o = cxqp(&["hensel-root", "--p", "3", "--q", "2", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("1-unit"), "{}", stderr(&o));
    let o = cxqp(&["hensel-root", "--p", "3", "--q", "3", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn divides_writes_witness() {
    let dir = TempDir::new("divides");
    let two = dir.file("two.fn", "p=3 space=finite:1\n3^0 * [2,0,0,0]\n");
    let out = dir.0.join("h.fn");
    let o = cxqp(&["divides", "--p", "3", "--q", "2", &two, &two, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "divides\n");
    // -4 = 2 + 1*3 + 2*9 + 2*27 mod 81
    assert_eq!(std::fs::read_to_string(out).unwrap(), "p=3 space=finite:1\n3^0 * [2,1,2,2]\n");

    let o = cxqp(&["divides", "--p", "3", "--q", "2", &two, &two]);
    assert_eq!(stdout(&o), "p=3 space=finite:1\n3^0 * [2,1,2,2]\n");
}

#[test]
fn divides_refutes() {
    let dir = TempDir::new("refute");
    let g = dir.file("g.fn", "p=3 space=finite:2\n3^0 * [1]\n3^1 * [1]\n");
    let f = dir.file("f.fn", "p=3 space=finite:2\n3^1 * [1]\n3^0 * [1]\n");
    let o = cxqp(&["divides", "--q", "2", &g, &f]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "refuted point=1 vp_g=1 vp_f=0 vp_rhs=1\n");
}

#[test]
fn bad_function_file_names_line() {
    let dir = TempDir::new("bad");
    let bad = dir.file("bad.fn", "p=3 space=finite:2\n3^0 * [1]\n3^x * [1]\n");
    let o = cxqp(&["spectrum", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let header = dir.file("header.fn", "p=4 space=finite:1\n0\n");
    let o = cxqp(&["spectrum", &header]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));
}

#[test]
fn flag_validation() {
    let o = cxqp(&["vp", "--p", "6", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a prime"));
    let o = cxqp(&["vp", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--p"));
    let o = cxqp(&["embed", "--p", "3", "--N", "0", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cxqp(&["vp", "--p", "3", "1/x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("value"));
}

#[test]
fn precision_limited_input_names_operation() {
    let o = cxqp(&["norm", "--p", "3", "O(3^4)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("insufficient precision"), "{}", stderr(&o));
}

#[test]
fn axioms_check_reports_every_axiom() {
    let o = cxqp(&["axioms-check", "--p", "3", "--trials", "300", "--seed", "1", "canonical-qp"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let ids: Vec<&str> = text
        .lines()
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(
        ids,
        [
            "axiom=1", "axiom=2", "axiom=3", "axiom=4", "axiom=5", "axiom=6", "axiom=7", "axiom=8",
            "axiom=total", "axiom=cancel", "axiom=complement"
        ]
    );
    assert!(text.lines().all(|l| l.contains("fail=0") && l.ends_with("witness=-")));
}

#[test]
fn star_relation_is_not_total() {
    let o = cxqp(&["axioms-check", "--p", "2", "--k", "1", "--trials", "200", "canonical-star"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let total = text.lines().find(|l| l.starts_with("axiom=total")).unwrap();
    assert!(!total.contains("fail=0 "), "{total}");
}

#[test]
fn seminorm_check() {
    for rel in ["rational", "canonical-qp", "canonical-star"] {
        let o = cxqp(&["seminorm-check", "--p", "3", "--trials", "200", rel]);
        assert_eq!(o.status.code(), Some(0), "{rel}: {}", stdout(&o));
        assert_eq!(stdout(&o).lines().count(), 6);
    }
}

#[test]
fn local_global_and_spectrum() {
    let dir = TempDir::new("lg");
    let f = dir.file("f.fn", "p=5 space=zp:1\n5^1 * [1]\n5^2 * [3]\n0\n5^1 * [4,4]\n5^3 * [1]\n");
    let o = cxqp(&["local-global", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "pointwise=yes global=yes agree=yes\n");

    let o = cxqp(&["spectrum", &f]);
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "point=0 value=5^1 * [1] abs=1/5");
    assert_eq!(text.lines().last().unwrap(), "sup=1/5");
}

#[test]
fn approx_square() {
    let o = cxqp(&["approx", "--p", "3", "--k", "1", "--N", "2", "--coeffs", "0,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "error_bound=1/3\np=3 space=zp:1\n0\n3^0 * [1,0]\n3^0 * [1,1]\n");
    let o = cxqp(&["approx", "--p", "3", "--k", "1", "--coeffs", "1/3,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_from_environment_matches_flag() {
    let args = ["axioms-check", "--p", "5", "--trials", "200", "canonical-qp"];
    let by_env = Command::new(env!("CARGO_BIN_EXE_cxqp"))
        .args(args)
        .env("CXQP_SEED", "42")
        .output()
        .unwrap();
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "42"]);
    assert_eq!(by_env.stdout, cxqp(&with_flag).stdout);
}

#[test]
fn output_is_reproducible() {
    let args = ["axioms-check", "--p", "2", "--trials", "300", "--seed", "9", "canonical-star"];
    assert_eq!(cxqp(&args).stdout, cxqp(&args).stdout);
}

#[test]
fn cli_agrees_with_library() {
    let rel = cxqp::divrel::canonical_qp(7, 64).unwrap();
    let sampler = cxqp::sampling::PAdicSampler::new(7, 64);
    let report = cxqp::divrel::check_axioms(&rel, &sampler, 150, 3);
    let o = cxqp(&["axioms-check", "--p", "7", "--trials", "150", "--seed", "3", "canonical-qp"]);
    assert!(stdout(&o).starts_with(&report.to_string()));
}
