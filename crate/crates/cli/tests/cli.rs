use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn csr(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csr"))
        .current_dir(dir)
        .env_remove("CSR_THREADS")
        .args(args)
        .output()
        .expect("run csr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn claim(dir: &TempDir) {
    let out = csr(dir.path(), &["gen", "claim1", "--t", "3", "--l", "2", "--out", "c.txt"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn gen_writes_instance_and_certificate() {
    let dir = TempDir::new().unwrap();
    claim(&dir);
    let text = std::fs::read_to_string(dir.path().join("c.txt")).unwrap();
    assert_eq!(text, "#csr v1 t=3 n=7 sigma=ABxyz\nxBBxABA\nyBByAAA\nzBBzAAA\n");
    let cert = json(&dir.path().join("c.txt.L2.sol.json"));
    assert_eq!(cert["pattern"], "BB");
    assert_eq!(cert["cost"], 0);
    assert_eq!(cert["provenance"], "claim1(t=3,l=2)");
}

#[test]
fn gen_random_is_seed_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = ["gen", "random", "--t", "4", "--n", "12", "--sigma", "3", "--seed", "9"];
    let a = csr(dir.path(), &args);
    let b = csr(dir.path(), &args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = csr(dir.path(), &["gen", "random", "--t", "4", "--n", "12", "--sigma", "3", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn gen_rejects_bad_parameters() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&csr(dir.path(), &["gen", "claim1", "--t", "1", "--l", "2"])), 2);
    assert_eq!(code(&csr(dir.path(), &["gen", "shrink", "--t", "3", "--l", "2"])), 2);
    assert_eq!(code(&csr(dir.path(), &["gen", "bogus", "--t", "3"])), 2);
}

#[test]
fn solve_exact_and_ptas() {
    let dir = TempDir::new().unwrap();
    claim(&dir);
    let out = csr(dir.path(), &["solve", "c.txt", "-L", "2", "--algo", "exact-pattern", "--out", "s.json"]);
    assert_eq!(code(&out), 0);
    let sol = json(&dir.path().join("s.json"));
    assert_eq!(sol["pattern"], "BB");
    assert_eq!(sol["cost"], 0);
    let rec = json(&dir.path().join("s.json.run.json"));
    assert_eq!(rec["oracle_cost"], 0);

    let out = csr(dir.path(), &["solve", "c.txt", "-L", "3", "--algo", "ptas", "--r", "2", "--out", "p.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&dir.path().join("p.json"))["cost"], 1);
    let rec = json(&dir.path().join("p.json.run.json"));
    assert_eq!(rec["samples_evaluated"], 75);
    assert_eq!(rec["bound_violation"], false);
}

#[test]
fn solve_refuses_over_budget() {
    let dir = TempDir::new().unwrap();
    claim(&dir);
    let out = csr(dir.path(), &["solve", "c.txt", "-L", "3", "--algo", "exact-align", "--budget", "10"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn solve_reports_parse_errors() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "#csr v1 t=2 n=3 sigma=AB\nABA\nAB\n").unwrap();
    let out = csr(dir.path(), &["solve", "bad.txt", "-L", "2", "--algo", "exact-align"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn reopt_extend_and_pruned_ptas() {
    let dir = TempDir::new().unwrap();
    claim(&dir);
    let out = csr(
        dir.path(),
        &["reopt", "c.txt", "--vopt", "c.txt.L2.sol.json", "--k", "1", "--algo", "extend", "--with-oracle", "--out", "e.json"],
    );
    assert_eq!(code(&out), 0);
    let rec = json(&dir.path().join("e.json.run.json"));
    assert_eq!(rec["cost"], 2);
    assert_eq!(rec["oracle_cost"], 1);
    assert_eq!(rec["given_certified"], true);
    assert_eq!(rec["additive_bound"], 4);

    let out = csr(
        dir.path(),
        &["reopt", "c.txt", "--vopt", "c.txt.L2.sol.json", "--k", "1", "--algo", "reopt-ptas", "--r", "2", "--out", "r.json"],
    );
    assert_eq!(code(&out), 0);
    let rec = json(&dir.path().join("r.json.run.json"));
    assert_eq!(rec["cost"], 1);
    assert_eq!(rec["samples_skipped"], 12);
    assert_eq!(rec["samples_evaluated"], 63);
}

#[test]
fn reopt_accepts_plain_pattern() {
    let dir = TempDir::new().unwrap();
    claim(&dir);
    std::fs::write(dir.path().join("v.txt"), "BB\n").unwrap();
    let out = csr(dir.path(), &["reopt", "c.txt", "--vopt", "v.txt", "--k", "2", "--algo", "k-extend", "--out", "k.json"]);
    assert_eq!(code(&out), 0);
    let rec = json(&dir.path().join("k.json.run.json"));
    assert_eq!(rec["given_certified"], false);
    assert_eq!(rec["given_cost"], 0);
}

#[test]
fn reopt_rejects_oversized_k() {
    let dir = TempDir::new().unwrap();
    claim(&dir);
    let out = csr(dir.path(), &["reopt", "c.txt", "--vopt", "c.txt.L2.sol.json", "--k", "6", "--algo", "k-extend"]);
    assert_eq!(code(&out), 2);
    let out = csr(dir.path(), &["reopt", "c.txt", "--vopt", "c.txt.L2.sol.json", "--k", "2", "--algo", "extend"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bench_empty_grid_writes_header() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("e.toml"), "budget = 1000\n").unwrap();
    let out = csr(dir.path(), &["bench", "e.toml"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("family,t,n,l,k,r,"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = TempDir::new().unwrap();
    claim(&dir);
    let run = |threads: &str| {
        let out = csr(
            dir.path(),
            &["--threads", threads, "reopt", "c.txt", "--vopt", "c.txt.L2.sol.json", "--k", "2", "--algo", "combined", "--r", "2"],
        );
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("2"));
    assert_eq!(one, run("8"));
}
