use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn elastweak(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elastweak")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path());
    for args in [
        vec!["solve", "--mu", "0"],
        vec!["solve", "--simplified", "--degree", "1"],
        vec!["convergence", "--mesh", "box:1,2", "--assert-rates", "0.9"],
        vec!["solve", "--degree", "3"],
        vec!["solve", "--mesh", "box:0"],
        vec!["solve", "--case", "nonsense"],
        vec!["solve", "--bogus-flag"],
    ] {
        let o = elastweak(&[&args[..], &["--out", out]].concat());
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn mesh_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.msh");
    fs::write(&bad, "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n2\n1 0 0 0\n").unwrap();
    let missing = dir.path().join("missing.msh");
    for file in [&bad, &missing] {
        let mesh = format!("file:{}", path(file));
        let o = elastweak(&["solve", "--mesh", &mesh, "--out", path(dir.path())]);
        assert_eq!(code(&o), 3);
    }
}

#[test]
fn injected_sign_error_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let o = elastweak(&[
        "check", "--suite", "identity", "--trials", "5", "--inject-fault", "vect-sign", "--out", path(dir.path()),
    ]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("FAIL identity.cross_skew"), "{text}");
    let csv = fs::read_to_string(dir.path().join("check.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("identity.cross_skew,false")));
}

#[test]
fn exactness_suite_alone_runs_rank_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = elastweak(&["check", "--suite", "exactness", "--degree", "0", "--out", path(dir.path())]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("exactness.stability_onto"));
    assert!(!text.contains("identity.") && !text.contains("commuting."));
}

#[test]
fn solve_writes_vtk_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = elastweak(&["solve", "--mesh", "box:1", "--case", "poly-linear", "--out", path(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let vtk = fs::read_to_string(dir.path().join("solution.vtk")).unwrap();
    assert!(vtk.starts_with("# vtk DataFile Version"));
    assert!(vtk.contains("displacement"));
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("case,degree,simplified,lambda,mu,cells"));
    assert!(lines[1].starts_with("poly-linear,0,false"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# material\nmu = 0\nmesh = box:1\ncase = poly-linear\n").unwrap();
    let args = ["solve", "--config", path(&cfg), "--out", path(dir.path())];
    assert_eq!(code(&elastweak(&args)), 2);
    let o = elastweak(&[&args[..], &["--mu", "2"]].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.lines().nth(1).unwrap().contains(",1,2,6,"));
}

#[test]
fn convergence_table_layout() {
    let dir = tempfile::tempdir().unwrap();
    let o = elastweak(&["convergence", "--mesh", "box:1,2", "--out", path(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "level,h,dof_sigma,dof_u,dof_p,err_sigma,err_div,err_u,err_p,rate_sigma,rate_div,rate_u,rate_p"
    );
    assert!(lines[1].ends_with(",,,,"));
    assert_eq!(lines[2].split(',').filter(|s| !s.is_empty()).count(), 13);
}
