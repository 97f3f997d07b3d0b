use std::path::Path;
use std::process::{Command, Output};

fn mohl(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mohl")).args(args).current_dir(cwd).output().unwrap()
}

fn manifest(path: &Path) -> Vec<(String, String)> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|r| r.unwrap()).map(|r| (r[0].to_owned(), r[1].to_owned())).collect()
}

fn value<'a>(m: &'a [(String, String)], key: &str) -> &'a str {
    &m.iter().find(|(k, _)| k == key).unwrap_or_else(|| panic!("no {key}")).1
}

#[test]
fn appendix_c_writes_error_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = mohl(&["run", "appendix_c", "--method", "mohl", "--out", "ac"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_path(dir.path().join("ac/interface.csv")).unwrap();
    let worst = r.records().map(|r| r.unwrap()[4].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!(worst <= 1e-6);
}

#[test]
fn explicit_above_cfl_bound_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = mohl(&["run", "single_layer", "--method", "euler-explicit", "--dt", "1e-2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("CFL"));
}

#[test]
fn mohl_manifest_lists_outputs_and_small_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let out = mohl(&["run", "single_layer", "--method", "mohl", "--tol", "1e-5", "--dt", "0.1", "--out", "m"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let m = manifest(&dir.path().join("m/manifest.csv"));
    assert!(value(&m, "max_v_nodes").parse::<usize>().unwrap() <= 25);
    for f in value(&m, "outputs").split(';') {
        assert!(dir.path().join("m").join(f).is_file(), "{f} missing");
    }
    let mut r = csv::Reader::from_path(dir.path().join("m/mesh.csv")).unwrap();
    assert!(r.records().all(|r| r.unwrap()[2].parse::<usize>().unwrap() <= 25));
}

#[test]
fn rerun_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = mohl(&["run", "single_layer", "--method", "euler-implicit", "--dx", "2e-2", "--dt", "5e-2", "--out", "a"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let out = mohl(&["rerun", "a/manifest.csv", "--out", "b"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    for f in ["fields.csv", "fluxes.csv", "iterations.csv", "case.toml"] {
        assert_eq!(std::fs::read(dir.path().join("a").join(f)).unwrap(), std::fs::read(dir.path().join("b").join(f)).unwrap(), "{f}");
    }
}

#[test]
fn config_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mohl(&["run", "no_such_case"], dir.path()).status.code(), Some(3));
    assert_eq!(mohl(&["run", "single_layer", "--method", "rk4"], dir.path()).status.code(), Some(3));
    assert_eq!(mohl(&["run", "single_layer", "--tol", "-1"], dir.path()).status.code(), Some(3));
    assert_eq!(mohl(&["run", "experimental"], dir.path()).status.code(), Some(3));
    std::fs::write(dir.path().join("bad.toml"), "name = \"x\"\nextra = 1\n").unwrap();
    assert_eq!(mohl(&["run", "bad.toml"], dir.path()).status.code(), Some(3));
}

#[test]
fn exported_config_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = mohl(&["config", "export", "single_layer", "--out", "case.toml"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let out = mohl(&["run", "case.toml", "--tol", "1e-3", "--out", "r"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn compare_identical_methods_gives_zero_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = mohl(
        &["compare", "single_layer", "--baseline", "mohl", "--baseline-tol", "1e-3", "--method", "mohl", "--tol", "1e-3", "--out", "c"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let m = manifest(&dir.path().join("c/manifest.csv"));
    assert_eq!(value(&m, "eps_inf_u"), "0");
    assert_eq!(value(&m, "eps_inf_v"), "0");
    assert!(dir.path().join("c/timing.csv").is_file());
}

#[test]
fn tolerance_study_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mohl"))
        .args(["tolerance-study", "single_layer", "--tols", "1e-3", "--oracle-dx", "2e-2", "--oracle-dt", "5e-2", "--out", "s"])
        .env("MOHL_THREADS", "1")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_path(dir.path().join("s/tolerance.csv")).unwrap();
    assert_eq!(r.records().count(), 1);
}
