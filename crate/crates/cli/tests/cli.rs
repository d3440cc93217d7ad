use std::fs;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbf-weno"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn body(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let rows = body(csv);
    let idx = rows[0].split(',').position(|c| c == name).expect("column exists");
    rows[1..]
        .iter()
        .map(|r| r.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn run_writes_profile_with_metadata() {
    let o = cli(&["run", "--problem", "sod", "--n", "40", "--tfinal", "0.05", "--flux", "hllc"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    for key in ["# scheme: rbf_weno_p2", "# flux: hllc", "# dx: ", "# t_final: 0.05", "# commit: "] {
        assert!(csv.contains(key), "missing {key}");
    }
    let rows = body(&csv);
    assert_eq!(rows[0], "x,rho,mom,energy");
    assert_eq!(rows.len(), 41);
}

#[test]
fn runs_are_byte_identical() {
    let args = ["run", "--problem", "shu_osher", "--n", "60", "--tfinal", "0.2"];
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("case.cfg");
    fs::write(&cfg, "# shock tube\nproblem = sod\nn = 30\nt_final = 0.02\nscheme = rbf_weno_p1\n").unwrap();
    let out = dir.path().join("profile.csv");
    let o = cli(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--n",
        "24",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.contains("# n_cells: 24"));
    assert!(csv.contains("# scheme: rbf_weno_p1"));
    assert!(csv.contains("# t_final: 0.02"));
}

#[test]
fn step_log_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("steps.csv");
    let o = cli(&["run", "--problem", "lax", "--n", "40", "--tfinal", "0.1", "--step-log", log.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&log).unwrap();
    assert!(text.starts_with("step,t,dt,max_speed,weno_fraction"));
    assert!(text.lines().count() > 2);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["run", "--scheme", "weno7"],
        vec!["run", "--p", "3"],
        vec!["run", "--hybrid", "maybe"],
        vec!["run", "--problem", "nope"],
        vec!["run", "--cfl", "2"],
        vec!["run", "--set", "colour=blue"],
        vec!["converge", "--problem", "sod", "--resolutions", "20,40"],
        vec!["run", "--config", "/nonexistent/case.cfg"],
        vec!["frobnicate"],
    ] {
        let o = cli(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn solver_failure_exits_with_one() {
    // without the bound-preserving limiter the delta shock blows up
    let o = cli(&["run", "--problem", "blast_wave", "--n", "240", "--set", "bound_limiter=off"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("error:"));
}

#[test]
fn smooth_advection_conserves_mass() {
    let o = cli(&["run", "--problem", "smooth_advection", "--n", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let summary = stderr(&o);
    let drift: f64 = summary
        .split_whitespace()
        .skip_while(|w| *w != "conservation")
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(drift < 1e-11, "{summary}");
}

#[test]
fn blast_wave_grows_a_delta_shock() {
    let o = cli(&["run", "--problem", "blast_wave"]);
    assert_eq!(o.status.code(), Some(0));
    let rho = column(&stdout(&o), "rho");
    assert!(rho.iter().all(|r| r.is_finite()));
    let peak = rho.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(peak > 2.0, "peak {peak}");
}

#[test]
fn converge_reports_orders() {
    let o = cli(&["converge", "--problem", "smooth_advection", "--resolutions", "20,40,80", "--tfinal", "0.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    assert!(csv.contains("# dt_cap: on"));
    let orders = column(&csv.replace(",,", ",NaN,").replace(",\n", ",NaN\n"), "order_linf");
    assert!(orders[0].is_nan());
    assert!(orders[2] > 5.0, "{orders:?}");
    assert!(stderr(&o).contains("Linf"));
}

#[test]
fn compare_includes_baseline_for_both_fluxes() {
    for flux in ["hllc", "lax_friedrichs"] {
        let o = cli(&[
            "compare",
            "--problem",
            "shu_osher",
            "--n",
            "60",
            "--tfinal",
            "0.1",
            "--flux",
            flux,
            "--schemes",
            "rbf_weno_p2",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let csv = stdout(&o);
        assert!(csv.contains(&format!("# flux: {flux}")));
        let head = body(&csv)[0].to_string();
        assert!(head.starts_with("x,weno_js5_rho,weno_js5_mom,weno_js5_energy,rbf_weno_p2_rho"), "{head}");
    }
}
