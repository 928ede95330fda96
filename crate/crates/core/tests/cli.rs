use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_packet-atom")).args(args).output().unwrap()
}

fn out_arg(dir: &Path) -> String {
    dir.display().to_string()
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&["run", "fig3", "--out", &out_arg(d.path()), "--svg"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["fig3.csv", "fig3.svg"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs");
    }
    let csv = std::fs::read_to_string(a.path().join("fig3.csv")).unwrap();
    assert!(csv.starts_with("t,p_plus_scattering,p_plus_spontaneous,exp_minus_2gamma_t\n"));
    assert!(csv.ends_with('\n'));
}

#[test]
fn summary_lists_reference_and_deviation() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["run", "semiclassical-table", "--out", &out_arg(d.path())]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("Omega0 [1/s] = "));
    assert!(text.contains("reference 25600.0000000"));
    for f in ["cgs.csv", "cgs_shift.csv", "bloch_1d.csv"] {
        assert!(d.path().join(f).exists());
    }
}

#[test]
fn config_file_and_overrides() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.toml");
    std::fs::write(&cfg, "[numerics]\nmode_t_end = 100.0\nmode_n_times = 101\n").unwrap();
    let o = run(&[
        "run",
        "fig3",
        "--config",
        &cfg.display().to_string(),
        "--set",
        "physics.n_modes=101",
        "--out",
        &out_arg(d.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(d.path().join("fig3.csv")).unwrap();
    assert_eq!(csv.lines().count(), 102);
}

#[test]
fn config_errors_exit_with_2() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("bad.toml");
    std::fs::write(&cfg, "[physics]\ngamma = 0.01\nfrobnicate = 3\n").unwrap();
    let o = run(&["run", "fig1", "--config", &cfg.display().to_string()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("frobnicate"), "{err}");

    let o = run(&["run", "fig1", "--set", "physics.gamma=-1", "--out", &out_arg(d.path())]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["run", "fig7", "--out", &out_arg(d.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solver_errors_exit_with_3_and_name_the_module() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["run", "fig3", "--set", "numerics.mode_t_end=300", "--out", &out_arg(d.path())]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("mode-ode"), "{err}");
    assert!(err.contains("recurrence"), "{err}");
}

#[test]
fn help_documents_csv_columns() {
    let o = run(&["run", "--help"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("fig1.csv: t, p_minus_hit, p_minus_miss"));
    assert!(text.contains("--set"));
}
