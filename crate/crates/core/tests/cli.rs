use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dephaser::infometrics::{two_use_family_metrics, PqInput};
use dephaser::DephasingParams;

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dephaser"));
    cmd.args(args).current_dir(dir());
    match threads {
        Some(n) => cmd.env("DEPHASER_THREADS", n),
        None => cmd.env_remove("DEPHASER_THREADS"),
    };
    cmd.output().expect("binary runs")
}

const GOLDEN: &[(&[&str], &str)] = &[
    (
        &["params", "--config", "fixtures/bath_white.ini"],
        "bath_white_params.csv",
    ),
    (
        &["sweep", "--config", "fixtures/bath_white.ini"],
        "bath_white_sweep.csv",
    ),
    (
        &["opt", "--config", "fixtures/bath_white.ini"],
        "bath_white_opt.csv",
    ),
    (
        &["protocol", "--config", "fixtures/bath_white.ini"],
        "bath_white_protocol.csv",
    ),
    (
        &["sweep", "--config", "fixtures/direct_grid.ini"],
        "direct_grid_sweep.csv",
    ),
    (
        &[
            "sweep",
            "--config",
            "fixtures/direct_grid.ini",
            "--figure",
            "ic",
            "--precision",
            "8",
        ],
        "direct_grid_sweep_ic_p8.csv",
    ),
    (
        &["protocol", "--config", "fixtures/direct_grid.ini"],
        "direct_grid_protocol.csv",
    ),
    (
        &["opt", "--config", "fixtures/direct_opt.ini"],
        "direct_opt.csv",
    ),
    (
        &["params", "--config", "fixtures/bath_ohmic.ini"],
        "bath_ohmic_params.csv",
    ),
    (
        &[
            "params",
            "--config",
            "fixtures/bath_tabulated.ini",
            "--allow-invalid-kraus",
        ],
        "bath_tabulated_params.csv",
    ),
];

#[test]
fn golden_files_across_thread_counts() {
    for (args, golden) in GOLDEN {
        let expected = std::fs::read(dir().join("golden").join(golden)).unwrap();
        for threads in [None, Some("1"), Some("3"), Some("8")] {
            let out = run(args, threads);
            assert!(
                out.status.success(),
                "{args:?}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            assert!(
                out.stdout == expected,
                "{golden} differs with threads {threads:?}"
            );
        }
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("sweep.csv");
    let out = run(
        &[
            "sweep",
            "--config",
            "fixtures/direct_grid.ini",
            "--out",
            path.to_str().unwrap(),
        ],
        Some("2"),
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let expected = std::fs::read(dir().join("golden/direct_grid_sweep.csv")).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), expected);
}

#[test]
fn output_path_from_config() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("run.ini");
    std::fs::write(
        &config,
        "[source]\nkind = direct\n[sweep]\ng = 0.5\ngamma_mem = 0.5\n[output]\npath = result.csv\n",
    )
    .unwrap();
    let out = run(&["protocol", "--config", config.to_str().unwrap()], None);
    assert!(out.status.success());
    let written = std::fs::read_to_string(tmp.path().join("result.csv")).unwrap();
    assert_eq!(
        written,
        "g,gamma_mem,coded,uncoded,advantageous\n0.5,0.5,0.75,0.75,true\n"
    );
}

#[test]
fn sweep_values_round_trip() {
    let text =
        String::from_utf8(run(&["sweep", "--config", "fixtures/direct_grid.ini"], None).stdout)
            .unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("g,gamma_mem,p,fe,se,ic,s_in"));
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let params = DephasingParams::from_factors(v[0], v[1]).unwrap();
        let m = two_use_family_metrics(PqInput::new(v[2]).unwrap(), &params);
        for (cell, exact) in v[3..].iter().zip([m.fe, m.se, m.ic, m.s_in]) {
            // 12 significant digits: half a unit in the last place
            assert!(
                (cell - exact).abs() <= 5e-12 * exact.abs().max(1e-300) + 1e-300,
                "{line}"
            );
        }
    }
}

#[test]
fn exit_codes() {
    let usage = run(&["sweep"], None);
    assert_eq!(usage.status.code(), Some(1));
    let unknown = run(&["fly", "--config", "fixtures/direct_grid.ini"], None);
    assert_eq!(unknown.status.code(), Some(1));
    let direct_params = run(&["params", "--config", "fixtures/direct_grid.ini"], None);
    assert_eq!(direct_params.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&direct_params.stderr)
        .contains("params command requires a bath source"));
    let bad_threads = run(
        &["opt", "--config", "fixtures/direct_opt.ini"],
        Some("zero"),
    );
    assert_eq!(bad_threads.status.code(), Some(1));
    let numeric = run(&["params", "--config", "fixtures/bath_far.ini"], None);
    assert_eq!(numeric.status.code(), Some(2));
    let unwritable = run(
        &[
            "opt",
            "--config",
            "fixtures/direct_opt.ini",
            "--out",
            "/nonexistent/dir/x.csv",
        ],
        None,
    );
    assert_eq!(unwritable.status.code(), Some(1));
    let help = run(&["--help"], None);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn config_errors_name_the_line() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("bad.ini");
    std::fs::write(&config, "[source]\nkind = direct\n[sweep]\ng = 0.2:0.4\n").unwrap();
    let out = run(&["sweep", "--config", config.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config line 4"));
}
