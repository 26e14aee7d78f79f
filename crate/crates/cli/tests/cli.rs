use std::path::PathBuf;
use std::process::{Command, Output};

const SMALL: &str = r#"
name = "small"
outputs = ["rates", "force-terms"]

[fiber]
radius_m = 350e-9
n1 = 1.4537
n2 = 1.0

[atom]
wavelength_m = 780e-9
gamma0_over_2pi_hz = 6.065e6

[[atom.dipoles]]
label = "x+iy"
basis = "cartesian"
re = [1.0, 0.0, 0.0]
im = [0.0, 1.0, 0.0]

[scan]
axis = "r"
r_over_a = [1.5, 2.5]
samples = 2
"#;

fn fiberforce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiberforce")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fiberforce-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn lists_every_figure() {
    let o = fiberforce(&["list-scenarios"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for i in 2..=21 {
        assert!(text.lines().any(|l| l.starts_with(&format!("fig{i} "))), "fig{i}");
    }
}

#[test]
fn modes_table() {
    let o = fiberforce(&["modes"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for m in ["HE11", "TE01", "TM01", "HE21"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{m},"))), "{m}");
    }
}

#[test]
fn scan_writes_tables() {
    let dir = scratch("scan");
    let cfg = dir.join("small.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let out = dir.join("out");
    let o = fiberforce(&["scan", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["small_rates.csv", "small_force-terms.csv"] {
        let text = std::fs::read_to_string(out.join(f)).unwrap();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
    }
    let o = fiberforce(&["rates", "--config", cfg.to_str().unwrap(), "--out", dir.join("rates").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(dir.join("rates/small_rates.csv").exists());
    assert!(!dir.join("rates/small_force-terms.csv").exists());
}

#[test]
fn configuration_errors_exit_with_2() {
    let dir = scratch("config");
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, SMALL.replace("samples = 2", "samples = 1")).unwrap();
    let o = fiberforce(&["scan", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("scan.samples"));

    let o = fiberforce(&["scan", "--config", dir.join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = fiberforce(&["scenario", "fig99", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_3() {
    let dir = scratch("io");
    let cfg = dir.join("small.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let blocker = dir.join("file");
    std::fs::write(&blocker, "").unwrap();
    let o = fiberforce(&["scan", "--config", cfg.to_str().unwrap(), "--out", blocker.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn dumped_scenario_config_is_valid() {
    let o = fiberforce(&["scenario", "fig20", "--dump-config"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("detuning_model = \"shifted\""));
    let dir = scratch("dump");
    let cfg = dir.join("fig20.toml");
    std::fs::write(&cfg, &text).unwrap();
    // the dump parses back; `modes` only reads fiber and wavelength from it
    let o = fiberforce(&["modes", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
}
