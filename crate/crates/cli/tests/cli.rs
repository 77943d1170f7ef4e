//! End-to-end runs of the `coulomb` binary: exit codes, CSV round trips,
//! suite filtering and tolerance plumbing.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coulomb"))
}

fn tmpdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("coulomb_cli_{name}"));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write_config(dir: &PathBuf, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

#[test]
fn verify_sphere_passes_and_csv_roundtrips() {
    let dir = tmpdir("sphere");
    let cfg = write_config(
        &dir,
        "sphere.toml",
        "[surface]\ngenus = 0\n\n[run]\nn_min = 20\nn_max = 200\nn_step = 20\ngrid_resolution = 32\n",
    );
    let csv = dir.join("rows.csv");
    let out = bin()
        .args(["verify-sphere", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().any(|l| l == "n,exact,asymptotic,residual,scaled_residual"));
    // ten data rows, residual column finite and small
    let data: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('n'))
        .collect();
    assert_eq!(data.len(), 10);
    // bit-exact round trip: rewrite the parsed numbers with the same format
    for line in &data {
        let cols: Vec<&str> = line.split(',').collect();
        for c in &cols[1..] {
            let v: f64 = c.parse().unwrap();
            assert_eq!(format!("{v:.16e}"), *c, "column {c} not round-trip stable");
        }
    }
}

#[test]
fn verify_torus_passes_for_two_moduli() {
    let dir = tmpdir("torus");
    for (name, tau_re, tau_im) in [("i.toml", 0.0, 1.0), ("skew.toml", 0.3, 1.7)] {
        let cfg = write_config(
            &dir,
            name,
            &format!(
                "[surface]\ngenus = 1\ntau_re = {tau_re}\ntau_im = {tau_im}\n\n\
                 [run]\nn_min = 2\nn_max = 50\ngrid_resolution = 32\n"
            ),
        );
        let csv = dir.join(format!("{name}.csv"));
        let out = bin()
            .args(["verify-torus", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&csv)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn config_violations_exit_3() {
    let dir = tmpdir("badcfg");
    // n_min = 1 violates the invariant
    let cfg = write_config(
        &dir,
        "nmin.toml",
        "[surface]\ngenus = 0\n\n[run]\nn_min = 1\nn_max = 10\ngrid_resolution = 32\n",
    );
    let out = bin().args(["verify-sphere", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(code(&out), 3);

    // degenerate modulus
    let cfg = write_config(
        &dir,
        "tau.toml",
        "[surface]\ngenus = 1\ntau_im = 0.0\n\n[run]\nn_min = 2\nn_max = 10\ngrid_resolution = 32\n",
    );
    let out = bin().args(["verify-torus", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(code(&out), 3);

    // missing file
    let out = bin()
        .args(["verify-sphere", "--config"])
        .arg(dir.join("nope.toml"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);

    // unknown suite name
    let cfg = write_config(
        &dir,
        "ok.toml",
        "[surface]\ngenus = 0\n\n[run]\nn_min = 2\nn_max = 10\ngrid_resolution = 32\n",
    );
    let out = bin()
        .args(["identities", "--config"])
        .arg(&cfg)
        .args(["--only", "no-such-suite"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_sphere_gram_route_with_potential() {
    // an admissible zonal potential switches the exact column to the Gram
    // route; the sweep resolution must cover 4 n_max
    let dir = tmpdir("spherev");
    let cfg = write_config(
        &dir,
        "v.toml",
        "[surface]\ngenus = 0\n\n[potential]\nfamily = \"sphere-zonal\"\ndegree = 1\namplitude = 0.05\n\n\
         [run]\nn_min = 8\nn_max = 16\nn_step = 4\ngrid_resolution = 64\n",
    );
    let csv = dir.join("rows.csv");
    let out = bin()
        .args(["verify-sphere", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().filter(|l| !l.starts_with(['#', 'n'])).count(), 3);

    // under-resolved sweep for the Gram route is a config error
    let cfg = write_config(
        &dir,
        "lowres.toml",
        "[surface]\ngenus = 0\n\n[potential]\nfamily = \"sphere-zonal\"\ndegree = 1\namplitude = 0.05\n\n\
         [run]\nn_min = 8\nn_max = 16\nn_step = 4\ngrid_resolution = 32\n",
    );
    let out = bin().args(["verify-sphere", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn inadmissible_potential_exits_2_with_diagnostic() {
    let dir = tmpdir("admiss");
    let cfg = write_config(
        &dir,
        "bad.toml",
        "[surface]\ngenus = 0\n\n[potential]\nfamily = \"sphere-zonal\"\ndegree = 1\namplitude = 0.8\n\n\
         [run]\nn_min = 2\nn_max = 8\ngrid_resolution = 32\n",
    );
    let out = bin().args(["verify-sphere", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("min f_V"), "diagnostic missing: {err}");
}

#[test]
fn identities_only_filter_runs_one_suite() {
    let dir = tmpdir("only");
    let cfg = write_config(
        &dir,
        "id.toml",
        "[surface]\ngenus = 0\n\n[run]\nn_min = 2\nn_max = 10\ngrid_resolution = 32\n",
    );
    let report = dir.join("report.txt");
    let out = bin()
        .args(["identities", "--config"])
        .arg(&cfg)
        .args(["--only", "theta-lemma"])
        .arg("--out")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.lines().next().unwrap().starts_with("# coulomb identities seed="));
    let lines: Vec<&str> = text.lines().filter(|l| l.contains("theta-lemma")).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.ends_with("PASS")));
    assert!(!text.contains("bosonization"));
}

#[test]
fn over_tight_tolerance_fails_with_exit_2() {
    // 1e-15 is below the genuine quadrature error of the equilibrium
    // identity, so the run must report FAIL and exit 2
    let dir = tmpdir("tol");
    let cfg = write_config(
        &dir,
        "tight.toml",
        "[surface]\ngenus = 0\n\n[run]\nn_min = 2\nn_max = 10\ngrid_resolution = 32\n\n\
         [tolerances]\n\"equilibrium\" = 1e-15\n",
    );
    let out = bin()
        .args(["identities", "--config"])
        .arg(&cfg)
        .args(["--only", "equilibrium"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL"));
}

#[test]
fn fit_b2_zero_potential_passes() {
    let dir = tmpdir("fitzero");
    let cfg = write_config(
        &dir,
        "fit.toml",
        "[surface]\ngenus = 0\n\n[run]\nn_min = 8\nn_max = 16\nn_step = 2\ngrid_resolution = 64\n",
    );
    let out = bin().args(["fit-b2", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("fit-b2: PASS"));
}

#[test]
fn fit_b2_small_zonal_within_five_percent() {
    let dir = tmpdir("fitz");
    let cfg = write_config(
        &dir,
        "fit.toml",
        "[surface]\ngenus = 0\n\n[potential]\nfamily = \"sphere-zonal\"\ndegree = 1\namplitude = 0.05\n\n\
         [run]\nn_min = 10\nn_max = 24\nn_step = 2\ngrid_resolution = 96\n",
    );
    let out = bin().args(["fit-b2", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    // fit-b2 caps at N <= 40
    let cfg = write_config(
        &dir,
        "toolarge.toml",
        "[surface]\ngenus = 0\n\n[run]\nn_min = 10\nn_max = 60\ngrid_resolution = 256\n",
    );
    let out = bin().args(["fit-b2", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn deterministic_output_for_fixed_config() {
    let dir = tmpdir("determ");
    let cfg = write_config(
        &dir,
        "t.toml",
        "[surface]\ngenus = 1\ntau_im = 2.0\n\n[run]\nn_min = 2\nn_max = 20\ngrid_resolution = 32\n",
    );
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    for p in [&a, &b] {
        let out = bin()
            .args(["verify-torus", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(p)
            .env("COULOMB_THREADS", "3")
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
    }
    assert_eq!(
        std::fs::read_to_string(&a).unwrap(),
        std::fs::read_to_string(&b).unwrap()
    );
}
