//! Drives the `chirascope` binary as a subprocess.

use std::path::Path;
use std::process::{Command, Output};

use chirascope::netpbm::read_pgm;
use chirascope::residual::PhaseScanGrid;

fn chirascope(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_chirascope"));
    cmd.args(args).env_remove("CHIRASCOPE_SEED");
    if let Some(s) = seed_env {
        cmd.env("CHIRASCOPE_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec![
            "sweep",
            "--op",
            "demosaic",
            "--widths",
            "10..5",
            "--heights",
            "8",
            "--out-csv",
            "x.csv",
        ],
        vec![
            "sweep",
            "--op",
            "blur",
            "--widths",
            "8",
            "--heights",
            "8",
            "--out-csv",
            "x.csv",
        ],
        vec![
            "glide",
            "--op",
            "jpeg",
            "--phi1",
            "4..4",
            "--out-csv",
            "x.csv",
        ],
        vec!["residual", "--op", "jpeg"],
        vec![
            "residual",
            "--op",
            "jpeg",
            "--gaussian",
            "8x8",
            "--uniform",
            "8x8",
        ],
        vec!["predict", "--samples", "0"],
        vec![],
    ] {
        let o = chirascope(&args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn sweep_writes_plot_ready_csv_and_heatmap() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "sweep.csv");
    let pgm = path(dir.path(), "sweep.pgm");
    let o = chirascope(
        &[
            "sweep",
            "--op",
            "demosaic",
            "--widths",
            "95..104",
            "--heights",
            "95..96",
            "--samples",
            "2",
            "--out-csv",
            &csv,
            "--out-pgm",
            &pgm,
        ],
        Some("13"),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("zero_widths=95,97,99,101,103"));

    let mut rdr = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "width",
            "height",
            "op",
            "quality",
            "n_samples",
            "seed",
            "max_mean_abs_residual"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 20);
    for r in &rows {
        let width: usize = r[0].parse().unwrap();
        let value: f64 = r[6].parse().unwrap();
        assert_eq!(&r[2], "demosaic");
        assert_eq!(&r[3], "");
        assert_eq!(&r[5], "13", "seed taken from the environment");
        assert_eq!(value == 0.0, width % 2 == 1);
    }

    // Rows of the heatmap are heights, columns are widths; zero cells are 0.
    let heat = read_pgm(&std::fs::read(&pgm).unwrap()).unwrap();
    assert_eq!((heat.width, heat.height), (10, 2));
    for (i, &v) in heat.samples.iter().enumerate() {
        assert_eq!(v == 0, (95 + i % 10) % 2 == 1);
    }

    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(format!("{csv}.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "sweep");
    assert_eq!(manifest["seed"], 13);
    assert_eq!(manifest["params"]["sweep"]["widths"], "95..104");
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn explicit_seed_overrides_environment() {
    let o = chirascope(
        &["predict", "--sizes", "9", "--ops", "jpeg", "--seed", "4"],
        Some("99"),
    );
    assert_eq!(stdout(&o), "op,size,verdict\njpeg,9,C\n");
}

#[test]
fn glide_scan_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "glide.csv");
    let o = chirascope(
        &[
            "glide",
            "--op",
            "demosaic",
            "--size",
            "24x16",
            "--seed",
            "3",
            "--out-csv",
            &csv,
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("glide-commutative period=2\n"));
    let grid = PhaseScanGrid::from_csv(&std::fs::read(&csv).unwrap()).unwrap();
    assert_eq!((grid.phi1.len(), grid.phi2.len()), (32, 32));
    assert!(std::fs::read_to_string(&csv)
        .unwrap()
        .starts_with("phi1,phi2,op,mean_abs_residual\n"));

    let v = chirascope(&["glide-verdict", "--in-csv", &csv], None);
    assert_eq!(stdout(&v), "glide-commutative period=2\n");

    let small = path(dir.path(), "small.csv");
    let o = chirascope(
        &[
            "glide",
            "--op",
            "identity",
            "--size",
            "8x8",
            "--phi1",
            "0..8",
            "--phi2",
            "0..8",
            "--out-csv",
            &small,
        ],
        None,
    );
    assert!(stdout(&o).contains("scan too small"));
    let v = chirascope(&["glide-verdict", "--in-csv", &small], None);
    assert_eq!(v.status.code(), Some(1));

    let o = chirascope(
        &[
            "glide",
            "--op",
            "identity",
            "--size",
            "8x8",
            "--phi1",
            "0..40",
            "--out-csv",
            &small,
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(1), "phase beyond the default pad");
}

#[test]
fn residual_images() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(dir.path(), "in.ppm");
    let x = chirascope::synthgen::uniform_image(7, 6, 1);
    std::fs::write(&input, chirascope::netpbm::write_ppm(&x)).unwrap();

    let abs = path(dir.path(), "abs.pgm");
    let o = chirascope(
        &[
            "residual",
            "--op",
            "identity",
            "--input",
            &input,
            "--out-residual",
            &abs,
        ],
        None,
    );
    assert_eq!(stdout(&o), "mean_abs=0 max_abs=0 nonzero=0\n");
    let img = read_pgm(&std::fs::read(&abs).unwrap()).unwrap();
    assert_eq!((img.width, img.height), (7, 18));
    assert!(img.samples.iter().all(|&v| v == 0));

    let o = chirascope(&["residual", "--op", "demosaic", "--input", &input], None);
    assert_eq!(stdout(&o), "mean_abs=0 max_abs=0 nonzero=0\n");

    let sign = path(dir.path(), "sign.pgm");
    let o = chirascope(
        &[
            "residual",
            "--op",
            "demosaic-jpeg",
            "--gaussian",
            "100x100",
            "--out-residual",
            &abs,
            "--out-sign",
            &sign,
        ],
        None,
    );
    let line = stdout(&o);
    let mean: f64 = line.split_whitespace().next().unwrap()["mean_abs=".len()..]
        .parse()
        .unwrap();
    assert!(mean > 0.0, "{line}");
    let s = read_pgm(&std::fs::read(&sign).unwrap()).unwrap();
    assert!(s.samples.iter().all(|&v| v == 0 || v == 255));
    assert!(s.samples.contains(&255));
}

#[test]
fn verify_props_exit_codes() {
    let o = chirascope(&["verify-props", "--trials", "200"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));

    let o = chirascope(
        &[
            "verify-props",
            "--trials",
            "50",
            "--inject-faulty-generator",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL  generated maps commute"));
    assert!(text.contains("witness: trial"));

    let o = chirascope(&["verify-props", "--n", "1", "--trials", "10"], None);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn replay_regenerates_and_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "p.csv");
    let manifest = path(dir.path(), "run.json");
    let o = chirascope(
        &[
            "predict",
            "--sizes",
            "99",
            "--out-csv",
            &csv,
            "--manifest",
            &manifest,
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let original = std::fs::read(&csv).unwrap();

    let o = chirascope(&["replay", &manifest, "--check"], None);
    assert_eq!(stdout(&o), format!("identical {csv}\n"));

    std::fs::write(&csv, b"tampered").unwrap();
    let o = chirascope(&["replay", &manifest, "--check"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("differs"));

    let o = chirascope(&["replay", &manifest], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&csv).unwrap(), original);

    let o = chirascope(&["replay", &path(dir.path(), "missing.json")], None);
    assert_eq!(o.status.code(), Some(1));
}
