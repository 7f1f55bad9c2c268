use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nff")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sweep_writes_curve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    fs::write(&cfg, "n = 4\nspacing_lambda = 0.5\ndirection = front\nexcitation = ff-bf\n").unwrap();
    let csv = dir.path().join("eps.csv");
    let out = nff(&["sweep", "--config", path(&cfg), "--out", path(&csv), "--grid-ppd", "10"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r_lambda,epsilon"));
    assert_eq!(lines.count(), 5 * 10 + 1);
}

#[test]
fn boundaries_default_to_every_kind() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("b.cfg");
    fs::write(&cfg, "n = 8\n").unwrap();
    let csv = dir.path().join("b.csv");
    let out = nff(&["boundaries", "--config", path(&cfg), "--out", path(&csv)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let kinds: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(kinds, ["QR", "AR", "UP", "EN", "EP", "WC"]);
    assert!(text.lines().nth(1).unwrap().starts_with("QR,,found,2.45000"));
}

#[test]
fn validation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "n = 8\ncolour = blue\n").unwrap();
    let csv = dir.path().join("x.csv");
    let out = nff(&["sweep", "--config", path(&cfg), "--out", path(&csv)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
    assert!(!csv.exists());

    let out = nff(&["reproduce", "--figure", "fig9", "--out", path(dir.path())]);
    assert_eq!(code(&out), 1);

    let out = nff(&["sweep", "--config"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn io_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    let out = nff(&["sweep", "--config", path(&missing), "--out", path(&dir.path().join("x.csv"))]);
    assert_eq!(code(&out), 2);

    let out = nff(&["validate-trace", path(&dir.path().join("missing.csv"))]);
    assert_eq!(code(&out), 2);

    let cfg = dir.path().join("s.cfg");
    fs::write(&cfg, "n = 1\n").unwrap();
    let unwritable = dir.path().join("no/such/dir/eps.csv");
    let out = nff(&["sweep", "--config", path(&cfg), "--out", path(&unwritable), "--grid-ppd", "5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn validate_trace_accepts_and_rejects() {
    use nff_core::farfield::DEFAULT_SAMPLE_RADIUS;
    use nff_core::harness::FieldTrace;
    use nff_core::sources::{ff_precoder, ArrayGeometry};
    use nff_core::{Direction, WaveContext};

    let dir = tempfile::tempdir().unwrap();
    let ctx = WaveContext::default();
    let g = ArrayGeometry::ula_y(4, 0.5).unwrap();
    let w = ff_precoder(&g, &Direction::FRONT, &ctx);
    let radii: Vec<f64> = (0..20).map(|i| 0.5 * 10f64.powf(i as f64 / 5.0)).collect();
    let trace =
        FieldTrace::synthesize(&g, &w, &Direction::FRONT, &radii, Some(DEFAULT_SAMPLE_RADIUS), &ctx).unwrap();
    let good = dir.path().join("good.csv");
    trace.write(&good).unwrap();
    let out = nff(&["validate-trace", path(&good)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("ok, 20 rows"));

    let text = fs::read_to_string(&good).unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, text.replace("# nff_trace_version = 1", "# nff_trace_version = 7")).unwrap();
    assert_eq!(code(&nff(&["validate-trace", path(&bad)])), 1);

    let truncated: Vec<&str> = text.lines().collect();
    fs::write(&bad, truncated[..truncated.len() - 1].join("\n") + "\n1e9,nan").unwrap();
    assert_eq!(code(&nff(&["validate-trace", path(&bad)])), 1);
}
