//! CLI contract: golden-file outputs, exit-code taxonomy, determinism.
//!
//! Golden bytes were computed independently (closed-form arithmetic on the
//! fixture values) before being frozen here; see the inline derivations.

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_liprange");

/// 2x1 gradient, codes [16, 64] -> values [16.5, 64.5].
const GRAD2_P2: &[u8] = b"P2\n2 1\n255\n16 64\n";
const GRAD2_P5: &[u8] = b"P5\n2 1\n255\n\x10\x40";
/// 3x2 constant image, code 128 everywhere.
const CONST_P2: &[u8] = b"P2\n3 2\n255\n128 128 128\n128 128 128\n";

/// Bounds (16.5, 64.5), M = 256: the gain formula gives
/// ln(ln(256/16.5)/ln(256/64.5))/ln(64.5/16.5) = 0.504374388042848, the
/// transformed pair is (64.217460..., 127.726490...), spread 63.509030...;
/// the symmetric two-pixel distribution makes the summary equal the bounds.
const GRAD2_STATS: &str = "D_m = 48\nD_t = 48\nM = 256\nf_i = 16.5\nf_s = 64.5\nheight = 1\nlambda_m = 0.504374\nlambda_t = 0.504374\nm1 = 40.5\nm2 = 2216.25\nm3 = 136414\nmu_cubed = 0\np_i = 0.5\np_s = 0.5\nsigma_sq = 576\nv_i = 16.5\nv_s = 64.5\nwidth = 2\n";

/// Constant input: every pixel 128.5, so m2 = 16512.25 and
/// m3 = 2121824.125 print at six significant digits, both gains degenerate.
const CONST_STATS: &str = "D_m = zero-variance\nD_t = 0\nM = 256\nf_i = 128.5\nf_s = 128.5\nheight = 2\nlambda_m = zero-variance\nlambda_t = degenerate-range\nm1 = 128.5\nm2 = 16512.2\nm3 = 2.12182e6\nmu_cubed = 0\np_i = zero-variance\np_s = zero-variance\nsigma_sq = 0\nv_i = zero-variance\nv_s = zero-variance\nwidth = 3\n";

const GRAD2_ENHANCE_REPORT: &str =
    "lambda = 0.504374\nmethod = dynamic\nrange_after = 63.509\nrange_before = 48\n";
/// quantize(64.21746...) = 64, quantize(127.72649...) = 127.
const GRAD2_ENHANCED_P5: &[u8] = b"P5\n2 1\n255\n\x40\x7f";

fn criterion(number: u32, name: &str, body: impl FnOnce() + UnwindSafe) {
    let outcome = catch_unwind(body);
    match &outcome {
        Ok(()) => println!("criterion {number:02} ({name}): PASS"),
        Err(_) => println!("criterion {number:02} ({name}): FAIL"),
    }
    if let Err(panic) = outcome {
        resume_unwind(panic);
    }
}

fn fixture(dir: &Path, name: &str, bytes: &[u8]) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, bytes).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout_of(output: &Output) -> &str {
    std::str::from_utf8(&output.stdout).unwrap()
}

fn assert_exit(output: &Output, code: i32, context: &str) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "{context}: stdout={:?} stderr={:?}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn criterion_11_cli_contract() {
    criterion(11, "CLI golden outputs and exit codes", || {
        let dir = tempfile::tempdir().unwrap();
        let grad2 = fixture(dir.path(), "grad2.pgm", GRAD2_P2);
        let constant = fixture(dir.path(), "const.pgm", CONST_P2);

        // Golden stats reports, byte for byte.
        let out = run(&["stats", grad2.to_str().unwrap()]);
        assert_exit(&out, 0, "stats grad2");
        assert_eq!(stdout_of(&out), GRAD2_STATS);

        let out = run(&["stats", constant.to_str().unwrap()]);
        assert_exit(&out, 0, "stats const");
        assert_eq!(stdout_of(&out), CONST_STATS);

        // Golden enhancement: report on stdout, canonical P5 on disk.
        let enhanced = dir.path().join("enhanced.pgm");
        let out = run(&[
            "enhance",
            "--method",
            "dynamic",
            grad2.to_str().unwrap(),
            "-o",
            enhanced.to_str().unwrap(),
        ]);
        assert_exit(&out, 0, "enhance dynamic");
        assert_eq!(stdout_of(&out), GRAD2_ENHANCE_REPORT);
        assert_eq!(std::fs::read(&enhanced).unwrap(), GRAD2_ENHANCED_P5);

        // Golden curve: steps=2 emits exactly header + 2 rows.
        let csv = dir.path().join("two.csv");
        let out = run(&[
            "curve",
            "--method",
            "dynamic",
            "--lambda-min",
            "0.5",
            "--lambda-max",
            "1.5",
            "--steps",
            "2",
            grad2.to_str().unwrap(),
            "-o",
            csv.to_str().unwrap(),
        ]);
        assert_exit(&out, 0, "curve steps=2");
        let body = std::fs::read_to_string(&csv).unwrap();
        assert_eq!(body.lines().count(), 3);
        let mut lines = body.lines();
        assert_eq!(lines.next(), Some("lambda,range"));
        // r(0.5) = 256·√(64.5/256) − 256·√(16.5/256) = 63.5067198...;
        // r(1.5) = 256·(64.5/256)^1.5 − 256·(16.5/256)^1.5 = 28.1867741...
        assert_eq!(lines.next(), Some("0.500000,63.506720"));
        assert_eq!(lines.next(), Some("1.500000,28.186774"));

        // 30-step sweep: ascending grid, maximum at the grid point nearest
        // the closed-form gain 0.504374...
        let csv30 = dir.path().join("thirty.csv");
        let out = run(&[
            "curve",
            "--method",
            "dynamic",
            "--lambda-min",
            "0.1",
            "--lambda-max",
            "3.0",
            "--steps",
            "30",
            grad2.to_str().unwrap(),
            "-o",
            csv30.to_str().unwrap(),
        ]);
        assert_exit(&out, 0, "curve steps=30");
        let body = std::fs::read_to_string(&csv30).unwrap();
        let rows: Vec<(f64, f64)> = body
            .lines()
            .skip(1)
            .map(|l| {
                let (a, b) = l.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect();
        assert_eq!(rows.len(), 30);
        assert!(rows.windows(2).all(|w| w[0].0 < w[1].0));
        let peak = rows
            .iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert_eq!(peak.0, 0.5);

        // Determinism: identical invocations produce identical bytes.
        let rerun = run(&["stats", grad2.to_str().unwrap()]);
        assert_eq!(rerun.stdout, out_stats_bytes(&grad2));
        let enhanced2 = dir.path().join("enhanced2.pgm");
        let again = run(&[
            "enhance",
            "--method",
            "dynamic",
            grad2.to_str().unwrap(),
            "-o",
            enhanced2.to_str().unwrap(),
        ]);
        assert_exit(&again, 0, "enhance rerun");
        assert_eq!(
            std::fs::read(&enhanced).unwrap(),
            std::fs::read(&enhanced2).unwrap()
        );

        // Exit-code taxonomy.
        let missing = dir.path().join("nope.pgm");
        let out = run(&["stats", missing.to_str().unwrap()]);
        assert_exit(&out, 2, "missing input");
        assert!(!out.stderr.is_empty());

        let truncated = fixture(dir.path(), "short.pgm", b"P2\n2 1\n255\n16\n");
        let out = run(&["stats", truncated.to_str().unwrap()]);
        assert_exit(&out, 2, "truncated input");

        let color = fixture(dir.path(), "color.ppm", b"P3\n1 1\n255\n1 2 3\n");
        let out = run(&["stats", color.to_str().unwrap()]);
        assert_exit(&out, 2, "color input");

        let sink = dir.path().join("sink.pgm");
        let out = run(&[
            "enhance",
            "--method",
            "mean",
            constant.to_str().unwrap(),
            "-o",
            sink.to_str().unwrap(),
        ]);
        assert_exit(&out, 3, "mean on constant");
        assert!(String::from_utf8_lossy(&out.stderr).contains("zero-variance"));

        let out = run(&[
            "enhance",
            "--method",
            "dynamic",
            constant.to_str().unwrap(),
            "-o",
            sink.to_str().unwrap(),
        ]);
        assert_exit(&out, 3, "dynamic on constant");
        assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate-range"));

        let out = run(&[
            "curve",
            "--method",
            "dynamic",
            "--lambda-min",
            "0.5",
            "--lambda-max",
            "1.5",
            "--steps",
            "1",
            grad2.to_str().unwrap(),
            "-o",
            sink.to_str().unwrap(),
        ]);
        assert_exit(&out, 1, "steps below two");

        let out = run(&[
            "curve",
            "--method",
            "dynamic",
            "--lambda-min",
            "2.0",
            "--lambda-max",
            "0.5",
            "--steps",
            "10",
            grad2.to_str().unwrap(),
            "-o",
            sink.to_str().unwrap(),
        ]);
        assert_exit(&out, 1, "reversed sweep");

        let out = run(&[
            "enhance",
            "--method",
            "manual",
            grad2.to_str().unwrap(),
            "-o",
            sink.to_str().unwrap(),
        ]);
        assert_exit(&out, 1, "manual without lambda");

        let out = run(&[
            "enhance",
            "--method",
            "dynamic",
            "--lambda",
            "2.0",
            grad2.to_str().unwrap(),
            "-o",
            sink.to_str().unwrap(),
        ]);
        assert_exit(&out, 1, "lambda with non-manual method");

        let out = run(&["stats", "--model-max", "200", grad2.to_str().unwrap()]);
        assert_exit(&out, 1, "ceiling below the code range");

        let out = run(&["frobnicate"]);
        assert_exit(&out, 1, "unknown subcommand");

        let out = run(&["--help"]);
        assert_exit(&out, 0, "help");
    });
}

fn out_stats_bytes(input: &Path) -> Vec<u8> {
    run(&["stats", input.to_str().unwrap()]).stdout
}

#[test]
fn manual_identity_gain_round_trips_the_codes() {
    let dir = tempfile::tempdir().unwrap();
    let grad2 = fixture(dir.path(), "grad2.pgm", GRAD2_P2);
    let out_path = dir.path().join("same.pgm");
    let out = run(&[
        "enhance",
        "--method",
        "manual",
        "--lambda",
        "1",
        "--format",
        "p2",
        grad2.to_str().unwrap(),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_exit(&out, 0, "manual identity");
    assert_eq!(
        stdout_of(&out),
        "lambda = 1\nmethod = manual\nrange_after = 48\nrange_before = 48\n"
    );
    assert_eq!(std::fs::read(&out_path).unwrap(), GRAD2_P2);
}

#[test]
fn ascii_and_binary_inputs_are_interchangeable() {
    let dir = tempfile::tempdir().unwrap();
    let p2 = fixture(dir.path(), "a.pgm", GRAD2_P2);
    let p5 = fixture(dir.path(), "b.pgm", GRAD2_P5);
    let out_a = dir.path().join("a_out.pgm");
    let out_b = dir.path().join("b_out.pgm");
    for (input, output) in [(&p2, &out_a), (&p5, &out_b)] {
        let out = run(&[
            "enhance",
            "--method",
            "dynamic",
            input.to_str().unwrap(),
            "-o",
            output.to_str().unwrap(),
        ]);
        assert_exit(&out, 0, "enhance");
    }
    assert_eq!(
        std::fs::read(&out_a).unwrap(),
        std::fs::read(&out_b).unwrap()
    );
    assert_eq!(run(&["stats", p2.to_str().unwrap()]).stdout, run(&["stats", p5.to_str().unwrap()]).stdout);
}

#[test]
fn mean_curve_peaks_near_the_reference_gain() {
    // A two-valued image at codes 5 and 80 dequantizes to the pair
    // (5.5, 80.5), whose optimal gain is 0.44713...; with a 0.02 grid the
    // peak row must land within one step of the 0.4515 reference value for
    // the reference dark pair.
    let dir = tempfile::tempdir().unwrap();
    let two = fixture(dir.path(), "two.pgm", b"P2\n2 2\n255\n5 5\n80 80\n");
    let csv = dir.path().join("mean.csv");
    let out = run(&[
        "curve",
        "--method",
        "mean",
        "--lambda-min",
        "0.1",
        "--lambda-max",
        "1.0",
        "--steps",
        "46",
        two.to_str().unwrap(),
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_exit(&out, 0, "mean curve");
    let body = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<(f64, f64)> = body
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 46);
    let peak = rows
        .iter()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let step = 0.02;
    assert!(
        (peak.0 - 0.4515).abs() <= step + 1e-12,
        "peak at {} not within one grid step of 0.4515",
        peak.0
    );
}

#[test]
fn model_max_flag_changes_the_arithmetic() {
    let dir = tempfile::tempdir().unwrap();
    let grad2 = fixture(dir.path(), "grad2.pgm", GRAD2_P2);
    let out = run(&["stats", "--model-max", "512", grad2.to_str().unwrap()]);
    assert_exit(&out, 0, "stats with M=512");
    let text = stdout_of(&out);
    assert!(text.contains("M = 512\n"));
    // ln(ln(512/16.5)/ln(512/64.5))/ln(64.5/16.5) = 0.3709050...
    assert!(text.contains("lambda_t = 0.370905\n"), "got:\n{text}");
}
