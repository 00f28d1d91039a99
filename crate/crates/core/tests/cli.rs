#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of)]

use dirac_operators::cli::{run, MatrixFile, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK};
use dirac_operators::conversion::OperatorDecomposition;
use dirac_operators::frames::{canonical_context, random_frame_change, FrameChange};
use dirac_operators::linalg::{c, CMatrix4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn write(dir: &tempfile::TempDir, name: &str, doc: &MatrixFile) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, doc.to_text()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn help_and_usage_errors() {
    let out = run(["dirac-ops", "--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("verify"));
    let out = run(["dirac-ops", "frobnicate"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stdout.is_empty());
    assert_eq!(run(["dirac-ops", "decompose"]).code, EXIT_INPUT);
}

#[test]
fn missing_file_is_input_error() {
    let out = run(["dirac-ops", "decompose", "/nonexistent/op.json"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.starts_with("error:"));
}

#[test]
fn verify_is_deterministic_and_machine_readable() {
    let a = run(["dirac-ops", "verify", "--trials", "5", "--seed", "9"]);
    let b = run(["dirac-ops", "verify", "--trials", "5", "--seed", "9"]);
    assert_eq!(a, b);
    assert_eq!(a.code, EXIT_OK);
    let lines: Vec<serde_json::Value> = a.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[8]["summary"]["contexts"], 6);
    assert!(lines[..8].iter().all(|l| l["pass"] == true));
}

#[test]
fn verify_in_a_frame_file() {
    let dir = tempfile::tempdir().unwrap();
    let change = random_frame_change(&mut ChaCha8Rng::seed_from_u64(1));
    let frame = write(&dir, "frame.json", &MatrixFile::frame_change(&change));
    let out = run(["dirac-ops", "verify", "--frame", &frame, "--trials", "0"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
}

#[test]
fn frame_file_of_wrong_kind() {
    let dir = tempfile::tempdir().unwrap();
    let op = write(&dir, "op.json", &MatrixFile::operator(&CMatrix4::identity()));
    let out = run(["dirac-ops", "decompose", &op, "--frame", &op]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("frame-change"));
}

#[test]
fn left_oriented_frame_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut spatial = dirac_operators::linalg::real_identity();
    spatial[1][1] = -1.0;
    let change = FrameChange::new(spatial, CMatrix4::identity().scale(c(0.0, 2.0))).unwrap();
    let frame = write(&dir, "frame.json", &MatrixFile::frame_change(&change));
    let f = canonical_context().gamma_upper[2] * c(0.3, -1.0);
    let op = write(&dir, "op.json", &MatrixFile::operator(&f));
    let dec = run(["dirac-ops", "decompose", &op, "--frame", &frame]);
    assert_eq!(dec.code, EXIT_OK);
    let dec_path = dir.path().join("dec.json");
    std::fs::write(&dec_path, &dec.stdout).unwrap();
    let back = run(["dirac-ops", "reconstruct", dec_path.to_str().unwrap(), "--frame", &frame]);
    let g = MatrixFile::parse(&back.stdout).unwrap().into_operator().unwrap();
    assert!(dirac_operators::linalg::max_abs_diff(&g, &f) < 1e-12);
}

#[test]
fn classify_skew_operator() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = canonical_context();
    let op = write(&dir, "op.json", &MatrixFile::operator(&ctx.gamma_upper[0]));
    let out = run(["dirac-ops", "classify", &op]);
    assert_eq!(out.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["criteria_agree"], true);
    assert!(v["symmetry"]["classification"].is_string());
}

#[test]
fn solve_reports_all_residuals_on_failure() {
    let dir = tempfile::tempdir().unwrap();
    let mut ops = [CMatrix4::zero(); 4];
    ops[2].0[0][0] = c(0.5, 0.0);
    let rhs = write(&dir, "rhs.json", &MatrixFile::rhs(&ops));
    let out = run(["dirac-ops", "solve", &rhs]);
    assert_eq!(out.code, EXIT_NEGATIVE);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["solvable"], false);
    for name in ["identity_coeff", "skew_symmetry", "v_scalar_consistency", "w_pattern_consistency"] {
        assert!(v["residuals"][name].is_number(), "{name}");
    }
}

#[test]
fn solve_wrong_kind_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let dec = write(&dir, "dec.json", &MatrixFile::decomposition(&OperatorDecomposition::zero()));
    assert_eq!(run(["dirac-ops", "solve", &dec]).code, EXIT_INPUT);
}
