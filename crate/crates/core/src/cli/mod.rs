//! The `dirac-ops` command-line tool.
//!
//! Exit codes: 0 on success, 1 when a check fails or a system is unsolvable,
//! 2 on malformed input or arguments.

pub mod format;

use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::classification::{
    classify_hermiticity, classify_symmetry, hermiticity_criterion, symmetry_criterion, CLASSIFY_TOL,
};
use crate::commutator::{solve, CommutatorRHS, SolveOutcome, FAMILY_NOTE, SOLVE_TOL};
use crate::conversion::{decompose, reconstruct};
use crate::frames::{apply_frame_change, canonical_context, random_frame_change, FrameContext};
use crate::identities::{run_all, ALL};

pub use format::{to_line, FormatError, MatrixFile};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "dirac-ops", version, about = "Spinor operator algebra on 4x4 matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the gamma-matrix identities in a frame and in random frames.
    Verify {
        /// Frame-change file, or `canonical`.
        #[arg(long, default_value = "canonical")]
        frame: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tolerance for the `--frame` context.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Tolerance for the random trial frames.
        #[arg(long, default_value_t = 1e-9)]
        trial_tol: f64,
    },
    /// Operator file to decomposition file. Use `-` for stdin.
    Decompose {
        input: PathBuf,
        #[arg(long, default_value = "canonical")]
        frame: String,
    },
    /// Decomposition file to operator file. Use `-` for stdin.
    Reconstruct {
        input: PathBuf,
        #[arg(long, default_value = "canonical")]
        frame: String,
    },
    /// Symmetry and Hermiticity classes of an operator.
    Classify {
        input: PathBuf,
        #[arg(long, default_value = "canonical")]
        frame: String,
        #[arg(long, default_value_t = CLASSIFY_TOL)]
        tol: f64,
    },
    /// Solve [F, gamma_m] = V_m for F.
    Solve {
        input: PathBuf,
        #[arg(long, default_value = "canonical")]
        frame: String,
        #[arg(long, default_value_t = SOLVE_TOL)]
        tol: f64,
    },
}

/// Captured result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn negative(stdout: String) -> Self {
        Output { stdout, stderr: String::new(), code: EXIT_NEGATIVE }
    }

    fn input_error(msg: impl std::fmt::Display) -> Self {
        Output { stdout: String::new(), stderr: format!("error: {msg}\n"), code: EXIT_INPUT }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { stdout: String::new(), stderr: text, code: EXIT_INPUT }
            } else {
                Output::ok(text)
            };
        }
    };
    let result = match cli.command {
        Command::Verify { frame, trials, seed, tol, trial_tol } => {
            verify(&frame, trials, seed, tol, trial_tol)
        }
        Command::Decompose { input, frame } => decompose_cmd(&input, &frame),
        Command::Reconstruct { input, frame } => reconstruct_cmd(&input, &frame),
        Command::Classify { input, frame, tol } => classify_cmd(&input, &frame, tol),
        Command::Solve { input, frame, tol } => solve_cmd(&input, &frame, tol),
    };
    result.unwrap_or_else(Output::input_error)
}

fn read_input(path: &Path) -> Result<String, FormatError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn read_document(path: &Path) -> Result<MatrixFile, FormatError> {
    MatrixFile::parse(&read_input(path)?)
}

/// `canonical` or a frame-change file.
pub fn load_frame(frame: &str) -> Result<FrameContext, FormatError> {
    if frame == "canonical" {
        return Ok(canonical_context());
    }
    let change = read_document(Path::new(frame))?.into_frame_change()?;
    Ok(apply_frame_change(&change)?)
}

pub fn verify(frame: &str, trials: usize, seed: u64, tol: f64, trial_tol: f64) -> Result<Output, FormatError> {
    let base = load_frame(frame)?;
    let base_reports = run_all(&base, tol);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trial_max = vec![0.0f64; ALL.len()];
    let mut trial_pass = vec![true; ALL.len()];
    for _ in 0..trials {
        let ctx = apply_frame_change(&random_frame_change(&mut rng))?;
        for (k, r) in run_all(&ctx, trial_tol).iter().enumerate() {
            trial_max[k] = if r.residual.is_nan() || trial_max[k].is_nan() {
                f64::NAN
            } else {
                trial_max[k].max(r.residual)
            };
            trial_pass[k] &= r.pass;
        }
    }

    let mut out = String::new();
    let mut all_pass = true;
    for (k, r) in base_reports.iter().enumerate() {
        let pass = r.pass && trial_pass[k];
        all_pass &= pass;
        out += &to_line(&json!({
            "identity": r.name,
            "residual": r.residual,
            "tolerance": tol,
            "trials": trials,
            "trial_max_residual": trial_max[k],
            "trial_tolerance": trial_tol,
            "pass": pass,
        }));
    }
    out += &to_line(&json!({
        "summary": { "identities": base_reports.len(), "contexts": trials + 1, "pass": all_pass }
    }));
    Ok(if all_pass { Output::ok(out) } else { Output::negative(out) })
}

pub fn decompose_cmd(input: &Path, frame: &str) -> Result<Output, FormatError> {
    let ctx = load_frame(frame)?;
    let f = read_document(input)?.into_operator()?;
    Ok(Output::ok(MatrixFile::decomposition(&decompose(&f, &ctx)).to_text()))
}

pub fn reconstruct_cmd(input: &Path, frame: &str) -> Result<Output, FormatError> {
    let ctx = load_frame(frame)?;
    let dec = read_document(input)?.into_decomposition()?;
    Ok(Output::ok(MatrixFile::operator(&reconstruct(&dec, &ctx)?).to_text()))
}

pub fn classify_cmd(input: &Path, frame: &str, tol: f64) -> Result<Output, FormatError> {
    let ctx = load_frame(frame)?;
    let f = read_document(input)?.into_operator()?;
    let sym = classify_symmetry(&f, &ctx, tol);
    let herm = classify_hermiticity(&f, &ctx, tol);
    let dec = decompose(&f, &ctx);
    let sym_c = symmetry_criterion(&dec, tol);
    let herm_c = hermiticity_criterion(&dec, tol);
    let agree = sym_c == sym.classification && herm_c == herm.classification;
    Ok(Output::ok(to_line(&json!({
        "symmetry": sym,
        "hermiticity": herm,
        "coefficient_symmetry": sym_c,
        "coefficient_hermiticity": herm_c,
        "criteria_agree": agree,
    }))))
}

pub fn solve_cmd(input: &Path, frame: &str, tol: f64) -> Result<Output, FormatError> {
    let ctx = load_frame(frame)?;
    let ops = read_document(input)?.into_rhs_ops()?;
    let rhs = CommutatorRHS::new(ops, &ctx);
    match solve(&rhs, &ctx, tol) {
        SolveOutcome::Solved { f0, .. } => {
            let doc = match MatrixFile::operator(&f0) {
                MatrixFile::Operator { matrix, .. } => {
                    MatrixFile::Operator { matrix, note: Some(FAMILY_NOTE.to_string()) }
                }
                other => other,
            };
            Ok(Output::ok(doc.to_text()))
        }
        SolveOutcome::Unsolvable { report } => {
            let residuals: serde_json::Map<String, serde_json::Value> =
                report.residuals.named().iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            Ok(Output::negative(to_line(&json!({
                "solvable": false,
                "tolerance": report.tolerance,
                "residuals": residuals,
            }))))
        }
    }
}
