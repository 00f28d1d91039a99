//! JSON documents read and written by the command-line tool.
//!
//! Every document carries a `kind` tag. Complex numbers are `[re, im]` pairs
//! and matrices are four rows of four entries:
//!
//! ```json
//! {"kind":"operator","matrix":[[[1,0],[0,0],[0,0],[0,0]], ...]}
//! {"kind":"decomposition","u":[1,0],"v":[0,0],"u_cov":[...],"v_cov":[...],"w":[...]}
//! {"kind":"rhs","v_ops":[<matrix>, <matrix>, <matrix>, <matrix>]}
//! {"kind":"frame-change","spatial":[[1,0,0,0], ...],"spinor":<matrix>}
//! ```
//!
//! Output floats are written with 17 significant digits, so reading a file
//! back reproduces every double exactly.

use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conversion::{OperatorDecomposition, SKEW_TOL};
use crate::error::Error as DomainError;
use crate::frames::FrameChange;
use crate::linalg::{c, CMatrix4, CVector4, ComplexScalar, RMatrix4};

pub type Pair = [f64; 2];
pub type MatrixRows = [[Pair; 4]; 4];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MatrixFile {
    Operator {
        matrix: MatrixRows,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Decomposition {
        u: Pair,
        v: Pair,
        u_cov: [Pair; 4],
        v_cov: [Pair; 4],
        w: MatrixRows,
    },
    Rhs {
        v_ops: [MatrixRows; 4],
    },
    FrameChange {
        spatial: RMatrix4,
        spinor: MatrixRows,
    },
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read input: {0}")]
    Io(#[from] io::Error),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected a document of kind {expected:?}, found {found:?}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error("non-finite number in {0}")]
    NonFinite(&'static str),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

impl MatrixFile {
    pub fn kind(&self) -> &'static str {
        match self {
            MatrixFile::Operator { .. } => "operator",
            MatrixFile::Decomposition { .. } => "decomposition",
            MatrixFile::Rhs { .. } => "rhs",
            MatrixFile::FrameChange { .. } => "frame-change",
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Single-line JSON, newline-terminated.
    pub fn to_text(&self) -> String {
        to_line(self)
    }

    pub fn operator(m: &CMatrix4) -> Self {
        MatrixFile::Operator { matrix: matrix_rows(m), note: None }
    }

    pub fn decomposition(dec: &OperatorDecomposition) -> Self {
        MatrixFile::Decomposition {
            u: pair(dec.u),
            v: pair(dec.v),
            u_cov: dec.u_cov.0.map(pair),
            v_cov: dec.v_cov.0.map(pair),
            w: dec.w.map(|row| row.map(pair)),
        }
    }

    pub fn rhs(ops: &[CMatrix4; 4]) -> Self {
        MatrixFile::Rhs { v_ops: ops.each_ref().map(matrix_rows) }
    }

    pub fn frame_change(change: &FrameChange) -> Self {
        MatrixFile::FrameChange { spatial: change.spatial, spinor: matrix_rows(&change.spinor) }
    }

    pub fn into_operator(self) -> Result<CMatrix4, FormatError> {
        match self {
            MatrixFile::Operator { matrix, .. } => finite_matrix(&matrix, "matrix"),
            other => Err(FormatError::WrongKind { expected: "operator", found: other.kind() }),
        }
    }

    pub fn into_decomposition(self) -> Result<OperatorDecomposition, FormatError> {
        match self {
            MatrixFile::Decomposition { u, v, u_cov, v_cov, w } => {
                let dec = OperatorDecomposition {
                    u: scalar(u),
                    v: scalar(v),
                    u_cov: CVector4(u_cov.map(scalar)),
                    v_cov: CVector4(v_cov.map(scalar)),
                    w: w.map(|row| row.map(scalar)),
                };
                if !dec.is_finite() {
                    return Err(FormatError::NonFinite("decomposition"));
                }
                let skew = dec.skew_residual();
                if !(skew <= SKEW_TOL) {
                    return Err(DomainError::NonSkewW { residual: skew }.into());
                }
                Ok(dec)
            }
            other => Err(FormatError::WrongKind { expected: "decomposition", found: other.kind() }),
        }
    }

    pub fn into_rhs_ops(self) -> Result<[CMatrix4; 4], FormatError> {
        match self {
            MatrixFile::Rhs { v_ops } => {
                let mut out = [CMatrix4::zero(); 4];
                for (o, rows) in out.iter_mut().zip(v_ops.iter()) {
                    *o = finite_matrix(rows, "v_ops")?;
                }
                Ok(out)
            }
            other => Err(FormatError::WrongKind { expected: "rhs", found: other.kind() }),
        }
    }

    pub fn into_frame_change(self) -> Result<FrameChange, FormatError> {
        match self {
            MatrixFile::FrameChange { spatial, spinor } => {
                let spinor = finite_matrix(&spinor, "spinor")?;
                if spatial.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(FormatError::NonFinite("spatial"));
                }
                Ok(FrameChange::new(spatial, spinor)?)
            }
            other => Err(FormatError::WrongKind { expected: "frame-change", found: other.kind() }),
        }
    }
}

fn pair(z: ComplexScalar) -> Pair {
    [z.re, z.im]
}

fn scalar(p: Pair) -> ComplexScalar {
    c(p[0], p[1])
}

fn matrix_rows(m: &CMatrix4) -> MatrixRows {
    m.0.map(|row| row.map(pair))
}

fn finite_matrix(rows: &MatrixRows, what: &'static str) -> Result<CMatrix4, FormatError> {
    let m = CMatrix4::from_fn(|i, j| scalar(rows[i][j]));
    if m.is_finite() {
        Ok(m)
    } else {
        Err(FormatError::NonFinite(what))
    }
}

/// Compact JSON with floats in `{:.16e}` form.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes any value as one JSON line using the 17-digit float format.
/// Non-finite floats become `null`.
pub fn to_line<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value.serialize(&mut ser).expect("serialization into memory cannot fail");
    let mut s = String::from_utf8(buf).expect("serde_json emits UTF-8");
    s.push('\n');
    s
}
