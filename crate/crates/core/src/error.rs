use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("SingularFrameChange: {which} determinant {det:e} is below 1e-10 in magnitude")]
    SingularFrameChange { which: &'static str, det: f64 },

    #[error("SingularFrameChange: {which} matrix has non-finite entries")]
    NonFiniteFrameChange { which: &'static str },

    #[error("SingularBasis: {reason}")]
    SingularBasis { reason: String },

    #[error("NonSkewW: w is not antisymmetric (residual {residual:e})")]
    NonSkewW { residual: f64 },

    #[error("StructuralMismatch: direct and structural commutators differ by {residual:e}")]
    StructuralMismatch { residual: f64 },
}
