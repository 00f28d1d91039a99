//! Operator fields on the Dirac spinor fiber of a four-dimensional spacetime.
//!
//! An operator is a 4x4 complex matrix acting on spinors. In any frame it has
//! a unique decomposition into spatial tensors `(u, v, u_k, v_k, w_pq)`:
//!
//! ```text
//! F = u·1 + v·H + u_k γ^k + v_k H γ^k + w_pq γ^p γ^q
//! ```
//!
//! with `w` antisymmetric. The crate converts between the two forms,
//! classifies operators against the spinor metric `d` and the Dirac form `D`,
//! and solves the commutator system `[F, γ_m] = V_m`.
//!
//! ```
//! use dirac_operators::{canonical_context, decompose, reconstruct};
//!
//! let ctx = canonical_context();
//! let f = ctx.gamma_upper[0] * ctx.gamma_upper[1];
//! let dec = decompose(&f, &ctx);
//! assert!((dec.w[0][1].re - 0.5).abs() < 1e-15);
//! let back = reconstruct(&dec, &ctx).unwrap();
//! assert!(dirac_operators::linalg::max_abs_diff(&back, &f) < 1e-14);
//! ```

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::large_enum_variant)]

pub mod classification;
pub mod cli;
pub mod commutator;
pub mod conversion;
pub mod error;
pub mod frames;
pub mod identities;
pub mod linalg;

pub use classification::{
    classify_hermiticity, classify_symmetry, hermiticity_criterion, split_gamma_pair, symmetry_criterion,
    HermiticityClass, SymmetryClass,
};
pub use commutator::{check_solvable, commutator_map, solve, CommutatorRHS, SolvabilityReport, SolveOutcome};
pub use conversion::{decompose, reconstruct, OperatorDecomposition};
pub use error::{Error, Result};
pub use frames::{apply_frame_change, canonical_context, random_frame_change, FrameChange, FrameContext};
pub use linalg::{CMatrix4, CVector4, ComplexScalar};
