//! Symmetry with respect to the spinor metric `d` and Hermiticity with
//! respect to the Dirac form `D`, at the matrix level and at the level of
//! decomposition coefficients.

use serde::Serialize;

use crate::conversion::OperatorDecomposition;
use crate::frames::FrameContext;
use crate::linalg::{c, mat_mul, max_abs_diff, CMatrix4, CVector4, ComplexScalar, ZERO};

/// Default classification tolerance.
pub const CLASSIFY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryClass {
    Symmetric,
    Skew,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HermiticityClass {
    Hermitian,
    Antihermitian,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SymmetryVerdict {
    pub symmetric_residual: f64,
    pub skew_residual: f64,
    pub classification: SymmetryClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HermiticityVerdict {
    pub hermitian_residual: f64,
    pub antihermitian_residual: f64,
    pub classification: HermiticityClass,
}

/// `d(ψ, φ) = Σ d_ab ψ^a φ^b`
pub fn d_bilinear(psi: &CVector4, phi: &CVector4, ctx: &FrameContext) -> ComplexScalar {
    let d = &ctx.spinor_metric_lower;
    let mut acc = ZERO;
    for a in 0..4 {
        for b in 0..4 {
            acc += d[(a, b)] * psi[a] * phi[b];
        }
    }
    acc
}

/// `D(ψ, φ) = Σ D_{a b̄} conj(ψ^b) φ^a`
pub fn dirac_sesquilinear(psi: &CVector4, phi: &CVector4, ctx: &FrameContext) -> ComplexScalar {
    let dd = &ctx.dirac_form;
    let mut acc = ZERO;
    for a in 0..4 {
        for b in 0..4 {
            acc += dd[(a, b)] * psi[b].conj() * phi[a];
        }
    }
    acc
}

fn pick_symmetry(sym: f64, skew: f64, tol: f64) -> SymmetryClass {
    if sym <= tol {
        SymmetryClass::Symmetric
    } else if skew <= tol {
        SymmetryClass::Skew
    } else {
        SymmetryClass::Mixed
    }
}

fn pick_hermiticity(herm: f64, anti: f64, tol: f64) -> HermiticityClass {
    if herm <= tol {
        HermiticityClass::Hermitian
    } else if anti <= tol {
        HermiticityClass::Antihermitian
    } else {
        HermiticityClass::Mixed
    }
}

/// Compares `Σ_c F^c_a d_cb` (that is `Fᵀ d`) against `± Σ_c d_ac F^c_b` (`d F`).
pub fn classify_symmetry(f: &CMatrix4, ctx: &FrameContext, tol: f64) -> SymmetryVerdict {
    let d = &ctx.spinor_metric_lower;
    let left = mat_mul(&f.transpose(), d);
    let right = mat_mul(d, f);
    let symmetric_residual = max_abs_diff(&left, &right);
    let skew_residual = max_abs_diff(&left, &-right);
    SymmetryVerdict {
        symmetric_residual,
        skew_residual,
        classification: pick_symmetry(symmetric_residual, skew_residual, tol),
    }
}

/// Compares `Σ_c̄ conj(F^c_b) D_{a c̄}` (that is `D F̄`) against
/// `± Σ_c D_{c b̄} F^c_a` (`Fᵀ D`).
pub fn classify_hermiticity(f: &CMatrix4, ctx: &FrameContext, tol: f64) -> HermiticityVerdict {
    let dd = &ctx.dirac_form;
    let left = mat_mul(dd, &f.conj());
    let right = mat_mul(&f.transpose(), dd);
    let hermitian_residual = max_abs_diff(&left, &right);
    let antihermitian_residual = max_abs_diff(&left, &-right);
    HermiticityVerdict {
        hermitian_residual,
        antihermitian_residual,
        classification: pick_hermiticity(hermitian_residual, antihermitian_residual, tol),
    }
}

/// Adjoint with respect to `d`: `d⁻¹ Fᵀ d`. Symmetric operators are its
/// fixed points, skew ones change sign.
pub fn d_transpose(f: &CMatrix4, ctx: &FrameContext) -> CMatrix4 {
    mat_mul(&mat_mul(&ctx.spinor_metric_upper, &f.transpose()), &ctx.spinor_metric_lower)
}

/// Adjoint with respect to `D`: `D̄⁻¹ Fᴴ D̄`.
pub fn dirac_adjoint(f: &CMatrix4, ctx: &FrameContext) -> CMatrix4 {
    let d_bar = ctx.dirac_form.conj();
    let d_bar_inv = d_bar.inverse().unwrap_or_default();
    mat_mul(&mat_mul(&d_bar_inv, &f.adjoint()), &d_bar)
}

/// `(F + F^T_d)/2` and `(F - F^T_d)/2`.
pub fn symmetric_split(f: &CMatrix4, ctx: &FrameContext) -> (CMatrix4, CMatrix4) {
    let t = d_transpose(f, ctx);
    ((*f + t).scale_real(0.5), (*f - t).scale_real(0.5))
}

/// `(F + F†)/2` and `(F - F†)/2` with `†` the `D`-adjoint.
pub fn hermitian_split(f: &CMatrix4, ctx: &FrameContext) -> (CMatrix4, CMatrix4) {
    let t = dirac_adjoint(f, ctx);
    ((*f + t).scale_real(0.5), (*f - t).scale_real(0.5))
}

fn max_norm<'a>(zs: impl IntoIterator<Item = &'a ComplexScalar>) -> f64 {
    zs.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Coefficient-level symmetry test: symmetric iff `u_k = 0` and `w = 0`,
/// skew iff `u = v = 0` and `v_k = 0`.
pub fn symmetry_criterion(dec: &OperatorDecomposition, tol: f64) -> SymmetryClass {
    let sym = max_norm(dec.u_cov.0.iter().chain(dec.w.iter().flatten()));
    let skew = max_norm([dec.u, dec.v].iter().chain(dec.v_cov.0.iter()));
    pick_symmetry(sym, skew, tol)
}

/// Coefficient-level Hermiticity test: Hermitian iff `u`, `u_k`, `v_k` are
/// real and `v`, `w` imaginary; anti-Hermitian with the roles swapped.
pub fn hermiticity_criterion(dec: &OperatorDecomposition, tol: f64) -> HermiticityClass {
    let reals = || std::iter::once(&dec.u).chain(dec.u_cov.0.iter()).chain(dec.v_cov.0.iter());
    let imags = || std::iter::once(&dec.v).chain(dec.w.iter().flatten());
    let herm = reals()
        .map(|z| z.im.abs())
        .chain(imags().map(|z| z.re.abs()))
        .fold(0.0, f64::max);
    let anti = reals()
        .map(|z| z.re.abs())
        .chain(imags().map(|z| z.im.abs()))
        .fold(0.0, f64::max);
    pick_hermiticity(herm, anti, tol)
}

/// Symmetric and skew parts of `γ^p γ^q`: `1·g^pq` and
/// `-(i/2) Σ_rs H γ_r γ_s ω^{rspq}`. The same pair is its Hermitian /
/// anti-Hermitian split.
pub fn split_gamma_pair(p: usize, q: usize, ctx: &FrameContext) -> (CMatrix4, CMatrix4) {
    let sym = CMatrix4::identity().scale_real(ctx.metric.upper[p][q]);
    let mut acc = CMatrix4::zero();
    for r in 0..4 {
        for s in 0..4 {
            let o = ctx.volume.upper[r][s][p][q];
            if o != 0.0 {
                acc += mat_mul(&ctx.gamma_lower[r], &ctx.gamma_lower[s]).scale_real(o);
            }
        }
    }
    let skew = mat_mul(&ctx.chirality, &acc).scale(c(0.0, -0.5));
    (sym, skew)
}
