//! Conversion between operator fields and spatial tensor data.
//!
//! Every operator `F` expands uniquely as
//!
//! ```text
//! F = u·1 + v·H + Σ_k γ^k u_k + Σ_k H γ^k v_k + Σ_pq γ^p γ^q w_pq
//! ```
//!
//! with `w` antisymmetric. [`reconstruct`] evaluates the right-hand side in a
//! frame pair; [`decompose`] recovers the coefficients from traces.

use crate::error::{Error, Result};
use crate::frames::FrameContext;
use crate::linalg::{mat_mul, trace, CMatrix4, CVector4, ComplexScalar, ZERO};

/// Antisymmetry tolerance for `w` on input.
pub const SKEW_TOL: f64 = 1e-12;

/// The quintuple `(u, v, u_k, v_k, w_pq)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct OperatorDecomposition {
    pub u: ComplexScalar,
    pub v: ComplexScalar,
    pub u_cov: CVector4,
    pub v_cov: CVector4,
    /// `w[p][q]`, both triangles stored.
    pub w: [[ComplexScalar; 4]; 4],
}

impl OperatorDecomposition {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Largest `|w_pq + w_qp|`.
    pub fn skew_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for p in 0..4 {
            for q in 0..4 {
                let d = (self.w[p][q] + self.w[q][p]).norm();
                if d.is_nan() {
                    return f64::NAN;
                }
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Replaces `w` by its antisymmetric part.
    pub fn antisymmetrize(mut self) -> Self {
        let w = self.w;
        for p in 0..4 {
            for q in 0..4 {
                self.w[p][q] = (w[p][q] - w[q][p]) * 0.5;
            }
        }
        self
    }

    /// Largest coefficient-wise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = (self.u - other.u).norm().max((self.v - other.v).norm());
        for k in 0..4 {
            worst = worst
                .max((self.u_cov[k] - other.u_cov[k]).norm())
                .max((self.v_cov[k] - other.v_cov[k]).norm());
        }
        for p in 0..4 {
            for q in 0..4 {
                worst = worst.max((self.w[p][q] - other.w[p][q]).norm());
            }
        }
        worst
    }

    pub fn scale(&self, s: ComplexScalar) -> Self {
        let mut out = *self;
        out.u *= s;
        out.v *= s;
        for k in 0..4 {
            out.u_cov[k] *= s;
            out.v_cov[k] *= s;
        }
        for row in out.w.iter_mut() {
            for z in row.iter_mut() {
                *z *= s;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        out.u += other.u;
        out.v += other.v;
        for k in 0..4 {
            out.u_cov[k] += other.u_cov[k];
            out.v_cov[k] += other.v_cov[k];
        }
        for p in 0..4 {
            for q in 0..4 {
                out.w[p][q] += other.w[p][q];
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        let fin = |z: &ComplexScalar| z.re.is_finite() && z.im.is_finite();
        fin(&self.u)
            && fin(&self.v)
            && self.u_cov.0.iter().all(fin)
            && self.v_cov.0.iter().all(fin)
            && self.w.iter().flatten().all(fin)
    }
}

/// `F = u·1 + v·H + Σ γ^k u_k + Σ H γ^k v_k + Σ γ^p γ^q w_pq` in `ctx`.
pub fn reconstruct(dec: &OperatorDecomposition, ctx: &FrameContext) -> Result<CMatrix4> {
    let skew = dec.skew_residual();
    if !(skew <= SKEW_TOL) {
        return Err(Error::NonSkewW { residual: skew });
    }
    let h = &ctx.chirality;
    let gu = &ctx.gamma_upper;
    let mut f = CMatrix4::identity().scale(dec.u) + h.scale(dec.v);
    for k in 0..4 {
        if dec.u_cov[k] != ZERO {
            f += gu[k].scale(dec.u_cov[k]);
        }
        if dec.v_cov[k] != ZERO {
            f += mat_mul(h, &gu[k]).scale(dec.v_cov[k]);
        }
    }
    for p in 0..4 {
        for q in 0..4 {
            if dec.w[p][q] != ZERO {
                f += mat_mul(&gu[p], &gu[q]).scale(dec.w[p][q]);
            }
        }
    }
    Ok(f)
}

/// Recovers the coefficients of `f` from traces:
///
/// * `u = ¼ tr F`, `v = ¼ tr(H F)`
/// * `u_k = ¼ tr(γ_k F)`, `v_k = ¼ tr(γ_k H F)`
/// * `w_pq = (1/16) tr(γ_q γ_p F) - (1/16) tr(γ_p γ_q F)`
///
/// The returned `w` is antisymmetric bit for bit: each pair `(p, q)` is
/// computed once and its negation stored at `(q, p)`.
pub fn decompose(f: &CMatrix4, ctx: &FrameContext) -> OperatorDecomposition {
    let h = &ctx.chirality;
    let gl = &ctx.gamma_lower;
    let hf = mat_mul(h, f);
    let mut dec = OperatorDecomposition {
        u: trace(f) * 0.25,
        v: trace(&hf) * 0.25,
        ..Default::default()
    };
    let mut gf = [CMatrix4::zero(); 4];
    for k in 0..4 {
        gf[k] = mat_mul(&gl[k], f);
        dec.u_cov[k] = trace(&gf[k]) * 0.25;
        dec.v_cov[k] = trace(&mat_mul(&gl[k], &hf)) * 0.25;
    }
    for p in 0..4 {
        for q in (p + 1)..4 {
            let qp = trace(&mat_mul(&gl[q], &gf[p]));
            let pq = trace(&mat_mul(&gl[p], &gf[q]));
            let w = qp / 16.0 - pq / 16.0;
            dec.w[p][q] = w;
            dec.w[q][p] = -w;
        }
    }
    dec
}

/// The sixteen basis operators `{1, H, γ^k, Hγ^k, γ^pγ^q (p<q)}` in `ctx`, in
/// that order.
pub fn basis(ctx: &FrameContext) -> Vec<CMatrix4> {
    let h = ctx.chirality;
    let gu = &ctx.gamma_upper;
    let mut out = vec![CMatrix4::identity(), h];
    out.extend(gu.iter().copied());
    out.extend(gu.iter().map(|g| mat_mul(&h, g)));
    for p in 0..4 {
        for q in (p + 1)..4 {
            out.push(mat_mul(&gu[p], &gu[q]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{apply_frame_change, canonical_context, random_frame_change};
    use crate::linalg::{c, max_abs_diff, solve_linear_16, ONE};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_dec(rng: &mut impl Rng) -> OperatorDecomposition {
        let mut z = || c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let mut dec = OperatorDecomposition { u: z(), v: z(), ..Default::default() };
        for k in 0..4 {
            dec.u_cov[k] = z();
            dec.v_cov[k] = z();
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                let x = z();
                dec.w[p][q] = x;
                dec.w[q][p] = -x;
            }
        }
        dec
    }

    /// Brute-force trace oracle: every one of the sixteen (p,q) traces taken
    /// with explicit index loops over the printed matrices.
    fn loop_trace_w(f: &CMatrix4, ctx: &FrameContext, p: usize, q: usize) -> ComplexScalar {
        let g = &ctx.gamma_lower;
        let mut qp = ZERO;
        let mut pq = ZERO;
        for a in 0..4 {
            for b in 0..4 {
                for d in 0..4 {
                    qp += g[q].0[a][b] * g[p].0[b][d] * f.0[d][a];
                    pq += g[p].0[a][b] * g[q].0[b][d] * f.0[d][a];
                }
            }
        }
        qp / 16.0 - pq / 16.0
    }

    #[test]
    fn identity_and_gamma0() {
        let ctx = canonical_context();
        let dec = OperatorDecomposition { u: ONE, ..Default::default() };
        assert_eq!(reconstruct(&dec, &ctx).unwrap(), CMatrix4::identity());
        let dec = OperatorDecomposition { u_cov: CVector4::basis(0), ..Default::default() };
        assert_eq!(reconstruct(&dec, &ctx).unwrap(), ctx.gamma_upper[0]);
    }

    #[test]
    fn decompose_basis_members() {
        let ctx = canonical_context();
        let dec = decompose(&CMatrix4::identity(), &ctx);
        assert_eq!(dec, OperatorDecomposition { u: ONE, ..Default::default() });
        let dec = decompose(&ctx.chirality, &ctx);
        assert_eq!(dec, OperatorDecomposition { v: ONE, ..Default::default() });
    }

    #[test]
    fn gamma0_gamma1_gives_half_weights() {
        let ctx = canonical_context();
        let f = mat_mul(&ctx.gamma_upper[0], &ctx.gamma_upper[1]);
        // oracle: explicit loops give w_01 = 1/2
        let oracle = loop_trace_w(&f, &ctx, 0, 1);
        assert_eq!(oracle, c(0.5, 0.0));
        let dec = decompose(&f, &ctx);
        let mut expected = OperatorDecomposition::zero();
        expected.w[0][1] = c(0.5, 0.0);
        expected.w[1][0] = c(-0.5, 0.0);
        assert_eq!(dec, expected);
        assert_eq!(reconstruct(&dec, &ctx).unwrap(), f);
    }

    #[test]
    fn non_skew_w_rejected() {
        let mut dec = OperatorDecomposition::zero();
        dec.w[0][1] = ONE;
        let err = reconstruct(&dec, &canonical_context()).unwrap_err();
        assert!(matches!(err, Error::NonSkewW { .. }));
    }

    #[test]
    fn reconstruct_matches_linear_solve_oracle() {
        let ctx = canonical_context();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let basis = basis(&ctx);
        for _ in 0..20 {
            let dec = random_dec(&mut rng);
            let f = reconstruct(&dec, &ctx).unwrap();
            let coeffs = solve_linear_16(&basis, &f).unwrap();
            // basis order: 1, H, γ^k, Hγ^k, γ^pγ^q (p<q) with weight w_pq - w_qp = 2 w_pq
            assert!((coeffs[0] - dec.u).norm() < 1e-10);
            assert!((coeffs[1] - dec.v).norm() < 1e-10);
            for k in 0..4 {
                assert!((coeffs[2 + k] - dec.u_cov[k]).norm() < 1e-10);
                assert!((coeffs[6 + k] - dec.v_cov[k]).norm() < 1e-10);
            }
            let mut n = 10;
            for p in 0..4 {
                for q in (p + 1)..4 {
                    assert!((coeffs[n] - dec.w[p][q] * 2.0).norm() < 1e-10);
                    n += 1;
                }
            }
        }
    }

    #[test]
    fn round_trips_in_random_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let ctx = apply_frame_change(&random_frame_change(&mut rng)).unwrap();
            let dec = random_dec(&mut rng);
            let back = decompose(&reconstruct(&dec, &ctx).unwrap(), &ctx);
            assert!(back.max_abs_diff(&dec) < 1e-10);
            let f = CMatrix4::from_fn(|_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let again = reconstruct(&decompose(&f, &ctx), &ctx).unwrap();
            assert!(max_abs_diff(&again, &f) < 1e-10);
        }
    }

    #[test]
    fn decompose_is_linear() {
        let ctx = canonical_context();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut m = || CMatrix4::from_fn(|_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let (f, g) = (m(), m());
        let (alpha, beta) = (c(0.3, -1.2), c(-2.0, 0.5));
        let lhs = decompose(&(f.scale(alpha) + g.scale(beta)), &ctx);
        let rhs = decompose(&f, &ctx).scale(alpha).add(&decompose(&g, &ctx).scale(beta));
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }
}
