//! Residual checks for the algebraic and trace identities satisfied by the
//! basic fields. Each check evaluates both sides of its identities over every
//! free spatial index and reports the largest entrywise deviation.

use serde::Serialize;

use crate::frames::{delta, FrameContext};
use crate::linalg::{
    anticommutator, c, commutator, mat_mul, max_abs_diff, product, trace, CMatrix4, ComplexScalar,
    I, ZERO,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(name: &str, residual: f64, tolerance: f64) -> Self {
        // NaN residuals never pass
        let pass = residual <= tolerance;
        IdentityReport { name: name.to_owned(), residual, tolerance, pass }
    }
}

pub const CHIRALITY_SQUARE: &str = "chirality_square";
pub const CLIFFORD: &str = "clifford";
pub const CHIRALITY_PRODUCT: &str = "chirality_product";
pub const CHIRALITY_ANTICOMMUTE: &str = "chirality_anticommute";
pub const PAIR_COMMUTE: &str = "pair_commute";
pub const TRIPLE_ANTICOMMUTE: &str = "triple_anticommute";
pub const PRODUCT_IDENTITIES: &str = "product_identities";
pub const TRACES: &str = "traces";

/// Names of all checks in the order [`run_all`] reports them.
pub const ALL: [&str; 8] = [
    CHIRALITY_SQUARE,
    CLIFFORD,
    CHIRALITY_PRODUCT,
    CHIRALITY_ANTICOMMUTE,
    PAIR_COMMUTE,
    TRIPLE_ANTICOMMUTE,
    PRODUCT_IDENTITIES,
    TRACES,
];

fn scalar(z: ComplexScalar) -> CMatrix4 {
    CMatrix4::identity().scale(z)
}

fn real_scalar(x: f64) -> CMatrix4 {
    CMatrix4::identity().scale_real(x)
}

/// Running maximum of residuals.
#[derive(Default)]
struct Worst(f64);

impl Worst {
    fn matrix(&mut self, a: &CMatrix4, b: &CMatrix4) {
        self.push(max_abs_diff(a, b));
    }

    fn scalar(&mut self, a: ComplexScalar, b: ComplexScalar) {
        self.push((a - b).norm());
    }

    fn push(&mut self, r: f64) {
        // keep NaN sticky so a broken field cannot pass
        if r.is_nan() || self.0.is_nan() {
            self.0 = f64::NAN;
        } else {
            self.0 = self.0.max(r);
        }
    }
}

/// Pair products `γ^p γ^q` and `γ_p γ_q`, computed once per check.
struct Pairs {
    upper: [[CMatrix4; 4]; 4],
    lower: [[CMatrix4; 4]; 4],
}

impl Pairs {
    fn new(ctx: &FrameContext) -> Self {
        let mut upper = [[CMatrix4::zero(); 4]; 4];
        let mut lower = [[CMatrix4::zero(); 4]; 4];
        for p in 0..4 {
            for q in 0..4 {
                upper[p][q] = mat_mul(&ctx.gamma_upper[p], &ctx.gamma_upper[q]);
                lower[p][q] = mat_mul(&ctx.gamma_lower[p], &ctx.gamma_lower[q]);
            }
        }
        Pairs { upper, lower }
    }
}

/// `H² = 1` and `H̄² = 1`.
pub fn check_chirality_square(ctx: &FrameContext, tol: f64) -> IdentityReport {
    let id = CMatrix4::identity();
    let mut w = Worst::default();
    w.matrix(&mat_mul(&ctx.chirality, &ctx.chirality), &id);
    w.matrix(&mat_mul(&ctx.chirality_conj, &ctx.chirality_conj), &id);
    IdentityReport::new(CHIRALITY_SQUARE, w.0, tol)
}

/// `{γ^p, γ^q} = 2 g^pq`, `{γ^p, γ_q} = 2 δ^p_q`, `{γ_p, γ_q} = 2 g_pq`.
pub fn check_clifford(ctx: &FrameContext, tol: f64) -> IdentityReport {
    let mut w = Worst::default();
    for p in 0..4 {
        for q in 0..4 {
            let (up, uq) = (&ctx.gamma_upper[p], &ctx.gamma_upper[q]);
            let (lp, lq) = (&ctx.gamma_lower[p], &ctx.gamma_lower[q]);
            w.matrix(&anticommutator(up, uq), &real_scalar(2.0 * ctx.metric.upper[p][q]));
            w.matrix(&anticommutator(up, lq), &scalar(delta(p, q) * 2.0));
            w.matrix(&anticommutator(lp, lq), &real_scalar(2.0 * ctx.metric.lower[p][q]));
        }
    }
    IdentityReport::new(CLIFFORD, w.0, tol)
}

/// `(i/24) Σ ω γγγγ` with the given volume components and γ set.
fn volume_contraction(omega: &crate::linalg::Rank4, gammas: &[CMatrix4; 4]) -> CMatrix4 {
    let mut sum = CMatrix4::zero();
    for p in 0..4 {
        for q in 0..4 {
            for k in 0..4 {
                for m in 0..4 {
                    let o = omega[p][q][k][m];
                    if o == 0.0 {
                        continue;
                    }
                    sum += product([&gammas[p], &gammas[q], &gammas[k], &gammas[m]]).scale_real(o);
                }
            }
        }
    }
    // divide rather than multiply by 1/24 so exact sums stay exact
    CMatrix4::from_fn(|a, b| sum.0[a][b] * I / 24.0)
}

/// `H = (i/24) Σ ω_pqkm γ^p γ^q γ^k γ^m` and its dual form with `ω^pqkm` and
/// lowered γ. In the canonical frame pair this also checks the reduced forms
/// `H = i γ⁰γ¹γ²γ³ = -i γ₀γ₁γ₂γ₃`.
pub fn check_chirality_product(ctx: &FrameContext, tol: f64) -> IdentityReport {
    let mut w = Worst::default();
    w.matrix(&ctx.chirality, &volume_contraction(&ctx.volume.lower, &ctx.gamma_upper));
    w.matrix(&ctx.chirality, &volume_contraction(&ctx.volume.upper, &ctx.gamma_lower));
    if ctx.is_canonical() {
        let up = product(ctx.gamma_upper.iter()).scale(I);
        let low = product(ctx.gamma_lower.iter()).scale(-I);
        w.matrix(&ctx.chirality, &up);
        w.matrix(&ctx.chirality, &low);
    }
    IdentityReport::new(CHIRALITY_PRODUCT, w.0, tol)
}

/// `{H, γ^k} = 0` and `{H, γ_k} = 0`.
pub fn check_h_anticommute(ctx: &FrameContext, tol: f64) -> IdentityReport {
    let zero = CMatrix4::zero();
    let mut w = Worst::default();
    for k in 0..4 {
        w.matrix(&anticommutator(&ctx.chirality, &ctx.gamma_upper[k]), &zero);
        w.matrix(&anticommutator(&ctx.chirality, &ctx.gamma_lower[k]), &zero);
    }
    IdentityReport::new(CHIRALITY_ANTICOMMUTE, w.0, tol)
}

/// `[H, γ^k γ^q] = 0` and `[H, γ_k γ_q] = 0`.
pub fn check_pair_commute(ctx: &FrameContext, tol: f64) -> IdentityReport {
    let pairs = Pairs::new(ctx);
    let zero = CMatrix4::zero();
    let mut w = Worst::default();
    for k in 0..4 {
        for q in 0..4 {
            w.matrix(&commutator(&ctx.chirality, &pairs.upper[k][q]), &zero);
            w.matrix(&commutator(&ctx.chirality, &pairs.lower[k][q]), &zero);
        }
    }
    IdentityReport::new(PAIR_COMMUTE, w.0, tol)
}

/// `{H, γ^p γ^k γ^q} = 0` and the lowered form.
pub fn check_triple_anticommute(ctx: &FrameContext, tol: f64) -> IdentityReport {
    let pairs = Pairs::new(ctx);
    let zero = CMatrix4::zero();
    let mut w = Worst::default();
    for p in 0..4 {
        for k in 0..4 {
            for q in 0..4 {
                let up = mat_mul(&pairs.upper[p][k], &ctx.gamma_upper[q]);
                let low = mat_mul(&pairs.lower[p][k], &ctx.gamma_lower[q]);
                w.matrix(&anticommutator(&ctx.chirality, &up), &zero);
                w.matrix(&anticommutator(&ctx.chirality, &low), &zero);
            }
        }
    }
    IdentityReport::new(TRIPLE_ANTICOMMUTE, w.0, tol)
}

/// Product formulas for two and three γ-operators with and without `H`, in
/// both index placements, plus the mixed form `γ^p γ^q γ_r`.
pub fn check_product_identities(ctx: &FrameContext, tol: f64) -> IdentityReport {
    let h = &ctx.chirality;
    let g_up = &ctx.metric.upper;
    let g_lo = &ctx.metric.lower;
    let w_up = &ctx.volume.upper;
    let w_lo = &ctx.volume.lower;
    let gu = &ctx.gamma_upper;
    let gl = &ctx.gamma_lower;
    let pairs = Pairs::new(ctx);
    let half_i = c(0.0, -0.5);
    let mut w = Worst::default();

    for p in 0..4 {
        for q in 0..4 {
            // -(i/2) Σ γ_r γ_s ω^{rspq} and -(i/2) Σ γ^r γ^s ω_{rspq}
            let mut dual_lower = CMatrix4::zero();
            let mut dual_upper = CMatrix4::zero();
            for r in 0..4 {
                for s in 0..4 {
                    if w_up[r][s][p][q] != 0.0 {
                        dual_lower += pairs.lower[r][s].scale_real(w_up[r][s][p][q]);
                    }
                    if w_lo[r][s][p][q] != 0.0 {
                        dual_upper += pairs.upper[r][s].scale_real(w_lo[r][s][p][q]);
                    }
                }
            }
            let dual_lower = dual_lower.scale(half_i);
            let dual_upper = dual_upper.scale(half_i);

            // H γγ = H g - (i/2) Σ γγ ω
            w.matrix(&mat_mul(h, &pairs.upper[p][q]), &(h.scale_real(g_up[p][q]) + dual_lower));
            w.matrix(&mat_mul(h, &pairs.lower[p][q]), &(h.scale_real(g_lo[p][q]) + dual_upper));
            // γγ = 1 g - (i/2) Σ H γγ ω
            w.matrix(&pairs.upper[p][q], &(real_scalar(g_up[p][q]) + mat_mul(h, &dual_lower)));
            w.matrix(&pairs.lower[p][q], &(real_scalar(g_lo[p][q]) + mat_mul(h, &dual_upper)));

            for r in 0..4 {
                let mut eps_up = CMatrix4::zero();
                let mut eps_lo = CMatrix4::zero();
                for s in 0..4 {
                    if w_up[p][q][r][s] != 0.0 {
                        eps_up += gl[s].scale_real(w_up[p][q][r][s]);
                    }
                    if w_lo[p][q][r][s] != 0.0 {
                        eps_lo += gu[s].scale_real(w_lo[p][q][r][s]);
                    }
                }
                let eps_up = eps_up.scale(I);
                let eps_lo = eps_lo.scale(I);

                let base_up = gu[r].scale_real(g_up[p][q]) + gu[p].scale_real(g_up[q][r])
                    - gu[q].scale_real(g_up[p][r]);
                let base_lo = gl[r].scale_real(g_lo[p][q]) + gl[p].scale_real(g_lo[q][r])
                    - gl[q].scale_real(g_lo[p][r]);

                let triple_up = mat_mul(&pairs.upper[p][q], &gu[r]);
                let triple_lo = mat_mul(&pairs.lower[p][q], &gl[r]);

                // γγγ = g γ + g γ - g γ + i Σ ω H γ
                w.matrix(&triple_up, &(base_up + mat_mul(h, &eps_up)));
                w.matrix(&triple_lo, &(base_lo + mat_mul(h, &eps_lo)));
                // H γγγ = g Hγ + g Hγ - g Hγ + i Σ ω γ
                w.matrix(&mat_mul(h, &triple_up), &(mat_mul(h, &base_up) + eps_up));
                w.matrix(&mat_mul(h, &triple_lo), &(mat_mul(h, &base_lo) + eps_lo));

                // γ^p γ^q γ_r = g^pq γ_r + δ^q_r γ^p - δ^p_r γ^q + i Σ_mn ω^pqmn g_mr H γ_n
                let mut mixed_eps = CMatrix4::zero();
                for m in 0..4 {
                    for n in 0..4 {
                        let coeff = w_up[p][q][m][n] * g_lo[m][r];
                        if coeff != 0.0 {
                            mixed_eps += gl[n].scale_real(coeff);
                        }
                    }
                }
                let mixed_rhs = gl[r].scale_real(g_up[p][q]) + gu[p].scale(delta(q, r))
                    - gu[q].scale(delta(p, r))
                    + mat_mul(h, &mixed_eps).scale(I);
                w.matrix(&mat_mul(&pairs.upper[p][q], &gl[r]), &mixed_rhs);
            }
        }
    }
    IdentityReport::new(PRODUCT_IDENTITIES, w.0, tol)
}

/// Traces of single, double, triple and quadruple γ-products, with and
/// without `H`.
pub fn check_traces(ctx: &FrameContext, tol: f64) -> IdentityReport {
    let h = &ctx.chirality;
    let gu = &ctx.gamma_upper;
    let gl = &ctx.gamma_lower;
    let g_up = &ctx.metric.upper;
    let g_lo = &ctx.metric.lower;
    let pairs = Pairs::new(ctx);
    let four = |x: f64| c(4.0 * x, 0.0);
    let mut w = Worst::default();

    for k in 0..4 {
        w.scalar(trace(&gu[k]), ZERO);
        w.scalar(trace(&gl[k]), ZERO);
        w.scalar(trace(&mat_mul(h, &gu[k])), ZERO);
        w.scalar(trace(&mat_mul(h, &gl[k])), ZERO);
    }
    for p in 0..4 {
        for q in 0..4 {
            let mixed = mat_mul(&gu[p], &gl[q]);
            w.scalar(trace(&pairs.upper[p][q]), four(g_up[p][q]));
            w.scalar(trace(&pairs.lower[p][q]), four(g_lo[p][q]));
            w.scalar(trace(&mixed), delta(p, q) * 4.0);
            w.scalar(trace(&mat_mul(h, &pairs.upper[p][q])), ZERO);
            w.scalar(trace(&mat_mul(h, &pairs.lower[p][q])), ZERO);
            w.scalar(trace(&mat_mul(h, &mixed)), ZERO);
            for r in 0..4 {
                let up = mat_mul(&pairs.upper[p][q], &gu[r]);
                let lo = mat_mul(&pairs.lower[p][q], &gl[r]);
                w.scalar(trace(&up), ZERO);
                w.scalar(trace(&lo), ZERO);
                w.scalar(trace(&mat_mul(h, &up)), ZERO);
                w.scalar(trace(&mat_mul(h, &lo)), ZERO);
                for s in 0..4 {
                    let quad = mat_mul(&pairs.upper[p][q], &mat_mul(&gl[r], &gl[s]));
                    let expected = g_up[p][q] * g_lo[r][s] * 4.0
                        + delta(q, r) * delta(p, s) * 4.0
                        - delta(p, r) * delta(q, s) * 4.0;
                    w.scalar(trace(&quad), expected);
                }
            }
        }
    }
    IdentityReport::new(TRACES, w.0, tol)
}

/// Every check, in the order of [`ALL`].
pub fn run_all(ctx: &FrameContext, tol: f64) -> Vec<IdentityReport> {
    vec![
        check_chirality_square(ctx, tol),
        check_clifford(ctx, tol),
        check_chirality_product(ctx, tol),
        check_h_anticommute(ctx, tol),
        check_pair_commute(ctx, tol),
        check_triple_anticommute(ctx, tol),
        check_product_identities(ctx, tol),
        check_traces(ctx, tol),
    ]
}
