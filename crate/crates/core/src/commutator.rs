//! Commutator equations `[F, γ_m] = V_m`.
//!
//! Writing `F` through its decomposition, the commutator with `γ_m` touches
//! each coefficient family in a fixed way:
//!
//! ```text
//! v   [H, γ_m]              = Σ_k 2 v g_mk H γ^k
//! u_k [γ^k, γ_m]            = Σ_pq γ^p γ^q (u_p g_qm - u_q g_pm)
//! v_k [H γ^k, γ_m]          = 2 v_m H
//! w_pq [γ^p γ^q, γ_m]       = Σ_k 4 w_km γ^k
//! ```
//!
//! and `u` drops out. So the right-hand sides are reachable exactly when
//! their own decompositions have no identity part, an antisymmetric
//! `γ^k` coefficient, an `Hγ^k` coefficient proportional to the metric, and a
//! `γγ` coefficient of the pattern above. The solution is then unique up to a
//! multiple of the identity.

use serde::Serialize;

use crate::conversion::{decompose, reconstruct, OperatorDecomposition};
use crate::error::{Error, Result};
use crate::frames::FrameContext;
use crate::linalg::{commutator, max_abs_diff, CMatrix4, ComplexScalar, ZERO};

/// Agreement required between the direct and structural commutator,
/// relative to the largest entry of `V_m` (or 1, whichever is larger).
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// Default solvability tolerance.
pub const SOLVE_TOL: f64 = 1e-9;

pub const FAMILY_NOTE: &str = "general solution F = F0 + u·1";

/// Right-hand sides `V_0..V_3` together with their decompositions.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorRHS {
    v_ops: [CMatrix4; 4],
    decs: [OperatorDecomposition; 4],
}

impl CommutatorRHS {
    pub fn new(v_ops: [CMatrix4; 4], ctx: &FrameContext) -> Self {
        let decs = std::array::from_fn(|m| decompose(&v_ops[m], ctx));
        CommutatorRHS { v_ops, decs }
    }

    pub fn zero(ctx: &FrameContext) -> Self {
        Self::new([CMatrix4::zero(); 4], ctx)
    }

    pub fn v_ops(&self) -> &[CMatrix4; 4] {
        &self.v_ops
    }

    /// Decomposition of `V_m`: `ũ_m`, `ṽ_m`, `ũ_mk`, `ṽ_mk`, `w̃_mpq`.
    pub fn decs(&self) -> &[OperatorDecomposition; 4] {
        &self.decs
    }
}

/// The four coefficient families of `[F, γ_m]` read off from the
/// decomposition of `F`, without forming any commutator.
pub fn structural_decompositions(dec: &OperatorDecomposition, ctx: &FrameContext) -> [OperatorDecomposition; 4] {
    let g = &ctx.metric.lower;
    std::array::from_fn(|m| {
        let mut out = OperatorDecomposition { u: ZERO, v: dec.v_cov[m] * 2.0, ..Default::default() };
        for k in 0..4 {
            out.u_cov[k] = dec.w[k][m] * 4.0;
            out.v_cov[k] = dec.v * (2.0 * g[m][k]);
        }
        for p in 0..4 {
            for q in 0..4 {
                out.w[p][q] = dec.u_cov[p] * g[q][m] - dec.u_cov[q] * g[p][m];
            }
        }
        out
    })
}

/// `V_m = [F, γ_m]` for `F = reconstruct(dec)`, computed by direct matrix
/// commutators and cross-checked against [`structural_decompositions`].
pub fn commutator_map(dec: &OperatorDecomposition, ctx: &FrameContext) -> Result<CommutatorRHS> {
    let f = reconstruct(dec, ctx)?;
    let v_ops: [CMatrix4; 4] = std::array::from_fn(|m| commutator(&f, &ctx.gamma_lower[m]));
    let structural = structural_decompositions(dec, ctx);
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for m in 0..4 {
        let rebuilt = reconstruct(&structural[m], ctx)?;
        let diff = max_abs_diff(&rebuilt, &v_ops[m]);
        worst = if diff.is_nan() { f64::NAN } else { worst.max(diff) };
        scale = scale.max(v_ops[m].max_abs());
    }
    if !(worst <= STRUCTURAL_TOL * scale) {
        return Err(Error::StructuralMismatch { residual: worst });
    }
    Ok(CommutatorRHS::new(v_ops, ctx))
}

/// One residual per solvability condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolvabilityResiduals {
    /// `max_m |ũ_m|`
    pub identity_coeff: f64,
    /// `max |ũ_mk + ũ_km|`
    pub skew_symmetry: f64,
    /// distance of `ṽ_mk` from the best fit `2 v g_mk`
    pub v_scalar_consistency: f64,
    /// distance of `w̃_mpq` from the best fit `u_p g_qm - u_q g_pm`
    pub w_pattern_consistency: f64,
}

impl SolvabilityResiduals {
    pub fn max(&self) -> f64 {
        [self.identity_coeff, self.skew_symmetry, self.v_scalar_consistency, self.w_pattern_consistency]
            .into_iter()
            .fold(0.0, |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
    }

    pub fn named(&self) -> [(&'static str, f64); 4] {
        [
            ("identity_coeff", self.identity_coeff),
            ("skew_symmetry", self.skew_symmetry),
            ("v_scalar_consistency", self.v_scalar_consistency),
            ("w_pattern_consistency", self.w_pattern_consistency),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolvabilityReport {
    pub solvable: bool,
    pub tolerance: f64,
    pub residuals: SolvabilityResiduals,
    /// Decomposition of the solution with `u = 0`, present when solvable.
    pub recovered: Option<OperatorDecomposition>,
}

/// Evaluates the four solvability conditions on `rhs` and, when they hold,
/// assembles the decomposition of the solution normalized to `u = 0`.
pub fn check_solvable(rhs: &CommutatorRHS, ctx: &FrameContext, tol: f64) -> SolvabilityReport {
    let decs = &rhs.decs;
    let g_lo = &ctx.metric.lower;
    let g_up = &ctx.metric.upper;

    let mut identity_coeff = 0.0f64;
    for d in decs {
        identity_coeff = identity_coeff.max(d.u.norm());
    }

    // ũ_mk = decs[m].u_cov[k]
    let mut skew_symmetry = 0.0f64;
    for m in 0..4 {
        for k in 0..4 {
            skew_symmetry = skew_symmetry.max((decs[m].u_cov[k] + decs[k].u_cov[m]).norm());
        }
    }

    // v = Σ ṽ_mk g^km / 8
    let mut v = ZERO;
    for m in 0..4 {
        for k in 0..4 {
            v += decs[m].v_cov[k] * g_up[k][m];
        }
    }
    let v = v / 8.0;
    let mut v_scalar_consistency = 0.0f64;
    for m in 0..4 {
        for k in 0..4 {
            v_scalar_consistency = v_scalar_consistency.max((decs[m].v_cov[k] - v * (2.0 * g_lo[m][k])).norm());
        }
    }

    // u_p = (1/3) Σ_mq w̃_mpq g^qm
    let mut u_cov = [ZERO; 4];
    for (p, up) in u_cov.iter_mut().enumerate() {
        let mut acc = ZERO;
        for m in 0..4 {
            for q in 0..4 {
                acc += decs[m].w[p][q] * g_up[q][m];
            }
        }
        *up = acc / 3.0;
    }
    let mut w_pattern_consistency = 0.0f64;
    for m in 0..4 {
        for p in 0..4 {
            for q in 0..4 {
                let fit = u_cov[p] * g_lo[q][m] - u_cov[q] * g_lo[p][m];
                w_pattern_consistency = w_pattern_consistency.max((decs[m].w[p][q] - fit).norm());
            }
        }
    }

    let residuals = SolvabilityResiduals { identity_coeff, skew_symmetry, v_scalar_consistency, w_pattern_consistency };
    let solvable = residuals.max() <= tol;

    let recovered = solvable.then(|| {
        let mut dec = OperatorDecomposition { u: ZERO, v, ..Default::default() };
        for m in 0..4 {
            dec.v_cov[m] = decs[m].v / 2.0;
            dec.u_cov[m] = u_cov[m];
        }
        // w_km = ũ_mk / 4, taken from the antisymmetric part of ũ
        for k in 0..4 {
            for m in (k + 1)..4 {
                let w: ComplexScalar = (decs[m].u_cov[k] - decs[k].u_cov[m]) / 8.0;
                dec.w[k][m] = w;
                dec.w[m][k] = -w;
            }
        }
        dec
    });

    SolvabilityReport { solvable, tolerance: tol, residuals, recovered }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome {
    Solved {
        /// Particular solution with `¼ tr F0 = 0`.
        f0: CMatrix4,
        /// `max_m |[F0, γ_m] - V_m|`
        substitution_residual: f64,
        report: SolvabilityReport,
    },
    Unsolvable {
        report: SolvabilityReport,
    },
}

impl SolveOutcome {
    pub fn report(&self) -> &SolvabilityReport {
        match self {
            SolveOutcome::Solved { report, .. } | SolveOutcome::Unsolvable { report } => report,
        }
    }

    pub fn f0(&self) -> Option<&CMatrix4> {
        match self {
            SolveOutcome::Solved { f0, .. } => Some(f0),
            SolveOutcome::Unsolvable { .. } => None,
        }
    }
}

/// `max_m |[f, γ_m] - V_m|`
pub fn substitution_residual(f: &CMatrix4, rhs: &CommutatorRHS, ctx: &FrameContext) -> f64 {
    (0..4)
        .map(|m| max_abs_diff(&commutator(f, &ctx.gamma_lower[m]), &rhs.v_ops[m]))
        .fold(0.0, f64::max)
}

/// Solves `[F, γ_m] = V_m`. Every solution is `F0 + u·1`; the returned `F0`
/// has `u = 0`. A solution whose substitution residual exceeds
/// `10·tol·max(1, max|V_m|)` is reported as unsolvable.
pub fn solve(rhs: &CommutatorRHS, ctx: &FrameContext, tol: f64) -> SolveOutcome {
    let mut report = check_solvable(rhs, ctx, tol);
    let Some(recovered) = report.recovered else {
        return SolveOutcome::Unsolvable { report };
    };
    let f0 = match reconstruct(&recovered, ctx) {
        Ok(f0) => f0,
        Err(_) => {
            report.solvable = false;
            report.recovered = None;
            return SolveOutcome::Unsolvable { report };
        }
    };
    let substitution_residual = substitution_residual(&f0, rhs, ctx);
    let scale = rhs.v_ops.iter().map(CMatrix4::max_abs).fold(1.0, f64::max);
    if !(substitution_residual <= 10.0 * tol * scale) {
        report.solvable = false;
        report.recovered = None;
        return SolveOutcome::Unsolvable { report };
    }
    SolveOutcome::Solved { f0, substitution_residual, report }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{apply_frame_change, canonical_context, random_frame_change};
    use crate::linalg::{c, mat_mul, CVector4, ONE};
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

    #[test]
    fn scalar_operator_is_in_the_kernel() {
        let ctx = canonical_context();
        let rhs = commutator_map(&OperatorDecomposition { u: c(2.0, -1.0), ..Default::default() }, &ctx).unwrap();
        for v in rhs.v_ops() {
            assert_eq!(*v, CMatrix4::zero());
        }
    }

    #[test]
    fn chirality_commutator() {
        let ctx = canonical_context();
        let rhs = commutator_map(&OperatorDecomposition { v: ONE, ..Default::default() }, &ctx).unwrap();
        for m in 0..4 {
            let expect = mat_mul(&ctx.chirality, &ctx.gamma_lower[m]).scale_real(2.0);
            assert!(max_abs_diff(&rhs.v_ops()[m], &expect) < 1e-15);
            for k in 0..4 {
                let coeff = rhs.decs()[m].v_cov[k];
                assert_eq!(coeff, c(2.0 * ctx.metric.lower[m][k], 0.0));
            }
        }
    }

    #[test]
    fn w_only_feeds_gamma_coefficients() {
        let ctx = canonical_context();
        let mut dec = OperatorDecomposition::zero();
        dec.w[0][1] = ONE;
        dec.w[1][0] = -ONE;
        let rhs = commutator_map(&dec, &ctx).unwrap();
        // direct oracle: commutators of γ⁰γ¹ - γ¹γ⁰ with γ_m
        let f = mat_mul(&ctx.gamma_upper[0], &ctx.gamma_upper[1]) - mat_mul(&ctx.gamma_upper[1], &ctx.gamma_upper[0]);
        for m in 0..4 {
            assert_eq!(rhs.v_ops()[m], commutator(&f, &ctx.gamma_lower[m]));
            let d = &rhs.decs()[m];
            for k in 0..4 {
                assert_eq!(d.u_cov[k], dec.w[k][m] * 4.0);
            }
            assert_eq!(d.u, ZERO);
            assert_eq!(d.v, ZERO);
            assert_eq!(d.v_cov, CVector4::zero());
            assert_eq!(d.skew_residual(), 0.0);
            assert!(d.w.iter().flatten().all(|z| *z == ZERO));
        }
    }

    #[test]
    fn round_trip_random_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..40 {
            let ctx = if trial % 2 == 0 {
                canonical_context()
            } else {
                apply_frame_change(&random_frame_change(&mut rng)).unwrap()
            };
            let dec = random_dec(&mut rng);
            let rhs = commutator_map(&dec, &ctx).unwrap();
            let report = check_solvable(&rhs, &ctx, SOLVE_TOL);
            assert!(report.solvable, "{report:?}");
            let mut expect = dec;
            expect.u = ZERO;
            assert!(report.recovered.unwrap().max_abs_diff(&expect) < 1e-9);
            match solve(&rhs, &ctx, SOLVE_TOL) {
                SolveOutcome::Solved { substitution_residual, .. } => assert!(substitution_residual <= 1e-8),
                other => panic!("unsolvable: {other:?}"),
            }
        }
    }

    #[test]
    fn identity_on_one_slot_is_unsolvable() {
        let ctx = canonical_context();
        let mut ops = [CMatrix4::zero(); 4];
        ops[0] = CMatrix4::identity();
        let rhs = CommutatorRHS::new(ops, &ctx);
        let report = check_solvable(&rhs, &ctx, SOLVE_TOL);
        assert!(!report.solvable);
        assert_eq!(report.residuals.identity_coeff, 1.0);
        assert!(report.recovered.is_none());
        assert!(solve(&rhs, &ctx, SOLVE_TOL).f0().is_none());
    }

    #[test]
    fn zero_rhs_gives_scalar_family() {
        let ctx = canonical_context();
        let rhs = CommutatorRHS::zero(&ctx);
        let outcome = solve(&rhs, &ctx, SOLVE_TOL);
        let f0 = *outcome.f0().unwrap();
        assert_eq!(f0, CMatrix4::zero());
        assert_eq!(outcome.report().recovered, Some(OperatorDecomposition::zero()));
        for u in [c(1.0, 0.0), c(2.0, 1.0)] {
            let f = f0 + CMatrix4::identity().scale(u);
            assert_eq!(substitution_residual(&f, &rhs, &ctx), 0.0);
        }
    }

    #[test]
    fn recovers_v_cov() {
        let ctx = canonical_context();
        let dec = OperatorDecomposition { v_cov: CVector4::basis(0), ..Default::default() };
        let rhs = commutator_map(&dec, &ctx).unwrap();
        let f0 = *solve(&rhs, &ctx, SOLVE_TOL).f0().unwrap();
        let back = decompose(&f0, &ctx);
        assert_eq!(back.v_cov, CVector4::basis(0));
        assert_eq!(back.u, ZERO);
    }

    #[test]
    fn perturbed_rhs_has_no_solution() {
        let ctx = canonical_context();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let rhs = commutator_map(&random_dec(&mut rng), &ctx).unwrap();
        let mut ops = *rhs.v_ops();
        ops[2][(0, 0)] += c(0.5, 0.0);
        let broken = CommutatorRHS::new(ops, &ctx);
        assert!(matches!(solve(&broken, &ctx, 1e-8), SolveOutcome::Unsolvable { .. }));
    }
}
