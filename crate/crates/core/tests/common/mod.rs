#![allow(dead_code)]

use dirac_operators::commutator::CommutatorRHS;
use dirac_operators::conversion::OperatorDecomposition;
use dirac_operators::frames::FrameContext;
use dirac_operators::linalg::{c, CMatrix4, CVector4, ComplexScalar};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub fn random_scalar<R: Rng>(rng: &mut R) -> ComplexScalar {
    c(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

pub fn random_operator<R: Rng>(rng: &mut R) -> CMatrix4 {
    CMatrix4::from_fn(|_, _| random_scalar(rng))
}

/// Random coefficients with `w` made antisymmetric.
pub fn random_decomposition<R: Rng>(rng: &mut R) -> OperatorDecomposition {
    let mut dec = OperatorDecomposition {
        u: random_scalar(rng),
        v: random_scalar(rng),
        u_cov: CVector4(std::array::from_fn(|_| random_scalar(rng))),
        v_cov: CVector4(std::array::from_fn(|_| random_scalar(rng))),
        w: [[c(0.0, 0.0); 4]; 4],
    };
    for p in 0..4 {
        for q in (p + 1)..4 {
            let z = random_scalar(rng);
            dec.w[p][q] = z;
            dec.w[q][p] = -z;
        }
    }
    dec
}

fn vec_index(m: usize, a: usize, b: usize) -> usize {
    16 * m + 4 * a + b
}

/// The 64x16 matrix of `F ↦ ([F, γ_m])_m` acting on the entries of `F`.
pub fn commutator_system(ctx: &FrameContext) -> DMatrix<ComplexScalar> {
    let mut a = DMatrix::<ComplexScalar>::zeros(64, 16);
    for i in 0..4 {
        for j in 0..4 {
            let mut e = CMatrix4::zero();
            e.0[i][j] = c(1.0, 0.0);
            for m in 0..4 {
                let g = &ctx.gamma_lower[m];
                let comm = e * *g - *g * e;
                for x in 0..4 {
                    for y in 0..4 {
                        a[(vec_index(m, x, y), 4 * i + j)] = comm.0[x][y];
                    }
                }
            }
        }
    }
    a
}

pub struct LeastSquares {
    /// Minimum-norm least-squares solution.
    pub solution: CMatrix4,
    /// `max |A x - b|` over the 64 equations.
    pub residual: f64,
}

/// Solves `[F, γ_m] = V_m` in the least-squares sense over all 16 entries of `F`.
pub fn least_squares(ops: &[CMatrix4; 4], ctx: &FrameContext) -> LeastSquares {
    let a = commutator_system(ctx);
    let mut b = DVector::<ComplexScalar>::zeros(64);
    for (m, op) in ops.iter().enumerate() {
        for x in 0..4 {
            for y in 0..4 {
                b[vec_index(m, x, y)] = op.0[x][y];
            }
        }
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let x = svd.solve(&b, 1e-10 * smax).expect("SVD computed with both factors");
    let r = &a * &x - &b;
    let residual = r.iter().map(|z| z.norm()).fold(0.0, f64::max);
    LeastSquares { solution: CMatrix4::from_fn(|i, j| x[4 * i + j]), residual }
}

pub fn least_squares_rhs(rhs: &CommutatorRHS, ctx: &FrameContext) -> LeastSquares {
    least_squares(rhs.v_ops(), ctx)
}

pub struct Kernel {
    /// Number of singular values below `1e-10 · σ_max`.
    pub nullity: usize,
    /// Smallest singular value above the cut, relative to `σ_max`.
    pub gap: f64,
    /// `|<n, I/2>|` for the unit null vector `n`; 1 when the kernel is spanned by `I`.
    pub identity_overlap: f64,
}

pub fn kernel(ctx: &FrameContext) -> Kernel {
    let svd = commutator_system(ctx).svd(true, true);
    let s = &svd.singular_values;
    let smax = s.max();
    let cut = 1e-10 * smax;
    let nullity = s.iter().filter(|&&x| x <= cut).count();
    let gap = s.iter().filter(|&&x| x > cut).fold(f64::INFINITY, |a, &x| a.min(x)) / smax;
    let (imin, _) = s.iter().enumerate().fold((0, f64::INFINITY), |acc, (k, &x)| if x < acc.1 { (k, x) } else { acc });
    let v_t = svd.v_t.expect("requested");
    // rows of V^H are conjugated right singular vectors
    let overlap: ComplexScalar = (0..4).map(|i| v_t[(imin, 5 * i)] * 0.5).sum();
    Kernel { nullity, gap, identity_overlap: overlap.norm() }
}
