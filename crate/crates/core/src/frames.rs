//! Spatial and spinor frames, and the component arrays of every basic field
//! in a given pair of frames.
//!
//! A [`FrameChange`] is a pair `(L, S)`: the columns of `L` express the new
//! spatial frame vectors in the canonical orthonormal frame, and the columns
//! of `S` express the new spinor frame vectors in the canonical chiral frame.
//! Component arrays then transform index by index:
//!
//! * lower spatial index: contract with `L`; upper spatial index: with `L⁻¹`
//! * lower spinor index: `S`; upper spinor index: `S⁻¹`
//! * conjugate spinor indices: the same with `S̄`, `S̄⁻¹`
//!
//! so that an operator becomes `S⁻¹ F S`, the spinor metric `Sᵀ d S` and the
//! Dirac form `Sᵀ D S̄`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    c, mat_mul, real_determinant, real_identity, real_inverse, real_mul, real_transpose, CMatrix4,
    RMatrix4, Rank4, I, ONE, ZERO,
};

/// Determinant floor for an admissible frame change.
pub const MIN_FRAME_DET: f64 = 1e-10;

/// Determinant floor used when drawing random frame changes.
pub const RANDOM_FRAME_MIN_DET: f64 = 0.1;

/// Levi-Civita symbol with `ε_0123 = +1`; zero when an index repeats.
pub fn levi_civita(i: usize, j: usize, k: usize, m: usize) -> f64 {
    let idx = [i, j, k, m];
    let mut sign = 1.0;
    for a in 0..4 {
        for b in (a + 1)..4 {
            if idx[a] == idx[b] {
                return 0.0;
            }
            if idx[a] > idx[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// The full symbol as a rank-4 array.
pub fn levi_civita_array() -> Rank4 {
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for (i, a) in out.iter_mut().enumerate() {
        for (j, b) in a.iter_mut().enumerate() {
            for (k, row) in b.iter_mut().enumerate() {
                for (m, e) in row.iter_mut().enumerate() {
                    *e = levi_civita(i, j, k, m);
                }
            }
        }
    }
    out
}

/// `g_ij` and `g^ij`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricComponents {
    pub lower: RMatrix4,
    pub upper: RMatrix4,
}

impl MetricComponents {
    /// `diag(1, -1, -1, -1)` for both variants.
    pub fn minkowski() -> Self {
        let mut g = [[0.0; 4]; 4];
        g[0][0] = 1.0;
        g[1][1] = -1.0;
        g[2][2] = -1.0;
        g[3][3] = -1.0;
        MetricComponents { lower: g, upper: g }
    }

    pub fn determinant(&self) -> f64 {
        real_determinant(&self.lower)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Right,
    Left,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Right => 1.0,
            Orientation::Left => -1.0,
        }
    }
}

/// Volume tensor `ω` with both index placements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeTensor {
    pub lower: Rank4,
    pub upper: Rank4,
    pub orientation: Orientation,
}

impl VolumeTensor {
    /// `ω_ijkm = ±√(-det g) ε_ijkm`, plus for right frames, with the upper
    /// variant obtained by raising all four indices.
    pub fn from_metric(metric: &MetricComponents, orientation: Orientation) -> Self {
        let scale = orientation.sign() * (-metric.determinant()).sqrt();
        let mut lower = levi_civita_array();
        for e in lower.iter_mut().flatten().flatten().flatten() {
            *e *= scale;
        }
        let upper = raise_volume(&lower, metric);
        VolumeTensor { lower, upper, orientation }
    }
}

/// `ω^ijkm = Σ ω_pqrs g^pi g^qj g^rk g^sm`, contracted one index at a time.
pub fn raise_volume(lower: &Rank4, metric: &MetricComponents) -> Rank4 {
    let g = &metric.upper;
    let mut t = *lower;
    for slot in 0..4 {
        let mut next = [[[[0.0; 4]; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for m in 0..4 {
                        let idx = [i, j, k, m];
                        let mut acc = 0.0;
                        for p in 0..4 {
                            let mut src = idx;
                            src[slot] = p;
                            acc += t[src[0]][src[1]][src[2]][src[3]] * g[p][idx[slot]];
                        }
                        next[i][j][k][m] = acc;
                    }
                }
            }
        }
        t = next;
    }
    t
}

/// Change from the canonical frame pair to a new one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameChange {
    pub spatial: RMatrix4,
    pub spinor: CMatrix4,
}

impl FrameChange {
    pub fn new(spatial: RMatrix4, spinor: CMatrix4) -> Result<Self> {
        if spatial.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteFrameChange { which: "spatial" });
        }
        if !spinor.is_finite() {
            return Err(Error::NonFiniteFrameChange { which: "spinor" });
        }
        let det_l = real_determinant(&spatial);
        if !(det_l.abs() > MIN_FRAME_DET) {
            return Err(Error::SingularFrameChange { which: "spatial", det: det_l.abs() });
        }
        let det_s = spinor.determinant().norm();
        if !(det_s > MIN_FRAME_DET) {
            return Err(Error::SingularFrameChange { which: "spinor", det: det_s });
        }
        Ok(FrameChange { spatial, spinor })
    }

    pub fn identity() -> Self {
        FrameChange { spatial: real_identity(), spinor: CMatrix4::identity() }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn orientation(&self) -> Orientation {
        if real_determinant(&self.spatial) > 0.0 {
            Orientation::Right
        } else {
            Orientation::Left
        }
    }

    /// Frame change equivalent to applying `self` first and then `next`
    /// relative to the frame pair produced by `self`.
    pub fn then(&self, next: &FrameChange) -> Result<FrameChange> {
        FrameChange::new(
            real_mul(&self.spatial, &next.spatial),
            mat_mul(&self.spinor, &next.spinor),
        )
    }
}

/// Draws a frame change with entries uniform in `[-1, 1]` (real and imaginary
/// parts independently for the spinor part), redrawing each matrix until the
/// modulus of its determinant reaches [`RANDOM_FRAME_MIN_DET`].
pub fn random_frame_change<R: Rng + ?Sized>(rng: &mut R) -> FrameChange {
    let spatial = loop {
        let mut l = [[0.0; 4]; 4];
        for e in l.iter_mut().flatten() {
            *e = rng.random_range(-1.0..=1.0);
        }
        if real_determinant(&l).abs() >= RANDOM_FRAME_MIN_DET {
            break l;
        }
    };
    let spinor = loop {
        let s = CMatrix4::from_fn(|_, _| {
            let re = rng.random_range(-1.0..=1.0);
            let im = rng.random_range(-1.0..=1.0);
            c(re, im)
        });
        if s.determinant().norm() >= RANDOM_FRAME_MIN_DET {
            break s;
        }
    };
    FrameChange { spatial, spinor }
}

/// Every basic field in one pair of frames.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameContext {
    pub change: FrameChange,
    pub metric: MetricComponents,
    pub volume: VolumeTensor,
    /// `γ^k`, indexed by the spatial index `k`.
    pub gamma_upper: [CMatrix4; 4],
    /// `γ_k`
    pub gamma_lower: [CMatrix4; 4],
    pub chirality: CMatrix4,
    pub chirality_conj: CMatrix4,
    pub spinor_metric_lower: CMatrix4,
    pub spinor_metric_upper: CMatrix4,
    pub spinor_metric_conj_lower: CMatrix4,
    pub spinor_metric_conj_upper: CMatrix4,
    /// `D_{i j̄}`, row = spinor index, column = conjugate spinor index.
    pub dirac_form: CMatrix4,
}

impl FrameContext {
    /// True when this context is the canonical frame pair.
    pub fn is_canonical(&self) -> bool {
        self.change.is_identity()
    }
}

pub mod canonical {
    //! Component matrices in a canonically orthonormal chiral spinor frame
    //! and its associated positively polarized right orthonormal frame.

    use super::*;

    fn m(rows: [[f64; 4]; 4]) -> CMatrix4 {
        CMatrix4::from_real(&rows)
    }

    pub fn gamma_upper() -> [CMatrix4; 4] {
        let g0 = m([[0., 0., 1., 0.], [0., 0., 0., 1.], [1., 0., 0., 0.], [0., 1., 0., 0.]]);
        let g1 = m([[0., 0., 0., -1.], [0., 0., -1., 0.], [0., 1., 0., 0.], [1., 0., 0., 0.]]);
        let mut g2 = CMatrix4::zero();
        g2[(0, 3)] = I;
        g2[(1, 2)] = -I;
        g2[(2, 1)] = -I;
        g2[(3, 0)] = I;
        let g3 = m([[0., 0., -1., 0.], [0., 0., 0., 1.], [1., 0., 0., 0.], [0., -1., 0., 0.]]);
        [g0, g1, g2, g3]
    }

    pub fn chirality() -> CMatrix4 {
        m([[1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., -1., 0.], [0., 0., 0., -1.]])
    }

    pub fn spinor_metric_lower() -> CMatrix4 {
        m([[0., 1., 0., 0.], [-1., 0., 0., 0.], [0., 0., 0., -1.], [0., 0., 1., 0.]])
    }

    pub fn spinor_metric_upper() -> CMatrix4 {
        m([[0., -1., 0., 0.], [1., 0., 0., 0.], [0., 0., 0., 1.], [0., 0., -1., 0.]])
    }

    pub fn dirac_form() -> CMatrix4 {
        m([[0., 0., 1., 0.], [0., 0., 0., 1.], [1., 0., 0., 0.], [0., 1., 0., 0.]])
    }
}

pub fn canonical_context() -> FrameContext {
    let metric = MetricComponents::minkowski();
    let gamma_upper = canonical::gamma_upper();
    let gamma_lower = lower_gamma_with(&gamma_upper, &metric);
    FrameContext {
        change: FrameChange::identity(),
        metric,
        volume: VolumeTensor::from_metric(&metric, Orientation::Right),
        gamma_upper,
        gamma_lower,
        chirality: canonical::chirality(),
        chirality_conj: canonical::chirality(),
        spinor_metric_lower: canonical::spinor_metric_lower(),
        spinor_metric_upper: canonical::spinor_metric_upper(),
        spinor_metric_conj_lower: canonical::spinor_metric_lower(),
        spinor_metric_conj_upper: canonical::spinor_metric_upper(),
        dirac_form: canonical::dirac_form(),
    }
}

/// Component arrays of every basic field in the frame pair reached from the
/// canonical one by `change`.
pub fn apply_frame_change(change: &FrameChange) -> Result<FrameContext> {
    let change = FrameChange::new(change.spatial, change.spinor)?;
    let base = canonical_context();

    let l = change.spatial;
    let l_inv = real_inverse(&l).ok_or(Error::SingularFrameChange {
        which: "spatial",
        det: real_determinant(&l).abs(),
    })?;
    let s = change.spinor;
    let s_inv = s.inverse().ok_or(Error::SingularFrameChange {
        which: "spinor",
        det: s.determinant().norm(),
    })?;
    let s_bar = s.conj();
    let s_bar_inv = s_inv.conj();

    // two lower spatial indices: Lᵀ g L; two upper: L⁻¹ g L⁻ᵀ
    let metric = MetricComponents {
        lower: real_mul(&real_mul(&real_transpose(&l), &base.metric.lower), &l),
        upper: real_mul(&real_mul(&l_inv, &base.metric.upper), &real_transpose(&l_inv)),
    };

    let operator = |x: &CMatrix4| mat_mul(&mat_mul(&s_inv, x), &s);
    let operator_conj = |x: &CMatrix4| mat_mul(&mat_mul(&s_bar_inv, x), &s_bar);
    let both_lower = |x: &CMatrix4, t: &CMatrix4| mat_mul(&mat_mul(&t.transpose(), x), t);
    let both_upper = |x: &CMatrix4, t_inv: &CMatrix4| mat_mul(&mat_mul(t_inv, x), &t_inv.transpose());

    let mut gamma_upper = [CMatrix4::zero(); 4];
    for (k, out) in gamma_upper.iter_mut().enumerate() {
        for p in 0..4 {
            if l_inv[k][p] != 0.0 {
                *out += operator(&base.gamma_upper[p]).scale_real(l_inv[k][p]);
            }
        }
    }
    let gamma_lower = lower_gamma_with(&gamma_upper, &metric);

    Ok(FrameContext {
        change,
        metric,
        volume: VolumeTensor::from_metric(&metric, change.orientation()),
        gamma_upper,
        gamma_lower,
        chirality: operator(&base.chirality),
        chirality_conj: operator_conj(&base.chirality_conj),
        spinor_metric_lower: both_lower(&base.spinor_metric_lower, &s),
        spinor_metric_upper: both_upper(&base.spinor_metric_upper, &s_inv),
        spinor_metric_conj_lower: both_lower(&base.spinor_metric_conj_lower, &s_bar),
        spinor_metric_conj_upper: both_upper(&base.spinor_metric_conj_upper, &s_bar_inv),
        dirac_form: mat_mul(&mat_mul(&s.transpose(), &base.dirac_form), &s_bar),
    })
}

/// `γ_k = Σ_q g_kq γ^q` for the context's own γ-field and metric.
pub fn lower_gamma(ctx: &FrameContext) -> [CMatrix4; 4] {
    lower_gamma_with(&ctx.gamma_upper, &ctx.metric)
}

fn lower_gamma_with(gamma_upper: &[CMatrix4; 4], metric: &MetricComponents) -> [CMatrix4; 4] {
    let mut out = [CMatrix4::zero(); 4];
    for (k, o) in out.iter_mut().enumerate() {
        for (q, gq) in gamma_upper.iter().enumerate() {
            let g = metric.lower[k][q];
            if g != 0.0 {
                *o += gq.scale_real(g);
            }
        }
    }
    out
}

/// Kronecker delta as a complex scalar.
pub(crate) fn delta(i: usize, j: usize) -> crate::linalg::ComplexScalar {
    if i == j {
        ONE
    } else {
        ZERO
    }
}
