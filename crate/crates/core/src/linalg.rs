//! Fixed-size complex arithmetic on the spinor fiber.
//!
//! Every operator field is a dense 4×4 complex matrix with the first (upper)
//! spinor index as the row and the second (lower) index as the column. Spatial
//! component arrays are plain 4×4 real arrays with the same row/column rule.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used for every operator entry and decomposition coefficient.
pub type ComplexScalar = Complex64;

/// Real 4×4 array of spatial components, `a[row][col]`.
pub type RMatrix4 = [[f64; 4]; 4];

/// Rank-4 real array of spatial components, `a[i][j][k][m]`.
pub type Rank4 = [[[[f64; 4]; 4]; 4]; 4];

pub const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
pub const ONE: ComplexScalar = Complex64::new(1.0, 0.0);
pub const I: ComplexScalar = Complex64::new(0.0, 1.0);

/// Shorthand for building a complex scalar.
#[inline]
pub const fn c(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

/// Dense 4×4 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMatrix4(pub [[ComplexScalar; 4]; 4]);

/// Four complex components indexed 0..3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVector4(pub [ComplexScalar; 4]);

impl Default for CMatrix4 {
    fn default() -> Self {
        Self::zero()
    }
}

impl CMatrix4 {
    pub const fn zero() -> Self {
        CMatrix4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> ComplexScalar) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = f(i, j);
            }
        }
        out
    }

    /// Builds a matrix from real entries.
    pub fn from_real(rows: &RMatrix4) -> Self {
        Self::from_fn(|i, j| c(rows[i][j], 0.0))
    }

    /// Single matrix unit `E_{row,col}`.
    pub fn unit(row: usize, col: usize) -> Self {
        let mut out = Self::zero();
        out.0[row][col] = ONE;
        out
    }

    pub fn scale(&self, s: ComplexScalar) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn trace(&self) -> ComplexScalar {
        trace(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn apply(&self, v: &CVector4) -> CVector4 {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..4 {
                *o += self.0[i][j] * v.0[j];
            }
        }
        CVector4(out)
    }

    pub fn determinant(&self) -> ComplexScalar {
        self.to_nalgebra().determinant()
    }

    /// Inverse, or `None` when the matrix is numerically singular.
    pub fn inverse(&self) -> Option<Self> {
        self.to_nalgebra().try_inverse().map(|m| Self::from_nalgebra(&m))
    }

    fn to_nalgebra(self) -> Matrix4<ComplexScalar> {
        Matrix4::from_fn(|i, j| self.0[i][j])
    }

    fn from_nalgebra(m: &Matrix4<ComplexScalar>) -> Self {
        Self::from_fn(|i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for CMatrix4 {
    type Output = ComplexScalar;
    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        &mut self.0[i][j]
    }
}

impl Add for CMatrix4 {
    type Output = CMatrix4;
    fn add(self, rhs: CMatrix4) -> CMatrix4 {
        CMatrix4::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl AddAssign for CMatrix4 {
    fn add_assign(&mut self, rhs: CMatrix4) {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl Sub for CMatrix4 {
    type Output = CMatrix4;
    fn sub(self, rhs: CMatrix4) -> CMatrix4 {
        CMatrix4::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl Neg for CMatrix4 {
    type Output = CMatrix4;
    fn neg(self) -> CMatrix4 {
        CMatrix4::from_fn(|i, j| -self.0[i][j])
    }
}

impl Mul for CMatrix4 {
    type Output = CMatrix4;
    fn mul(self, rhs: CMatrix4) -> CMatrix4 {
        mat_mul(&self, &rhs)
    }
}

impl Mul<ComplexScalar> for CMatrix4 {
    type Output = CMatrix4;
    fn mul(self, rhs: ComplexScalar) -> CMatrix4 {
        self.scale(rhs)
    }
}

impl Mul<f64> for CMatrix4 {
    type Output = CMatrix4;
    fn mul(self, rhs: f64) -> CMatrix4 {
        self.scale_real(rhs)
    }
}

impl Default for CVector4 {
    fn default() -> Self {
        CVector4([ZERO; 4])
    }
}

impl CVector4 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.0[k] = ONE;
        v
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<usize> for CVector4 {
    type Output = ComplexScalar;
    fn index(&self, k: usize) -> &ComplexScalar {
        &self.0[k]
    }
}

impl IndexMut<usize> for CVector4 {
    fn index_mut(&mut self, k: usize) -> &mut ComplexScalar {
        &mut self.0[k]
    }
}

pub fn mat_mul(a: &CMatrix4, b: &CMatrix4) -> CMatrix4 {
    let mut out = CMatrix4::zero();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a.0[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..4 {
                out.0[i][j] += aik * b.0[k][j];
            }
        }
    }
    out
}

/// Product of a chain of matrices, left to right. Empty chain gives the identity.
pub fn product<'a>(factors: impl IntoIterator<Item = &'a CMatrix4>) -> CMatrix4 {
    let mut it = factors.into_iter();
    let Some(first) = it.next() else {
        return CMatrix4::identity();
    };
    it.fold(*first, |acc, m| mat_mul(&acc, m))
}

pub fn trace(a: &CMatrix4) -> ComplexScalar {
    (0..4).map(|i| a.0[i][i]).sum()
}

/// `ab - ba`
pub fn commutator(a: &CMatrix4, b: &CMatrix4) -> CMatrix4 {
    mat_mul(a, b) - mat_mul(b, a)
}

/// `ab + ba`
pub fn anticommutator(a: &CMatrix4, b: &CMatrix4) -> CMatrix4 {
    mat_mul(a, b) + mat_mul(b, a)
}

/// Residual metric used everywhere: the largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix4, b: &CMatrix4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let d = (a.0[i][j] - b.0[i][j]).norm();
            if d.is_nan() {
                return f64::NAN;
            }
            worst = worst.max(d);
        }
    }
    worst
}

/// Relative singular-value floor below which a 16-element basis is rejected.
pub const BASIS_RANK_TOL: f64 = 1e-10;

/// Expands `target` over sixteen basis matrices: returns `c` with
/// `Σ c_i basis_i = target`.
///
/// The basis is flattened into the columns of a 16×16 system and solved by
/// SVD; a basis whose Gram matrix is rank-deficient (smallest singular value
/// below [`BASIS_RANK_TOL`] relative to the largest) is rejected.
pub fn solve_linear_16(basis: &[CMatrix4], target: &CMatrix4) -> Result<Vec<ComplexScalar>> {
    if basis.len() != 16 {
        return Err(Error::SingularBasis {
            reason: format!("expected 16 basis matrices, got {}", basis.len()),
        });
    }
    let a = DMatrix::from_fn(16, 16, |row, col| basis[col].0[row / 4][row % 4]);
    let b = DVector::from_fn(16, |row, _| target.0[row / 4][row % 4]);
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    if !(smax > 0.0) || smin / smax < BASIS_RANK_TOL {
        return Err(Error::SingularBasis {
            reason: format!("relative singular value {:e}", if smax > 0.0 { smin / smax } else { 0.0 }),
        });
    }
    let x = svd
        .solve(&b, smax * BASIS_RANK_TOL)
        .map_err(|e| Error::SingularBasis { reason: e.to_string() })?;
    Ok(x.iter().copied().collect())
}

pub fn real_identity() -> RMatrix4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn real_mul(a: &RMatrix4, b: &RMatrix4) -> RMatrix4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            for j in 0..4 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn real_transpose(a: &RMatrix4) -> RMatrix4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn real_determinant(a: &RMatrix4) -> f64 {
    Matrix4::from_fn(|i, j| a[i][j]).determinant()
}

pub fn real_inverse(a: &RMatrix4) -> Option<RMatrix4> {
    let inv = Matrix4::from_fn(|i, j| a[i][j]).try_inverse()?;
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = inv[(i, j)];
        }
    }
    Some(out)
}

pub fn real_max_abs_diff(a: &RMatrix4, b: &RMatrix4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[i][j] - b[i][j]).abs());
        }
    }
    worst
}
