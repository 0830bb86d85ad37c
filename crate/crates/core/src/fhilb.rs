//! Finite-dimensional Hilbert spaces and complex matrices: the numeric
//! backend.
//!
//! A morphism `a → b` is a `b × a` complex matrix acting on column vectors;
//! composition is matrix product, the dagger is the conjugate transpose, and
//! the tensor is the Kronecker product. Objects are identified with their
//! flat duals, so the transpose is the plain (unconjugated) transpose and
//! the cup of `C^n` is the vectorised identity.
//!
//! Spectral routines (a Jacobi eigensolver for Hermitian matrices, operator
//! norms, positive square roots) live here too; everything is generic over
//! the real scalar type.

use crate::backend::{Backend, Tolerance};
use crate::error::Error;
use crate::scalar::RealScalar;
use num_complex::Complex;
use num_traits::{One, Zero};
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Index, IndexMut};

/// A dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct Matrix<R: RealScalar> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<R>>,
}

impl<R: RealScalar> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re.to_f64_lossy(), z.im.to_f64_lossy())?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<R: RealScalar> Index<(usize, usize)> for Matrix<R> {
    type Output = Complex<R>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<R> {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<R: RealScalar> IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<R> {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<R: RealScalar> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<R>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from a row-major entry list; panics if the length is wrong.
    pub fn from_entries(rows: usize, cols: usize, data: Vec<Complex<R>>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Self { rows, cols, data }
    }

    /// Build from real row-major entries (imaginary parts zero).
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        Self {
            rows,
            cols,
            data: entries
                .iter()
                .map(|&x| Complex::new(R::from_f64_lossy(x), R::zero()))
                .collect(),
        }
    }

    /// A square diagonal matrix with the given real diagonal.
    pub fn diagonal(diag: &[R]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, R::zero());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matmul(&self, rhs: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Diagrammatic composition: `self` first, then `other`.
    pub fn then(&self, other: &Matrix<R>) -> Matrix<R> {
        other.matmul(self)
    }

    pub fn transpose(&self) -> Matrix<R> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conjugate(&self) -> Matrix<R> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Matrix<R> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Kronecker product, consistent with the row-major pair encoding.
    pub fn kron(&self, other: &Matrix<R>) -> Matrix<R> {
        let (br, bc) = (other.rows, other.cols);
        Matrix::from_fn(self.rows * br, self.cols * bc, |i, j| {
            self[(i / br, j / bc)] * other[(i % br, j % bc)]
        })
    }

    pub fn add(&self, other: &Matrix<R>) -> Matrix<R> {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix sum shape mismatch"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix<R>) -> Matrix<R> {
        self.add(&other.scale_real(-R::one()))
    }

    pub fn scale(&self, z: Complex<R>) -> Matrix<R> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| *a * z).collect(),
        }
    }

    pub fn scale_real(&self, r: R) -> Matrix<R> {
        self.scale(Complex::new(r, R::zero()))
    }

    pub fn trace(&self) -> Complex<R> {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        (0..self.rows).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Row-major vectorisation: a `rows·cols × 1` column with
    /// `vec(X)[i·cols + j] = X[i][j]`.
    pub fn vectorise(&self) -> Matrix<R> {
        Matrix { rows: self.rows * self.cols, cols: 1, data: self.data.clone() }
    }

    /// Inverse of [`Matrix::vectorise`].
    pub fn unvectorise(v: &Matrix<R>, rows: usize, cols: usize) -> Matrix<R> {
        assert_eq!(v.cols, 1, "unvectorise expects a column");
        assert_eq!(v.rows, rows * cols, "unvectorise shape mismatch");
        Matrix { rows, cols, data: v.data.clone() }
    }

    pub fn column(&self, j: usize) -> Matrix<R> {
        Matrix::from_fn(self.rows, 1, |i, _| self[(i, j)])
    }

    /// The submatrix keeping the listed columns, in the given order.
    pub fn keep_columns(&self, idx: &[usize]) -> Matrix<R> {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }

    /// Largest absolute value of any entry.
    pub fn max_abs(&self) -> R {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(R::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn frobenius_norm(&self) -> R {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(R::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Largest entrywise difference, or infinity on a shape mismatch.
    pub fn max_diff(&self, other: &Matrix<R>) -> R {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return R::infinity();
        }
        self.sub(other).max_abs()
    }

    pub fn is_hermitian(&self, eps: R) -> bool {
        self.rows == self.cols && self.max_diff(&self.dagger()) <= eps
    }
}

/// Eigenvalues (descending) and an orthonormal eigenbasis of a Hermitian
/// matrix, computed by cyclic Jacobi rotations.
///
/// The input is symmetrised as `(A + A†)/2` first, so mildly non-Hermitian
/// input is tolerated; the returned `V` satisfies `A ≈ V · diag(λ) · V†`.
pub fn hermitian_eig<R: RealScalar>(a: &Matrix<R>) -> (Vec<R>, Matrix<R>) {
    assert_eq!(a.rows, a.cols, "eigendecomposition of a non-square matrix");
    let n = a.rows;
    let half = R::from_f64_lossy(0.5);
    let mut m = a.add(&a.dagger()).scale_real(half);
    let mut v = Matrix::identity(n);
    if n > 0 {
        let scale = m.frobenius_norm().max(R::one());
        let target = scale * R::epsilon() * R::from_f64_lossy(n as f64);
        let skip = scale * R::epsilon() * R::from_f64_lossy(0.01);
        for _sweep in 0..60 {
            let mut off = R::zero();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        off = off + m[(i, j)].norm_sqr();
                    }
                }
            }
            if off.sqrt() <= target {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut m, &mut v, p, q, skip);
                }
            }
        }
    }
    // Re-Hermitise the residue and sort by eigenvalue, descending.
    let mut order: Vec<usize> = (0..n).collect();
    let eigs: Vec<R> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| eigs[j].partial_cmp(&eigs[i]).expect("non-finite eigenvalue"));
    let sorted: Vec<R> = order.iter().map(|&i| eigs[i]).collect();
    (sorted, v.keep_columns(&order))
}

/// One Jacobi rotation annihilating the `(p, q)` entry of the Hermitian
/// matrix `m`, accumulated into `v`.
fn jacobi_rotate<R: RealScalar>(m: &mut Matrix<R>, v: &mut Matrix<R>, p: usize, q: usize, skip: R) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r <= skip {
        return;
    }
    // Unit phase of the off-diagonal entry, and the classic rotation angle
    // chosen so that the transformed (p, q) entry vanishes.
    let phase = apq / Complex::new(r, R::zero());
    let tau = (m[(q, q)].re - m[(p, p)].re) / (r + r);
    let sgn = if tau < R::zero() { -R::one() } else { R::one() };
    let t = sgn / (tau.abs() + (R::one() + tau * tau).sqrt());
    let c = R::one() / (R::one() + t * t).sqrt();
    let s = t * c;
    let cs = Complex::new(c, R::zero());
    let s_ph = phase * s; // U[p][q]
    let n = m.rows;
    // Columns p, q of M ← M · U.
    for i in 0..n {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = mp * cs - mq * s_ph.conj();
        m[(i, q)] = mp * s_ph + mq * cs;
    }
    // Rows p, q of M ← U† · M.
    for j in 0..n {
        let mp = m[(p, j)];
        let mq = m[(q, j)];
        m[(p, j)] = mp * cs - s_ph * mq;
        m[(q, j)] = s_ph.conj() * mp + mq * cs;
    }
    // Columns p, q of V ← V · U.
    for i in 0..v.rows {
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        v[(i, p)] = vp * cs - vq * s_ph.conj();
        v[(i, q)] = vp * s_ph + vq * cs;
    }
}

/// Operator (spectral) norm: the largest singular value.
pub fn operator_norm<R: RealScalar>(a: &Matrix<R>) -> R {
    if a.rows == 0 || a.cols == 0 {
        return R::zero();
    }
    let gram = a.dagger().matmul(a);
    let (eigs, _) = hermitian_eig(&gram);
    eigs[0].max(R::zero()).sqrt()
}

/// Whether `m` is positive semidefinite: Hermitian within `eps` with all
/// eigenvalues at least `-eps`.
pub fn is_psd<R: RealScalar>(m: &Matrix<R>, eps: R) -> bool {
    if m.rows != m.cols || !m.is_hermitian(eps) {
        return false;
    }
    if m.rows == 0 {
        return true;
    }
    let (eigs, _) = hermitian_eig(m);
    eigs[m.rows - 1] >= -eps
}

/// The Choi matrix of a linear map `M_a → M_b` presented as its doubled
/// `b² × a²` matrix: the block matrix `Σ_{ij} Φ(E_ij) ⊗ E_ij` of size `b·a`.
pub fn choi<R: RealScalar>(h: &Matrix<R>, a: usize, b: usize) -> Matrix<R> {
    assert_eq!(h.cols, a * a, "doubled source shape mismatch");
    assert_eq!(h.rows, b * b, "doubled target shape mismatch");
    let mut c = Matrix::zeros(b * a, b * a);
    for i in 0..a {
        for j in 0..a {
            // Φ(E_ij) is the unvectorised column i·a + j of h.
            let phi = Matrix::unvectorise(&h.column(i * a + j), b, b);
            for y in 0..b {
                for y1 in 0..b {
                    c[(y * a + i, y1 * a + j)] = phi[(y, y1)];
                }
            }
        }
    }
    c
}

/// Marker type for the Hilbert-space backend over real scalar `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FHilb<R: RealScalar>(PhantomData<R>);

impl<R: RealScalar> FHilb<R> {
    fn eps_of(tol: &Tolerance) -> R {
        R::from_f64_lossy(tol.eps)
    }
}

impl<R: RealScalar> Backend for FHilb<R> {
    type Obj = usize;
    type Mor = Matrix<R>;

    fn obj_size(a: &usize) -> usize {
        *a
    }

    fn obj_of_size(n: usize) -> usize {
        n
    }

    fn tensor_obj(a: &usize, b: &usize) -> usize {
        a * b
    }

    fn sum_obj(a: &usize, b: &usize) -> usize {
        a + b
    }

    fn src(f: &Matrix<R>) -> usize {
        f.cols
    }

    fn dst(f: &Matrix<R>) -> usize {
        f.rows
    }

    fn id(a: &usize) -> Matrix<R> {
        Matrix::identity(*a)
    }

    fn zero_mor(a: &usize, b: &usize) -> Matrix<R> {
        Matrix::zeros(*b, *a)
    }

    fn then(f: &Matrix<R>, g: &Matrix<R>) -> Matrix<R> {
        g.matmul(f)
    }

    fn dagger(f: &Matrix<R>) -> Matrix<R> {
        f.dagger()
    }

    fn transpose(f: &Matrix<R>) -> Matrix<R> {
        f.transpose()
    }

    fn conjugate(f: &Matrix<R>) -> Matrix<R> {
        f.conjugate()
    }

    fn tensor(f: &Matrix<R>, g: &Matrix<R>) -> Matrix<R> {
        f.kron(g)
    }

    fn plus(f: &Matrix<R>, g: &Matrix<R>) -> Matrix<R> {
        f.add(g)
    }

    fn cup(a: &usize) -> Matrix<R> {
        Matrix::identity(*a).vectorise()
    }

    fn mor_from_pairs(src: &usize, dst: &usize, pairs: &[(usize, usize)]) -> Matrix<R> {
        let mut m = Matrix::zeros(*dst, *src);
        for &(d, s) in pairs {
            m[(d, s)] = Complex::one();
        }
        m
    }

    fn approx_eq(f: &Matrix<R>, g: &Matrix<R>, tol: &Tolerance) -> bool {
        f.max_diff(g) <= Self::eps_of(tol)
    }

    fn residual(f: &Matrix<R>, g: &Matrix<R>) -> f64 {
        f.max_diff(g).to_f64_lossy()
    }

    fn is_positive(f: &Matrix<R>, tol: &Tolerance) -> bool {
        is_psd(f, Self::eps_of(tol))
    }

    fn is_invertible(f: &Matrix<R>, tol: &Tolerance) -> bool {
        if f.rows != f.cols {
            return false;
        }
        if f.rows == 0 {
            return true;
        }
        let (eigs, _) = hermitian_eig(&f.dagger().matmul(f));
        let eps = Self::eps_of(tol);
        eigs[f.rows - 1] > eps * eps
    }

    fn is_completely_positive(h: &Matrix<R>, a: &usize, b: &usize, tol: &Tolerance) -> bool {
        is_psd(&choi(h, *a, *b), Self::eps_of(tol))
    }

    fn positive_sqrt_inverse(q: &Matrix<R>, tol: &Tolerance) -> Result<Matrix<R>, Error> {
        apply_positive_spectral(q, tol, |lam| R::one() / lam.sqrt())
    }

    fn positive_inverse(z: &Matrix<R>, tol: &Tolerance) -> Result<Matrix<R>, Error> {
        apply_positive_spectral(z, tol, |lam| R::one() / lam)
    }
}

/// Apply a spectral function to a positive definite Hermitian matrix,
/// rejecting inputs that are not Hermitian or not strictly positive.
fn apply_positive_spectral<R: RealScalar>(
    m: &Matrix<R>,
    tol: &Tolerance,
    f: impl Fn(R) -> R,
) -> Result<Matrix<R>, Error> {
    let eps = R::from_f64_lossy(tol.eps);
    if m.rows != m.cols || !m.is_hermitian(eps) {
        return Err(Error::NotNormalisable(
            "spectral function requires a Hermitian matrix".into(),
        ));
    }
    let (eigs, v) = hermitian_eig(m);
    if let Some(lam) = eigs.iter().find(|&&lam| lam <= eps) {
        return Err(Error::NotNormalisable(format!(
            "matrix is not positive definite: eigenvalue {}",
            lam.to_f64_lossy()
        )));
    }
    let mapped: Vec<R> = eigs.iter().map(|&lam| f(lam)).collect();
    Ok(v.matmul(&Matrix::diagonal(&mapped)).matmul(&v.dagger()))
}
