//! Dense complex linear algebra shared by the solver, channel model and rate
//! metrics.
//!
//! Matrices are plain `nalgebra` dense matrices over `Complex64`. The routines
//! here wrap the factorizations with the conventions the rest of the crate
//! depends on: Hermitian eigendecompositions come back with ascending
//! eigenvalues and a fixed eigenvector phase, so subspace selections are
//! reproducible bit for bit.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Tolerance on `‖XᴴX − I‖_F` for matrices that must have orthonormal columns.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Relative tolerance on `‖A − Aᴴ‖_F` accepted by the Hermitian routines.
pub const HERMITIAN_TOL: f64 = 1e-9;

const EIGEN_MAX_ITER: usize = 10_000;

/// Which end of the spectrum [`select_eigvecs`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spectrum {
    Smallest,
    Dominant,
}

/// Full eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Column `j` is the unit eigenvector paired with `values[j]`.
    pub vectors: ComplexMatrix,
}

pub fn frobenius(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_sqr(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

pub fn all_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// `‖XᴴX − I‖_F`.
pub fn orthonormality_error(x: &ComplexMatrix) -> f64 {
    let gram = x.adjoint() * x;
    frobenius(&(gram - identity(x.ncols())))
}

/// Draw one circularly-symmetric complex Gaussian sample with unit variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

/// An `rows × cols` matrix of i.i.d. CN(0, 1) entries, filled row-major.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_row_slice(rows, cols, &data)
}

fn check_square(a: &ComplexMatrix, what: &str) -> Result<()> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::Dimension(format!(
            "{what} requires a non-empty square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if !all_finite(a) {
        return Err(Error::Precondition(format!("{what}: matrix has non-finite entries")));
    }
    Ok(())
}

/// Validate Hermitian symmetry and return `(A + Aᴴ)/2`.
fn symmetrized(a: &ComplexMatrix, what: &str) -> Result<ComplexMatrix> {
    check_square(a, what)?;
    let adj = a.adjoint();
    let asymmetry = frobenius(&(a - &adj));
    let tolerance = HERMITIAN_TOL * (1.0 + frobenius(a));
    if asymmetry > tolerance {
        return Err(Error::NotHermitian {
            asymmetry,
            tolerance,
        });
    }
    Ok((a + adj).unscale(2.0))
}

/// Hermitian eigendecomposition with ascending eigenvalues.
///
/// Each eigenvector is rotated so its largest-magnitude component is real
/// and positive; combined with the stable sort this makes the output a pure
/// function of the input, including inside repeated-eigenvalue subspaces.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenPairs> {
    let n = a.nrows();
    let sym = symmetrized(a, "hermitian_eig")?;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(Error::EigenFailure(n))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        let mut pivot = 0;
        let mut best = -1.0;
        for (i, z) in col.iter().enumerate() {
            let mag = z.norm_sqr();
            if mag > best {
                best = mag;
                pivot = i;
            }
        }
        let p = col[pivot];
        if p.norm() > 0.0 {
            let rot = p.conj() / p.norm();
            col *= rot;
            col[pivot] = Complex64::new(col[pivot].re, 0.0);
        }
        vectors.set_column(dst, &col);
    }
    Ok(EigenPairs { values, vectors })
}

/// Orthonormal basis of the invariant subspace belonging to the `m` smallest
/// or `m` largest eigenvalues.
///
/// `Smallest` columns are in ascending eigenvalue order, `Dominant` columns in
/// descending order.
pub fn select_eigvecs(a: &ComplexMatrix, m: usize, which: Spectrum) -> Result<ComplexMatrix> {
    let n = a.nrows();
    if m == 0 || m > n {
        return Err(Error::Dimension(format!(
            "select_eigvecs: requested {m} eigenvectors of a {n}x{n} matrix"
        )));
    }
    let eig = hermitian_eig(a)?;
    let mut out = ComplexMatrix::zeros(n, m);
    for j in 0..m {
        let src = match which {
            Spectrum::Smallest => j,
            Spectrum::Dominant => n - 1 - j,
        };
        out.set_column(j, &eig.vectors.column(src));
    }
    Ok(out)
}

/// `I − U·Uᴴ`, the orthogonal projector onto the complement of `span(U)`.
pub fn complement_projector(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    if u.ncols() > u.nrows() {
        return Err(Error::Dimension(format!(
            "complement_projector: basis is {}x{}, more columns than rows",
            u.nrows(),
            u.ncols()
        )));
    }
    let err = orthonormality_error(u);
    if err > ORTHONORMAL_TOL {
        return Err(Error::Precondition(format!(
            "complement_projector: columns not orthonormal (error {err:.3e})"
        )));
    }
    Ok(identity(u.nrows()) - u * u.adjoint())
}

/// Natural-log determinant of a Hermitian positive definite matrix via Cholesky.
pub fn logdet_psd(m: &ComplexMatrix) -> Result<f64> {
    let sym = symmetrized(m, "logdet_psd")?;
    let n = sym.nrows();
    let chol = sym
        .cholesky()
        .ok_or_else(|| Error::Singular(format!("{n}x{n} matrix failed Cholesky factorization")))?;
    let l = chol.l_dirty();
    let mut acc = 0.0;
    for i in 0..n {
        // complex Cholesky takes complex square roots of negative pivots
        let p = l[(i, i)];
        if !(p.re > 0.0 && p.re.is_finite() && p.im.abs() <= 1e-8 * p.re) {
            return Err(Error::Singular(format!("{n}x{n} matrix has non-positive pivot {p} at {i}")));
        }
        acc += p.re.ln();
    }
    Ok(2.0 * acc)
}

/// A random `n × m` matrix with orthonormal columns (QR of a Gaussian draw).
pub fn random_orthonormal<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if m == 0 || m > n {
        return Err(Error::Dimension(format!(
            "random_orthonormal: cannot fit {m} orthonormal columns in dimension {n}"
        )));
    }
    let g = gaussian_matrix(n, m, rng);
    Ok(g.qr().q())
}

/// Orthonormal basis of `span(U)⊥`, as the dominant eigenvectors of `I − UUᴴ`.
///
/// Returns an `n × 0` matrix when `U` is square.
pub fn orthonormal_complement(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = u.nrows();
    let p = complement_projector(u)?;
    let m = n - u.ncols();
    if m == 0 {
        return Ok(ComplexMatrix::zeros(n, 0));
    }
    select_eigvecs(&p, m, Spectrum::Dominant)
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}
