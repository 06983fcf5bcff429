//! Small dense complex linear algebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative tolerance on `|M - M†|` accepted by [`Hermitian::new`].
pub const HERMITIAN_RTOL: f64 = 1e-12;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Largest entry modulus of `M - M†`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entry modulus of `U†U - I`.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let gram = u.adjoint() * u;
    max_abs_diff(&gram, &CMatrix::identity(u.nrows(), u.ncols()))
}

/// `|v⟩⟨w|`.
pub fn outer(v: &CVector, w: &CVector) -> CMatrix {
    v * w.adjoint()
}

/// `⟨v|w⟩`.
pub fn inner(v: &CVector, w: &CVector) -> Complex64 {
    v.dotc(w)
}

/// `⟨v|M|w⟩`.
pub fn matrix_element(v: &CVector, m: &CMatrix, w: &CVector) -> Complex64 {
    v.dotc(&(m * w))
}

/// `P† M P` for an isometry whose columns span the target subspace.
pub fn project(m: &CMatrix, basis: &CMatrix) -> CMatrix {
    basis.adjoint() * m * basis
}

/// A square complex matrix known to equal its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermitian(CMatrix);

/// Spectrum of a Hermitian matrix: ascending eigenvalues and orthonormal
/// eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Hermitian {
    /// Checks `M = M†` to [`HERMITIAN_RTOL`] relative to the largest entry and
    /// stores the symmetrized matrix.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let deviation = hermiticity_error(&m);
        let scale = max_abs(&m);
        if deviation > HERMITIAN_RTOL * scale {
            return Err(Error::NotHermitian { deviation });
        }
        let sym = (&m + m.adjoint()) * re(0.5);
        Ok(Hermitian(sym))
    }

    /// Builds a real symmetric matrix from row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_row_iterator(
            dim,
            dim,
            entries.iter().map(|&x| re(x)),
        ))
    }

    pub fn zeros(dim: usize) -> Self {
        Hermitian(CMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    /// Induced ∞-norm, an upper bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        row_sum_norm(&self.0)
    }

    pub fn eig(&self) -> EigenDecomposition {
        hermitian_eig(self)
    }

    /// `exp(-i H t)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        matrix_exp_unitary(self, t)
    }
}

/// Induced ∞-norm (maximum absolute row sum).
pub fn row_sum_norm(m: &CMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending. Each eigenvector is rephased so that its
/// first component of non-negligible modulus is real and positive, which makes
/// dressed-state signs reproducible across runs and platforms.
pub fn hermitian_eig(h: &Hermitian) -> EigenDecomposition {
    let n = h.dim();
    if n == 0 {
        return EigenDecomposition {
            values: vec![],
            vectors: CMatrix::zeros(0, 0),
        };
    }
    let decomposition = SymmetricEigen::new(h.matrix().clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        decomposition.eigenvalues[a]
            .partial_cmp(&decomposition.eigenvalues[b])
            .expect("NaN eigenvalue")
    });

    let values = order.iter().map(|&k| decomposition.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut v = decomposition.eigenvectors.column(k).into_owned();
        let norm = v.norm();
        v /= re(norm);
        if let Some(pivot) = v.iter().find(|z| z.norm() > 1e-10).copied() {
            v *= pivot.conj() / pivot.norm();
        }
        vectors.set_column(col, &v);
    }
    EigenDecomposition { values, vectors }
}

/// `exp(-i H t)` through the eigendecomposition of `H`.
pub fn matrix_exp_unitary(h: &Hermitian, t: f64) -> CMatrix {
    let eig = h.eig();
    spectral_function(&eig, |lambda| (-I * lambda * t).exp())
}

/// `V f(Λ) V†`.
pub fn spectral_function(eig: &EigenDecomposition, f: impl Fn(f64) -> Complex64) -> CMatrix {
    let mut scaled = eig.vectors.clone();
    for (k, &lambda) in eig.values.iter().enumerate() {
        let w = f(lambda);
        for z in scaled.column_mut(k).iter_mut() {
            *z *= w;
        }
    }
    scaled * eig.vectors.adjoint()
}

impl EigenDecomposition {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> CMatrix {
        spectral_function(self, re)
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }
}

/// Smallest eigenvalue of a Hermitian part, used for positivity checks.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    let sym = (m + m.adjoint()) * re(0.5);
    SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
