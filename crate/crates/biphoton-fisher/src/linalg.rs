//! Minimal dense complex linear algebra for 2x2 and 4x4 operators.
//!
//! Everything the estimation kernels need and nothing more: a row-major
//! complex matrix, a deterministic Jacobi eigensolver for Hermitian input,
//! tensor products in the fixed HH, HV, VH, VV basis, commutator traces,
//! and inversion of 2x2 real symmetric matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Off-diagonal Frobenius mass below which the Jacobi sweep stops.
const JACOBI_TOL: f64 = 1e-14;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of dimension `dim`.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of dimension `dim`.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from row-major entries; `entries.len()` must equal `dim * dim`.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must equal dim^2");
        Self {
            dim,
            data: entries.to_vec(),
        }
    }

    /// Pauli x.
    pub fn pauli_x() -> Self {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        Self::from_rows(2, &[o, l, l, o])
    }

    /// Pauli y.
    pub fn pauli_y() -> Self {
        let o = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        Self::from_rows(2, &[o, -i, i, o])
    }

    /// Pauli z.
    pub fn pauli_z() -> Self {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        Self::from_rows(2, &[l, o, o, -l])
    }

    /// Rank-one projector |v><v| (v need not be normalized).
    pub fn projector(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o += r;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o -= r;
        }
        out
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o *= c;
        }
        out
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(rhs.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self^dag`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Re Tr[self * rhs]; exact for products of Hermitian matrices.
    pub fn trace_product_re(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for k in 0..n {
                acc += (self[(i, k)] * rhs[(k, i)]).re;
            }
        }
        acc
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending,
/// eigenvectors as orthonormal columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.dim).map(|i| self.vectors[(i, k)]).collect()
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Deterministic: fixed pivot order, fixed convergence threshold, so
/// identical input always yields identical output. Rejects input whose
/// Hermiticity error exceeds 1e-12, naming the offending asymmetry.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    let asym = a.hermiticity_error();
    if asym > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
            tolerance: HERMITICITY_TOL,
        });
    }
    let n = a.dim;
    // Work on the exactly Hermitian part (A + A^dag)/2 so rotations keep
    // the diagonal real within rounding.
    let mut m = a.add(&a.dagger()).scaled(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);

    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() < JACOBI_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = m[(p, q)];
                let r = b.norm();
                if r < 1e-300 {
                    continue;
                }
                // Unitary rotation in the (p,q) plane annihilating m[p][q]:
                // columns mix with a phase carrying arg(b).
                let phase = b / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (app - aqq) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let cs = Complex64::new(c, 0.0);
                let sp = phase * s; // s * e^{i arg(b)}

                // M <- U^dag M U with U[p][p]=c, U[p][q]=-sp, U[q][p]=sp^*, U[q][q]=c
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * cs + mkq * sp.conj();
                    m[(k, q)] = -mkp * sp + mkq * cs;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = cs * mpk + sp * mqk;
                    m[(q, k)] = -sp.conj() * mpk + cs * mqk;
                }
                // Clean the rotated pivot pair against rounding drift.
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * cs + vkq * sp.conj();
                    v[(k, q)] = -vkp * sp + vkq * cs;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(HermitianEig { values, vectors })
}

/// Kronecker product of two 2x2 matrices in the basis order HH, HV, VH, VV:
/// `(A (x) B)[(i*2+k), (j*2+l)] = A[i,j] * B[k,l]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.dim, 2, "tensor_product expects 2x2 factors");
    assert_eq!(b.dim, 2, "tensor_product expects 2x2 factors");
    let mut out = ComplexMatrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(i * 2 + k, j * 2 + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Tr[rho (AB - BA)].
///
/// Purely imaginary (real part at rounding level) whenever rho, A, B are
/// all Hermitian.
pub fn commutator_trace(rho: &ComplexMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let ab = a.mul(b);
    let ba = b.mul(a);
    rho.mul(&ab.sub(&ba)).trace()
}

/// 2x2 real symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMat2 {
    pub m00: f64,
    pub m01: f64,
    pub m11: f64,
}

impl SymMat2 {
    pub fn new(m00: f64, m01: f64, m11: f64) -> Self {
        Self { m00, m01, m11 }
    }

    pub fn identity() -> Self {
        Self::new(1.0, 0.0, 1.0)
    }

    pub fn det(&self) -> f64 {
        self.m00 * self.m11 - self.m01 * self.m01
    }

    pub fn trace(&self) -> f64 {
        self.m00 + self.m11
    }

    /// Eigenvalues ascending (closed form).
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * (self.m00 + self.m11);
        let disc = (0.25 * (self.m00 - self.m11).powi(2) + self.m01 * self.m01).sqrt();
        [mean - disc, mean + disc]
    }

    /// Difference `self - rhs`.
    pub fn sub(&self, rhs: &Self) -> Self {
        Self::new(self.m00 - rhs.m00, self.m01 - rhs.m01, self.m11 - rhs.m11)
    }

    /// Tr[self * rhs].
    pub fn trace_product(&self, rhs: &Self) -> f64 {
        self.m00 * rhs.m00 + 2.0 * self.m01 * rhs.m01 + self.m11 * rhs.m11
    }
}

/// Inverse of a 2x2 real symmetric matrix; requires det > 1e-14.
pub fn sym2_inverse(m: &SymMat2) -> Result<SymMat2> {
    let det = m.det();
    if det <= 1e-14 {
        return Err(Error::SingularMatrix { det });
    }
    Ok(SymMat2::new(m.m11 / det, -m.m01 / det, m.m00 / det))
}
