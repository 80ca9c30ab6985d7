//! Dense complex linear algebra for small quantum registers.
//!
//! Everything here is sized for systems of at most six qubits, so vectors and
//! matrices are plain row-major `Vec`s and every operation allocates its
//! result. Shapes are checked on every call and reported through
//! [`QssError::Shape`].

mod eigen;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{QssError, Result};

pub use eigen::{hermitian_eigen, HermitianEigen};

/// A complex probability amplitude.
pub type Amplitude = Complex64;

/// Largest vector length / matrix side accepted by [`tensor`].
pub const MAX_DIM: usize = 64;

/// Tolerance for structural checks (Hermitian, unitary, normalized).
pub const STRUCT_TOL: f64 = 1e-10;

pub const ZERO: Amplitude = Complex64::new(0.0, 0.0);
pub const ONE: Amplitude = Complex64::new(1.0, 0.0);
pub const I: Amplitude = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Amplitude {
    Complex64::new(re, im)
}

#[derive(Clone, PartialEq)]
pub struct CVector {
    data: Vec<Amplitude>,
}

impl CVector {
    pub fn new(data: Vec<Amplitude>) -> Result<Self> {
        if data.is_empty() {
            return Err(QssError::Shape("vector must have positive dimension".into()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QssError::InvalidArgument("non-finite amplitude".into()));
        }
        Ok(Self { data })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "vector must have positive dimension");
        Self { data: vec![ZERO; dim] }
    }

    /// Computational basis ket `|index>` of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut v = Self::zeros(dim);
        v.data[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Amplitude] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Amplitude> {
        self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns the normalized vector, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n <= f64::MIN_POSITIVE {
            return None;
        }
        Some(self.scale(c(1.0 / n, 0.0)))
    }

    pub fn scale(&self, k: Amplitude) -> Self {
        Self {
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_dim(self, other)?;
        Ok(Self {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_dim(self, other)?;
        Ok(Self {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn conj(&self) -> Self {
        Self {
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Largest entrywise magnitude difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_same_dim(self, other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Entrywise distance after removing the best global phase between the two
    /// vectors. Zero iff `self = e^{i theta} other`.
    pub fn phase_distance(&self, other: &Self) -> Result<f64> {
        let overlap = inner(other, self)?;
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        self.max_abs_diff(&other.scale(phase))
    }

    /// Outer product `|self><other|`.
    pub fn outer(&self, other: &Self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), other.dim());
        for (i, a) in self.data.iter().enumerate() {
            for (j, b) in other.data.iter().enumerate() {
                m[(i, j)] = a * b.conj();
            }
        }
        m
    }

    /// Rank-one projector `|self><self|`.
    pub fn projector(&self) -> CMatrix {
        self.outer(self)
    }
}

impl Index<usize> for CVector {
    type Output = Amplitude;
    fn index(&self, i: usize) -> &Amplitude {
        &self.data[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut Amplitude {
        &mut self.data[i]
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.data.iter().map(|z| (z.re, z.im)))
            .finish()
    }
}

fn check_same_dim(a: &CVector, b: &CVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(QssError::Shape(format!(
            "vector dimensions differ: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Amplitude>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows * cols > 0, "matrix must be non-empty");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Amplitude>]) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if r == 0 || cols == 0 || rows.iter().any(|row| row.len() != cols) {
            return Err(QssError::Shape("ragged or empty row list".into()));
        }
        Ok(Self {
            rows: r,
            cols,
            data: rows.concat(),
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Amplitude>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(values: &[Amplitude]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[CVector]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map(CVector::dim).unwrap_or(0);
        if cols == 0 || columns.iter().any(|v| v.dim() != rows) {
            return Err(QssError::Shape("ragged or empty column list".into()));
        }
        let mut m = Self::zeros(rows, cols);
        for (j, v) in columns.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = v[i];
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector {
            data: (0..self.rows).map(|i| self[(i, j)]).collect(),
        }
    }

    pub fn trace(&self) -> Amplitude {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, k: Amplitude) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max absolute entry of `self - self^dagger`; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Max absolute entry of `self self^dagger - I`.
    pub fn unitary_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let prod = matmul(self, &adjoint(self)).expect("square shapes agree");
        prod.max_abs_diff(&Self::identity(self.rows))
            .expect("square shapes agree")
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(QssError::Shape(format!(
                "matrix shapes differ: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Amplitude;
    fn index(&self, (i, j): (usize, usize)) -> &Amplitude {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Amplitude {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Operands accepted by [`tensor`].
pub trait Kronecker: Sized {
    fn kron(&self, other: &Self) -> Result<Self>;
}

impl Kronecker for CVector {
    fn kron(&self, other: &Self) -> Result<Self> {
        let dim = self.dim() * other.dim();
        if dim > MAX_DIM {
            return Err(QssError::DimensionTooLarge { dim, max: MAX_DIM });
        }
        let mut data = Vec::with_capacity(dim);
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Ok(Self { data })
    }
}

impl Kronecker for CMatrix {
    fn kron(&self, other: &Self) -> Result<Self> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        if rows.max(cols) > MAX_DIM {
            return Err(QssError::DimensionTooLarge {
                dim: rows.max(cols),
                max: MAX_DIM,
            });
        }
        let mut m = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        Ok(m)
    }
}

/// Kronecker product; the left operand is the most-significant factor.
pub fn tensor<T: Kronecker>(a: &T, b: &T) -> Result<T> {
    a.kron(b)
}

/// Kronecker product of a non-empty list, folded left to right.
pub fn tensor_all<T: Kronecker + Clone>(factors: &[T]) -> Result<T> {
    let (first, rest) = factors.split_first().ok_or(QssError::EmptySet)?;
    rest.iter().try_fold(first.clone(), |acc, f| acc.kron(f))
}

pub fn adjoint(m: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(m.cols, m.rows);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out[(j, i)] = m[(i, j)].conj();
        }
    }
    out
}

pub fn matmul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.cols != b.rows {
        return Err(QssError::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = CMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a[(i, k)];
            if aik == ZERO {
                continue;
            }
            for j in 0..b.cols {
                out[(i, j)] += aik * b[(k, j)];
            }
        }
    }
    Ok(out)
}

pub fn apply(m: &CMatrix, v: &CVector) -> Result<CVector> {
    if m.cols != v.dim() {
        return Err(QssError::Shape(format!(
            "cannot apply {}x{} matrix to vector of dimension {}",
            m.rows,
            m.cols,
            v.dim()
        )));
    }
    let data = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m[(i, j)] * v[j]).sum())
        .collect();
    Ok(CVector { data })
}

/// `<u|v>`, conjugate-linear in `u`.
pub fn inner(u: &CVector, v: &CVector) -> Result<Amplitude> {
    check_same_dim(u, v)?;
    Ok(u.data.iter().zip(&v.data).map(|(a, b)| a.conj() * b).sum())
}

/// Trace norm `Tr sqrt(M^dagger M)`, computed as the sum of absolute
/// eigenvalues. Only Hermitian input is accepted.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    let eig = hermitian_eigen(m)?;
    Ok(eig.values.iter().map(|x| x.abs()).sum())
}

/// Reduced operator over the factors listed in `keep`.
///
/// `dims` lists the factor dimensions most-significant first and `keep` holds
/// factor indices; the kept factors appear in the result in ascending order.
pub fn partial_trace(rho: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) {
        return Err(QssError::Shape("factor dimensions must be positive".into()));
    }
    if !rho.is_square() || rho.rows != total {
        return Err(QssError::Shape(format!(
            "operator is {}x{} but factor dimensions {:?} multiply to {}",
            rho.rows, rho.cols, dims, total
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= dims.len()) {
        return Err(QssError::Shape(format!(
            "keep set {keep:?} is invalid for {} factors",
            dims.len()
        )));
    }
    let dev = rho.hermitian_deviation();
    if dev > STRUCT_TOL {
        return Err(QssError::NotHermitian { deviation: dev });
    }

    let is_kept: Vec<bool> = (0..dims.len()).map(|f| kept.contains(&f)).collect();
    let out_dim: usize = kept.iter().map(|&k| dims[k]).product();
    let split = |index: usize| -> (usize, usize) {
        // (kept multi-index, traced multi-index) flattened in factor order.
        let mut rem = index;
        let mut kept_idx = 0;
        let mut kept_stride = 1;
        let mut traced_idx = 0;
        let mut traced_stride = 1;
        for f in (0..dims.len()).rev() {
            let digit = rem % dims[f];
            rem /= dims[f];
            if is_kept[f] {
                kept_idx += digit * kept_stride;
                kept_stride *= dims[f];
            } else {
                traced_idx += digit * traced_stride;
                traced_stride *= dims[f];
            }
        }
        (kept_idx, traced_idx)
    };
    let parts: Vec<(usize, usize)> = (0..total).map(split).collect();
    let mut out = CMatrix::zeros(out_dim, out_dim);
    for i in 0..total {
        let (ki, ti) = parts[i];
        for j in 0..total {
            let (kj, tj) = parts[j];
            if ti == tj {
                out[(ki, kj)] += rho[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Result of a cross-Gram orthogonality test between two vector sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramCheck {
    pub orthogonal: bool,
    pub max_overlap: f64,
}

/// Tests whether every vector of `set1` is orthogonal to every vector of `set2`,
/// i.e. whether the spanned subspaces are orthogonal.
pub fn cross_gram_is_zero(set1: &[CVector], set2: &[CVector], tol: f64) -> Result<GramCheck> {
    if set1.is_empty() || set2.is_empty() {
        return Err(QssError::EmptySet);
    }
    let mut max_overlap: f64 = 0.0;
    for u in set1 {
        for v in set2 {
            max_overlap = max_overlap.max(inner(u, v)?.norm());
        }
    }
    Ok(GramCheck {
        orthogonal: max_overlap <= tol,
        max_overlap,
    })
}

/// Extends `seed` (assumed orthonormal) to an orthonormal basis of the full space
/// by Gram-Schmidt against the computational basis.
pub fn complete_orthonormal_basis(seed: &[CVector], dim: usize) -> Result<Vec<CVector>> {
    let mut basis: Vec<CVector> = Vec::with_capacity(dim);
    for v in seed {
        if v.dim() != dim {
            return Err(QssError::Shape("seed vector has wrong dimension".into()));
        }
        basis.push(v.clone());
    }
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut candidate = CVector::basis(dim, k);
        // Two passes keep the result orthogonal to working precision.
        for _ in 0..2 {
            for b in &basis {
                let proj = inner(b, &candidate)?;
                candidate = candidate.sub(&b.scale(proj))?;
            }
        }
        if candidate.norm() > 1e-8 {
            basis.push(candidate.normalized().expect("nonzero candidate"));
        }
    }
    if basis.len() != dim {
        return Err(QssError::Inconsistent(
            "could not complete orthonormal basis".into(),
        ));
    }
    Ok(basis)
}

/// Binary Shannon entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}
