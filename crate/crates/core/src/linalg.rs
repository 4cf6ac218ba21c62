//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Everything here is `O(d^3)` at worst and intended for registers of a few
//! qubits. Matrices are stored row-major. The Hermitian eigensolver is a
//! cyclic complex Jacobi iteration, which is deterministic and accurate to
//! roundoff for the sizes used in this crate.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Relative Hermiticity tolerance accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-8;
/// Eigenvalues below `-PSD_CLAMP` are rejected; those in `[-PSD_CLAMP, 0)` are set to zero.
pub const PSD_CLAMP: f64 = 1e-10;
/// Off-diagonal Frobenius norm at which the Jacobi sweep stops.
pub const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting bad shapes and non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: pos / cols, col: pos % cols });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Builds a matrix from nested rows. Panics on ragged input; intended for literals.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let converted: Vec<Vec<C64>> = rows.iter().map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&converted)
    }

    /// Column vector from amplitudes.
    pub fn column(v: &[C64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// `|a><b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        let mut m = Self::zeros(a.len(), b.len());
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                m[(i, j)] = ai * bj.conj();
            }
        }
        m
    }

    /// `|v><v|`.
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
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

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[C64]) {
        for (i, z) in v.iter().enumerate() {
            self[(i, j)] = *z;
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(C64::conj).collect() }
    }

    /// `(A + A^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let d = dagger(self);
        (self + &d).scale_real(0.5)
    }

    /// `|| A - A^dagger ||_F`.
    pub fn hermitian_residual(&self) -> f64 {
        (self - &dagger(self)).frobenius_norm()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "apply: dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Frobenius distance to another matrix of the same shape.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "distance: shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// Fallible product, for callers that cannot guarantee shapes.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(matmul(self, rhs))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        let out_row = &mut out.data[i * b.cols..(i + 1) * b.cols];
        for k in 0..a.cols {
            let aik = a.data[i * a.cols + k];
            if aik == ZERO {
                continue;
            }
            let b_row = &b.data[k * b.cols..(k + 1) * b.cols];
            for (o, bkj) in out_row.iter_mut().zip(b_row) {
                *o += aik * bkj;
            }
        }
    }
    out
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul: inner dimensions differ");
        matmul(self, rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add: shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub: shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product: `(a ⊗ b)[(i p + k, j q + l)] = a[i, j] b[k, l]` for `b` of shape `p x q`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = (b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(a.rows * p, a.cols * q);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..p {
                for l in 0..q {
                    out[(i * p + k, j * q + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of state vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Conjugate transpose.
pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.cols, a.rows);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out[(j, i)] = a[(i, j)].conj();
        }
    }
    out
}

/// `<a|b>`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
}

/// Traces out every subsystem not listed in `keep`.
///
/// `subsystem_dims` lists the tensor factors in order; the kept factors
/// appear in the result in ascending index order.
pub fn partial_trace(rho: &ComplexMatrix, subsystem_dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if !rho.is_square() {
        return Err(Error::NotSquare { rows: rho.rows, cols: rho.cols });
    }
    if subsystem_dims.is_empty() || subsystem_dims.contains(&0) {
        return Err(Error::DimensionMismatch("subsystem dimensions must be positive".into()));
    }
    let total: usize = subsystem_dims.iter().product();
    if total != rho.rows {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {subsystem_dims:?} multiply to {total}, matrix is {}x{}",
            rho.rows, rho.cols
        )));
    }
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let n = subsystem_dims.len();
    let mut kept = vec![false; n];
    for &k in keep {
        if k >= n {
            return Err(Error::SubsystemOutOfRange { index: k, count: n });
        }
        kept[k] = true;
    }

    // Split every full index into (kept index, traced index).
    let split: Vec<(usize, usize)> = (0..total)
        .map(|mut idx| {
            let mut digits = vec![0usize; n];
            for s in (0..n).rev() {
                digits[s] = idx % subsystem_dims[s];
                idx /= subsystem_dims[s];
            }
            let (mut k, mut t) = (0usize, 0usize);
            for s in 0..n {
                if kept[s] {
                    k = k * subsystem_dims[s] + digits[s];
                } else {
                    t = t * subsystem_dims[s] + digits[s];
                }
            }
            (k, t)
        })
        .collect();
    let out_dim: usize = (0..n).filter(|&s| kept[s]).map(|s| subsystem_dims[s]).product();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for (i, &(ki, ti)) in split.iter().enumerate() {
        for (j, &(kj, tj)) in split.iter().enumerate() {
            if ti == tj {
                out[(ki, kj)] += rho[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    /// Columns are the unit eigenvectors, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(λ)) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            if w == ZERO {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| C64::new(l, 0.0))
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::NotSquare { rows: h.rows, cols: h.cols });
    }
    let norm = h.frobenius_norm();
    let residual = h.hermitian_residual();
    if residual > HERMITIAN_TOL * norm {
        return Err(Error::NotHermitian { residual });
    }
    let n = h.rows;
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let stop = JACOBI_TOL * norm.max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen { eigenvalues, eigenvectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.rows {
        for j in 0..a.cols {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation annihilating `a[p, q]`: `a <- J^dagger a J`, `v <- v J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Negligible relative to both diagonal entries: drop it.
    if mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // J = D P with D = diag(1, e^{-i phi}) on (p, q) and P the real rotation.
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
pub fn psd_sqrt(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(p)?;
    if let Some(&lowest) = eig.eigenvalues.first() {
        if lowest < -PSD_CLAMP {
            return Err(Error::NegativeEigenvalue { value: lowest });
        }
    }
    Ok(eig.reconstruct_with(|l| C64::new(l.max(0.0).sqrt(), 0.0)))
}

/// Modified Gram-Schmidt of `v` against orthonormal `basis`, repeated twice.
/// Returns the residual (not normalized).
pub(crate) fn orthogonalize(v: &[C64], basis: &[Vec<C64>]) -> Vec<C64> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let proj = inner(b, &r);
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= proj * bi;
            }
        }
    }
    r
}

/// Extends orthonormal `columns` (each of length `dim`) to a full basis using
/// canonical basis vectors, skipping any within `skip_tol` of the current span.
pub(crate) fn complete_orthonormal(columns: &[Vec<C64>], dim: usize, skip_tol: f64) -> Vec<Vec<C64>> {
    let mut basis = columns.to_vec();
    let mut extra = Vec::new();
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut e = vec![ZERO; dim];
        e[k] = ONE;
        let r = orthogonalize(&e, &basis);
        let nr = vec_norm(&r);
        if nr < skip_tol {
            continue;
        }
        let unit: Vec<C64> = r.iter().map(|z| z / nr).collect();
        basis.push(unit.clone());
        extra.push(unit);
    }
    extra
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// `[σx, σy, σz]`.
pub fn paulis() -> [ComplexMatrix; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

/// Permutation matrix exchanging two qubits.
pub fn swap_gate() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)), ComplexMatrix::identity(4));
        assert_eq!(kron(&pauli_z(), &ComplexMatrix::identity(2)), ComplexMatrix::from_diag(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn kron_xx_flips_00() {
        let xx = kron(&pauli_x(), &pauli_x());
        let out = xx.apply(&[ONE, ZERO, ZERO, ZERO]);
        // Index-summation oracle: out[r] = sum_c X[r/2][c/2] X[r%2][c%2] e00[c].
        let x = pauli_x();
        for (r, o) in out.iter().enumerate() {
            let want = x[(r / 2, 0)] * x[(r % 2, 0)];
            assert_eq!(*o, want);
        }
        assert_eq!(out, vec![ZERO, ZERO, ZERO, ONE]);
    }

    #[test]
    fn dagger_cases() {
        assert_eq!(dagger(&ComplexMatrix::identity(3)), ComplexMatrix::identity(3));
        assert_eq!(dagger(&pauli_y()), pauli_y());
        let m = ComplexMatrix::new(
            3,
            2,
            vec![c(1.0, 2.0), c(3.0, -1.0), c(0.5, 0.0), c(0.0, 7.0), c(-2.0, 1.5), c(4.0, 4.0)],
        )
        .unwrap();
        let d = dagger(&m);
        assert_eq!((d.rows(), d.cols()), (2, 3));
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(d[(j, i)], m[(i, j)].conj());
            }
        }
        assert_eq!(dagger(&d), m);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(ComplexMatrix::new(2, 2, vec![ONE; 3]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![ONE, c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let p00 = ComplexMatrix::projector(&[ONE, ZERO, ZERO, ZERO]);
        let r = partial_trace(&p00, &[2, 2], &[0]).unwrap();
        assert_eq!(r, ComplexMatrix::from_diag(&[1.0, 0.0]));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = ComplexMatrix::projector(&[c(s, 0.0), ZERO, ZERO, c(s, 0.0)]);
        let r = partial_trace(&phi, &[2, 2], &[0]).unwrap();
        assert!(r.distance(&ComplexMatrix::from_diag(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(partial_trace(&m, &[2, 3], &[0]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(partial_trace(&m, &[2, 2], &[]), Err(Error::EmptyKeep)));
        assert!(matches!(partial_trace(&m, &[2, 2], &[2]), Err(Error::SubsystemOutOfRange { .. })));
        let rect = ComplexMatrix::zeros(4, 2);
        assert!(matches!(partial_trace(&rect, &[2, 2], &[0]), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn eig_small_cases() {
        let e = eig_hermitian(&pauli_z()).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 1.0]);
        let e = eig_hermitian(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0; 4]);
        // rho = (I + 0.5 σx)/2; characteristic polynomial λ² - λ + (1 - 0.25)/4 = 0.
        let rho = (&ComplexMatrix::identity(2) + &pauli_x().scale_real(0.5)).scale_real(0.5);
        let e = eig_hermitian(&rho).unwrap();
        let disc = (1.0f64 - 4.0 * 0.75 / 4.0).sqrt();
        let oracle = [(1.0 - disc) / 2.0, (1.0 + disc) / 2.0];
        assert!((e.eigenvalues[0] - oracle[0]).abs() < 1e-14);
        assert!((e.eigenvalues[1] - oracle[1]).abs() < 1e-14);
        assert!((oracle[0] - 0.25).abs() < 1e-15 && (oracle[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn eig_complex_offdiagonal() {
        let e = eig_hermitian(&pauli_y()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        assert!(e.reconstruct().distance(&pauli_y()) < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn psd_sqrt_cases() {
        assert!(psd_sqrt(&ComplexMatrix::identity(3)).unwrap().distance(&ComplexMatrix::identity(3)) < 1e-15);
        let r = psd_sqrt(&ComplexMatrix::from_diag(&[4.0, 9.0])).unwrap();
        assert!(r.distance(&ComplexMatrix::from_diag(&[2.0, 3.0])) < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = psd_sqrt(&ComplexMatrix::from_diag(&[0.5, 0.5])).unwrap();
        assert!(r.distance(&ComplexMatrix::from_diag(&[h, h])) < 1e-15);
        assert!(matches!(psd_sqrt(&ComplexMatrix::from_diag(&[1.0, -1e-6])), Err(Error::NegativeEigenvalue { .. })));
        // Roundoff-level negatives are clamped.
        let r = psd_sqrt(&ComplexMatrix::from_diag(&[1.0, -1e-12])).unwrap();
        assert!(r.distance(&ComplexMatrix::from_diag(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn completion_is_orthonormal() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let cols = vec![vec![c(s, 0.0), c(0.0, s), ZERO]];
        let extra = complete_orthonormal(&cols, 3, 1e-8);
        assert_eq!(extra.len(), 2);
        let all: Vec<_> = cols.iter().chain(&extra).collect();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner(a, b) - C64::new(want, 0.0)).norm() < 1e-14);
            }
        }
    }
}
