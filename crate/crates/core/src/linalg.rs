//! Dense complex linear algebra for small multi-qubit operators.
//!
//! Everything here is sized for the switch scenario: the largest operator is
//! the 128×128 process matrix over seven qubit spaces. Subsystems are ordered
//! left to right with the left factor as the slowest-varying index, so
//! `tensor(a, b)` places `a` on subsystem 0.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance used for structural checks (hermiticity, trace, PSD).
pub const TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build from row-major entries. Fails on a shape mismatch or a
    /// non-finite entry.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != data.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{rows}x{cols} entries"),
                actual: format!("{}", data.len()),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Build from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Column vector from amplitudes.
    pub fn column(amplitudes: &[Complex64]) -> Self {
        ComplexMatrix {
            rows: amplitudes.len(),
            cols: 1,
            data: amplitudes.to_vec(),
        }
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
            }
        }
        m
    }

    /// Single-entry matrix `|row⟩⟨col|`.
    pub fn unit(rows: usize, cols: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(row, col)] = ONE;
        m
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> Complex64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    /// `A ↦ self · A · self†`.
    pub fn conjugate(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &(self * a) * &self.adjoint()
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.max_abs_diff(other) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.adjoint(), tol)
    }

    /// True when every eigenvalue of this Hermitian matrix is at least `-tol`.
    ///
    /// Runs a Cholesky factorisation of `self + tol·I`, which succeeds exactly
    /// when that shifted matrix is positive definite.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol.max(TOL)) {
            return false;
        }
        let n = self.rows;
        let mut l = vec![ZERO; n * n];
        for j in 0..n {
            let mut diag = self[(j, j)].re + tol;
            for k in 0..j {
                diag -= l[j * n + k].norm_sqr();
            }
            if diag <= 0.0 {
                return false;
            }
            let d = diag.sqrt();
            l[j * n + j] = Complex64::new(d, 0.0);
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / d;
            }
        }
        true
    }

    /// Largest singular value, via power iteration on `A†A`.
    pub fn operator_norm(&self) -> f64 {
        let gram = &self.adjoint() * self;
        let n = gram.rows;
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.0 + i as f64 * 0.1, 0.0))
            .collect();
        let mut lambda = 0.0;
        for _ in 0..200 {
            let w = gram.apply(&v);
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            v = w.iter().map(|z| z / norm).collect();
            lambda = norm;
        }
        lambda.sqrt()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes for product");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; `a` becomes the slower (left) factor.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a[(ar, ac)];
            if x == ZERO {
                continue;
            }
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out[(ar * b.rows + br, ac * b.cols + bc)] = x * b[(br, bc)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of factors, left to right.
pub fn tensor_all<'a, It>(factors: It) -> ComplexMatrix
where
    It: IntoIterator<Item = &'a ComplexMatrix>,
{
    let mut it = factors.into_iter();
    let first = it
        .next()
        .expect("tensor_all needs at least one factor")
        .clone();
    it.fold(first, |acc, m| tensor(&acc, m))
}

/// Kronecker product of state vectors.
pub fn tensor_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Normalised pure state with a subsystem layout.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    subsystem_dims: Vec<usize>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, subsystem_dims: Vec<usize>) -> Result<Self> {
        check_layout(amplitudes.len(), &subsystem_dims)?;
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "state norm² is {norm}, expected 1"
            )));
        }
        Ok(PureState {
            amplitudes,
            subsystem_dims,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(index: usize, subsystem_dims: Vec<usize>) -> Result<Self> {
        let dim: usize = subsystem_dims.iter().product();
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self::new(amps, subsystem_dims)
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn phi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState {
            amplitudes: vec![Complex64::new(h, 0.0), ZERO, ZERO, Complex64::new(h, 0.0)],
            subsystem_dims: vec![2, 2],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.subsystem_dims
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
            subsystem_dims: self.subsystem_dims.clone(),
        }
    }
}

/// Unit-trace positive semidefinite operator with a subsystem layout.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    subsystem_dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validating constructor: Hermitian, unit trace and PSD within [`TOL`].
    pub fn new(matrix: ComplexMatrix, subsystem_dims: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                actual: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        check_layout(matrix.rows(), &subsystem_dims)?;
        if !matrix.is_hermitian(TOL) {
            return Err(Error::Validation("density matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TOL || tr.im.abs() > TOL {
            return Err(Error::Validation(format!("density matrix trace is {tr}")));
        }
        if !matrix.is_psd(TOL) {
            return Err(Error::Validation(
                "density matrix has a negative eigenvalue".into(),
            ));
        }
        Ok(DensityMatrix {
            matrix,
            subsystem_dims,
        })
    }

    /// Hermitian operator with a subsystem layout and no trace or positivity
    /// requirement. Useful for checking linear maps such as [`partial_trace`].
    pub fn hermitian_operator(matrix: ComplexMatrix, subsystem_dims: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                actual: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        check_layout(matrix.rows(), &subsystem_dims)?;
        if !matrix.is_hermitian(TOL) {
            return Err(Error::Validation("operator is not Hermitian".into()));
        }
        Ok(DensityMatrix {
            matrix,
            subsystem_dims,
        })
    }

    /// `I/d` over the given layout.
    pub fn maximally_mixed(subsystem_dims: Vec<usize>) -> Self {
        let dim: usize = subsystem_dims.iter().product();
        DensityMatrix {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
            subsystem_dims,
        }
    }

    /// Convex combination `w·self + (1−w)·other`. Layouts must agree.
    pub fn mix(&self, w: f64, other: &DensityMatrix) -> Result<Self> {
        if self.subsystem_dims != other.subsystem_dims {
            return Err(Error::DimensionMismatch {
                expected: format!("{:?}", self.subsystem_dims),
                actual: format!("{:?}", other.subsystem_dims),
            });
        }
        crate::error::check_range("mixing weight", w, 0.0, 1.0)?;
        Ok(DensityMatrix {
            matrix: &self.matrix.scale_real(w) + &other.matrix.scale_real(1.0 - w),
            subsystem_dims: self.subsystem_dims.clone(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.subsystem_dims
    }

    /// Tensor product, `self` on the left.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.subsystem_dims.clone();
        dims.extend_from_slice(&other.subsystem_dims);
        DensityMatrix {
            matrix: tensor(&self.matrix, &other.matrix),
            subsystem_dims: dims,
        }
    }

    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, subsystem_dims: Vec<usize>) -> Self {
        DensityMatrix {
            matrix,
            subsystem_dims,
        }
    }
}

fn check_layout(dim: usize, subsystem_dims: &[usize]) -> Result<()> {
    let product: usize = subsystem_dims.iter().product();
    if subsystem_dims.is_empty() || subsystem_dims.contains(&0) || product != dim {
        return Err(Error::DimensionMismatch {
            expected: format!("product of {subsystem_dims:?}"),
            actual: format!("{dim}"),
        });
    }
    Ok(())
}

/// Reduced state on the `keep` subsystems, in their original relative order.
///
/// Keeping every subsystem returns the input; tracing all of them is done by
/// [`ComplexMatrix::trace`] instead, since the result is a scalar.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.subsystem_dims();
    let n = dims.len();
    if keep.is_empty() {
        return Err(Error::InvalidArgument(
            "partial_trace needs at least one subsystem to keep".into(),
        ));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= n) {
        return Err(Error::InvalidArgument(format!(
            "invalid subsystem set {keep:?} for {n} subsystems"
        )));
    }
    let traced: Vec<usize> = (0..n).filter(|i| !kept.contains(i)).collect();

    // stride of each subsystem in the flattened index
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let offsets = |sel: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &s in sel.iter().rev() {
            off += (idx % dims[s]) * strides[s];
            idx /= dims[s];
        }
        off
    };

    let out_dim: usize = kept.iter().map(|&k| dims[k]).product();
    let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for r in 0..out_dim {
        let ro = offsets(&kept, r);
        for c in 0..out_dim {
            let co = offsets(&kept, c);
            let mut acc = ZERO;
            for t in 0..traced_dim {
                let to = offsets(&traced, t);
                acc += m[(ro + to, co + to)];
            }
            out[(r, c)] = acc;
        }
    }
    let out_dims = kept.iter().map(|&k| dims[k]).collect();
    Ok(DensityMatrix::from_parts_unchecked(out, out_dims))
}

/// `Tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().trace_product(rho.matrix()).re
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity_to_pure(rho: &DensityMatrix, psi: &PureState) -> Result<f64> {
    if rho.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}", rho.dim()),
            actual: format!("{}", psi.dim()),
        });
    }
    let amps = psi.amplitudes();
    let rho_psi = rho.matrix().apply(amps);
    let f: Complex64 = amps.iter().zip(&rho_psi).map(|(a, b)| a.conj() * b).sum();
    Ok(f.re.clamp(0.0, 1.0))
}

/// Pauli matrices and single-qubit basis operators.
pub mod pauli {
    use super::*;

    pub fn id() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![ZERO, -I, I, ZERO]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    /// `|row⟩⟨col|` on a qubit.
    pub fn ketbra(row: usize, col: usize) -> ComplexMatrix {
        ComplexMatrix::unit(2, 2, row, col)
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;

    fn werner(eta: f64) -> DensityMatrix {
        PureState::phi_plus()
            .density()
            .mix(eta, &DensityMatrix::maximally_mixed(vec![2, 2]))
            .unwrap()
    }

    #[test]
    fn tensor_identity() {
        assert!(tensor(&id(), &id()).approx_eq(&ComplexMatrix::identity(4), 0.0));
    }

    #[test]
    fn zz_fixes_00() {
        let zz = tensor(&z(), &z());
        let out = zz.apply(PureState::basis(0, vec![2, 2]).unwrap().amplitudes());
        assert_eq!(out, vec![ONE, ZERO, ZERO, ZERO]);
    }

    #[test]
    fn x_on_first_qubit_of_phi_plus() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let out = tensor(&x(), &id()).apply(PureState::phi_plus().amplitudes());
        // (|10⟩ + |01⟩)/√2 in the |00⟩,|01⟩,|10⟩,|11⟩ ordering
        let expected = [0.0, h, h, 0.0];
        for (z, e) in out.iter().zip(expected) {
            assert!((z.re - e).abs() < 1e-15 && z.im == 0.0);
        }
    }

    #[test]
    fn phi_plus_marginal_is_maximally_mixed() {
        let rho = PureState::phi_plus().density();
        for keep in [0, 1] {
            let red = partial_trace(&rho, &[keep]).unwrap();
            assert!(red.matrix().approx_eq(&id().scale_real(0.5), 1e-15));
        }
    }

    #[test]
    fn product_state_factor_recovered() {
        let a = DensityMatrix::new(
            ComplexMatrix::from_vec(
                2,
                2,
                vec![
                    Complex64::new(0.7, 0.0),
                    Complex64::new(0.1, -0.2),
                    Complex64::new(0.1, 0.2),
                    Complex64::new(0.3, 0.0),
                ],
            )
            .unwrap(),
            vec![2],
        )
        .unwrap();
        let b = DensityMatrix::maximally_mixed(vec![3]);
        let ab = a.tensor(&b);
        let red = partial_trace(&ab, &[0]).unwrap();
        assert!(red.matrix().approx_eq(a.matrix(), 1e-14));
        let red_b = partial_trace(&ab, &[1]).unwrap();
        assert!(red_b.matrix().approx_eq(b.matrix(), 1e-14));
    }

    #[test]
    fn full_trace_is_one() {
        let rho = werner(0.3).tensor(&DensityMatrix::maximally_mixed(vec![2]));
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14);
        let red = partial_trace(&rho, &[0, 2]).unwrap();
        assert!((red.matrix().trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let rho = PureState::phi_plus().density();
        assert!(partial_trace(&rho, &[2]).is_err());
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_trace(&rho, &[0, 0]).is_err());
    }

    #[test]
    fn partial_trace_keeps_relative_order() {
        // |0⟩⟨0| ⊗ |+⟩⟨+| ⊗ |1⟩⟨1|, keep {2, 0}
        let plus = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let m = tensor_all([&ketbra(0, 0), &plus, &ketbra(1, 1)]);
        let rho = DensityMatrix::new(m, vec![2, 2, 2]).unwrap();
        let red = partial_trace(&rho, &[2, 0]).unwrap();
        let expected = tensor(&ketbra(0, 0), &ketbra(1, 1));
        assert!(red.matrix().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&PureState::phi_plus().density()) - 1.0).abs() < TOL);
        assert!((purity(&DensityMatrix::maximally_mixed(vec![2, 2])) - 0.25).abs() < TOL);
        let eta: f64 = 0.981136;
        let p = purity(&werner(eta));
        assert!((p - (eta * eta + (1.0 - eta * eta) / 4.0)).abs() < TOL);
        assert!((p - 0.97197).abs() < 1e-5);
    }

    #[test]
    fn fidelity_examples() {
        let phi = PureState::phi_plus();
        assert!((fidelity_to_pure(&phi.density(), &phi).unwrap() - 1.0).abs() < TOL);
        let mixed = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert!((fidelity_to_pure(&mixed, &phi).unwrap() - 0.25).abs() < TOL);
        for eta in [0.0, 0.4, 0.981136, 1.0] {
            let f = fidelity_to_pure(&werner(eta), &phi).unwrap();
            assert!((f - (eta + (1.0 - eta) / 4.0)).abs() < TOL);
        }
        let qubit = PureState::basis(0, vec![2]).unwrap();
        assert!(fidelity_to_pure(&mixed, &qubit).is_err());
    }

    #[test]
    fn density_validation() {
        let not_psd = ComplexMatrix::from_real(2, 2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(DensityMatrix::new(not_psd, vec![2]).is_err());
        let not_herm = ComplexMatrix::from_real(2, 2, &[0.5, 0.2, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(not_herm, vec![2]).is_err());
        let bad_trace = ComplexMatrix::identity(2);
        assert!(DensityMatrix::new(bad_trace, vec![2]).is_err());
        assert!(
            DensityMatrix::new(ComplexMatrix::identity(4).scale_real(0.25), vec![2, 3]).is_err()
        );
    }

    #[test]
    fn pure_state_norm_checked() {
        assert!(PureState::new(vec![ONE, ONE], vec![2]).is_err());
        assert!(PureState::new(vec![ONE, ZERO], vec![3]).is_err());
    }

    #[test]
    fn operator_norm_of_projector() {
        assert!((ketbra(1, 0).operator_norm() - 1.0).abs() < 1e-12);
        assert!((x().scale_real(0.5).operator_norm() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pauli_algebra() {
        // XY = iZ
        assert!((&x() * &y()).approx_eq(&z().scale(I), 1e-15));
    }
}
