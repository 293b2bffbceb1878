//! Correlation and covariance tensors.
//!
//! An order-`2N` tensor over mode sizes `I_1, ..., I_N, I_1, ..., I_N`
//! describes the second-order structure of an order-`N` random tensor: entry
//! `[i, i']` is the correlation between components `i` and `i'`. Correlation
//! can be restricted to a subset of modes (components decorrelate unless all
//! unrestricted indices agree) or factor across all modes (separable, i.e.
//! Kronecker structure after matricization).

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::VALIDATION_TOL;
use crate::algebra::{dematricize, hermitian_deviation, matricize};
use crate::error::{Error, Result};
use crate::shape::{ModeSplit, Shape};
use crate::tensor::DenseTensor;

/// Relative eigenvalue threshold for treating a correlation as positive
/// semidefinite: eigenvalues in `[-tol * lambda_max, 0)` are clamped to zero,
/// anything lower is an error.
pub(crate) const PSD_CLAMP_REL: f64 = 1e-8;

/// Role of an order-`2N` second-order statistic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrelationKind {
    /// Uncentered second moment `E[X o X*]`.
    Correlation,
    /// Centered second moment `E[(X-M) o (X-M)*]`.
    Covariance,
    /// Unconjugated second moment `E[(X-M) o (X-M)]`.
    PseudoCovariance,
    /// Augmented covariance with the trailing size-2 mode on each side.
    Augmented,
}

/// Validated order-`2N` second-order statistic.
///
/// Construction checks that the order is even, the two mode groups agree,
/// and the tensor has the symmetry its kind demands: Hermitian for
/// correlation, covariance, and augmented kinds, plain symmetry for the
/// pseudo-covariance.
#[derive(Clone, Debug)]
pub struct CorrelationTensor {
    value: DenseTensor,
    kind: CorrelationKind,
}

impl CorrelationTensor {
    pub fn new(value: DenseTensor, kind: CorrelationKind) -> Result<Self> {
        let order = value.order();
        if order == 0 || order % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "correlation tensor must have positive even order, got {order}"
            )));
        }
        let split = ModeSplit::square(order / 2);
        value.shape().require_square(split)?;
        match kind {
            CorrelationKind::Correlation
            | CorrelationKind::Covariance
            | CorrelationKind::Augmented => {
                let dev = hermitian_deviation(&value, split)?;
                if dev > VALIDATION_TOL {
                    return Err(Error::NotHermitian {
                        deviation: dev,
                        tol: VALIDATION_TOL,
                    });
                }
            }
            CorrelationKind::PseudoCovariance => {
                let m = matricize(&value, split)?;
                let dev = (&m - m.transpose()).map(|z| z.norm()).max();
                if dev > VALIDATION_TOL {
                    return Err(Error::InvalidArgument(format!(
                        "pseudo-covariance must be symmetric, deviation {dev:.3e}"
                    )));
                }
            }
        }
        Ok(Self { value, kind })
    }

    /// Identity correlation over the given mode sizes.
    pub fn identity(dims: &[usize]) -> Result<Self> {
        Ok(Self {
            value: crate::algebra::identity_tensor(dims)?,
            kind: CorrelationKind::Correlation,
        })
    }

    pub fn value(&self) -> &DenseTensor {
        &self.value
    }

    pub fn kind(&self) -> CorrelationKind {
        self.kind
    }

    /// Number of modes of the underlying random tensor.
    pub fn n_modes(&self) -> usize {
        self.value.order() / 2
    }

    /// Mode sizes of the underlying random tensor.
    pub fn mode_dims(&self) -> &[usize] {
        &self.value.dims()[..self.n_modes()]
    }

    /// The natural square split `(N|N)`.
    pub fn split(&self) -> ModeSplit {
        ModeSplit::square(self.n_modes())
    }

    /// Matricized view, a `K x K` matrix with `K` the element count of the
    /// underlying tensor shape.
    pub fn matricized(&self) -> DMatrix<Complex64> {
        matricize(&self.value, self.split()).expect("split validated at construction")
    }

    /// Hermitian square root through the eigendecomposition of the
    /// matricization (see [`correlation_sqrt`]).
    pub fn sqrt(&self) -> Result<DenseTensor> {
        if self.kind == CorrelationKind::PseudoCovariance {
            return Err(Error::InvalidArgument(
                "pseudo-covariance has no Hermitian square root".into(),
            ));
        }
        let root = psd_sqrt(&self.matricized())?;
        dematricize(&root, self.value.shape(), self.split())
    }
}

/// Hermitian square root `C` of a correlation tensor, with `C *_N C = R`.
///
/// Computed from the eigendecomposition of the matricization. Eigenvalues in
/// `[-1e-8 * lambda_max, 0)` are treated as rounding noise and clamped to
/// zero; anything more negative fails.
///
/// # Errors
///
/// Returns [`Error::NotPositiveSemidefinite`] when an eigenvalue falls below
/// the clamping threshold.
pub fn correlation_sqrt(r: &CorrelationTensor) -> Result<DenseTensor> {
    r.sqrt()
}

/// Hermitian PSD square root of a matrix, with the clamping rule of
/// [`correlation_sqrt`].
pub(crate) fn psd_sqrt(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let (vals, vecs) = hermitian_eigen(m);
    let lambda_max = vals.iter().cloned().fold(0.0_f64, f64::max);
    let threshold = PSD_CLAMP_REL * lambda_max;
    let mut roots = Vec::with_capacity(vals.len());
    for &v in &vals {
        if v < -threshold {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: v,
                threshold: -threshold,
            });
        }
        roots.push(v.max(0.0).sqrt());
    }
    let mut scaled = vecs.clone();
    for (j, &r) in roots.iter().enumerate() {
        scaled
            .column_mut(j)
            .scale_mut(r);
    }
    Ok(&scaled * vecs.adjoint())
}

/// Real symmetric PSD square root with the same clamping rule.
pub(crate) fn psd_sqrt_real(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let sym = nalgebra::linalg::SymmetricEigen::new(m.clone());
    let lambda_max = sym.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let threshold = PSD_CLAMP_REL * lambda_max;
    let mut roots = Vec::with_capacity(sym.eigenvalues.len());
    for &v in sym.eigenvalues.iter() {
        if v < -threshold {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: v,
                threshold: -threshold,
            });
        }
        roots.push(v.max(0.0).sqrt());
    }
    let mut scaled = sym.eigenvectors.clone();
    for (j, &r) in roots.iter().enumerate() {
        scaled.column_mut(j).scale_mut(r);
    }
    Ok(&scaled * sym.eigenvectors.transpose())
}

/// Eigendecomposition of a Hermitian matrix: `(eigenvalues, eigenvectors)`
/// with eigenvalues in no particular order (callers sort).
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let sym = nalgebra::linalg::SymmetricEigen::new(m.clone());
    (sym.eigenvalues.iter().cloned().collect(), sym.eigenvectors)
}

/// Builds a correlation tensor whose correlation is restricted to the listed
/// modes: entry `[i, i']` is the product of the per-mode factors over the
/// listed modes when every unlisted index pair agrees, and zero otherwise.
///
/// `factors[k]` is the Hermitian correlation matrix of mode `modes[k]`. An
/// empty mode list yields the identity (fully uncorrelated) tensor.
///
/// # Errors
///
/// Rejects out-of-range or repeated modes, factor dimension mismatches, and
/// non-Hermitian factors.
pub fn build_mode_restricted_correlation(
    dims: &[usize],
    modes: &[usize],
    factors: &[DMatrix<Complex64>],
) -> Result<CorrelationTensor> {
    if modes.len() != factors.len() {
        return Err(Error::InvalidArgument(format!(
            "{} modes listed but {} factors supplied",
            modes.len(),
            factors.len()
        )));
    }
    let mut seen = vec![false; dims.len()];
    for (&m, f) in modes.iter().zip(factors) {
        if m >= dims.len() || seen[m] {
            return Err(Error::InvalidModes {
                order: dims.len(),
                detail: format!("mode list {modes:?} has out-of-range or repeated entries"),
            });
        }
        seen[m] = true;
        if f.nrows() != dims[m] || f.ncols() != dims[m] {
            return Err(Error::DimMismatch {
                context: "build_mode_restricted_correlation",
                left: vec![f.nrows(), f.ncols()],
                right: vec![dims[m], dims[m]],
            });
        }
        check_hermitian_matrix(f)?;
    }

    let mut full = dims.to_vec();
    full.extend_from_slice(dims);
    let shape = Shape::new(full)?;
    let n = dims.len();
    let value = DenseTensor::from_fn(shape, |idx| {
        let (i, ip) = idx.split_at(n);
        let mut v = Complex64::new(1.0, 0.0);
        for (m, (&a, &b)) in i.iter().zip(ip).enumerate() {
            match modes.iter().position(|&mm| mm == m) {
                Some(k) => v *= factors[k][(a, b)],
                None if a != b => return Complex64::new(0.0, 0.0),
                None => {}
            }
        }
        v
    });
    CorrelationTensor::new(value, CorrelationKind::Correlation)
}

/// Separable correlation: one Hermitian factor per mode, correlation entries
/// factor as the product of per-mode factors.
#[derive(Clone, Debug)]
pub struct SeparableCorrelation {
    factors: Vec<DMatrix<Complex64>>,
}

impl SeparableCorrelation {
    /// # Errors
    ///
    /// Rejects an empty factor list and non-Hermitian or non-square factors.
    pub fn new(factors: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument(
                "separable correlation needs at least one factor".into(),
            ));
        }
        for f in &factors {
            if f.nrows() != f.ncols() || f.nrows() == 0 {
                return Err(Error::InvalidArgument(format!(
                    "separable factor must be square and non-empty, got {}x{}",
                    f.nrows(),
                    f.ncols()
                )));
            }
            check_hermitian_matrix(f)?;
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[DMatrix<Complex64>] {
        &self.factors
    }

    /// Mode sizes of the underlying random tensor.
    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.nrows()).collect()
    }

    /// Expands to the full order-`2N` correlation tensor with entries
    /// `R[i, i'] = prod_n factor_n[i_n, i'_n]`.
    pub fn to_full(&self) -> Result<CorrelationTensor> {
        let dims = self.dims();
        let modes: Vec<usize> = (0..dims.len()).collect();
        build_mode_restricted_correlation(&dims, &modes, &self.factors)
    }

    /// PSD square roots of the per-mode factors, used by the separable
    /// sampler.
    pub fn factor_sqrts(&self) -> Result<Vec<DMatrix<Complex64>>> {
        self.factors.iter().map(psd_sqrt).collect()
    }
}

/// Free parameters of an unstructured Hermitian correlation of an order-`n`
/// tensor with every mode of size `l`: `(l^(2n) + l^n) / 2`.
pub fn full_parameter_count(l: usize, n: usize) -> Result<u128> {
    let k = (l as u128)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::InvalidArgument("parameter count overflows".into()))?;
    let sq = k
        .checked_mul(k)
        .ok_or_else(|| Error::InvalidArgument("parameter count overflows".into()))?;
    Ok((sq + k) / 2)
}

/// Free parameters of a separable correlation with `n` factors of size `l`:
/// `n (l^2 + l) / 2`.
pub fn separable_parameter_count(l: usize, n: usize) -> Result<u128> {
    let per = (l as u128) * (l as u128 + 1) / 2;
    per.checked_mul(n as u128)
        .ok_or_else(|| Error::InvalidArgument("parameter count overflows".into()))
}

fn check_hermitian_matrix(m: &DMatrix<Complex64>) -> Result<()> {
    let mut dev: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..=j {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if dev > VALIDATION_TOL {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: VALIDATION_TOL,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::einstein_product;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_mode_factor(rho: Complex64) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), rho, rho.conj(), c(1.0, 0.0)])
    }

    #[test]
    fn construction_validates_hermitian_symmetry() {
        let mut t = crate::algebra::identity_tensor(&[2]).unwrap();
        t.set(&[0, 1], c(0.3, 0.1));
        // Missing the conjugate partner: not Hermitian.
        assert!(CorrelationTensor::new(t.clone(), CorrelationKind::Covariance).is_err());
        t.set(&[1, 0], c(0.3, -0.1));
        assert!(CorrelationTensor::new(t, CorrelationKind::Covariance).is_ok());
    }

    #[test]
    fn pseudo_covariance_requires_symmetry_not_hermitian() {
        let mut t = DenseTensor::zeros(Shape::new([2, 2]).unwrap());
        t.set(&[0, 1], c(0.0, 0.5));
        t.set(&[1, 0], c(0.0, 0.5));
        // Symmetric with imaginary off-diagonal: valid pseudo-covariance,
        // invalid covariance.
        assert!(CorrelationTensor::new(t.clone(), CorrelationKind::PseudoCovariance).is_ok());
        assert!(CorrelationTensor::new(t, CorrelationKind::Covariance).is_err());
    }

    #[test]
    fn sqrt_squares_back_to_the_correlation() {
        let r = build_mode_restricted_correlation(
            &[2, 2],
            &[0, 1],
            &[two_mode_factor(c(0.5, 0.2)), two_mode_factor(c(0.3, 0.0))],
        )
        .unwrap();
        let root = r.sqrt().unwrap();
        let square = einstein_product(&root, &root, 2).unwrap();
        let err = square.sub(r.value()).unwrap().frobenius_norm();
        assert!(err < 1e-12, "sqrt reconstruction error {err}");
        // The root is Hermitian by construction.
        assert!(
            crate::algebra::is_hermitian(&root, ModeSplit::square(2), 1e-10).unwrap()
        );
    }

    #[test]
    fn sqrt_rejects_indefinite_input() {
        let mut t = crate::algebra::identity_tensor(&[2]).unwrap();
        t.set(&[0, 0], c(-1.0, 0.0)); // eigenvalue -1
        let r = CorrelationTensor::new(t, CorrelationKind::Covariance).unwrap();
        assert!(matches!(
            r.sqrt(),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn sqrt_clamps_rounding_noise() {
        // Diagonal with a tiny negative eigenvalue within the clamp band.
        let mut t = crate::algebra::identity_tensor(&[2]).unwrap();
        t.set(&[0, 0], c(-1e-12, 0.0));
        let r = CorrelationTensor::new(t, CorrelationKind::Covariance).unwrap();
        let root = r.sqrt().unwrap();
        assert!(root.get(&[0, 0]).norm() < 1e-6);
    }

    #[test]
    fn mode_restricted_support_on_2x2x2() {
        // Correlation restricted to the first mode of a 2x2x2 tensor:
        // nonzero exactly when both unlisted index pairs agree.
        let rho = c(0.5, 0.0);
        let r = build_mode_restricted_correlation(&[2, 2, 2], &[0], &[two_mode_factor(rho)])
            .unwrap();
        let mut nonzero = 0;
        for flat in 0..r.value().len() {
            let idx = r.value().shape().multi_index(flat);
            let v = r.value().data()[flat];
            let support = idx[1] == idx[4] && idx[2] == idx[5];
            if support {
                nonzero += 1;
                let expect = if idx[0] == idx[3] { c(1.0, 0.0) } else { rho };
                assert_eq!(v, expect, "at {idx:?}");
            } else {
                assert_eq!(v, c(0.0, 0.0), "off support at {idx:?}");
            }
        }
        // 2 x 2 choices for the restricted pair, 4 matching positions for the
        // other two modes.
        assert_eq!(nonzero, 16);
    }

    #[test]
    fn empty_mode_list_gives_identity() {
        let r = build_mode_restricted_correlation(&[2, 3], &[], &[]).unwrap();
        let id = crate::algebra::identity_tensor(&[2, 3]).unwrap();
        assert_eq!(r.value(), &id);
    }

    #[test]
    fn separable_full_matches_kronecker_of_factors() {
        let f1 = two_mode_factor(c(0.5, 0.1));
        let f2 = two_mode_factor(c(-0.2, 0.3));
        let sep = SeparableCorrelation::new(vec![f1.clone(), f2.clone()]).unwrap();
        let full = sep.to_full().unwrap();
        // Matricized separable correlation is factor_2 (x) factor_1 because
        // the first mode varies fastest in the linearization.
        let kron = f2.kronecker(&f1);
        let m = full.matricized();
        assert!((m - kron).map(|z| z.norm()).max() < 1e-14);
    }

    #[test]
    fn parameter_counts_match_closed_forms() {
        // 4^6 = 4096 full entries: (4096 + 64) / 2 parameters.
        assert_eq!(full_parameter_count(4, 3).unwrap(), 2080);
        assert_eq!(separable_parameter_count(4, 3).unwrap(), 30);
        assert_eq!(full_parameter_count(2, 1).unwrap(), 3);
        assert_eq!(separable_parameter_count(2, 1).unwrap(), 3);
    }

    #[test]
    fn factor_validation() {
        let bad = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.1), c(0.5, 0.1), c(1.0, 0.0)]);
        assert!(SeparableCorrelation::new(vec![bad]).is_err());
        assert!(build_mode_restricted_correlation(&[2], &[0, 0], &[]).is_err());
    }
}
