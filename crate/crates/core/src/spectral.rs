//! Tensor eigendecomposition and singular value decomposition through the
//! matricization isomorphism, the semicircle and Marchenko-Pastur limit
//! laws, and empirical spectra of random tensor ensembles.
//!
//! Factors of the decompositions are unitary tensors: square tensors whose
//! matricizations are unitary matrices. Eigen- and singular values of a
//! tensor are by definition those of its matricization, so the dense solves
//! happen matrix-side and the factors are folded back into tensors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{dematricize, hermitian_transpose, matricize};
use crate::error::{Error, Result};
use crate::gaussian::correlation::hermitian_eigen;
use crate::rng::{standard_complex, stream_rng};
use crate::shape::{ModeSplit, Shape};
use crate::tensor::DenseTensor;

/// Largest acceptable Hermitian asymmetry in [`tensor_evd`] input.
const HERMITIAN_TOL: f64 = 1e-8;

/// Eigendecomposition `t = u *_N d *_N u^H` of a Hermitian tensor.
#[derive(Clone, Debug)]
pub struct TensorEVD {
    /// Unitary tensor of eigenvectors, order `2N`.
    pub u: DenseTensor,
    /// Pseudo-diagonal tensor of eigenvalues, order `2N`.
    pub d: DenseTensor,
    /// Real eigenvalues, sorted descending; length is the product of the
    /// leading dims.
    pub eigenvalues: Vec<f64>,
}

/// Singular value decomposition `t = u *_M d *_N v^H` under a mode split
/// with `M` row modes and `N` column modes.
#[derive(Clone, Debug)]
pub struct TensorSVD {
    /// Unitary tensor on the row-mode side, order `2M`.
    pub u: DenseTensor,
    /// Unitary tensor on the column-mode side, order `2N`.
    pub v: DenseTensor,
    /// Pseudo-diagonal tensor with the shape of `t`.
    pub d: DenseTensor,
    /// Nonnegative singular values, nonincreasing; length `min(rows, cols)`
    /// of the matricization.
    pub singular_values: Vec<f64>,
}

/// Pooled sorted spectrum of a random tensor ensemble, with the
/// normalization that produced it.
#[derive(Clone, Debug)]
pub struct EmpiricalSpectrum {
    values: Vec<f64>,
    /// Scale factor applied to the raw i.i.d. entries before the solve.
    pub scale: f64,
    /// Dims of the tensors the spectrum came from.
    pub dims: Vec<usize>,
    /// Number of independent draws pooled together.
    pub n_trials: usize,
}

impl EmpiricalSpectrum {
    /// Values sorted ascending; all finite.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn square_split_order(t: &DenseTensor) -> Result<usize> {
    let dims = t.shape().dims();
    if dims.len() % 2 != 0 || dims.is_empty() {
        return Err(Error::InvalidModes {
            order: dims.len(),
            detail: "eigendecomposition needs an even-order tensor".into(),
        });
    }
    let n = dims.len() / 2;
    if dims[..n] != dims[n..] {
        return Err(Error::NotSquare {
            rows: dims[..n].to_vec(),
            cols: dims[n..].to_vec(),
        });
    }
    Ok(n)
}

/// Eigendecomposition of a tensor Hermitian under the square split of its
/// order. Eigenvalues are those of the matricization, sorted descending;
/// the factors reconstruct `t` as `u *_N d *_N u^H`.
///
/// # Errors
///
/// Rejects odd-order or non-square tensors and Hermitian asymmetry beyond
/// an absolute entrywise tolerance of 1e-8.
pub fn tensor_evd(t: &DenseTensor) -> Result<TensorEVD> {
    let n = square_split_order(t)?;
    let split = ModeSplit::square(n);
    let m = matricize(t, split)?;
    let asym = (&m - m.adjoint()).camax();
    if asym > HERMITIAN_TOL {
        return Err(Error::InvalidArgument(format!(
            "tensor is not Hermitian under the square split: asymmetry {asym:.3e}"
        )));
    }
    let (vals, vecs) = hermitian_eigen(&m);
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).expect("finite eigenvalues"));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let k = vals.len();
    let mut sorted_vecs = DMatrix::<Complex64>::zeros(k, k);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vecs.set_column(dst, &vecs.column(src));
    }
    let full_shape = t.shape().clone();
    let diag = DMatrix::<Complex64>::from_diagonal(&DVector::from_iterator(
        k,
        eigenvalues.iter().map(|&v| Complex64::new(v, 0.0)),
    ));
    Ok(TensorEVD {
        u: dematricize(&sorted_vecs, &full_shape, split)?,
        d: dematricize(&diag, &full_shape, split)?,
        eigenvalues,
    })
}

/// Extends `k` orthonormal columns to a full orthonormal basis of the
/// ambient space by Gram-Schmidt against the standard basis.
fn complete_unitary(thin: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = thin.nrows();
    let k = thin.ncols();
    let mut full = DMatrix::<Complex64>::zeros(n, n);
    full.view_mut((0, 0), (n, k)).copy_from(thin);
    let mut have = k;
    let mut candidate = 0usize;
    while have < n {
        let mut v = DVector::<Complex64>::zeros(n);
        v[candidate] = Complex64::new(1.0, 0.0);
        candidate += 1;
        for j in 0..have {
            let col = full.column(j);
            let proj = col.dotc(&v);
            v.axpy(-proj, &col.into_owned(), Complex64::new(1.0, 0.0));
        }
        let norm = v.norm();
        // A candidate (nearly) inside the current span is skipped; the
        // standard basis always contains n - k usable directions.
        if norm > 1e-6 {
            v.scale_mut(1.0 / norm);
            full.set_column(have, &v);
            have += 1;
        }
    }
    full
}

/// Singular value decomposition under an arbitrary mode split. Singular
/// values are those of the matricization, nonincreasing; `u` and `v` are
/// unitary tensors on the row- and column-mode sides and `d` has the shape
/// of `t` with the singular values on its pseudo-diagonal.
pub fn tensor_svd(t: &DenseTensor, split: ModeSplit) -> Result<TensorSVD> {
    if split.order() != t.shape().order() {
        return Err(Error::InvalidModes {
            order: t.shape().order(),
            detail: format!(
                "split ({} | {}) does not cover the tensor order",
                split.row_modes, split.col_modes
            ),
        });
    }
    let dims = t.shape().dims();
    let row_dims = &dims[..split.row_modes];
    let col_dims = &dims[split.row_modes..];
    let m = matricize(t, split)?;
    let (r, c) = (m.nrows(), m.ncols());
    let svd = m.svd(true, true);
    let thin_u = svd.u.expect("requested U");
    let thin_vt = svd.v_t.expect("requested V^T");
    let singular_values: Vec<f64> = svd.singular_values.iter().cloned().collect();

    let full_u = complete_unitary(&thin_u);
    let full_v = complete_unitary(&thin_vt.adjoint());
    let mut d = DMatrix::<Complex64>::zeros(r, c);
    for (i, &s) in singular_values.iter().enumerate() {
        d[(i, i)] = Complex64::new(s, 0.0);
    }

    let u_shape = Shape::new(row_dims.iter().chain(row_dims).copied().collect::<Vec<_>>())?;
    let v_shape = Shape::new(col_dims.iter().chain(col_dims).copied().collect::<Vec<_>>())?;
    Ok(TensorSVD {
        u: dematricize(&full_u, &u_shape, ModeSplit::square(split.row_modes))?,
        v: dematricize(&full_v, &v_shape, ModeSplit::square(split.col_modes))?,
        d: dematricize(&d, t.shape(), split)?,
        singular_values,
    })
}

fn positive_parameter(value: f64, what: &str) -> Result<()> {
    if !(value > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "{what} must be positive, got {value}"
        )));
    }
    Ok(())
}

/// Semicircle density of radius `beta`: `2 sqrt(beta^2 - x^2) / (pi beta^2)`
/// on `[-beta, beta]`, zero outside.
pub fn semicircle_density(x: f64, beta: f64) -> Result<f64> {
    positive_parameter(beta, "semicircle radius")?;
    if x.abs() >= beta {
        return Ok(0.0);
    }
    Ok(2.0 / (std::f64::consts::PI * beta * beta) * (beta * beta - x * x).sqrt())
}

/// Closed-form CDF of the semicircle law of radius `beta`.
pub fn semicircle_cdf(x: f64, beta: f64) -> Result<f64> {
    positive_parameter(beta, "semicircle radius")?;
    if x <= -beta {
        return Ok(0.0);
    }
    if x >= beta {
        return Ok(1.0);
    }
    let pi = std::f64::consts::PI;
    Ok(0.5 + x * (beta * beta - x * x).sqrt() / (pi * beta * beta) + (x / beta).asin() / pi)
}

/// Support edges `(1 -+ sqrt(c))^2` of the Marchenko-Pastur law.
pub fn marcenko_pastur_edges(c: f64) -> Result<(f64, f64)> {
    positive_parameter(c, "aspect ratio")?;
    let s = c.sqrt();
    Ok(((1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s)))
}

/// Weight of the Marchenko-Pastur point mass at zero: `1 - 1/c` when
/// `c > 1`, zero otherwise.
pub fn marcenko_pastur_point_mass(c: f64) -> Result<f64> {
    positive_parameter(c, "aspect ratio")?;
    Ok(if c > 1.0 { 1.0 - 1.0 / c } else { 0.0 })
}

/// Continuous part of the Marchenko-Pastur density with aspect ratio `c`:
/// `sqrt((c_+ - x)(x - c_-)) / (2 pi c x)` on `[c_-, c_+]`, zero outside.
pub fn marcenko_pastur_density(x: f64, c: f64) -> Result<f64> {
    let (lo, hi) = marcenko_pastur_edges(c)?;
    if x <= lo || x >= hi {
        return Ok(0.0);
    }
    Ok(((hi - x) * (x - lo)).sqrt() / (2.0 * std::f64::consts::PI * c * x))
}

/// Recursive adaptive Simpson refinement with the standard 1/15 error
/// estimate.
fn adaptive_simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of a smooth integrand on `[a, b]`.
fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_simpson_step(&f, a, b, fa, fm, fb, whole, tol, 40)
}

/// CDF of the Marchenko-Pastur law including the point mass at zero when
/// `c > 1`. The continuous part is integrated under the substitution
/// `x = c_- + (c_+ - c_-) sin^2(theta)`, which removes the square-root
/// edge singularities; the quadrature error is below 1e-8.
pub fn marcenko_pastur_cdf(x: f64, c: f64) -> Result<f64> {
    let (lo, hi) = marcenko_pastur_edges(c)?;
    let atom = marcenko_pastur_point_mass(c)?;
    let mass_below = if x >= 0.0 { atom } else { 0.0 };
    if x <= lo {
        return Ok(mass_below);
    }
    if x >= hi {
        return Ok(1.0);
    }
    let width = hi - lo;
    let theta_end = ((x - lo) / width).sqrt().min(1.0).asin();
    let integrand = move |theta: f64| {
        let (s, co) = theta.sin_cos();
        let xv = lo + width * s * s;
        width * width * s * s * co * co / (std::f64::consts::PI * c * xv)
    };
    let continuous = adaptive_simpson(integrand, 0.0, theta_end, 1e-10);
    Ok((mass_below + continuous).clamp(0.0, 1.0))
}

fn iid_complex_tensor(shape: &Shape, rng: &mut impl rand::Rng) -> DenseTensor {
    DenseTensor::from_vec(
        shape.clone(),
        (0..shape.len()).map(|_| standard_complex(rng)).collect(),
    )
    .expect("length matches shape")
}

/// Pooled eigenvalue spectrum of random Hermitian tensors with leading dims
/// `leading_dims`. Each trial draws i.i.d. standard complex entries `g`,
/// symmetrizes as `(g + g^H) / sqrt(2)` so off-diagonal matricized entries
/// keep unit variance, and scales by `1 / sqrt(prod(leading_dims))`.
/// Trial `t` uses RNG stream `t`, so pooling order never affects values.
pub fn empirical_spectrum_hermitian(
    leading_dims: &[usize],
    n_trials: usize,
    seed: u64,
) -> Result<EmpiricalSpectrum> {
    if n_trials == 0 {
        return Err(Error::NotEnoughSamples {
            what: "hermitian ensemble trials",
            min: 1,
            found: 0,
        });
    }
    let full: Vec<usize> = leading_dims.iter().chain(leading_dims).copied().collect();
    let shape = Shape::new(full.clone())?;
    let k: usize = leading_dims.iter().product();
    let scale = 1.0 / (k as f64).sqrt();
    let split = ModeSplit::square(leading_dims.len());
    let per_trial: Vec<Result<Vec<f64>>> = (0..n_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, t as u64);
            let g = iid_complex_tensor(&shape, &mut rng);
            let sym = g
                .add(&hermitian_transpose(&g, split)?)?
                .scale(Complex64::new(std::f64::consts::FRAC_1_SQRT_2 * scale, 0.0));
            let (vals, _) = hermitian_eigen(&matricize(&sym, split)?);
            Ok(vals)
        })
        .collect();
    let mut values = Vec::with_capacity(k * n_trials);
    for trial in per_trial {
        values.extend(trial?);
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(EmpiricalSpectrum {
        values,
        scale,
        dims: full,
        n_trials,
    })
}

/// Pooled squared-singular-value spectrum of random rectangular tensors
/// with the given row and column dims. Entries are i.i.d. standard complex
/// scaled by `1 / sqrt(prod(col_dims))`; each trial contributes all
/// `prod(row_dims)` eigenvalues of the Gram matricization, so the zero
/// eigenvalues that carry the point mass when rows exceed columns are kept.
pub fn empirical_spectrum_rectangular(
    row_dims: &[usize],
    col_dims: &[usize],
    n_trials: usize,
    seed: u64,
) -> Result<EmpiricalSpectrum> {
    if n_trials == 0 {
        return Err(Error::NotEnoughSamples {
            what: "rectangular ensemble trials",
            min: 1,
            found: 0,
        });
    }
    if row_dims.is_empty() || col_dims.is_empty() {
        return Err(Error::InvalidArgument(
            "row and column dims must both be nonempty".into(),
        ));
    }
    let full: Vec<usize> = row_dims.iter().chain(col_dims).copied().collect();
    let shape = Shape::new(full.clone())?;
    let split = ModeSplit::new(row_dims.len(), col_dims.len())?;
    let r: usize = row_dims.iter().product();
    let c: usize = col_dims.iter().product();
    let scale = 1.0 / (c as f64).sqrt();
    let per_trial: Vec<Result<Vec<f64>>> = (0..n_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, t as u64);
            let b = iid_complex_tensor(&shape, &mut rng).scale(Complex64::new(scale, 0.0));
            let m = matricize(&b, split)?;
            // Eigensolve on the smaller Gram side, then pad with the zero
            // eigenvalues the larger side would carry.
            let mut vals = if r <= c {
                hermitian_eigen(&(&m * m.adjoint())).0
            } else {
                let mut v = hermitian_eigen(&(m.adjoint() * &m)).0;
                v.resize(r, 0.0);
                v
            };
            for v in &mut vals {
                *v = v.max(0.0);
            }
            Ok(vals)
        })
        .collect();
    let mut values = Vec::with_capacity(r * n_trials);
    for trial in per_trial {
        values.extend(trial?);
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(EmpiricalSpectrum {
        values,
        scale,
        dims: full,
        n_trials,
    })
}

/// Kolmogorov-Smirnov distance between the empirical CDF of a spectrum and
/// an analytic CDF: the sup over sample points of the one-sided gaps.
pub fn ks_distance(spectrum: &EmpiricalSpectrum, cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let n = spectrum.values.len();
    if n == 0 {
        return Err(Error::NotEnoughSamples {
            what: "spectrum values",
            min: 1,
            found: 0,
        });
    }
    let mut worst = 0.0f64;
    for (i, &x) in spectrum.values.iter().enumerate() {
        let f = cdf(x);
        worst = worst.max(((i + 1) as f64 / n as f64 - f).abs());
        worst = worst.max((f - i as f64 / n as f64).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{einstein_product, identity_tensor};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(lead: &[usize], seed: u64) -> DenseTensor {
        let full: Vec<usize> = lead.iter().chain(lead).copied().collect();
        let shape = Shape::new(full).unwrap();
        let mut rng = stream_rng(seed, 0);
        let g = iid_complex_tensor(&shape, &mut rng);
        let split = ModeSplit::square(lead.len());
        g.add(&hermitian_transpose(&g, split).unwrap())
            .unwrap()
            .scale(c(0.5, 0.0))
    }

    #[test]
    fn identity_tensor_has_unit_eigenvalues() {
        let t = identity_tensor(&[2, 3]).unwrap();
        let evd = tensor_evd(&t).unwrap();
        for &v in &evd.eigenvalues {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pseudo_diagonal_eigenvalues_are_the_diagonal() {
        let diag = [3.0, 1.0, -2.0, 0.5];
        let m = DMatrix::<Complex64>::from_diagonal(&DVector::from_iterator(
            4,
            diag.iter().map(|&v| c(v, 0.0)),
        ));
        let shape = Shape::new([2, 2, 2, 2]).unwrap();
        let t = dematricize(&m, &shape, ModeSplit::square(2)).unwrap();
        let evd = tensor_evd(&t).unwrap();
        let expect = [3.0, 1.0, 0.5, -2.0];
        for (got, want) in evd.eigenvalues.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn evd_reconstructs_and_u_is_unitary() {
        let t = random_hermitian(&[3, 2], 5);
        let evd = tensor_evd(&t).unwrap();
        let n = 2;
        let udu = einstein_product(
            &einstein_product(&evd.u, &evd.d, n).unwrap(),
            &hermitian_transpose(&evd.u, ModeSplit::square(n)).unwrap(),
            n,
        )
        .unwrap();
        let rel = udu.sub(&t).unwrap().frobenius_norm() / t.frobenius_norm();
        assert!(rel < 1e-9, "reconstruction error {rel}");

        let m = matricize(&evd.u, ModeSplit::square(n)).unwrap();
        let gram = m.adjoint() * &m;
        let eye = DMatrix::<Complex64>::identity(6, 6);
        assert!((gram - eye).camax() < 1e-9);
    }

    #[test]
    fn eigenvalues_satisfy_characteristic_equation() {
        // Independent check: each eigenvalue must zero the determinant of
        // the shifted matricization.
        let t = random_hermitian(&[2, 2], 9);
        let m = matricize(&t, ModeSplit::square(2)).unwrap();
        let evd = tensor_evd(&t).unwrap();
        for &v in &evd.eigenvalues {
            let shifted = &m - DMatrix::<Complex64>::identity(4, 4).scale(v);
            let det = shifted.determinant().norm();
            assert!(det < 1e-9, "det residual {det} at eigenvalue {v}");
        }
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let shape = Shape::new([2, 2]).unwrap();
        let mut rng = stream_rng(6, 0);
        let g = iid_complex_tensor(&shape, &mut rng);
        assert!(tensor_evd(&g).is_err());
    }

    #[test]
    fn rank_one_svd_recovers_norm_product() {
        let u = DenseTensor::from_vec(
            Shape::new([3]).unwrap(),
            vec![c(1.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0)],
        )
        .unwrap();
        let v = DenseTensor::from_vec(
            Shape::new([2]).unwrap(),
            vec![c(0.0, 3.0), c(4.0, 0.0)],
        )
        .unwrap();
        let t = crate::algebra::outer_product(&u, &v);
        let svd = tensor_svd(&t, ModeSplit::new(1, 1).unwrap()).unwrap();
        assert!((svd.singular_values[0] - 3.0 * 5.0).abs() < 1e-10);
        for &s in &svd.singular_values[1..] {
            assert!(s.abs() < 1e-10);
        }
    }

    #[test]
    fn unitary_tensor_has_unit_singular_values() {
        let t = identity_tensor(&[2, 3]).unwrap();
        let svd = tensor_svd(&t, ModeSplit::square(2)).unwrap();
        for &s in &svd.singular_values {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_reconstructs_with_unitary_factors() {
        let shape = Shape::new([4, 3, 2, 5]).unwrap();
        let mut rng = stream_rng(7, 0);
        let t = iid_complex_tensor(&shape, &mut rng);
        let split = ModeSplit::new(2, 2).unwrap();
        let svd = tensor_svd(&t, split).unwrap();

        assert!(svd
            .singular_values
            .windows(2)
            .all(|w| w[0] >= w[1] && w[1] >= 0.0));
        let oracle = matricize(&t, split).unwrap().singular_values();
        for (a, b) in svd.singular_values.iter().zip(oracle.iter()) {
            assert!((a - b).abs() < 1e-9);
        }

        let vh = hermitian_transpose(&svd.v, ModeSplit::square(2)).unwrap();
        let ud = einstein_product(&svd.u, &svd.d, 2).unwrap();
        let rec = einstein_product(&ud, &vh, 2).unwrap();
        let rel = rec.sub(&t).unwrap().frobenius_norm() / t.frobenius_norm();
        assert!(rel < 1e-9, "reconstruction error {rel}");

        for (factor, k) in [(&svd.u, 12usize), (&svd.v, 10usize)] {
            let m = matricize(factor, ModeSplit::square(2)).unwrap();
            let gram = m.adjoint() * &m;
            assert!((gram - DMatrix::<Complex64>::identity(k, k)).camax() < 1e-9);
        }
    }

    #[test]
    fn semicircle_closed_forms() {
        assert!((semicircle_density(0.0, 2.0).unwrap() - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(semicircle_density(2.0, 2.0).unwrap(), 0.0);
        assert_eq!(semicircle_density(-3.0, 2.0).unwrap(), 0.0);
        assert!((semicircle_cdf(0.0, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(semicircle_cdf(-2.0, 2.0).unwrap(), 0.0);
        assert_eq!(semicircle_cdf(2.0, 2.0).unwrap(), 1.0);
        assert!(semicircle_density(0.0, -1.0).is_err());
    }

    #[test]
    fn semicircle_density_integrates_to_one() {
        // Integrate under x = beta sin(theta), which makes the integrand a
        // smooth cosine-squared.
        for beta in [1.0, 2.0] {
            let f = |theta: f64| {
                let x = beta * theta.sin();
                semicircle_density(x, beta).unwrap() * beta * theta.cos()
            };
            let mass = adaptive_simpson(
                f,
                -std::f64::consts::FRAC_PI_2,
                std::f64::consts::FRAC_PI_2,
                1e-10,
            );
            assert!((mass - 1.0).abs() < 1e-8, "mass {mass} at beta {beta}");
        }
    }

    #[test]
    fn marcenko_pastur_edges_and_special_cases() {
        let (lo, hi) = marcenko_pastur_edges(0.5).unwrap();
        assert!((lo - 0.085_786_437_626_904_95).abs() < 1e-12);
        assert!((hi - 2.914_213_562_373_095).abs() < 1e-12);

        // c = 1 collapses to sqrt(x(4-x)) / (2 pi x) on [0, 4].
        for x in [0.5f64, 1.0, 2.5, 3.9] {
            let expect = (x * (4.0 - x)).sqrt() / (2.0 * std::f64::consts::PI * x);
            assert!((marcenko_pastur_density(x, 1.0).unwrap() - expect).abs() < 1e-12);
        }
        assert_eq!(marcenko_pastur_point_mass(0.5).unwrap(), 0.0);
        assert!((marcenko_pastur_point_mass(2.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn marcenko_pastur_total_mass_is_one() {
        for c_ratio in [0.5, 1.0, 2.0] {
            let total = marcenko_pastur_cdf(1e9, c_ratio).unwrap();
            assert!(
                (total - 1.0).abs() < 1e-6,
                "total mass {total} at c {c_ratio}"
            );
            let atom = marcenko_pastur_point_mass(c_ratio).unwrap();
            let (lo, _) = marcenko_pastur_edges(c_ratio).unwrap();
            assert!((marcenko_pastur_cdf(lo, c_ratio).unwrap() - atom).abs() < 1e-12);
        }
    }

    #[test]
    fn ks_distance_known_values() {
        let single = EmpiricalSpectrum {
            values: vec![0.0],
            scale: 1.0,
            dims: vec![1],
            n_trials: 1,
        };
        let d = ks_distance(&single, |x| semicircle_cdf(x, 2.0).unwrap()).unwrap();
        assert!((d - 0.5).abs() < 1e-12);

        let empty = EmpiricalSpectrum {
            values: vec![],
            scale: 1.0,
            dims: vec![1],
            n_trials: 0,
        };
        assert!(ks_distance(&empty, |_| 0.5).is_err());
    }

    #[test]
    fn inverse_sampled_spectrum_has_tiny_ks_distance() {
        // Quantile points of the target CDF give KS distance about 1/(2n).
        let n = 10_000;
        let cdf = |x: f64| semicircle_cdf(x, 2.0).unwrap();
        let values: Vec<f64> = (0..n)
            .map(|i| {
                let u = (i as f64 + 0.5) / n as f64;
                let (mut lo, mut hi) = (-2.0, 2.0);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if cdf(mid) < u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect();
        let spectrum = EmpiricalSpectrum {
            values,
            scale: 1.0,
            dims: vec![n],
            n_trials: 1,
        };
        let d = ks_distance(&spectrum, cdf).unwrap();
        assert!(d <= 0.02, "ks {d}");
    }

    #[test]
    fn small_hermitian_ensemble_tracks_semicircle() {
        let spectrum = empirical_spectrum_hermitian(&[2, 2], 200, 11).unwrap();
        assert_eq!(spectrum.len(), 4 * 200);
        let d = ks_distance(&spectrum, |x| semicircle_cdf(x, 2.0).unwrap()).unwrap();
        assert!(d < 0.2, "ks {d}");
        let max_abs = spectrum
            .values()
            .iter()
            .fold(0.0f64, |acc, &v| acc.max(v.abs()));
        assert!(max_abs < 2.0 + 1.5, "edge overflow {max_abs}");
    }

    #[test]
    fn square_rectangular_ensemble_reaches_zero() {
        let spectrum = empirical_spectrum_rectangular(&[2, 2], &[2, 2], 50, 12).unwrap();
        assert_eq!(spectrum.len(), 4 * 50);
        assert!(spectrum.values()[0] < 0.05);
        assert!(spectrum.values().iter().all(|v| v.is_finite() && *v >= 0.0));
    }

    #[test]
    fn tall_rectangular_ensemble_keeps_zero_block() {
        // rows 6 > cols 3: each trial must carry 3 exact zeros.
        let spectrum = empirical_spectrum_rectangular(&[6], &[3], 4, 13).unwrap();
        assert_eq!(spectrum.len(), 24);
        for &v in &spectrum.values()[..12] {
            assert!(v < 1e-12);
        }
    }
}
