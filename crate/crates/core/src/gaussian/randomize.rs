//! Seeded generators of random but structurally valid Gaussian inputs:
//! PSD correlation tensors and proper/improper distribution specs, for
//! randomized verification drivers and experiment configs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::correlation::{CorrelationKind, CorrelationTensor};
use super::GaussianSpec;
use crate::algebra::dematricize;
use crate::error::Result;
use crate::rng::{standard_complex, standard_real};
use crate::shape::{ModeSplit, Shape};
use crate::tensor::DenseTensor;

fn correlation_shape(dims: &[usize]) -> Result<(Shape, ModeSplit)> {
    let full: Vec<usize> = dims.iter().chain(dims).copied().collect();
    Ok((Shape::new(full)?, ModeSplit::square(dims.len())))
}

/// Random PSD correlation tensor over the given mode sizes: `G G^H / K`
/// for a `K x K` i.i.d. standard complex `G`. The product is Hermitian
/// bitwise and almost surely positive definite, with entries of order one.
pub fn random_correlation(dims: &[usize], rng: &mut impl Rng) -> Result<CorrelationTensor> {
    let (shape, split) = correlation_shape(dims)?;
    let k: usize = dims.iter().product();
    let g = DMatrix::from_fn(k, k, |_, _| standard_complex(rng));
    let m = (&g * g.adjoint()) / Complex64::new(k as f64, 0.0);
    CorrelationTensor::new(dematricize(&m, &shape, split)?, CorrelationKind::Correlation)
}

/// Random complex mean tensor with i.i.d. standard complex entries.
pub fn random_mean(dims: &[usize], rng: &mut impl Rng) -> Result<DenseTensor> {
    Ok(DenseTensor::from_fn(Shape::new(dims.to_vec())?, |_| {
        standard_complex(rng)
    }))
}

/// Random proper complex Gaussian spec: random mean and a random PSD
/// covariance.
pub fn random_proper_spec(dims: &[usize], rng: &mut impl Rng) -> Result<GaussianSpec> {
    let mean = random_mean(dims, rng)?;
    let covariance = random_correlation(dims, rng)?;
    GaussianSpec::proper(mean, covariance)
}

/// Random improper complex Gaussian spec with a jointly valid covariance
/// and pseudo-covariance pair.
///
/// Drawn through the composite real representation: any real PSD covariance
/// `S` of the stacked real and imaginary parts maps to a valid pair via
/// `Q = (S_rr + S_ii) + j(S_ir^T - S_ir)` and
/// `Qt = (S_rr - S_ii) + j(S_ir^T + S_ir)`, which keeps the augmented
/// covariance PSD by construction.
pub fn random_improper_spec(dims: &[usize], rng: &mut impl Rng) -> Result<GaussianSpec> {
    let (shape, split) = correlation_shape(dims)?;
    let k: usize = dims.iter().product();
    let b = DMatrix::from_fn(2 * k, 2 * k, |_, _| standard_real(rng));
    let s = (&b * b.transpose()) / (2 * k) as f64;
    let s_rr = s.view((0, 0), (k, k));
    let s_ri = s.view((0, k), (k, k));
    let s_ir = s.view((k, 0), (k, k));
    let s_ii = s.view((k, k), (k, k));
    let q = DMatrix::from_fn(k, k, |i, j| {
        Complex64::new(s_rr[(i, j)] + s_ii[(i, j)], s_ir[(i, j)] - s_ri[(i, j)])
    });
    let qt = DMatrix::from_fn(k, k, |i, j| {
        Complex64::new(s_rr[(i, j)] - s_ii[(i, j)], s_ir[(i, j)] + s_ri[(i, j)])
    });
    let covariance = CorrelationTensor::new(
        dematricize(&q, &shape, split)?,
        CorrelationKind::Covariance,
    )?;
    let pseudo = CorrelationTensor::new(
        dematricize(&qt, &shape, split)?,
        CorrelationKind::PseudoCovariance,
    )?;
    let mean = random_mean(dims, rng)?;
    GaussianSpec::general(Some(mean), covariance, pseudo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{augmented_covariance, GaussianFlavor};
    use crate::rng::stream_rng;

    #[test]
    fn random_correlation_is_hermitian_psd() {
        let mut rng = stream_rng(61, 0);
        let r = random_correlation(&[2, 3], &mut rng).unwrap();
        assert_eq!(r.mode_dims(), &[2, 3]);
        let m = r.matricized();
        assert_eq!(m, m.adjoint());
        // PSD via the validated square root.
        assert!(r.sqrt().is_ok());
    }

    #[test]
    fn random_improper_spec_is_valid_and_improper() {
        let mut rng = stream_rng(62, 0);
        let spec = random_improper_spec(&[2, 2], &mut rng).unwrap();
        assert_eq!(spec.flavor(), GaussianFlavor::General);
        // The augmented covariance assembled from the pair must be PSD,
        // which the density construction validates via Cholesky-style
        // factorization of the matricization.
        let aug = augmented_covariance(
            spec.covariance().unwrap(),
            spec.pseudo_covariance(),
        )
        .unwrap();
        assert!(aug.sqrt().is_ok());
        let qt_norm = spec.pseudo_covariance().unwrap().value().frobenius_norm();
        assert!(qt_norm > 0.1, "pseudo-covariance unexpectedly small: {qt_norm}");
    }
}
