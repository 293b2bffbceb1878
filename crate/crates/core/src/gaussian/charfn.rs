//! Characteristic functions of proper Gaussian tensors.

use num_complex::Complex64;
use rand::Rng;

use super::{GaussianFlavor, GaussianSpec};
use crate::algebra::einstein_product;
use crate::error::{Error, Result};
use crate::tensor::DenseTensor;

/// Closed-form characteristic function `exp(-¼ conj(w) *_N Q *_N w)` of a
/// zero-mean proper spec evaluated at the probe tensor `w`.
pub fn characteristic_function(spec: &GaussianSpec, w: &DenseTensor) -> Result<Complex64> {
    let zero_mean = spec
        .mean()
        .map(|m| m.max_abs() == 0.0)
        .unwrap_or(true);
    let proper = matches!(
        spec.flavor(),
        GaussianFlavor::Circular | GaussianFlavor::Proper
    );
    if !(zero_mean && proper) {
        return Err(Error::InvalidArgument(
            "closed-form characteristic function needs a zero-mean proper spec".into(),
        ));
    }
    if w.shape() != spec.shape() {
        return Err(Error::DimMismatch {
            context: "characteristic function probe shape",
            left: spec.shape().dims().to_vec(),
            right: w.shape().dims().to_vec(),
        });
    }
    let n = spec.shape().order();
    let q = spec.covariance_or_identity()?;
    let qw = einstein_product(q.value(), w, n)?;
    let quad = einstein_product(&w.conj(), &qw, n)?
        .as_scalar()
        .expect("full contraction yields a scalar");
    Ok(Complex64::new((-0.25 * quad.re).exp(), 0.0))
}

/// Monte Carlo characteristic function `avg exp(i Re(conj(w) *_N x))`.
pub fn empirical_cf(samples: &[DenseTensor], w: &DenseTensor) -> Result<Complex64> {
    if samples.is_empty() {
        return Err(Error::NotEnoughSamples {
            what: "empirical characteristic function",
            min: 1,
            found: 0,
        });
    }
    let wc = w.conj();
    let mut acc = Complex64::new(0.0, 0.0);
    for x in samples {
        let ip = einstein_product(&wc, x, w.shape().order())?
            .as_scalar()
            .expect("full contraction yields a scalar");
        acc += Complex64::from_polar(1.0, ip.re);
    }
    Ok(acc / samples.len() as f64)
}

/// Convenience: empirical CF over freshly drawn samples from `spec`.
pub fn empirical_cf_sampled(
    spec: &GaussianSpec,
    w: &DenseTensor,
    n_samples: usize,
    rng: &mut impl Rng,
) -> Result<Complex64> {
    let sampler = super::sampling::GaussianSampler::new(spec)?;
    let samples: Vec<_> = (0..n_samples).map(|_| sampler.sample(rng)).collect();
    empirical_cf(&samples, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::correlation::{CorrelationKind, CorrelationTensor};
    use crate::rng::stream_rng;
    use crate::shape::Shape;

    fn scalar_spec(q: f64) -> GaussianSpec {
        let cov = CorrelationTensor::new(
            DenseTensor::from_vec(
                Shape::new([1, 1]).unwrap(),
                vec![Complex64::new(q, 0.0)],
            )
            .unwrap(),
            CorrelationKind::Covariance,
        )
        .unwrap();
        GaussianSpec::circular(cov).unwrap()
    }

    #[test]
    fn probe_zero_gives_unity() {
        let spec = scalar_spec(3.0);
        let w = DenseTensor::zeros(Shape::new([1]).unwrap());
        assert_eq!(
            characteristic_function(&spec, &w).unwrap(),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn scalar_unit_variance_matches_exponential() {
        let spec = scalar_spec(1.0);
        let w = DenseTensor::from_vec(
            Shape::new([1]).unwrap(),
            vec![Complex64::new(1.5, 0.0)],
        )
        .unwrap();
        let phi = characteristic_function(&spec, &w).unwrap();
        assert!((phi.re - (-1.5f64 * 1.5 / 4.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn empirical_tracks_closed_form() {
        let spec = scalar_spec(1.0);
        let w = DenseTensor::from_vec(
            Shape::new([1]).unwrap(),
            vec![Complex64::new(0.8, -0.6)],
        )
        .unwrap();
        let closed = characteristic_function(&spec, &w).unwrap();
        let emp =
            empirical_cf_sampled(&spec, &w, 20_000, &mut stream_rng(11, 0)).unwrap();
        assert!((emp - closed).norm() < 0.03);
    }

    #[test]
    fn improper_spec_is_rejected() {
        let cov = CorrelationTensor::new(
            DenseTensor::from_vec(
                Shape::new([1, 1]).unwrap(),
                vec![Complex64::new(1.0, 0.0)],
            )
            .unwrap(),
            CorrelationKind::Covariance,
        )
        .unwrap();
        let pseudo = CorrelationTensor::new(
            DenseTensor::from_vec(
                Shape::new([1, 1]).unwrap(),
                vec![Complex64::new(0.5, 0.0)],
            )
            .unwrap(),
            CorrelationKind::PseudoCovariance,
        )
        .unwrap();
        let spec = GaussianSpec::general(None, cov, pseudo).unwrap();
        let w = DenseTensor::zeros(Shape::new([1]).unwrap());
        assert!(characteristic_function(&spec, &w).is_err());
    }
}
