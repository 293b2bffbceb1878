//! Complex Gaussian random tensors.
//!
//! A complex random tensor is described either through its augmented
//! representation (the tensor stacked with its conjugate along an extra mode
//! of size 2) or through its composite real representation (real and
//! imaginary parts stacked the same way). Second-order structure is carried
//! by three order-`2N` tensors: the covariance `Q = E[(X-M) o (X-M)*]`, the
//! pseudo-covariance `Qt = E[(X-M) o (X-M)]`, and the augmented covariance
//! whose matricization has the block form `[[Q, Qt], [Qt*, Q*]]`. A tensor is
//! proper when `Qt = 0` and circularly symmetric when it is proper with zero
//! mean.

mod charfn;
pub(crate) mod correlation;
mod density;
mod mimo;
mod moments;
mod randomize;
mod sampling;

pub use charfn::{characteristic_function, empirical_cf, empirical_cf_sampled};
pub use correlation::{
    build_mode_restricted_correlation, correlation_sqrt, full_parameter_count,
    separable_parameter_count, CorrelationKind, CorrelationTensor, SeparableCorrelation,
};
pub use density::{augmented_covariance, log_pdf, GaussianDensity};
pub use mimo::{
    kronecker_counterexample_check, kronecker_mimo_matrix, kronecker_mimo_tensor,
    verify_lemma1, KroneckerReport, Lemma1Report,
};
pub use moments::{
    estimate_correlation, estimate_moments, propriety_statistic, MomentEstimate,
};
pub use randomize::{
    random_correlation, random_improper_spec, random_mean, random_proper_spec,
};
pub use sampling::{
    composite_covariance, sample_correlated, sample_gaussian, sample_iid, sample_separable,
    CorrelatedSampler, GaussianSampler, SeparableSampler,
};

use crate::error::{Error, Result};
use crate::shape::Shape;
use crate::tensor::DenseTensor;
use num_complex::Complex64;

/// Tolerance used when validating structural properties (Hermitian symmetry,
/// realness) of user-supplied statistics.
pub(crate) const VALIDATION_TOL: f64 = 1e-8;

/// Distribution family of a Gaussian tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussianFlavor {
    /// Complex with arbitrary mean, covariance, and pseudo-covariance.
    General,
    /// Complex with zero pseudo-covariance and arbitrary mean.
    Proper,
    /// Proper with zero mean (circularly symmetric).
    Circular,
    /// Real-valued with arbitrary mean and covariance.
    Real,
    /// Real-valued, zero mean, identity covariance.
    StandardReal,
}

/// A complex Gaussian tensor distribution: shape, flavor, and moments.
///
/// Missing moments default to zero mean, identity covariance, and zero
/// pseudo-covariance.
#[derive(Clone, Debug)]
pub struct GaussianSpec {
    shape: Shape,
    flavor: GaussianFlavor,
    mean: Option<DenseTensor>,
    covariance: Option<CorrelationTensor>,
    pseudo: Option<CorrelationTensor>,
}

impl GaussianSpec {
    /// Standard real Gaussian: i.i.d. `N(0, 1)` entries.
    pub fn standard_real(shape: Shape) -> Self {
        Self {
            shape,
            flavor: GaussianFlavor::StandardReal,
            mean: None,
            covariance: None,
            pseudo: None,
        }
    }

    /// Circularly symmetric complex Gaussian with the given covariance.
    pub fn circular(covariance: CorrelationTensor) -> Result<Self> {
        check_covariance_kind(&covariance)?;
        Ok(Self {
            shape: Shape::new(covariance.mode_dims())?,
            flavor: GaussianFlavor::Circular,
            mean: None,
            covariance: Some(covariance),
            pseudo: None,
        })
    }

    /// Proper complex Gaussian: zero pseudo-covariance, arbitrary mean.
    pub fn proper(mean: DenseTensor, covariance: CorrelationTensor) -> Result<Self> {
        check_covariance_kind(&covariance)?;
        if mean.dims() != covariance.mode_dims() {
            return Err(Error::DimMismatch {
                context: "GaussianSpec::proper",
                left: mean.dims().to_vec(),
                right: covariance.mode_dims().to_vec(),
            });
        }
        Ok(Self {
            shape: mean.shape().clone(),
            flavor: GaussianFlavor::Proper,
            mean: Some(mean),
            covariance: Some(covariance),
            pseudo: None,
        })
    }

    /// General (possibly improper) complex Gaussian.
    ///
    /// `pseudo` must carry the [`CorrelationKind::PseudoCovariance`] kind; its
    /// symmetry `Qt = Qt^T` is validated at construction of that tensor.
    pub fn general(
        mean: Option<DenseTensor>,
        covariance: CorrelationTensor,
        pseudo: CorrelationTensor,
    ) -> Result<Self> {
        check_covariance_kind(&covariance)?;
        if pseudo.kind() != CorrelationKind::PseudoCovariance {
            return Err(Error::InvalidArgument(
                "pseudo-covariance argument must carry the pseudo-covariance kind".into(),
            ));
        }
        if pseudo.mode_dims() != covariance.mode_dims() {
            return Err(Error::DimMismatch {
                context: "GaussianSpec::general",
                left: pseudo.mode_dims().to_vec(),
                right: covariance.mode_dims().to_vec(),
            });
        }
        if let Some(m) = &mean {
            if m.dims() != covariance.mode_dims() {
                return Err(Error::DimMismatch {
                    context: "GaussianSpec::general",
                    left: m.dims().to_vec(),
                    right: covariance.mode_dims().to_vec(),
                });
            }
        }
        Ok(Self {
            shape: Shape::new(covariance.mode_dims())?,
            flavor: GaussianFlavor::General,
            mean,
            covariance: Some(covariance),
            pseudo: Some(pseudo),
        })
    }

    /// Real Gaussian with the given covariance (entries must be real).
    pub fn real(mean: Option<DenseTensor>, covariance: CorrelationTensor) -> Result<Self> {
        check_covariance_kind(&covariance)?;
        if !covariance.value().is_real_within(VALIDATION_TOL) {
            return Err(Error::InvalidArgument(
                "real flavor requires a real-valued covariance".into(),
            ));
        }
        if let Some(m) = &mean {
            if m.dims() != covariance.mode_dims() {
                return Err(Error::DimMismatch {
                    context: "GaussianSpec::real",
                    left: m.dims().to_vec(),
                    right: covariance.mode_dims().to_vec(),
                });
            }
            if !m.is_real_within(VALIDATION_TOL) {
                return Err(Error::InvalidArgument(
                    "real flavor requires a real-valued mean".into(),
                ));
            }
        }
        Ok(Self {
            shape: Shape::new(covariance.mode_dims())?,
            flavor: GaussianFlavor::Real,
            mean,
            covariance: Some(covariance),
            pseudo: None,
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn flavor(&self) -> GaussianFlavor {
        self.flavor
    }

    /// Mean tensor, or `None` for zero mean.
    pub fn mean(&self) -> Option<&DenseTensor> {
        self.mean.as_ref()
    }

    /// Mean tensor with the zero default materialized.
    pub fn mean_or_zero(&self) -> DenseTensor {
        self.mean
            .clone()
            .unwrap_or_else(|| DenseTensor::zeros(self.shape.clone()))
    }

    /// Covariance, or `None` for the identity default.
    pub fn covariance(&self) -> Option<&CorrelationTensor> {
        self.covariance.as_ref()
    }

    /// Covariance with the identity default materialized.
    pub fn covariance_or_identity(&self) -> Result<CorrelationTensor> {
        match &self.covariance {
            Some(c) => Ok(c.clone()),
            None => CorrelationTensor::identity(self.shape.dims()),
        }
    }

    /// Pseudo-covariance, or `None` for zero (proper).
    pub fn pseudo_covariance(&self) -> Option<&CorrelationTensor> {
        self.pseudo.as_ref()
    }

    /// True when the distribution is real-valued.
    pub fn is_real_flavor(&self) -> bool {
        matches!(
            self.flavor,
            GaussianFlavor::Real | GaussianFlavor::StandardReal
        )
    }
}

fn check_covariance_kind(c: &CorrelationTensor) -> Result<()> {
    match c.kind() {
        CorrelationKind::Covariance | CorrelationKind::Correlation => Ok(()),
        other => Err(Error::InvalidArgument(format!(
            "expected a covariance or correlation tensor, got {other:?}"
        ))),
    }
}

/// Augmented and composite real views of a complex tensor.
///
/// Both views append one mode of size 2. For the augmented view the two
/// slices are the tensor and its conjugate; for the composite view they are
/// the real and imaginary parts. Because the extra mode is last (slowest),
/// the vectorization of the augmented view is the usual stacked vector
/// `[vec(x); vec(conj(x))]`.
#[derive(Clone, Debug)]
pub struct AugmentedTensor {
    base: DenseTensor,
}

impl AugmentedTensor {
    pub fn new(base: DenseTensor) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &DenseTensor {
        &self.base
    }

    /// Order `N+1` tensor `[x, conj(x)]` along a trailing mode of size 2.
    pub fn augmented(&self) -> DenseTensor {
        let mut dims = self.base.dims().to_vec();
        dims.push(2);
        let mut data = Vec::with_capacity(2 * self.base.len());
        data.extend_from_slice(self.base.data());
        data.extend(self.base.data().iter().map(|z| z.conj()));
        DenseTensor::from_vec(Shape::new(dims).expect("augmented shape"), data)
            .expect("augmented data length")
    }

    /// Order `N+1` real tensor `[Re(x), Im(x)]` along a trailing mode of
    /// size 2.
    pub fn composite(&self) -> DenseTensor {
        let mut dims = self.base.dims().to_vec();
        dims.push(2);
        let mut data = Vec::with_capacity(2 * self.base.len());
        data.extend(self.base.data().iter().map(|z| Complex64::new(z.re, 0.0)));
        data.extend(self.base.data().iter().map(|z| Complex64::new(z.im, 0.0)));
        DenseTensor::from_vec(Shape::new(dims).expect("composite shape"), data)
            .expect("composite data length")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::ModeSplit;

    #[test]
    fn augmented_view_stacks_conjugate_last() {
        let x = DenseTensor::from_vec(
            Shape::new([2]).unwrap(),
            vec![Complex64::new(1.0, 2.0), Complex64::new(-1.0, 0.5)],
        )
        .unwrap();
        let a = AugmentedTensor::new(x.clone()).augmented();
        assert_eq!(a.dims(), &[2, 2]);
        assert_eq!(a.get(&[0, 0]), x.get(&[0]));
        assert_eq!(a.get(&[1, 0]), x.get(&[1]));
        assert_eq!(a.get(&[0, 1]), x.get(&[0]).conj());
        assert_eq!(a.get(&[1, 1]), x.get(&[1]).conj());
        // Vectorization is [vec(x); vec(conj x)].
        assert_eq!(a.data()[..2], *x.data());
    }

    #[test]
    fn composite_view_is_real() {
        let x = DenseTensor::from_vec(
            Shape::new([2]).unwrap(),
            vec![Complex64::new(1.0, 2.0), Complex64::new(-1.0, 0.5)],
        )
        .unwrap();
        let c = AugmentedTensor::new(x).composite();
        assert!(c.is_real_within(0.0));
        assert_eq!(c.get(&[0, 0]), Complex64::new(1.0, 0.0));
        assert_eq!(c.get(&[0, 1]), Complex64::new(2.0, 0.0));
        assert_eq!(c.get(&[1, 1]), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn spec_shape_checks() {
        let id = CorrelationTensor::identity(&[2, 2]).unwrap();
        let mean = DenseTensor::zeros(Shape::new([2, 3]).unwrap());
        assert!(GaussianSpec::proper(mean, id.clone()).is_err());
        let spec = GaussianSpec::circular(id).unwrap();
        assert_eq!(spec.shape().dims(), &[2, 2]);
        let cov = spec.covariance_or_identity().unwrap();
        assert!(crate::algebra::is_hermitian(cov.value(), ModeSplit::square(2), 1e-12).unwrap());
    }
}
