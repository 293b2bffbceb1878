//! Gaussian log-densities in tensor form.
//!
//! Evaluation never vectorizes the argument: quadratic forms are Einstein
//! products of the (augmented) residual with a cached inverse covariance
//! tensor. The inverse, log-determinant and condition estimate come from one
//! Hermitian eigendecomposition of the matricized covariance at
//! construction, so repeated evaluations cost two Einstein products.

use nalgebra::DMatrix;

use super::correlation::{hermitian_eigen, CorrelationKind, CorrelationTensor};
use super::{AugmentedTensor, GaussianFlavor, GaussianSpec, VALIDATION_TOL};
use crate::algebra::{dematricize, einstein_product};
use crate::error::{Error, Result};
use crate::shape::{ModeSplit, Shape};
use crate::tensor::DenseTensor;

/// Relative eigenvalue floor below which a covariance counts as singular.
const SINGULAR_REL: f64 = 1e-12;

/// Assembles the order-(2N+2) augmented covariance from a covariance and an
/// optional pseudo-covariance (zero if absent). Blocks under the matricized
/// `(N+1 | N+1)` split:
///
/// ```text
/// [ Q    Qt  ]
/// [ Qt*  Q*  ]
/// ```
pub fn augmented_covariance(
    q: &CorrelationTensor,
    qt: Option<&CorrelationTensor>,
) -> Result<CorrelationTensor> {
    match q.kind() {
        CorrelationKind::Covariance | CorrelationKind::Correlation => {}
        other => {
            return Err(Error::InvalidArgument(format!(
                "augmented assembly expects a covariance or correlation, got {other:?}"
            )))
        }
    }
    let dims = q.mode_dims();
    if let Some(p) = qt {
        if p.kind() != CorrelationKind::PseudoCovariance {
            return Err(Error::InvalidArgument(
                "augmented assembly expects a pseudo-covariance as second block".into(),
            ));
        }
        if p.mode_dims() != dims {
            return Err(Error::DimMismatch {
                context: "augmented assembly covariance vs pseudo-covariance",
                left: dims.to_vec(),
                right: p.mode_dims().to_vec(),
            });
        }
    }
    let qm = q.matricized();
    let k = qm.nrows();
    let ptm = qt
        .map(|p| p.matricized())
        .unwrap_or_else(|| DMatrix::zeros(k, k));
    let mut m = DMatrix::zeros(2 * k, 2 * k);
    m.view_mut((0, 0), (k, k)).copy_from(&qm);
    m.view_mut((0, k), (k, k)).copy_from(&ptm);
    m.view_mut((k, 0), (k, k)).copy_from(&ptm.map(|z| z.conj()));
    m.view_mut((k, k), (k, k)).copy_from(&qm.map(|z| z.conj()));
    let aug_dims: Vec<usize> = dims
        .iter()
        .copied()
        .chain([2])
        .chain(dims.iter().copied())
        .chain([2])
        .collect();
    let value = dematricize(&m, &Shape::new(aug_dims)?, ModeSplit::square(dims.len() + 1))?;
    CorrelationTensor::new(value, CorrelationKind::Augmented)
}

#[derive(Debug)]
struct InverseForm {
    /// Inverse covariance as an order-2M tensor.
    inverse: DenseTensor,
    log_det: f64,
    condition: f64,
    /// Number of contracted modes when applying the inverse.
    n_modes: usize,
}

fn invert_correlation(r: &CorrelationTensor) -> Result<InverseForm> {
    let m = r.matricized();
    let (eigvals, vecs) = hermitian_eigen(&m);
    let max = eigvals.iter().cloned().fold(f64::MIN, f64::max);
    let min = eigvals.iter().cloned().fold(f64::MAX, f64::min);
    if !(min > SINGULAR_REL * max.max(0.0)) {
        let condition = if min > 0.0 { max / min } else { f64::INFINITY };
        return Err(Error::SingularCovariance { condition });
    }
    let mut scaled = vecs.clone();
    for (j, &l) in eigvals.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / l);
    }
    let inv = &scaled * vecs.adjoint();
    let inverse = dematricize(&inv, r.value().shape(), r.split())?;
    Ok(InverseForm {
        inverse,
        log_det: eigvals.iter().map(|l| l.ln()).sum(),
        condition: max / min,
        n_modes: r.n_modes(),
    })
}

#[derive(Debug)]
enum DensityForm {
    StandardReal,
    /// Real flavor: constant −(K/2)ln 2π, half weights.
    Real(InverseForm),
    /// Proper and circular flavors: constant −K ln π, unit weights.
    Proper(InverseForm),
    /// General flavor over the augmented representation: half weights.
    General { form: InverseForm, mean_aug: DenseTensor },
}

/// Cached evaluator for the log-density of a [`GaussianSpec`].
#[derive(Debug)]
pub struct GaussianDensity {
    shape: Shape,
    flavor: GaussianFlavor,
    mean: DenseTensor,
    form: DensityForm,
}

impl GaussianDensity {
    pub fn new(spec: &GaussianSpec) -> Result<Self> {
        let shape = spec.shape().clone();
        let mean = spec.mean_or_zero();
        let form = match spec.flavor() {
            GaussianFlavor::StandardReal => DensityForm::StandardReal,
            GaussianFlavor::Real => {
                DensityForm::Real(invert_correlation(&spec.covariance_or_identity()?)?)
            }
            GaussianFlavor::Circular | GaussianFlavor::Proper => {
                DensityForm::Proper(invert_correlation(&spec.covariance_or_identity()?)?)
            }
            GaussianFlavor::General => {
                let aug = augmented_covariance(
                    &spec.covariance_or_identity()?,
                    spec.pseudo_covariance(),
                )?;
                let mean_aug = AugmentedTensor::new(mean.clone()).augmented();
                DensityForm::General {
                    form: invert_correlation(&aug)?,
                    mean_aug,
                }
            }
        };
        Ok(Self {
            shape,
            flavor: spec.flavor(),
            mean,
            form,
        })
    }

    pub fn flavor(&self) -> GaussianFlavor {
        self.flavor
    }

    /// Log-determinant of the covariance backing the cached form (the
    /// augmented covariance for the general flavor). Unit for standard real.
    pub fn log_det(&self) -> f64 {
        match &self.form {
            DensityForm::StandardReal => 0.0,
            DensityForm::Real(f) | DensityForm::Proper(f) => f.log_det,
            DensityForm::General { form, .. } => form.log_det,
        }
    }

    pub fn condition(&self) -> f64 {
        match &self.form {
            DensityForm::StandardReal => 1.0,
            DensityForm::Real(f) | DensityForm::Proper(f) => f.condition,
            DensityForm::General { form, .. } => form.condition,
        }
    }

    pub fn log_pdf(&self, x: &DenseTensor) -> Result<f64> {
        if x.shape() != &self.shape {
            return Err(Error::DimMismatch {
                context: "log_pdf argument shape",
                left: self.shape.dims().to_vec(),
                right: x.shape().dims().to_vec(),
            });
        }
        let k = self.shape.len() as f64;
        if matches!(
            self.flavor,
            GaussianFlavor::Real | GaussianFlavor::StandardReal
        ) && !x.is_real_within(VALIDATION_TOL)
        {
            return Err(Error::InvalidArgument(
                "real-flavor density evaluated at a non-real tensor".into(),
            ));
        }
        let value = match &self.form {
            DensityForm::StandardReal => {
                let mut sq = 0.0;
                for z in x.data() {
                    sq += z.norm_sqr();
                }
                -0.5 * k * (2.0 * std::f64::consts::PI).ln() - 0.5 * sq
            }
            DensityForm::Real(f) => {
                let r = x.sub(&self.mean)?;
                -0.5 * k * (2.0 * std::f64::consts::PI).ln()
                    - 0.5 * f.log_det
                    - 0.5 * quad_form(&r, f)?
            }
            DensityForm::Proper(f) => {
                let r = x.sub(&self.mean)?;
                -k * std::f64::consts::PI.ln() - f.log_det - quad_form(&r, f)?
            }
            DensityForm::General { form, mean_aug } => {
                let r = AugmentedTensor::new(x.clone()).augmented().sub(mean_aug)?;
                -k * std::f64::consts::PI.ln() - 0.5 * form.log_det
                    - 0.5 * quad_form(&r, form)?
            }
        };
        Ok(value)
    }
}

/// `conj(z) *_M inv *_M z`, real for Hermitian inverses.
fn quad_form(z: &DenseTensor, f: &InverseForm) -> Result<f64> {
    let left = einstein_product(&z.conj(), &f.inverse, f.n_modes)?;
    let s = einstein_product(&left, z, f.n_modes)?;
    Ok(s.as_scalar().expect("full contraction yields a scalar").re)
}

/// One-shot convenience wrapper; build a [`GaussianDensity`] for loops.
pub fn log_pdf(spec: &GaussianSpec, x: &DenseTensor) -> Result<f64> {
    GaussianDensity::new(spec)?.log_pdf(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::correlation::build_mode_restricted_correlation;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn standard_real_at_origin() {
        let spec = GaussianSpec::standard_real(Shape::new([2, 2]).unwrap());
        let v = log_pdf(&spec, &DenseTensor::zeros(Shape::new([2, 2]).unwrap())).unwrap();
        let expect = -2.0 * (2.0 * std::f64::consts::PI).ln();
        assert!((v - expect).abs() < 1e-14);
    }

    #[test]
    fn scalar_proper_matches_hand_value() {
        let q = CorrelationTensor::new(
            DenseTensor::from_vec(Shape::new([1, 1]).unwrap(), vec![c(2.0, 0.0)]).unwrap(),
            CorrelationKind::Covariance,
        )
        .unwrap();
        let spec =
            GaussianSpec::proper(DenseTensor::zeros(Shape::new([1]).unwrap()), q).unwrap();
        let x = DenseTensor::from_vec(Shape::new([1]).unwrap(), vec![c(1.0, 1.0)]).unwrap();
        let v = log_pdf(&spec, &x).unwrap();
        let expect = -std::f64::consts::PI.ln() - 2.0f64.ln() - 1.0;
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn general_with_zero_pseudo_equals_proper() {
        let f = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.3, 0.2), c(0.3, -0.2), c(1.5, 0.0)],
        );
        let r = build_mode_restricted_correlation(&[2], &[0], &[f]).unwrap();
        let q = CorrelationTensor::new(r.value().clone(), CorrelationKind::Covariance).unwrap();
        let x = DenseTensor::from_vec(
            Shape::new([2]).unwrap(),
            vec![c(0.4, -0.7), c(-1.1, 0.2)],
        )
        .unwrap();
        let zero_pseudo = CorrelationTensor::new(
            DenseTensor::zeros(Shape::new([2, 2]).unwrap()),
            CorrelationKind::PseudoCovariance,
        )
        .unwrap();
        let zero_mean = DenseTensor::zeros(Shape::new([2]).unwrap());
        let proper = log_pdf(&GaussianSpec::proper(zero_mean, q.clone()).unwrap(), &x).unwrap();
        let general =
            log_pdf(&GaussianSpec::general(None, q, zero_pseudo).unwrap(), &x).unwrap();
        assert!((proper - general).abs() < 1e-10);
    }

    #[test]
    fn singular_covariance_is_reported_with_condition() {
        let value = DenseTensor::from_vec(
            Shape::new([2, 2]).unwrap(),
            vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let q = CorrelationTensor::new(value, CorrelationKind::Covariance).unwrap();
        let spec =
            GaussianSpec::proper(DenseTensor::zeros(Shape::new([2]).unwrap()), q).unwrap();
        match GaussianDensity::new(&spec) {
            Err(Error::SingularCovariance { condition }) => assert!(condition > 1e10),
            other => panic!("expected singular covariance, got {other:?}"),
        }
    }

    #[test]
    fn augmented_blocks_sit_in_the_right_slots() {
        let f = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.2, 0.1), c(0.2, -0.1), c(1.0, 0.0)],
        );
        let q = CorrelationTensor::new(
            build_mode_restricted_correlation(&[2], &[0], &[f])
                .unwrap()
                .value()
                .clone(),
            CorrelationKind::Covariance,
        )
        .unwrap();
        let pseudo_value = DenseTensor::from_vec(
            Shape::new([2, 2]).unwrap(),
            vec![c(0.5, 0.0), c(0.1, 0.3), c(0.1, 0.3), c(0.0, 0.4)],
        )
        .unwrap();
        let qt =
            CorrelationTensor::new(pseudo_value, CorrelationKind::PseudoCovariance).unwrap();
        let aug = augmented_covariance(&q, Some(&qt)).unwrap();
        assert_eq!(aug.value().dims(), &[2, 2, 2, 2]);
        // [i, a, i', b]: (a,b)=(0,0) -> Q, (0,1) -> Qt, (1,0) -> conj Qt.
        assert_eq!(aug.value().get(&[0, 0, 1, 0]), q.value().get(&[0, 1]));
        assert_eq!(aug.value().get(&[1, 0, 0, 1]), qt.value().get(&[1, 0]));
        assert_eq!(
            aug.value().get(&[1, 1, 0, 0]),
            qt.value().get(&[1, 0]).conj()
        );
    }

    #[test]
    fn real_scalar_variance_matches_hand_value() {
        let q = CorrelationTensor::new(
            DenseTensor::from_vec(Shape::new([1, 1]).unwrap(), vec![c(4.0, 0.0)]).unwrap(),
            CorrelationKind::Covariance,
        )
        .unwrap();
        let spec = GaussianSpec::real(None, q).unwrap();
        let x = DenseTensor::from_vec(Shape::new([1]).unwrap(), vec![c(2.0, 0.0)]).unwrap();
        let v = log_pdf(&spec, &x).unwrap();
        let expect = -0.5 * (8.0 * std::f64::consts::PI).ln() - 0.5;
        assert!((v - expect).abs() < 1e-12);
    }
}
