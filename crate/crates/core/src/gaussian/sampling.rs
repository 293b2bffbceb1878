//! Gaussian tensor samplers.
//!
//! All samplers draw from a caller-supplied generator so that callers control
//! the `(seed, stream)` addressing; see [`crate::rng`]. Correlated samples
//! are produced as `C *_N B` with `C` the Hermitian square root of the
//! correlation and `B` an i.i.d. tensor. Improper (general) tensors go
//! through the composite real representation: a real Gaussian vector with
//! the covariance implied by `(Q, Qt)` is drawn and reassembled into a
//! complex tensor.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use super::correlation::{psd_sqrt_real, CorrelationTensor, SeparableCorrelation};
use super::{GaussianFlavor, GaussianSpec};
use crate::algebra::mode_n_product;
use crate::error::Result;
use crate::rng::{standard_complex, standard_real};
use crate::shape::Shape;
use crate::tensor::DenseTensor;

/// Draws a tensor with i.i.d. entries.
///
/// Complex flavors draw circularly symmetric unit-variance entries (real and
/// imaginary parts independent `N(0, 1/2)`); real flavors draw `N(0, 1)`.
pub fn sample_iid(shape: &Shape, flavor: GaussianFlavor, rng: &mut impl Rng) -> DenseTensor {
    let data: Vec<Complex64> = match flavor {
        GaussianFlavor::Real | GaussianFlavor::StandardReal => (0..shape.len())
            .map(|_| Complex64::new(standard_real(rng), 0.0))
            .collect(),
        _ => (0..shape.len()).map(|_| standard_complex(rng)).collect(),
    };
    DenseTensor::from_vec(shape.clone(), data).expect("length matches shape")
}

/// Sampler for a fixed correlation tensor, caching the matricized square
/// root so repeated draws cost one matrix-vector product each.
#[derive(Clone, Debug)]
pub struct CorrelatedSampler {
    sqrt: DMatrix<Complex64>,
    shape: Shape,
}

impl CorrelatedSampler {
    pub fn new(r: &CorrelationTensor) -> Result<Self> {
        let root = r.sqrt()?;
        let sqrt = crate::algebra::matricize(&root, r.split())?;
        Ok(Self {
            sqrt,
            shape: Shape::new(r.mode_dims())?,
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// One draw `C *_N B` with `B` i.i.d. circular.
    pub fn sample(&self, rng: &mut impl Rng) -> DenseTensor {
        let b = DVector::from_fn(self.shape.len(), |_, _| standard_complex(rng));
        let v = &self.sqrt * b;
        DenseTensor::from_vec(self.shape.clone(), v.data.into())
            .expect("length matches shape")
    }
}

/// One correlated draw; builds the square root on every call, so prefer
/// [`CorrelatedSampler`] inside loops.
pub fn sample_correlated(
    r: &CorrelationTensor,
    rng: &mut impl Rng,
) -> Result<DenseTensor> {
    Ok(CorrelatedSampler::new(r)?.sample(rng))
}

/// Sampler for a separable correlation, applying one factor square root per
/// mode: `X x_1 A_1 x_2 ... x_N A_N` with `X` i.i.d. circular.
#[derive(Clone, Debug)]
pub struct SeparableSampler {
    factor_sqrts: Vec<DMatrix<Complex64>>,
    shape: Shape,
}

impl SeparableSampler {
    pub fn new(s: &SeparableCorrelation) -> Result<Self> {
        Ok(Self {
            factor_sqrts: s.factor_sqrts()?,
            shape: Shape::new(s.dims())?,
        })
    }

    pub fn sample(&self, rng: &mut impl Rng) -> DenseTensor {
        let mut x = sample_iid(&self.shape, GaussianFlavor::Circular, rng);
        for (n, a) in self.factor_sqrts.iter().enumerate() {
            x = mode_n_product(&x, a, n).expect("factor dims validated at construction");
        }
        x
    }
}

/// One separable draw; see [`SeparableSampler`] for loops.
pub fn sample_separable(
    s: &SeparableCorrelation,
    rng: &mut impl Rng,
) -> Result<DenseTensor> {
    Ok(SeparableSampler::new(s)?.sample(rng))
}

/// Real covariance of the composite representation `[Re(x); Im(x)]` implied
/// by a covariance `Q` and pseudo-covariance `Qt` (matricized inputs):
///
/// ```text
/// E[uu^T] = Re(Q + Qt) / 2    E[uv^T] = (Im(Qt) - Im(Q)) / 2
/// E[vu^T] = (Im(Qt) + Im(Q)) / 2    E[vv^T] = Re(Q - Qt) / 2
/// ```
pub fn composite_covariance(
    q: &DMatrix<Complex64>,
    qt: &DMatrix<Complex64>,
) -> DMatrix<f64> {
    let k = q.nrows();
    let mut c = DMatrix::zeros(2 * k, 2 * k);
    for j in 0..k {
        for i in 0..k {
            let qq = q[(i, j)];
            let pp = qt[(i, j)];
            c[(i, j)] = 0.5 * (qq.re + pp.re);
            c[(i + k, j + k)] = 0.5 * (qq.re - pp.re);
            c[(i, j + k)] = 0.5 * (pp.im - qq.im);
            c[(i + k, j)] = 0.5 * (pp.im + qq.im);
        }
    }
    // Kill rounding asymmetry before any eigendecomposition downstream.
    let sym = 0.5 * (&c + c.transpose());
    sym
}

enum SamplerKind {
    StandardReal,
    RealLinear { sqrt: DMatrix<f64> },
    CircularLinear { sqrt: DMatrix<Complex64> },
    Composite { sqrt: DMatrix<f64> },
}

/// Sampler for an arbitrary [`GaussianSpec`], caching the flavor-appropriate
/// square root.
pub struct GaussianSampler {
    kind: SamplerKind,
    shape: Shape,
    mean: Option<DenseTensor>,
}

impl GaussianSampler {
    pub fn new(spec: &GaussianSpec) -> Result<Self> {
        let shape = spec.shape().clone();
        let kind = match spec.flavor() {
            GaussianFlavor::StandardReal => SamplerKind::StandardReal,
            GaussianFlavor::Real => {
                let q = spec.covariance_or_identity()?.matricized();
                let sqrt = psd_sqrt_real(&q.map(|z| z.re))?;
                SamplerKind::RealLinear { sqrt }
            }
            GaussianFlavor::Circular | GaussianFlavor::Proper => {
                let cov = spec.covariance_or_identity()?;
                SamplerKind::CircularLinear {
                    sqrt: CorrelatedSampler::new(&cov)?.sqrt,
                }
            }
            GaussianFlavor::General => {
                let q = spec.covariance_or_identity()?.matricized();
                let qt = spec
                    .pseudo_covariance()
                    .map(|p| p.matricized())
                    .unwrap_or_else(|| DMatrix::zeros(q.nrows(), q.ncols()));
                let c = composite_covariance(&q, &qt);
                SamplerKind::Composite {
                    sqrt: psd_sqrt_real(&c)?,
                }
            }
        };
        Ok(Self {
            kind,
            shape,
            mean: spec.mean().cloned(),
        })
    }

    pub fn sample(&self, rng: &mut impl Rng) -> DenseTensor {
        let k = self.shape.len();
        let mut x = match &self.kind {
            SamplerKind::StandardReal => {
                sample_iid(&self.shape, GaussianFlavor::StandardReal, rng)
            }
            SamplerKind::RealLinear { sqrt } => {
                let z = DVector::from_fn(k, |_, _| standard_real(rng));
                let v = sqrt * z;
                DenseTensor::from_vec(
                    self.shape.clone(),
                    v.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
                )
                .expect("length matches shape")
            }
            SamplerKind::CircularLinear { sqrt } => {
                let b = DVector::from_fn(k, |_, _| standard_complex(rng));
                let v = sqrt * b;
                DenseTensor::from_vec(self.shape.clone(), v.data.into())
                    .expect("length matches shape")
            }
            SamplerKind::Composite { sqrt } => {
                let z = DVector::from_fn(2 * k, |_, _| standard_real(rng));
                let w = sqrt * z;
                let data: Vec<Complex64> = (0..k)
                    .map(|i| Complex64::new(w[i], w[i + k]))
                    .collect();
                DenseTensor::from_vec(self.shape.clone(), data)
                    .expect("length matches shape")
            }
        };
        if let Some(m) = &self.mean {
            x.add_assign(m).expect("mean shape validated");
        }
        x
    }
}

/// One draw from a [`GaussianSpec`]; see [`GaussianSampler`] for loops.
pub fn sample_gaussian(spec: &GaussianSpec, rng: &mut impl Rng) -> Result<DenseTensor> {
    Ok(GaussianSampler::new(spec)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::correlation::build_mode_restricted_correlation;
    use crate::rng::stream_rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn iid_real_flavor_has_zero_imaginary_parts() {
        let mut rng = stream_rng(1, 0);
        let t = sample_iid(
            &Shape::new([3, 3]).unwrap(),
            GaussianFlavor::StandardReal,
            &mut rng,
        );
        assert!(t.is_real_within(0.0));
    }

    #[test]
    fn correlated_sampler_is_deterministic_per_stream() {
        let f = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.4, 0.1), c(0.4, -0.1), c(1.0, 0.0)]);
        let r = build_mode_restricted_correlation(&[2, 2], &[0], &[f]).unwrap();
        let sampler = CorrelatedSampler::new(&r).unwrap();
        let a = sampler.sample(&mut stream_rng(9, 2));
        let b = sampler.sample(&mut stream_rng(9, 2));
        assert_eq!(a, b);
    }

    #[test]
    fn composite_covariance_of_circular_is_isotropic() {
        let q = DMatrix::from_element(1, 1, c(1.0, 0.0));
        let qt = DMatrix::from_element(1, 1, c(0.0, 0.0));
        let comp = composite_covariance(&q, &qt);
        assert!((comp[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((comp[(1, 1)] - 0.5).abs() < 1e-15);
        assert!(comp[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn composite_covariance_blocks_are_consistent() {
        // x = z + 0.8 conj(z) for scalar circular z: Q = 1.64, Qt = 1.6.
        let q = DMatrix::from_element(1, 1, c(1.64, 0.0));
        let qt = DMatrix::from_element(1, 1, c(1.6, 0.0));
        let comp = composite_covariance(&q, &qt);
        // Var(Re) = (1.64 + 1.6)/2, Var(Im) = (1.64 - 1.6)/2.
        assert!((comp[(0, 0)] - 1.62).abs() < 1e-12);
        assert!((comp[(1, 1)] - 0.02).abs() < 1e-12);
    }
}
