//! Sample moment estimators.
//!
//! Estimators accumulate outer products with BLAS rank-1 updates; using the
//! same vector on both sides makes the covariance estimate Hermitian and the
//! pseudo-covariance estimate symmetric exactly, not just up to rounding.
//! Accumulation is chunked with a fixed chunk count and reduced in chunk
//! order, so results do not depend on the number of worker threads.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::correlation::{CorrelationKind, CorrelationTensor};
use crate::algebra::dematricize;
use crate::error::{Error, Result};
use crate::shape::{ModeSplit, Shape};
use crate::tensor::DenseTensor;

const PAR_CHUNKS: usize = 64;

/// Sample mean, covariance, pseudo-covariance and the assembled augmented
/// covariance of a set of draws.
#[derive(Clone, Debug)]
pub struct MomentEstimate {
    pub mean: DenseTensor,
    pub covariance: CorrelationTensor,
    pub pseudo_covariance: CorrelationTensor,
    pub augmented: CorrelationTensor,
    pub n_samples: usize,
}

impl MomentEstimate {
    /// Ratio `|Qt|_F / |Q|_F`; zero for proper tensors.
    pub fn propriety_statistic(&self) -> Result<f64> {
        propriety_statistic(&self.covariance, &self.pseudo_covariance)
    }
}

fn check_samples(samples: &[DenseTensor], min: usize) -> Result<&Shape> {
    if samples.len() < min {
        return Err(Error::NotEnoughSamples {
            what: "moment estimation",
            min,
            found: samples.len(),
        });
    }
    let first = samples[0].shape();
    for s in samples {
        if s.shape() != first {
            return Err(Error::DimMismatch {
                context: "moment estimation sample shapes",
                left: first.dims().to_vec(),
                right: s.shape().dims().to_vec(),
            });
        }
    }
    Ok(first)
}

fn accumulate_outer(
    samples: &[DenseTensor],
    center: Option<&DenseTensor>,
    k: usize,
) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let chunk_len = samples.len().div_ceil(PAR_CHUNKS).max(1);
    let partials: Vec<_> = samples
        .par_chunks(chunk_len)
        .map(|chunk| {
            let mut herm = DMatrix::<Complex64>::zeros(k, k);
            let mut sym = DMatrix::<Complex64>::zeros(k, k);
            let mut x = DVector::<Complex64>::zeros(k);
            for s in chunk {
                for (xi, si) in x.iter_mut().zip(s.data()) {
                    *xi = *si;
                }
                if let Some(m) = center {
                    for (xi, mi) in x.iter_mut().zip(m.data()) {
                        *xi -= *mi;
                    }
                }
                herm.gerc(Complex64::new(1.0, 0.0), &x, &x, Complex64::new(1.0, 0.0));
                sym.ger(Complex64::new(1.0, 0.0), &x, &x, Complex64::new(1.0, 0.0));
            }
            (herm, sym)
        })
        .collect();
    let mut herm = DMatrix::<Complex64>::zeros(k, k);
    let mut sym = DMatrix::<Complex64>::zeros(k, k);
    for (h, s) in partials {
        herm += h;
        sym += s;
    }
    (herm, sym)
}

fn sample_mean(samples: &[DenseTensor], shape: &Shape) -> DenseTensor {
    let mut acc = vec![Complex64::new(0.0, 0.0); shape.len()];
    for s in samples {
        for (a, v) in acc.iter_mut().zip(s.data()) {
            *a += v;
        }
    }
    let inv = 1.0 / samples.len() as f64;
    for a in &mut acc {
        *a *= inv;
    }
    DenseTensor::from_vec(shape.clone(), acc).expect("length matches shape")
}

fn outer_to_tensor(
    m: DMatrix<Complex64>,
    shape: &Shape,
    kind: CorrelationKind,
) -> Result<CorrelationTensor> {
    let dims: Vec<usize> = shape
        .dims()
        .iter()
        .chain(shape.dims())
        .copied()
        .collect();
    let value = dematricize(&m, &Shape::new(dims)?, ModeSplit::square(shape.order()))?;
    CorrelationTensor::new(value, kind)
}

/// Mean, centered covariance and centered pseudo-covariance of `samples`.
pub fn estimate_moments(samples: &[DenseTensor]) -> Result<MomentEstimate> {
    let shape = check_samples(samples, 2)?.clone();
    let n = samples.len();
    let mean = sample_mean(samples, &shape);
    let (mut herm, mut sym) = accumulate_outer(samples, Some(&mean), shape.len());
    let inv = Complex64::new(1.0 / n as f64, 0.0);
    herm *= inv;
    sym *= inv;
    let covariance = outer_to_tensor(herm, &shape, CorrelationKind::Covariance)?;
    let pseudo_covariance = outer_to_tensor(sym, &shape, CorrelationKind::PseudoCovariance)?;
    let augmented = super::density::augmented_covariance(&covariance, Some(&pseudo_covariance))?;
    Ok(MomentEstimate {
        mean,
        covariance,
        pseudo_covariance,
        augmented,
        n_samples: n,
    })
}

/// Uncentered correlation estimate `avg x x^H` as an order-`2N` tensor.
pub fn estimate_correlation(samples: &[DenseTensor]) -> Result<CorrelationTensor> {
    let shape = check_samples(samples, 1)?.clone();
    let (mut herm, _) = accumulate_outer(samples, None, shape.len());
    herm *= Complex64::new(1.0 / samples.len() as f64, 0.0);
    outer_to_tensor(herm, &shape, CorrelationKind::Correlation)
}

/// Ratio `|Qt|_F / |Q|_F`. Errors if the covariance is identically zero.
pub fn propriety_statistic(
    covariance: &CorrelationTensor,
    pseudo: &CorrelationTensor,
) -> Result<f64> {
    let denom = covariance.value().frobenius_norm();
    if denom == 0.0 {
        return Err(Error::InvalidArgument(
            "propriety statistic undefined for zero covariance".into(),
        ));
    }
    Ok(pseudo.value().frobenius_norm() / denom)
}
