//! `moments`: draw from a known Gaussian spec, estimate mean, covariance,
//! and pseudo-covariance, and report the gaps to the population values.

use nalgebra::DMatrix;
use num_complex::Complex64;

use randtensor::algebra::identity_tensor;
use randtensor::gaussian::{
    estimate_moments, random_improper_spec, random_proper_spec, CorrelationKind,
    CorrelationTensor, GaussianSampler, GaussianSpec,
};
use randtensor::rng::stream_rng;
use randtensor::shape::Shape;

use super::{metric_report, num, relative_matrix_error, Csv, GEN_STREAM};
use crate::config::{MomentsConfig, MomentsFamily};
use crate::error::{CliError, Result};
use crate::manifest::Outputs;

pub fn run(cfg: &MomentsConfig, out: &mut Outputs) -> Result<()> {
    let shape = Shape::new(cfg.dims.clone()).map_err(CliError::Runtime)?;
    let mut gen_rng = stream_rng(cfg.seed, GEN_STREAM);
    let mut sample_rng = stream_rng(cfg.seed, 0);

    let spec: GaussianSpec = match cfg.family {
        MomentsFamily::Circular => GaussianSpec::circular(CorrelationTensor::new(
            identity_tensor(&cfg.dims)?,
            CorrelationKind::Covariance,
        )?)?,
        MomentsFamily::StandardReal => GaussianSpec::standard_real(shape.clone()),
        MomentsFamily::Proper => random_proper_spec(&cfg.dims, &mut gen_rng)?,
        MomentsFamily::Improper => random_improper_spec(&cfg.dims, &mut gen_rng)?,
    };

    let sampler = GaussianSampler::new(&spec)?;
    let samples: Vec<_> = (0..cfg.n_samples)
        .map(|_| sampler.sample(&mut sample_rng))
        .collect();
    let est = estimate_moments(&samples)?;

    let k = shape.len();
    let mut csv = Csv::new(&[
        "component",
        "row",
        "col (0 for the mean vector)",
        "re (dimensionless)",
        "im (dimensionless)",
    ]);
    for (fi, z) in est.mean.data().iter().enumerate() {
        csv.row(&[
            "mean".to_string(),
            fi.to_string(),
            "0".to_string(),
            num(z.re),
            num(z.im),
        ]);
    }
    for (name, m) in [
        ("covariance", est.covariance.matricized()),
        ("pseudo_covariance", est.pseudo_covariance.matricized()),
    ] {
        for col in 0..m.ncols() {
            for row in 0..m.nrows() {
                let z = m[(row, col)];
                csv.row(&[
                    name.to_string(),
                    row.to_string(),
                    col.to_string(),
                    num(z.re),
                    num(z.im),
                ]);
            }
        }
    }
    out.write("moments.csv", &csv.into_bytes())?;

    // Population counterparts for the error report. Real flavors carry
    // their covariance as pseudo-covariance too, since conjugation is a
    // no-op on real tensors.
    let pop_mean = spec.mean_or_zero();
    let pop_cov = spec.covariance_or_identity()?.matricized();
    let pop_pseudo: DMatrix<Complex64> = if spec.is_real_flavor() {
        pop_cov.clone()
    } else {
        match spec.pseudo_covariance() {
            Some(qt) => qt.matricized(),
            None => DMatrix::zeros(k, k),
        }
    };

    let mean_err = est
        .mean
        .sub(&pop_mean)
        .map_err(CliError::Runtime)?
        .frobenius_norm();
    let report = [
        ("n_samples", cfg.n_samples.to_string()),
        ("propriety_statistic", num(est.propriety_statistic()?)),
        ("mean_absolute_error", num(mean_err)),
        (
            "covariance_relative_error",
            num(relative_matrix_error(&est.covariance.matricized(), &pop_cov)),
        ),
        (
            "pseudo_covariance_absolute_error",
            num((est.pseudo_covariance.matricized() - pop_pseudo).norm()),
        ),
    ];
    out.write("report.csv", &metric_report(&report))?;
    Ok(())
}
