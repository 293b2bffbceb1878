//! `process`: filter a white-in-time correlated Gaussian sequence, emit the
//! empirical and deterministic second-order curves in time and frequency,
//! and run the stationary-relation verification reports.

use randtensor::gaussian::{random_correlation, CorrelationTensor};
use randtensor::io::write_tensor;
use randtensor::process::{
    estimate_autocorrelation, estimate_crosscorrelation, filtered_autocorrelation,
    filtered_crosscorrelation, frequency_grid, psd, random_filter, simulate_filtered_process,
    verify_spectral_relations, verify_wss_filter_relations, CorrelationSequence,
};
use randtensor::rng::stream_rng;

use super::{metric_report, num, Csv, GEN_STREAM};
use crate::config::{ProcessConfig, ProcessInput};
use crate::error::Result;
use crate::manifest::Outputs;

/// One row per (series, lag, flat index): empirical estimates next to the
/// deterministic evaluation of the filtering relations.
fn correlation_csv(
    series: &[(&str, &CorrelationSequence)],
) -> Csv {
    let mut csv = Csv::new(&[
        "series",
        "lag (steps)",
        "flat_index (storage order; first index fastest)",
        "re (dimensionless)",
        "im (dimensionless)",
    ]);
    for (name, seq) in series {
        for (lag, v) in seq.iter() {
            for (fi, z) in v.data().iter().enumerate() {
                csv.row(&[
                    (*name).to_string(),
                    lag.to_string(),
                    fi.to_string(),
                    num(z.re),
                    num(z.im),
                ]);
            }
        }
    }
    csv
}

pub fn run(cfg: &ProcessConfig, out: &mut Outputs) -> Result<()> {
    let mut gen_rng = stream_rng(cfg.seed, GEN_STREAM);
    let f = random_filter(&cfg.dims, cfg.n_taps, &mut gen_rng)?;
    let x_corr = match cfg.input {
        ProcessInput::Identity => CorrelationTensor::identity(&cfg.dims)?,
        ProcessInput::RandomPsd => random_correlation(&cfg.dims, &mut gen_rng)?,
    };

    let mut taps_text = Vec::new();
    for (_, h) in f.taps().iter() {
        write_tensor(h, &mut taps_text)?;
    }
    out.write("filter_taps.rt", &taps_text)?;
    let mut corr_text = Vec::new();
    write_tensor(x_corr.value(), &mut corr_text)?;
    out.write("input_correlation.rt", &corr_text)?;

    // The verification reports re-simulate internally from the same seed,
    // so the curves below describe exactly the realizations they judged.
    let wss = verify_wss_filter_relations(&f, &x_corr, cfg.time_steps, cfg.n_realizations, cfg.seed)?;
    let spectral = verify_spectral_relations(
        &f,
        &x_corr,
        cfg.grid_points,
        cfg.time_steps,
        cfg.n_realizations,
        cfg.seed,
    )?;

    let (xs, ys) = simulate_filtered_process(&f, &x_corr, cfg.time_steps, cfg.n_realizations, cfg.seed)?;
    let auto_lag = cfg.n_taps - 1;
    let white = CorrelationSequence::white(&x_corr);
    let est_auto = estimate_autocorrelation(&ys, auto_lag)?;
    let det_auto = filtered_autocorrelation(&f, &white, auto_lag)?;
    let est_cross = estimate_crosscorrelation(&ys, &xs, auto_lag)?;
    let det_cross = filtered_crosscorrelation(&f, &white, auto_lag)?;
    out.write(
        "autocorrelation.csv",
        &correlation_csv(&[("empirical", &est_auto), ("deterministic", &det_auto)]).into_bytes(),
    )?;
    out.write(
        "crosscorrelation.csv",
        &correlation_csv(&[("empirical", &est_cross), ("deterministic", &det_cross)]).into_bytes(),
    )?;

    let grid = frequency_grid(cfg.grid_points);
    let s_est = psd(&est_auto, &grid);
    let s_det = psd(&det_auto, &grid);
    let mut csv = Csv::new(&[
        "series",
        "frequency (cycles per step)",
        "flat_index (storage order; first index fastest)",
        "re (dimensionless)",
        "im (dimensionless)",
    ]);
    for (name, spectra) in [("empirical", &s_est), ("deterministic", &s_det)] {
        for (g, v) in spectra.iter().enumerate() {
            for (fi, z) in v.data().iter().enumerate() {
                csv.row(&[
                    name.to_string(),
                    num(grid[g]),
                    fi.to_string(),
                    num(z.re),
                    num(z.im),
                ]);
            }
        }
    }
    out.write("spectrum.csv", &csv.into_bytes())?;

    let rows = [
        ("n_realizations", wss.n_realizations.to_string()),
        ("time_steps", wss.time_steps.to_string()),
        ("mean_max_deviation", num(wss.mean_max_deviation)),
        (
            "autocorrelation_max_error",
            num(wss.autocorrelation_max_error),
        ),
        (
            "crosscorrelation_max_error",
            num(wss.crosscorrelation_max_error),
        ),
        ("auto_max_lag", wss.auto_max_lag.to_string()),
        ("cross_max_lag", wss.cross_max_lag.to_string()),
        ("grid_points", spectral.grid_points.to_string()),
        ("autospectrum_max_error", num(spectral.autospectrum_max_error)),
        (
            "cross_spectrum_max_error",
            num(spectral.cross_spectrum_max_error),
        ),
    ];
    out.write("report.csv", &metric_report(&rows))?;
    Ok(())
}
