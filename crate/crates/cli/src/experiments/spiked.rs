//! `spiked`: sweep the signal strength of a spiked tensor model, recover
//! the planted direction by best-of-restarts power iteration, and plot the
//! empirical alignment against the asymptotic prediction.

use randtensor::spiked::{
    asymmetric_alignment_prediction_from_ratios, asymmetric_alignment_sweep,
    symmetric_alignment_prediction, symmetric_alignment_sweep,
};

use super::{metric_report, num, Csv};
use crate::config::{SpikedConfig, SpikedFamily};
use crate::error::Result;
use crate::manifest::Outputs;
use crate::svg::{self, Figure, Series};

/// Extra theory evaluations per configured grid step, so the predicted
/// curve stays smooth through the transition in the figure.
const CURVE_REFINE: usize = 4;

fn refined_betas(betas: &[f64]) -> Vec<f64> {
    if betas.len() < 2 {
        return betas.to_vec();
    }
    let lo = betas[0];
    let hi = betas[betas.len() - 1];
    let count = CURVE_REFINE * (betas.len() - 1) + 1;
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + step * i as f64).collect()
}

fn alignment_figure(
    empirical: Vec<(f64, f64)>,
    theory: Vec<(f64, f64)>,
    title: &str,
) -> Figure {
    Figure {
        title: title.to_string(),
        x_label: "signal strength (dimensionless)".to_string(),
        y_label: "alignment |<u, x>| (dimensionless)".to_string(),
        bars: Vec::new(),
        bar_label: None,
        series: vec![
            Series {
                label: "empirical mean alignment".to_string(),
                color: svg::SERIES_COLORS[0],
                points: empirical,
                markers: true,
            },
            Series {
                label: "asymptotic prediction".to_string(),
                color: svg::SERIES_COLORS[1],
                points: theory,
                markers: false,
            },
        ],
    }
}

pub fn run(cfg: &SpikedConfig, out: &mut Outputs) -> Result<()> {
    let betas = cfg.betas();
    match cfg.family {
        SpikedFamily::Symmetric => {
            let order = cfg.order.expect("validated");
            let dim = cfg.dim.expect("validated");
            let rows = symmetric_alignment_sweep(
                order,
                dim,
                &betas,
                cfg.trials,
                cfg.restarts,
                cfg.max_iters,
                cfg.tol,
                cfg.seed,
            )?;

            let mut csv = Csv::new(&[
                "beta (signal strength)",
                "empirical_alignment (trial mean of the overlap with the planted direction)",
                "empirical_lambda (mean recovered eigenvalue)",
                "theory_alignment",
                "theory_lambda",
                "theory_feasible",
                "n_trials",
            ]);
            for r in &rows {
                csv.row(&[
                    num(r.beta),
                    num(r.empirical_alignment),
                    num(r.empirical_lambda),
                    num(r.theory.alignment),
                    num(r.theory.lambda),
                    r.theory.feasible.to_string(),
                    r.n_trials.to_string(),
                ]);
            }
            out.write("alignment.csv", &csv.into_bytes())?;

            let theory_curve: Vec<(f64, f64)> = refined_betas(&betas)
                .into_iter()
                .map(|b| {
                    if b > 0.0 {
                        Ok((b, symmetric_alignment_prediction(order, b)?.alignment))
                    } else {
                        Ok((b, 0.0))
                    }
                })
                .collect::<Result<_>>()?;
            let empirical: Vec<(f64, f64)> = rows
                .iter()
                .map(|r| (r.beta, r.empirical_alignment))
                .collect();
            let fig = alignment_figure(
                empirical,
                theory_curve,
                &format!("Symmetric spiked recovery (order {order}, dim {dim})"),
            );
            out.write("figure.svg", svg::render(&fig, out.run_checksum()).as_bytes())?;

            let report = [
                ("betas", betas.len().to_string()),
                ("trials_per_beta", cfg.trials.to_string()),
                ("restarts", cfg.restarts.to_string()),
                ("tol", num(cfg.tol)),
            ];
            out.write("report.csv", &metric_report(&report))?;
        }
        SpikedFamily::Asymmetric => {
            let dims = cfg.dims.as_ref().expect("validated");
            let mut rows = asymmetric_alignment_sweep(
                dims,
                &betas,
                cfg.trials,
                cfg.restarts,
                cfg.max_iters,
                cfg.tol,
                cfg.seed,
            )?;
            // The theory depends on the dims only through the ratios, so an
            // explicit ratio override replaces each prediction.
            if let Some(ratios) = &cfg.mode_ratios {
                for row in &mut rows {
                    if row.beta > 0.0 {
                        row.theory =
                            asymmetric_alignment_prediction_from_ratios(ratios, row.beta)?;
                    }
                }
            }

            let mut csv = Csv::new(&[
                "beta (signal strength)",
                "mode (zero-based)",
                "empirical_alignment (trial mean of the mode overlap with the planted factor)",
                "empirical_lambda (mean recovered singular value)",
                "theory_alignment",
                "theory_lambda",
                "theory_feasible",
                "n_trials",
            ]);
            for r in &rows {
                for (k, &ea) in r.empirical_alignments.iter().enumerate() {
                    let ta = r.theory.alignments.get(k).copied().unwrap_or(0.0);
                    csv.row(&[
                        num(r.beta),
                        k.to_string(),
                        num(ea),
                        num(r.empirical_lambda),
                        num(ta),
                        num(r.theory.lambda),
                        r.theory.feasible.to_string(),
                        r.n_trials.to_string(),
                    ]);
                }
            }
            out.write("alignment.csv", &csv.into_bytes())?;

            let n_modes = dims.len() as f64;
            let ratios: Vec<f64> = match &cfg.mode_ratios {
                Some(r) => r.clone(),
                None => {
                    let total: usize = dims.iter().sum();
                    dims.iter().map(|&d| d as f64 / total as f64).collect()
                }
            };
            let theory_curve: Vec<(f64, f64)> = refined_betas(&betas)
                .into_iter()
                .map(|b| {
                    if b > 0.0 {
                        let p = asymmetric_alignment_prediction_from_ratios(&ratios, b)?;
                        let mean = if p.feasible {
                            p.alignments.iter().sum::<f64>() / n_modes
                        } else {
                            0.0
                        };
                        Ok((b, mean))
                    } else {
                        Ok((b, 0.0))
                    }
                })
                .collect::<Result<_>>()?;
            let empirical: Vec<(f64, f64)> = rows
                .iter()
                .map(|r| {
                    (
                        r.beta,
                        r.empirical_alignments.iter().sum::<f64>() / n_modes,
                    )
                })
                .collect();
            let dims_text: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
            let fig = alignment_figure(
                empirical,
                theory_curve,
                &format!("Asymmetric spiked recovery (dims {})", dims_text.join("x")),
            );
            out.write("figure.svg", svg::render(&fig, out.run_checksum()).as_bytes())?;

            let report = [
                ("betas", betas.len().to_string()),
                ("trials_per_beta", cfg.trials.to_string()),
                ("restarts", cfg.restarts.to_string()),
                ("tol", num(cfg.tol)),
            ];
            out.write("report.csv", &metric_report(&report))?;
        }
    }
    Ok(())
}
