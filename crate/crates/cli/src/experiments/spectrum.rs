//! `spectrum`: pool eigenvalues of a random tensor ensemble, compare the
//! empirical distribution against the matching limit law, and render the
//! histogram-with-curve figure.

use randtensor::spectral::{
    empirical_spectrum_hermitian, empirical_spectrum_rectangular, ks_distance,
    marcenko_pastur_cdf, marcenko_pastur_density, marcenko_pastur_edges,
    marcenko_pastur_point_mass, semicircle_cdf, semicircle_density, EmpiricalSpectrum,
};

use super::{metric_report, num, Csv};
use crate::config::{Ensemble, SpectrumConfig};
use crate::error::Result;
use crate::manifest::Outputs;
use crate::svg::{self, Bar, Figure, Series};

/// Histogram bin count fixed by the figure convention: 40 uniform bins over
/// the limit support extended by 10% (5% beyond each edge).
const BINS: usize = 40;
const SUPPORT_PAD: f64 = 0.05;
const CURVE_POINTS: usize = 241;

struct Law {
    name: String,
    support: (f64, f64),
    density: Box<dyn Fn(f64) -> f64>,
    cdf: Box<dyn Fn(f64) -> f64>,
}

pub fn run(cfg: &SpectrumConfig, out: &mut Outputs) -> Result<()> {
    let (spectrum, law, mut report): (EmpiricalSpectrum, Law, Vec<(&str, String)>) =
        match cfg.ensemble {
            Ensemble::Hermitian => {
                let dims = cfg.leading_dims.as_ref().expect("validated");
                let spectrum = empirical_spectrum_hermitian(dims, cfg.n_trials, cfg.seed)?;
                let side: usize = dims.iter().product();
                let law = Law {
                    name: "semicircle density (radius 2)".to_string(),
                    support: (-2.0, 2.0),
                    density: Box::new(|x| semicircle_density(x, 2.0).expect("radius fixed")),
                    cdf: Box::new(|x| semicircle_cdf(x, 2.0).expect("radius fixed")),
                };
                let report = vec![("matricized_side", side.to_string())];
                (spectrum, law, report)
            }
            Ensemble::Rectangular => {
                let rows = cfg.row_dims.as_ref().expect("validated");
                let cols = cfg.col_dims.as_ref().expect("validated");
                let spectrum = empirical_spectrum_rectangular(rows, cols, cfg.n_trials, cfg.seed)?;
                let r: usize = rows.iter().product();
                let c_cols: usize = cols.iter().product();
                let c = r as f64 / c_cols as f64;
                let edges = marcenko_pastur_edges(c)?;
                let law = Law {
                    name: format!("Marchenko-Pastur density (c = {c})"),
                    support: edges,
                    density: Box::new(move |x| {
                        marcenko_pastur_density(x, c).expect("ratio fixed")
                    }),
                    cdf: Box::new(move |x| marcenko_pastur_cdf(x, c).expect("ratio fixed")),
                };
                let report = vec![
                    ("matricized_rows", r.to_string()),
                    ("matricized_cols", c_cols.to_string()),
                    ("aspect_ratio", num(c)),
                    ("point_mass_at_zero", num(marcenko_pastur_point_mass(c)?)),
                ];
                (spectrum, law, report)
            }
        };

    let value_name = match cfg.ensemble {
        Ensemble::Hermitian => "eigenvalue of the scaled matricization",
        Ensemble::Rectangular => "squared singular value of the scaled matricization",
    };
    let header = format!("value ({value_name})");
    let mut csv = Csv::new(&["index", header.as_str()]);
    for (i, v) in spectrum.values().iter().enumerate() {
        csv.row(&[i.to_string(), num(*v)]);
    }
    out.write("spectrum.csv", &csv.into_bytes())?;

    // Histogram over the extended support; the KS distance uses every
    // pooled value, binning only affects the figure and density CSV.
    let width = law.support.1 - law.support.0;
    let lo = law.support.0 - SUPPORT_PAD * width;
    let hi = law.support.1 + SUPPORT_PAD * width;
    let bin_w = (hi - lo) / BINS as f64;
    let n = spectrum.len();
    let mut counts = vec![0usize; BINS];
    for &v in spectrum.values() {
        if v >= lo && v < hi {
            counts[((v - lo) / bin_w) as usize] += 1;
        }
    }

    let mut density_csv = Csv::new(&[
        "bin_lo",
        "bin_hi",
        "bin_center",
        "empirical_density (probability per unit value)",
        "limit_density (probability per unit value)",
    ]);
    let mut bars = Vec::with_capacity(BINS);
    for (b, &count) in counts.iter().enumerate() {
        let b_lo = lo + b as f64 * bin_w;
        let b_hi = b_lo + bin_w;
        let center = 0.5 * (b_lo + b_hi);
        let emp = count as f64 / (n as f64 * bin_w);
        density_csv.row(&[
            num(b_lo),
            num(b_hi),
            num(center),
            num(emp),
            num((law.density)(center)),
        ]);
        bars.push(Bar {
            x0: b_lo,
            x1: b_hi,
            height: emp,
        });
    }
    out.write("density.csv", &density_csv.into_bytes())?;

    let ks = ks_distance(&spectrum, &law.cdf)?;
    report.splice(
        0..0,
        [
            ("n_trials", cfg.n_trials.to_string()),
            ("n_values", n.to_string()),
            ("ks_distance", num(ks)),
        ],
    );
    out.write("report.csv", &metric_report(&report))?;

    let curve: Vec<(f64, f64)> = (0..CURVE_POINTS)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (CURVE_POINTS - 1) as f64;
            (x, (law.density)(x))
        })
        .collect();
    let fig = Figure {
        title: match cfg.ensemble {
            Ensemble::Hermitian => "Pooled spectrum vs semicircle law".to_string(),
            Ensemble::Rectangular => "Pooled spectrum vs Marchenko-Pastur law".to_string(),
        },
        x_label: value_name.to_string(),
        y_label: "density (probability per unit value)".to_string(),
        bars,
        bar_label: Some(format!("empirical ({} values)", n)),
        series: vec![Series {
            label: law.name,
            color: svg::SERIES_COLORS[0],
            points: curve,
            markers: false,
        }],
    };
    let rendered = svg::render(&fig, out.run_checksum());
    out.write("figure.svg", rendered.as_bytes())?;
    Ok(())
}
