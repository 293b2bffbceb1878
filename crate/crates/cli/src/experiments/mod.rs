//! Experiment drivers behind the subcommands.
//!
//! Each driver turns a validated config into files under the run directory.
//! Numeric work is delegated to the library, which parallelizes internally
//! over seed-addressed RNG streams; drivers write outputs serially, in a
//! fixed order, so runs with the same config and seed are byte-identical.
//!
//! RNG stream budget: library loops use low stream ids (one per trial or
//! realization), so drivers draw structure (random correlations, filters,
//! specs) from ids at [`GEN_STREAM`] and above to keep the two separated.

pub mod kronecker;
pub mod lemma1;
pub mod moments;
pub mod process;
pub mod sample;
pub mod spectrum;
pub mod spiked;

use nalgebra::DMatrix;
use num_complex::Complex64;

use randtensor::shape::Shape;
use randtensor::tensor::DenseTensor;

/// First RNG stream id reserved for structure generation.
pub const GEN_STREAM: u64 = 1 << 33;

/// Exponential (Kac-Murdock-Szego) correlation matrix `rho^|i-j|`: unit
/// diagonal and positive definite for `|rho| < 1`.
pub fn exponential_correlation(size: usize, rho: f64) -> DMatrix<Complex64> {
    DMatrix::from_fn(size, size, |i, j| {
        Complex64::new(rho.powi((i as i32 - j as i32).abs()), 0.0)
    })
}

/// Order-2 tensor view of a square matrix, laid out so its `(1|1)`
/// matricization reproduces the matrix exactly.
pub fn matrix_to_tensor(m: &DMatrix<Complex64>) -> DenseTensor {
    let shape = Shape::new([m.nrows(), m.ncols()]).expect("positive matrix dims");
    DenseTensor::from_vec(shape, m.as_slice().to_vec()).expect("length matches shape")
}

/// Incremental CSV document with a fixed header row.
pub struct Csv {
    buf: String,
}

impl Csv {
    /// Header cells name the column and carry units in parentheses; cells
    /// must not contain commas.
    pub fn new(header: &[&str]) -> Self {
        debug_assert!(header.iter().all(|h| !h.contains(',')));
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push('\n');
        Csv { buf }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}

/// Shortest roundtrip decimal; keeps CSVs exact and reruns byte-identical.
pub fn num(v: f64) -> String {
    format!("{v}")
}

/// One `metric,value` report document.
pub fn metric_report(rows: &[(&str, String)]) -> Vec<u8> {
    let mut csv = Csv::new(&["metric", "value"]);
    for (name, value) in rows {
        csv.row(&[(*name).to_string(), value.clone()]);
    }
    csv.into_bytes()
}

/// Writes a complex matrix as `row,col,re,im` records.
pub fn matrix_csv(m: &DMatrix<Complex64>, unit: &str) -> Vec<u8> {
    let re = format!("re ({unit})");
    let im = format!("im ({unit})");
    let mut csv = Csv::new(&["row", "col", re.as_str(), im.as_str()]);
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let z = m[(row, col)];
            csv.row(&[row.to_string(), col.to_string(), num(z.re), num(z.im)]);
        }
    }
    csv.into_bytes()
}

/// Relative Frobenius distance `|a - b|_F / |b|_F`.
pub fn relative_matrix_error(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let diff = (a - b).norm();
    let denom = b.norm();
    if denom == 0.0 {
        diff
    } else {
        diff / denom
    }
}
