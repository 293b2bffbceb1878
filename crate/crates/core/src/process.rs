//! Tensor-valued random sequences, multilinear time-invariant filtering, and
//! their second-order statistics.
//!
//! Sequences are finitely supported on an integer index range and read as
//! zero outside it; there is no circular wraparound. Spectral densities are
//! direct Fourier sums over the finite lag support on a uniform frequency
//! grid in `[-1/2, 1/2)`, so no transform-size constraints apply.
//!
//! Estimators average over realizations and, in the ergodic variants, over
//! the time index too; each lag is normalized by the number of index pairs
//! actually inside the support, which keeps windowed estimates unbiased.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::algebra::{dematricize, einstein_product, hermitian_transpose, identity_tensor};
use crate::error::{Error, Result};
use crate::gaussian::{CorrelatedSampler, CorrelationTensor};
use crate::rng::{standard_complex, stream_rng};
use crate::shape::{ModeSplit, Shape};
use crate::tensor::DenseTensor;

/// A finitely supported sequence of same-shaped tensors indexed by `i64`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorSequence {
    start: i64,
    values: Vec<DenseTensor>,
}

impl TensorSequence {
    pub fn new(start: i64, values: Vec<DenseTensor>) -> Result<Self> {
        let first = values
            .first()
            .ok_or_else(|| {
                Error::InvalidArgument("a tensor sequence needs at least one value".into())
            })?
            .shape()
            .clone();
        for v in &values {
            if v.shape() != &first {
                return Err(Error::DimMismatch {
                    context: "tensor sequence value shapes",
                    left: first.dims().to_vec(),
                    right: v.dims().to_vec(),
                });
            }
        }
        Ok(Self { start, values })
    }

    pub fn shape(&self) -> &Shape {
        self.values[0].shape()
    }

    /// Inclusive index range carrying values.
    pub fn support(&self) -> (i64, i64) {
        (self.start, self.start + self.values.len() as i64 - 1)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, k: i64) -> Option<&DenseTensor> {
        if k < self.start {
            return None;
        }
        self.values.get((k - self.start) as usize)
    }

    /// The value at `k`, or a zero tensor outside the support.
    pub fn value_or_zero(&self, k: i64) -> DenseTensor {
        self.get(k)
            .cloned()
            .unwrap_or_else(|| DenseTensor::zeros(self.shape().clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &DenseTensor)> {
        self.values
            .iter()
            .enumerate()
            .map(|(o, v)| (self.start + o as i64, v))
    }

    /// Restriction to the inclusive window `[lo, hi]`, which must lie inside
    /// the support.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self> {
        let (s, e) = self.support();
        if lo > hi || lo < s || hi > e {
            return Err(Error::InvalidArgument(format!(
                "window [{lo}, {hi}] not contained in support [{s}, {e}]"
            )));
        }
        let a = (lo - s) as usize;
        let b = (hi - s) as usize;
        Ok(Self {
            start: lo,
            values: self.values[a..=b].to_vec(),
        })
    }

    /// Index-wise sum; supports and shapes must coincide.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.start != other.start || self.values.len() != other.values.len() {
            return Err(Error::InvalidArgument(
                "sequence sum needs identical supports".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            start: self.start,
            values,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            start: self.start,
            values: self.values.iter().map(|v| v.scale(factor)).collect(),
        }
    }
}

/// Multilinear time-invariant filter: finitely many taps of shape
/// `J_1 x .. x J_M x I_1 x .. x I_N`, applied by contracting the trailing
/// `N` modes with the input.
#[derive(Clone, Debug)]
pub struct MLTIFilter {
    taps: TensorSequence,
    out_modes: usize,
    in_modes: usize,
}

impl MLTIFilter {
    pub fn new(taps: TensorSequence, out_modes: usize, in_modes: usize) -> Result<Self> {
        if out_modes == 0 || in_modes == 0 {
            return Err(Error::InvalidArgument(
                "filter needs at least one output and one input mode".into(),
            ));
        }
        if taps.shape().order() != out_modes + in_modes {
            return Err(Error::InvalidModes {
                order: taps.shape().order(),
                detail: format!(
                    "filter taps must have {out_modes} output plus {in_modes} input modes"
                ),
            });
        }
        Ok(Self {
            taps,
            out_modes,
            in_modes,
        })
    }

    /// Single identity tap at index zero: filtering is the identity map.
    pub fn identity(dims: &[usize]) -> Result<Self> {
        let taps = TensorSequence::new(0, vec![identity_tensor(dims)?])?;
        Self::new(taps, dims.len(), dims.len())
    }

    pub fn taps(&self) -> &TensorSequence {
        &self.taps
    }

    pub fn out_modes(&self) -> usize {
        self.out_modes
    }

    pub fn in_modes(&self) -> usize {
        self.in_modes
    }

    pub fn output_dims(&self) -> &[usize] {
        &self.taps.shape().dims()[..self.out_modes]
    }

    pub fn input_dims(&self) -> &[usize] {
        &self.taps.shape().dims()[self.out_modes..]
    }

    fn split(&self) -> ModeSplit {
        ModeSplit {
            row_modes: self.out_modes,
            col_modes: self.in_modes,
        }
    }

    /// Discrete-time Fourier transform of the taps at frequency `freq`
    /// (cycles per step): `sum_k H[k] exp(-j 2 pi freq k)`.
    pub fn frequency_response(&self, freq: f64) -> DenseTensor {
        let mut acc = DenseTensor::zeros(self.taps.shape().clone());
        for (k, h) in self.taps.iter() {
            let phase = Complex64::from_polar(
                1.0,
                -2.0 * std::f64::consts::PI * freq * k as f64,
            );
            acc.add_assign(&h.scale(phase)).expect("uniform tap shapes");
        }
        acc
    }
}

/// Draws a square FIR filter with `n_taps` taps on `[0, n_taps-1]`, each an
/// i.i.d. complex Gaussian tensor mapping `dims` to `dims`. Taps are scaled
/// by `1/sqrt(n_taps * prod(dims))` so filtered outputs keep unit-order
/// entries and absolute Monte Carlo tolerances stay meaningful.
pub fn random_filter(dims: &[usize], n_taps: usize, rng: &mut impl Rng) -> Result<MLTIFilter> {
    if n_taps == 0 {
        return Err(Error::InvalidArgument("a filter needs at least one tap".into()));
    }
    let shape = Shape::new(dims.iter().chain(dims).copied().collect::<Vec<_>>())?;
    let in_size: usize = dims.iter().product();
    let scale = Complex64::new(1.0 / ((n_taps * in_size) as f64).sqrt(), 0.0);
    let taps = (0..n_taps)
        .map(|_| {
            DenseTensor::from_vec(
                shape.clone(),
                (0..shape.len()).map(|_| standard_complex(rng) * scale).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    MLTIFilter::new(TensorSequence::new(0, taps)?, dims.len(), dims.len())
}

/// `y[k] = sum_n H[n] *_N x[k-n]` over the Minkowski sum of the supports.
pub fn contracted_convolution(f: &MLTIFilter, x: &TensorSequence) -> Result<TensorSequence> {
    if x.shape().dims() != f.input_dims() {
        return Err(Error::DimMismatch {
            context: "filter input dims vs sequence shape",
            left: f.input_dims().to_vec(),
            right: x.shape().dims().to_vec(),
        });
    }
    let (fl, fh) = f.taps.support();
    let (xl, xh) = x.support();
    let out_shape = Shape::new(f.output_dims())?;
    let mut values = Vec::with_capacity(((fh + xh) - (fl + xl) + 1) as usize);
    for k in (fl + xl)..=(fh + xh) {
        let mut acc = DenseTensor::zeros(out_shape.clone());
        for (n, h) in f.taps.iter() {
            if let Some(xv) = x.get(k - n) {
                acc.add_assign(&einstein_product(h, xv, f.in_modes)?)?;
            }
        }
        values.push(acc);
    }
    TensorSequence::new(fl + xl, values)
}

/// Lag-indexed correlation values `R[i]` of shape
/// `(left dims) x (right dims)`; autocorrelations are square with
/// `R[-i] = R[i]^H`, cross-correlations may be rectangular.
#[derive(Clone, Debug)]
pub struct CorrelationSequence {
    start: i64,
    values: Vec<DenseTensor>,
    left_modes: usize,
    right_modes: usize,
}

impl CorrelationSequence {
    pub fn new(
        start: i64,
        values: Vec<DenseTensor>,
        left_modes: usize,
        right_modes: usize,
    ) -> Result<Self> {
        let seq = TensorSequence::new(start, values)?;
        if seq.shape().order() != left_modes + right_modes {
            return Err(Error::InvalidModes {
                order: seq.shape().order(),
                detail: format!(
                    "correlation values must have {left_modes} + {right_modes} modes"
                ),
            });
        }
        let TensorSequence { start, values } = seq;
        Ok(Self {
            start,
            values,
            left_modes,
            right_modes,
        })
    }

    /// Lag-0-only sequence of a process white in its index: `R[0] = r`.
    pub fn white(r: &CorrelationTensor) -> Self {
        let n = r.n_modes();
        Self {
            start: 0,
            values: vec![r.value().clone()],
            left_modes: n,
            right_modes: n,
        }
    }

    pub fn lag_range(&self) -> (i64, i64) {
        (self.start, self.start + self.values.len() as i64 - 1)
    }

    pub fn left_modes(&self) -> usize {
        self.left_modes
    }

    pub fn right_modes(&self) -> usize {
        self.right_modes
    }

    pub fn entry_shape(&self) -> &Shape {
        self.values[0].shape()
    }

    pub fn get(&self, lag: i64) -> Option<&DenseTensor> {
        if lag < self.start {
            return None;
        }
        self.values.get((lag - self.start) as usize)
    }

    pub fn value_or_zero(&self, lag: i64) -> DenseTensor {
        self.get(lag)
            .cloned()
            .unwrap_or_else(|| DenseTensor::zeros(self.entry_shape().clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &DenseTensor)> {
        self.values
            .iter()
            .enumerate()
            .map(|(o, v)| (self.start + o as i64, v))
    }

    /// Largest deviation `max_i |R[-i] - R[i]^H|` over the lag support;
    /// requires square entries. Zero by construction for ergodic
    /// autocorrelation estimates.
    pub fn hermitian_symmetry_deviation(&self) -> Result<f64> {
        if self.left_modes != self.right_modes {
            return Err(Error::InvalidArgument(
                "Hermitian lag symmetry needs square correlation entries".into(),
            ));
        }
        let split = ModeSplit::square(self.left_modes);
        let (lo, hi) = self.lag_range();
        let mut worst = 0.0f64;
        for i in lo..=hi {
            let direct = self.value_or_zero(-i);
            let mirrored = hermitian_transpose(&self.value_or_zero(i), split)?;
            worst = worst.max(direct.sub(&mirrored)?.max_abs());
        }
        Ok(worst)
    }
}

fn to_vector(t: &DenseTensor) -> DVector<Complex64> {
    DVector::from_column_slice(t.data())
}

/// Sum over realizations and valid index pairs of
/// `vec(y[k]) vec(x[k-lag])^H`, with the pair count.
fn lag_products(
    ys: &[TensorSequence],
    xs: &[TensorSequence],
    lag: i64,
) -> (DMatrix<Complex64>, usize) {
    let ky = ys[0].shape().len();
    let kx = xs[0].shape().len();
    let one = Complex64::new(1.0, 0.0);
    let mut acc = DMatrix::<Complex64>::zeros(ky, kx);
    let mut count = 0usize;
    for (y, x) in ys.iter().zip(xs) {
        for (k, yv) in y.iter() {
            if let Some(xv) = x.get(k - lag) {
                acc.gerc(one, &to_vector(yv), &to_vector(xv), one);
                count += 1;
            }
        }
    }
    (acc, count)
}

fn check_realizations<'a>(
    seqs: &'a [TensorSequence],
    what: &'static str,
) -> Result<&'a Shape> {
    let first = seqs
        .first()
        .ok_or(Error::NotEnoughSamples {
            what,
            min: 1,
            found: 0,
        })?
        .shape();
    for s in seqs {
        if s.shape() != first {
            return Err(Error::DimMismatch {
                context: "realization tensor shapes",
                left: first.dims().to_vec(),
                right: s.shape().dims().to_vec(),
            });
        }
    }
    Ok(first)
}

fn correlation_dims(left: &Shape, right: &Shape) -> Vec<usize> {
    left.dims().iter().chain(right.dims()).copied().collect()
}

fn normalized_entry(
    acc: DMatrix<Complex64>,
    count: usize,
    dims: &[usize],
    split: ModeSplit,
) -> Result<DenseTensor> {
    if count == 0 {
        return Err(Error::NotEnoughSamples {
            what: "index pairs at requested lag",
            min: 1,
            found: 0,
        });
    }
    let scaled = acc / Complex64::new(count as f64, 0.0);
    dematricize(&scaled, &Shape::new(dims.to_vec())?, split)
}

/// Ergodic autocorrelation estimate over realizations and time:
/// `R[i] = avg x[k] (outer) conj(x[k-i])` for lags `-max_lag..=max_lag`.
/// The negative lags are the exact Hermitian mirrors of the positive ones,
/// which is an identity of this estimator, not an approximation.
pub fn estimate_autocorrelation(
    realizations: &[TensorSequence],
    max_lag: usize,
) -> Result<CorrelationSequence> {
    let shape = check_realizations(realizations, "autocorrelation estimation")?.clone();
    let n = shape.order();
    let dims = correlation_dims(&shape, &shape);
    let split = ModeSplit::square(n);
    let l = max_lag as i64;
    let mut forward = Vec::with_capacity(max_lag + 1);
    for i in 0..=l {
        let (acc, count) = lag_products(realizations, realizations, i);
        forward.push(normalized_entry(acc, count, &dims, split)?);
    }
    let mut values = Vec::with_capacity(2 * max_lag + 1);
    for i in (1..=l).rev() {
        values.push(hermitian_transpose(&forward[i as usize], split)?);
    }
    values.extend(forward);
    CorrelationSequence::new(-l, values, n, n)
}

/// Ensemble autocorrelation anchored at one index: averages only across
/// realizations, `R[i] = avg_r x_r[anchor] (outer) conj(x_r[anchor - i])`.
pub fn estimate_autocorrelation_at(
    realizations: &[TensorSequence],
    anchor: i64,
    max_lag: usize,
) -> Result<CorrelationSequence> {
    let shape = check_realizations(realizations, "anchored autocorrelation")?.clone();
    let n = shape.order();
    let dims = correlation_dims(&shape, &shape);
    let split = ModeSplit::square(n);
    let one = Complex64::new(1.0, 0.0);
    let l = max_lag as i64;
    let mut values = Vec::with_capacity(2 * max_lag + 1);
    for i in -l..=l {
        let mut acc = DMatrix::<Complex64>::zeros(shape.len(), shape.len());
        let mut count = 0usize;
        for r in realizations {
            if let (Some(a), Some(b)) = (r.get(anchor), r.get(anchor - i)) {
                acc.gerc(one, &to_vector(a), &to_vector(b), one);
                count += 1;
            }
        }
        values.push(normalized_entry(acc, count, &dims, split)?);
    }
    CorrelationSequence::new(-l, values, n, n)
}

/// Ergodic cross-correlation `R_yx[i] = avg y[k] (outer) conj(x[k-i])`;
/// the two lists pair up realization by realization.
pub fn estimate_crosscorrelation(
    ys: &[TensorSequence],
    xs: &[TensorSequence],
    max_lag: usize,
) -> Result<CorrelationSequence> {
    let y_shape = check_realizations(ys, "cross-correlation estimation")?.clone();
    let x_shape = check_realizations(xs, "cross-correlation estimation")?.clone();
    if ys.len() != xs.len() {
        return Err(Error::InvalidArgument(format!(
            "cross-correlation needs paired realizations, got {} vs {}",
            ys.len(),
            xs.len()
        )));
    }
    let dims = correlation_dims(&y_shape, &x_shape);
    let split = ModeSplit::new(y_shape.order(), x_shape.order())?;
    let l = max_lag as i64;
    let mut values = Vec::with_capacity(2 * max_lag + 1);
    for i in -l..=l {
        let (acc, count) = lag_products(ys, xs, i);
        values.push(normalized_entry(acc, count, &dims, split)?);
    }
    CorrelationSequence::new(-l, values, y_shape.order(), x_shape.order())
}

fn check_filter_input_correlation(f: &MLTIFilter, r_x: &CorrelationSequence) -> Result<()> {
    let expected: Vec<usize> = f
        .input_dims()
        .iter()
        .chain(f.input_dims())
        .copied()
        .collect();
    if r_x.left_modes != f.in_modes
        || r_x.right_modes != f.in_modes
        || r_x.entry_shape().dims() != expected
    {
        return Err(Error::DimMismatch {
            context: "filter input dims vs correlation entry dims",
            left: expected,
            right: r_x.entry_shape().dims().to_vec(),
        });
    }
    Ok(())
}

/// Deterministic output autocorrelation of a filtered WSS process:
/// `R_y[i] = sum_n sum_m H[n] *_N R_x[m + i - n] *_N H[m]^H`.
pub fn filtered_autocorrelation(
    f: &MLTIFilter,
    r_x: &CorrelationSequence,
    max_lag: usize,
) -> Result<CorrelationSequence> {
    check_filter_input_correlation(f, r_x)?;
    let out_dims: Vec<usize> = f
        .output_dims()
        .iter()
        .chain(f.output_dims())
        .copied()
        .collect();
    let out_shape = Shape::new(out_dims)?;
    let adjoints: Vec<(i64, DenseTensor)> = f
        .taps
        .iter()
        .map(|(m, h)| Ok((m, hermitian_transpose(h, f.split())?)))
        .collect::<Result<Vec<_>>>()?;
    let l = max_lag as i64;
    let mut values = Vec::with_capacity(2 * max_lag + 1);
    for i in -l..=l {
        let mut acc = DenseTensor::zeros(out_shape.clone());
        for (n, h_n) in f.taps.iter() {
            for (m, h_m_adj) in &adjoints {
                if let Some(r) = r_x.get(m + i - n) {
                    let left = einstein_product(h_n, r, f.in_modes)?;
                    acc.add_assign(&einstein_product(&left, h_m_adj, f.in_modes)?)?;
                }
            }
        }
        values.push(acc);
    }
    CorrelationSequence::new(-l, values, f.out_modes, f.out_modes)
}

/// Deterministic filter-to-input cross-correlation:
/// `R_yx[i] = sum_n H[n] *_N R_x[i - n]`.
pub fn filtered_crosscorrelation(
    f: &MLTIFilter,
    r_x: &CorrelationSequence,
    max_lag: usize,
) -> Result<CorrelationSequence> {
    check_filter_input_correlation(f, r_x)?;
    let out_dims: Vec<usize> = f
        .output_dims()
        .iter()
        .chain(f.input_dims())
        .copied()
        .collect();
    let out_shape = Shape::new(out_dims)?;
    let l = max_lag as i64;
    let mut values = Vec::with_capacity(2 * max_lag + 1);
    for i in -l..=l {
        let mut acc = DenseTensor::zeros(out_shape.clone());
        for (n, h_n) in f.taps.iter() {
            if let Some(r) = r_x.get(i - n) {
                acc.add_assign(&einstein_product(h_n, r, f.in_modes)?)?;
            }
        }
        values.push(acc);
    }
    CorrelationSequence::new(-l, values, f.out_modes, f.in_modes)
}

/// Uniform frequency grid `f_g = -1/2 + g/n` for `g = 0..n`.
pub fn frequency_grid(n: usize) -> Vec<f64> {
    (0..n).map(|g| -0.5 + g as f64 / n as f64).collect()
}

/// Power spectral density: `S[f] = sum_i R[i] exp(-j 2 pi f i)` evaluated on
/// each grid frequency.
pub fn psd(r: &CorrelationSequence, grid: &[f64]) -> Vec<DenseTensor> {
    grid.iter()
        .map(|&f| {
            let mut acc = DenseTensor::zeros(r.entry_shape().clone());
            for (i, ri) in r.iter() {
                let phase = Complex64::from_polar(
                    1.0,
                    -2.0 * std::f64::consts::PI * f * i as f64,
                );
                acc.add_assign(&ri.scale(phase)).expect("uniform entry shapes");
            }
            acc
        })
        .collect()
}

/// Power cross-spectral density: the same Fourier sum applied to a
/// cross-correlation sequence.
pub fn pcd(r: &CorrelationSequence, grid: &[f64]) -> Vec<DenseTensor> {
    psd(r, grid)
}

/// Draws `n_realizations` input sequences (`time_steps` i.i.d.-in-time
/// correlated Gaussian tensors on `[0, time_steps-1]`), filters each, and
/// trims the outputs to the steady-state window where every tap saw real
/// input. Realization `r` uses RNG stream `r`, so the result is independent
/// of how the parallel loop is scheduled.
pub fn simulate_filtered_process(
    f: &MLTIFilter,
    x_corr: &CorrelationTensor,
    time_steps: usize,
    n_realizations: usize,
    seed: u64,
) -> Result<(Vec<TensorSequence>, Vec<TensorSequence>)> {
    if x_corr.mode_dims() != f.input_dims() {
        return Err(Error::DimMismatch {
            context: "filter input dims vs per-index correlation",
            left: f.input_dims().to_vec(),
            right: x_corr.mode_dims().to_vec(),
        });
    }
    if n_realizations == 0 {
        return Err(Error::NotEnoughSamples {
            what: "filtered process realizations",
            min: 1,
            found: 0,
        });
    }
    let (fl, fh) = f.taps.support();
    let t = time_steps as i64;
    if fh > t - 1 + fl {
        return Err(Error::InvalidArgument(format!(
            "time_steps = {time_steps} leaves no steady-state window for a filter spanning [{fl}, {fh}]"
        )));
    }
    let sampler = CorrelatedSampler::new(x_corr)?;
    let pairs: Vec<Result<(TensorSequence, TensorSequence)>> = (0..n_realizations)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r as u64);
            let draws: Vec<DenseTensor> =
                (0..time_steps).map(|_| sampler.sample(&mut rng)).collect();
            let x = TensorSequence::new(0, draws)?;
            let y = contracted_convolution(f, &x)?.restrict(fh, t - 1 + fl)?;
            Ok((x, y))
        })
        .collect();
    let mut xs = Vec::with_capacity(n_realizations);
    let mut ys = Vec::with_capacity(n_realizations);
    for p in pairs {
        let (x, y) = p?;
        xs.push(x);
        ys.push(y);
    }
    Ok((xs, ys))
}

/// Outcome of the time-domain filtered-process verification.
#[derive(Clone, Debug)]
pub struct WssReport {
    /// Max over window indices of the Frobenius distance between the
    /// per-index output mean and the pooled mean.
    pub mean_max_deviation: f64,
    /// Max over lags of the Frobenius gap between the ergodic output
    /// autocorrelation estimate and its deterministic evaluation.
    pub autocorrelation_max_error: f64,
    /// Same for the output-to-input cross-correlation.
    pub crosscorrelation_max_error: f64,
    pub auto_max_lag: usize,
    pub cross_max_lag: usize,
    pub n_realizations: usize,
    pub time_steps: usize,
}

fn mean_constancy(seqs: &[TensorSequence]) -> Result<f64> {
    let shape = seqs[0].shape().clone();
    let support = seqs[0].support();
    for s in seqs {
        if s.support() != support {
            return Err(Error::InvalidArgument(
                "mean constancy check needs identical supports".into(),
            ));
        }
    }
    let window = (support.1 - support.0 + 1) as usize;
    let mut per_k = vec![DenseTensor::zeros(shape.clone()); window];
    for s in seqs {
        for (o, (_, v)) in s.iter().enumerate() {
            per_k[o].add_assign(v)?;
        }
    }
    let scale = Complex64::new(1.0 / seqs.len() as f64, 0.0);
    for m in &mut per_k {
        *m = m.scale(scale);
    }
    let mut pooled = DenseTensor::zeros(shape);
    for m in &per_k {
        pooled.add_assign(m)?;
    }
    pooled = pooled.scale(Complex64::new(1.0 / window as f64, 0.0));
    let mut worst = 0.0f64;
    for m in &per_k {
        worst = worst.max(m.sub(&pooled)?.frobenius_norm());
    }
    Ok(worst)
}

fn filter_lag_spans(f: &MLTIFilter) -> (usize, usize) {
    let (fl, fh) = f.taps.support();
    let auto = (fh - fl) as usize;
    let cross = fl.unsigned_abs().max(fh.unsigned_abs()) as usize;
    (auto, cross)
}

/// Filters a white-in-time correlated Gaussian input and compares the
/// empirical output statistics against their deterministic evaluations:
/// mean constancy over the window, the output autocorrelation, and the
/// output-to-input cross-correlation.
pub fn verify_wss_filter_relations(
    f: &MLTIFilter,
    x_corr: &CorrelationTensor,
    time_steps: usize,
    n_realizations: usize,
    seed: u64,
) -> Result<WssReport> {
    let (xs, ys) = simulate_filtered_process(f, x_corr, time_steps, n_realizations, seed)?;
    let (auto_lag, cross_lag) = filter_lag_spans(f);
    let white = CorrelationSequence::white(x_corr);

    let mean_max_deviation = mean_constancy(&ys)?;

    let est_auto = estimate_autocorrelation(&ys, auto_lag)?;
    let det_auto = filtered_autocorrelation(f, &white, auto_lag)?;
    let mut autocorrelation_max_error = 0.0f64;
    for (i, v) in est_auto.iter() {
        autocorrelation_max_error = autocorrelation_max_error
            .max(v.sub(&det_auto.value_or_zero(i))?.frobenius_norm());
    }

    let est_cross = estimate_crosscorrelation(&ys, &xs, cross_lag)?;
    let det_cross = filtered_crosscorrelation(f, &white, cross_lag)?;
    let mut crosscorrelation_max_error = 0.0f64;
    for (i, v) in est_cross.iter() {
        crosscorrelation_max_error = crosscorrelation_max_error
            .max(v.sub(&det_cross.value_or_zero(i))?.frobenius_norm());
    }

    Ok(WssReport {
        mean_max_deviation,
        autocorrelation_max_error,
        crosscorrelation_max_error,
        auto_max_lag: auto_lag,
        cross_max_lag: cross_lag,
        n_realizations,
        time_steps,
    })
}

/// Outcome of the frequency-domain verification.
#[derive(Clone, Debug)]
pub struct SpectralReport {
    /// Max over the grid of the Frobenius gap between the estimated output
    /// spectrum and the response-conjugated input spectrum.
    pub autospectrum_max_error: f64,
    /// Same for the cross-spectrum against response times input spectrum.
    pub cross_spectrum_max_error: f64,
    pub grid_points: usize,
    pub n_realizations: usize,
    pub time_steps: usize,
}

/// Estimates input, output, and cross spectra from simulated realizations
/// and checks the filtering relations
/// `S_y[f] = resp(f) *_N S_x[f] *_N resp(f)^H` and
/// `S_yx[f] = resp(f) *_N S_x[f]` on a uniform frequency grid.
pub fn verify_spectral_relations(
    f: &MLTIFilter,
    x_corr: &CorrelationTensor,
    grid_points: usize,
    time_steps: usize,
    n_realizations: usize,
    seed: u64,
) -> Result<SpectralReport> {
    if grid_points == 0 {
        return Err(Error::InvalidArgument(
            "frequency grid needs at least one point".into(),
        ));
    }
    let (xs, ys) = simulate_filtered_process(f, x_corr, time_steps, n_realizations, seed)?;
    let (auto_lag, cross_lag) = filter_lag_spans(f);
    let grid = frequency_grid(grid_points);

    let s_x = psd(&estimate_autocorrelation(&xs, auto_lag)?, &grid);
    let s_y = psd(&estimate_autocorrelation(&ys, auto_lag)?, &grid);
    let s_yx = pcd(&estimate_crosscorrelation(&ys, &xs, cross_lag)?, &grid);

    let mut autospectrum_max_error = 0.0f64;
    let mut cross_spectrum_max_error = 0.0f64;
    for (g, &freq) in grid.iter().enumerate() {
        let resp = f.frequency_response(freq);
        let resp_adj = hermitian_transpose(&resp, f.split())?;
        let rx = einstein_product(&resp, &s_x[g], f.in_modes)?;
        let auto_rhs = einstein_product(&rx, &resp_adj, f.in_modes)?;
        autospectrum_max_error =
            autospectrum_max_error.max(s_y[g].sub(&auto_rhs)?.frobenius_norm());
        cross_spectrum_max_error =
            cross_spectrum_max_error.max(s_yx[g].sub(&rx)?.frobenius_norm());
    }
    Ok(SpectralReport {
        autospectrum_max_error,
        cross_spectrum_max_error,
        grid_points,
        n_realizations,
        time_steps,
    })
}
