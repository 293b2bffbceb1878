//! Rank-1 spiked random tensor models: generation of symmetric and
//! asymmetric observations, Z-eigenpair and Z-singular-pair computation by
//! power iteration, and the asymptotic alignment theory with its
//! fixed-point solvers.
//!
//! Both models are real: observations store exact zero imaginary parts and
//! all iterations run in real arithmetic on the matricized tensor.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{standard_real, stream_rng};
use crate::shape::Shape;
use crate::tensor::DenseTensor;

/// Entrywise tolerance for the realness and symmetry prechecks of the
/// power iterations.
const INPUT_TOL: f64 = 1e-8;

/// Uniformly random point on the unit sphere of the given dimension.
pub fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| standard_real(rng));
        let n = v.norm();
        // A numerically zero draw has probability zero; redraw to be safe.
        if n > 1e-12 {
            return v / n;
        }
    }
}

fn unit_or_error(v: &DVector<f64>, what: &'static str) -> Result<DVector<f64>> {
    let n = v.norm();
    if n <= 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "{what} must be a nonzero vector"
        )));
    }
    Ok(v / n)
}

/// Multinomial coefficient `n! / prod(multiplicities!)` for the index
/// multiplicities of a sorted multi-index.
fn multiset_permutation_count(sorted: &[usize]) -> u64 {
    let mut run_factorials = 1u64;
    let mut factorial = 1u64;
    let mut run = 0u64;
    let mut total = 0u64;
    let mut prev = usize::MAX;
    for &v in sorted {
        total += 1;
        factorial *= total;
        if v == prev {
            run += 1;
        } else {
            run = 1;
            prev = v;
        }
        run_factorials *= run;
    }
    factorial / run_factorials
}

/// Advances `v` to its next lexicographic permutation; false once `v` is
/// the last one. Starting from sorted order this enumerates every distinct
/// permutation of a multiset exactly once.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Draws a fully symmetric real Gaussian tensor of the given order and
/// dimension with density proportional to `exp(-|w|_F^2 / 2)`: one Gaussian
/// per index multiset with variance `1 / (number of permutations of the
/// multiset)`, copied to every permuted position. For order 3 this gives
/// variances 1, 1/3, and 1/6 for diagonal, two-equal, and all-distinct
/// entries.
pub fn sample_symmetric_noise(
    order: usize,
    dim: usize,
    rng: &mut impl Rng,
) -> Result<DenseTensor> {
    if order < 2 {
        return Err(Error::InvalidModes {
            order,
            detail: "symmetric noise needs at least two modes".into(),
        });
    }
    if order > 20 {
        return Err(Error::InvalidArgument(format!(
            "order {order} overflows the exact multinomial computation (max 20)"
        )));
    }
    let shape = Shape::new(vec![dim; order])?;
    let mut out = DenseTensor::zeros(shape);
    // Non-decreasing multi-indices enumerate the multisets in a fixed
    // lexicographic order, which pins the draw sequence to the RNG stream.
    let mut multiset = vec![0usize; order];
    loop {
        let sigma = 1.0 / (multiset_permutation_count(&multiset) as f64).sqrt();
        let value = Complex64::new(sigma * standard_real(rng), 0.0);
        let mut perm = multiset.clone();
        loop {
            out.set(&perm, value);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        // Advance to the next non-decreasing multi-index.
        let mut k = order;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if multiset[k] + 1 < dim {
                let v = multiset[k] + 1;
                for m in &mut multiset[k..] {
                    *m = v;
                }
                break;
            }
        }
    }
}

/// A generated spiked observation together with its exact building blocks.
#[derive(Clone, Debug)]
pub struct SpikedObservation {
    /// The observed tensor, `signal + scaled_noise`.
    pub tensor: DenseTensor,
    /// The planted rank-one part.
    pub signal: DenseTensor,
    /// The noise term after its normalization.
    pub scaled_noise: DenseTensor,
}

/// Symmetric rank-1 spiked model: `beta x^N + w / sqrt(I)` with `w` a
/// symmetric standard Gaussian tensor.
#[derive(Clone, Debug)]
pub struct SymmetricSpikedModel {
    order: usize,
    dim: usize,
    beta: f64,
    planted: DVector<f64>,
}

impl SymmetricSpikedModel {
    pub fn new(order: usize, dim: usize, beta: f64, planted: DVector<f64>) -> Result<Self> {
        if order < 3 {
            return Err(Error::InvalidModes {
                order,
                detail: "spiked models need order at least 3".into(),
            });
        }
        if planted.len() != dim {
            return Err(Error::DimMismatch {
                context: "planted vector length vs model dimension",
                left: vec![planted.len()],
                right: vec![dim],
            });
        }
        if !(beta >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "signal strength must be nonnegative, got {beta}"
            )));
        }
        let planted = unit_or_error(&planted, "planted vector")?;
        Ok(Self {
            order,
            dim,
            beta,
            planted,
        })
    }

    /// Model with a planted direction drawn uniformly on the sphere.
    pub fn random(order: usize, dim: usize, beta: f64, rng: &mut impl Rng) -> Result<Self> {
        Self::new(order, dim, beta, random_unit_vector(dim, rng))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn planted(&self) -> &DVector<f64> {
        &self.planted
    }

    /// Draws one observation; the signal and scaled noise are retained so
    /// the construction can be audited exactly.
    pub fn generate(&self, rng: &mut impl Rng) -> Result<SpikedObservation> {
        let shape = Shape::new(vec![self.dim; self.order])?;
        let signal = DenseTensor::from_fn(shape, |idx| {
            let mut v = self.beta;
            for &i in idx {
                v *= self.planted[i];
            }
            Complex64::new(v, 0.0)
        });
        let scaled_noise = sample_symmetric_noise(self.order, self.dim, rng)?
            .scale(Complex64::new(1.0 / (self.dim as f64).sqrt(), 0.0));
        let tensor = signal.add(&scaled_noise)?;
        Ok(SpikedObservation {
            tensor,
            signal,
            scaled_noise,
        })
    }
}

/// Asymmetric rank-1 spiked model:
/// `beta x_1 o ... o x_N + w / sqrt(sum I_k)` with `w` i.i.d. standard.
#[derive(Clone, Debug)]
pub struct AsymmetricSpikedModel {
    dims: Vec<usize>,
    beta: f64,
    planted: Vec<DVector<f64>>,
}

impl AsymmetricSpikedModel {
    pub fn new(dims: Vec<usize>, beta: f64, planted: Vec<DVector<f64>>) -> Result<Self> {
        if dims.len() < 3 {
            return Err(Error::InvalidModes {
                order: dims.len(),
                detail: "spiked models need order at least 3".into(),
            });
        }
        if planted.len() != dims.len()
            || planted.iter().zip(&dims).any(|(x, &d)| x.len() != d)
        {
            return Err(Error::DimMismatch {
                context: "planted vector lengths vs model dims",
                left: planted.iter().map(|x| x.len()).collect(),
                right: dims.clone(),
            });
        }
        if !(beta >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "signal strength must be nonnegative, got {beta}"
            )));
        }
        let planted = planted
            .iter()
            .map(|x| unit_or_error(x, "planted vector"))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dims,
            beta,
            planted,
        })
    }

    pub fn random(dims: Vec<usize>, beta: f64, rng: &mut impl Rng) -> Result<Self> {
        let planted = dims
            .iter()
            .map(|&d| random_unit_vector(d, rng))
            .collect();
        Self::new(dims, beta, planted)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn planted(&self) -> &[DVector<f64>] {
        &self.planted
    }

    pub fn generate(&self, rng: &mut impl Rng) -> Result<SpikedObservation> {
        let shape = Shape::new(self.dims.clone())?;
        let signal = DenseTensor::from_fn(shape.clone(), |idx| {
            let mut v = self.beta;
            for (k, &i) in idx.iter().enumerate() {
                v *= self.planted[k][i];
            }
            Complex64::new(v, 0.0)
        });
        let total: usize = self.dims.iter().sum();
        let scale = 1.0 / (total as f64).sqrt();
        let scaled_noise = DenseTensor::from_fn(shape, |_| {
            Complex64::new(scale * standard_real(rng), 0.0)
        });
        let tensor = signal.add(&scaled_noise)?;
        Ok(SpikedObservation {
            tensor,
            signal,
            scaled_noise,
        })
    }
}

/// A computed Z-eigenpair (one vector) or Z-singular pair (one vector per
/// mode) with the residual of its defining fixed-point equation.
#[derive(Clone, Debug)]
pub struct ZEigenpair {
    pub lambda: f64,
    /// One unit vector in the symmetric case, one per mode otherwise.
    pub vectors: Vec<DVector<f64>>,
    /// Norm of the defect of the eigen equation (max over modes for the
    /// asymmetric case).
    pub residual: f64,
    pub iterations: usize,
}

fn check_real_input(a: &DenseTensor, what: &'static str) -> Result<()> {
    if !a.is_real_within(INPUT_TOL) {
        return Err(Error::InvalidArgument(format!(
            "{what} expects a real tensor"
        )));
    }
    Ok(())
}

/// Real matricization with `mode` as the single row mode, the remaining
/// modes in their original order as columns.
fn mode_leading_matrix(a: &DenseTensor, mode: usize) -> Result<DMatrix<f64>> {
    let n = a.order();
    let mut perm = Vec::with_capacity(n);
    perm.push(mode);
    perm.extend((0..n).filter(|&m| m != mode));
    let moved = a.permute(&perm)?;
    let rows = a.dims()[mode];
    let cols = moved.shape().len() / rows;
    Ok(DMatrix::from_column_slice(rows, cols, &moved.real_data()))
}

/// Column-vectorization (first factor fastest) of the outer product of the
/// given vectors.
fn outer_vector(factors: &[&DVector<f64>]) -> DVector<f64> {
    let mut acc = DVector::from_element(1, 1.0);
    for f in factors.iter().rev() {
        let mut next = DVector::zeros(f.len() * acc.len());
        for (j, &av) in acc.iter().enumerate() {
            for (i, &fv) in f.iter().enumerate() {
                next[i + f.len() * j] = fv * av;
            }
        }
        acc = next;
    }
    acc
}

/// Checks entrywise symmetry under adjacent mode swaps, which generates
/// full permutation symmetry.
fn check_symmetric(a: &DenseTensor) -> Result<()> {
    let n = a.order();
    for k in 0..n - 1 {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(k, k + 1);
        let dev = a.sub(&a.permute(&perm)?)?.max_abs();
        if dev > INPUT_TOL {
            return Err(Error::InvalidArgument(format!(
                "tensor is not symmetric: swapping modes {k} and {} changes \
                 entries by up to {dev:.3e}",
                k + 1
            )));
        }
    }
    Ok(())
}

fn symmetric_checked_matrix(a: &DenseTensor) -> Result<(DMatrix<f64>, usize, usize)> {
    let n = a.order();
    if n < 3 {
        return Err(Error::InvalidModes {
            order: n,
            detail: "power iteration needs order at least 3".into(),
        });
    }
    let dim = a.dims()[0];
    if a.dims().iter().any(|&d| d != dim) {
        return Err(Error::NotSquare {
            rows: a.dims().to_vec(),
            cols: a.dims().to_vec(),
        });
    }
    check_real_input(a, "symmetric power iteration")?;
    check_symmetric(a)?;
    Ok((mode_leading_matrix(a, 0)?, n, dim))
}

fn symmetric_apply(m: &DMatrix<f64>, x: &DVector<f64>, order: usize) -> DVector<f64> {
    let factors: Vec<&DVector<f64>> = std::iter::repeat(x).take(order - 1).collect();
    m * outer_vector(&factors)
}

/// The contraction `a *_{N-1} x^{N-1}` of a symmetric real tensor with
/// `N - 1` copies of a vector.
pub fn symmetric_contraction(a: &DenseTensor, x: &DVector<f64>) -> Result<DVector<f64>> {
    let (m, n, dim) = symmetric_checked_matrix(a)?;
    if x.len() != dim {
        return Err(Error::DimMismatch {
            context: "contraction vector length vs tensor dimension",
            left: vec![x.len()],
            right: vec![dim],
        });
    }
    Ok(symmetric_apply(&m, x, n))
}

/// The scalar `a *_N x^N`, the Rayleigh-type value of the symmetric model.
pub fn symmetric_value(a: &DenseTensor, x: &DVector<f64>) -> Result<f64> {
    Ok(x.dot(&symmetric_contraction(a, x)?))
}

/// Squared Frobenius loss `|a - lambda x^N|_F^2` of a symmetric rank-one
/// fit; Z-eigenpairs are its critical points.
pub fn symmetric_loss(a: &DenseTensor, lambda: f64, x: &DVector<f64>) -> Result<f64> {
    let (m, n, dim) = symmetric_checked_matrix(a)?;
    if x.len() != dim {
        return Err(Error::DimMismatch {
            context: "loss vector length vs tensor dimension",
            left: vec![x.len()],
            right: vec![dim],
        });
    }
    let y = symmetric_apply(&m, x, n);
    let norm_a = m.norm();
    let value = x.dot(&y);
    let xn = x.norm_squared().powi(n as i32);
    Ok(norm_a * norm_a - 2.0 * lambda * value + lambda * lambda * xn)
}

/// Tensor power iteration `x <- a *_{N-1} x^{N-1} / |...|` from `x0` until
/// the iterate moves less than `tol` (up to sign) with an eigen residual
/// within `10 * tol`, or `max_iters` is hit, also returning the
/// Rayleigh-type values `a *_N x_t^N` along the way.
///
/// The plain update can cycle without ascending, so a step is only taken
/// plainly when it does not decrease the Rayleigh value; otherwise the
/// iterate moves along `a *_{N-1} x^{N-1} + (N - 1) |a|_F x`, whose ascent
/// follows from convexity of `a *_N x^N + (N - 1) |a|_F |x|^N` on the unit
/// ball. Both updates have the same fixed points, so the returned pair
/// satisfies the usual eigen equation, and the recorded Rayleigh values
/// are nondecreasing by construction.
///
/// Returns the pair `(lambda, u)` with `lambda = a *_N u^N` and the
/// residual `|a *_{N-1} u^{N-1} - lambda u|`; for odd order a negative
/// `lambda` is canonicalized to `(-lambda, -u)`, which is the same pair.
///
/// # Errors
///
/// A vanishing contraction aborts with [`Error::DegenerateIterate`]; a
/// residual above `10 * tol` after `max_iters` is [`Error::NoConvergence`].
pub fn power_iteration_symmetric_traced(
    a: &DenseTensor,
    x0: &DVector<f64>,
    max_iters: usize,
    tol: f64,
) -> Result<(ZEigenpair, Vec<f64>)> {
    let (m, n, dim) = symmetric_checked_matrix(a)?;
    if x0.len() != dim {
        return Err(Error::DimMismatch {
            context: "start vector length vs tensor dimension",
            left: vec![x0.len()],
            right: vec![dim],
        });
    }
    let shift = (n as f64 - 1.0) * m.norm();
    let mut x = unit_or_error(x0, "start vector")?;
    let mut y = symmetric_apply(&m, &x, n);
    let mut value = x.dot(&y);
    let mut trace = vec![value];
    let mut iterations = 0;
    for _ in 0..max_iters {
        let ny = y.norm();
        if ny <= 1e-300 {
            return Err(Error::DegenerateIterate {
                what: "symmetric power iteration",
            });
        }
        let plain = &y / ny;
        let y_plain = symmetric_apply(&m, &plain, n);
        let value_plain = plain.dot(&y_plain);
        let (next, y_next, value_next) = if value_plain >= value {
            (plain, y_plain, value_plain)
        } else {
            // |y + shift x| >= shift - |y| >= (N - 2) |a|_F > 0 here,
            // since a vanishing tensor is caught by the plain branch.
            let s = &y + &x * shift;
            let s = &s / s.norm();
            let y_s = symmetric_apply(&m, &s, n);
            let value_s = s.dot(&y_s);
            (s, y_s, value_s)
        };
        // Sign-insensitive step size: for even order the iteration may
        // settle on a two-cycle u -> -u, which is still an eigenpair with
        // negative lambda.
        let delta = (&next - &x).norm().min((&next + &x).norm());
        x = next;
        y = y_next;
        value = value_next;
        trace.push(value);
        iterations += 1;
        // The step size underestimates the distance to the fixed point by
        // the local contraction factor, so a small step alone does not
        // guarantee the returned-pair residual bound; check it directly.
        if delta <= tol && (&y - &x * value).norm() <= 10.0 * tol {
            break;
        }
    }
    let residual = (&y - &x * value).norm();
    if residual > 10.0 * tol {
        return Err(Error::NoConvergence {
            what: "symmetric power iteration",
            iterations,
            residual,
        });
    }
    let (lambda, u) = if n % 2 == 1 && value < 0.0 {
        (-value, -x)
    } else {
        (value, x)
    };
    Ok((
        ZEigenpair {
            lambda,
            vectors: vec![u],
            residual,
            iterations,
        },
        trace,
    ))
}

/// [`power_iteration_symmetric_traced`] without the Rayleigh-value trace.
pub fn power_iteration_symmetric(
    a: &DenseTensor,
    x0: &DVector<f64>,
    max_iters: usize,
    tol: f64,
) -> Result<ZEigenpair> {
    power_iteration_symmetric_traced(a, x0, max_iters, tol).map(|(pair, _)| pair)
}

fn asymmetric_checked_matrices(
    a: &DenseTensor,
) -> Result<(Vec<DMatrix<f64>>, Vec<usize>)> {
    let n = a.order();
    if n < 3 {
        return Err(Error::InvalidModes {
            order: n,
            detail: "power iteration needs order at least 3".into(),
        });
    }
    check_real_input(a, "asymmetric power iteration")?;
    let ms = (0..n)
        .map(|k| mode_leading_matrix(a, k))
        .collect::<Result<Vec<_>>>()?;
    Ok((ms, a.dims().to_vec()))
}

fn mode_contraction(
    ms: &[DMatrix<f64>],
    us: &[DVector<f64>],
    mode: usize,
) -> DVector<f64> {
    let others: Vec<&DVector<f64>> = us
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != mode)
        .map(|(_, u)| u)
        .collect();
    &ms[mode] * outer_vector(&others)
}

/// Alternating power iteration for Z-singular pairs: cyclically replaces
/// each `u_k` with the normalized contraction of `a` against all other
/// vectors, stopping once a sweep moves every vector less than `tol` and
/// the residual bound below holds. Returns `lambda = a *_N (u_1 o ... o
/// u_N)` and the largest per-mode residual `|contraction_k - lambda u_k|`.
pub fn power_iteration_asymmetric(
    a: &DenseTensor,
    x0: &[DVector<f64>],
    max_iters: usize,
    tol: f64,
) -> Result<ZEigenpair> {
    let (ms, dims) = asymmetric_checked_matrices(a)?;
    if x0.len() != dims.len() || x0.iter().zip(&dims).any(|(x, &d)| x.len() != d) {
        return Err(Error::DimMismatch {
            context: "start vector lengths vs tensor dims",
            left: x0.iter().map(|x| x.len()).collect(),
            right: dims,
        });
    }
    let mut us = x0
        .iter()
        .map(|x| unit_or_error(x, "start vector"))
        .collect::<Result<Vec<_>>>()?;
    let mut iterations = 0;
    for _ in 0..max_iters {
        let mut delta = 0.0f64;
        for k in 0..us.len() {
            let c = mode_contraction(&ms, &us, k);
            let nc = c.norm();
            if nc <= 1e-300 {
                return Err(Error::DegenerateIterate {
                    what: "asymmetric power iteration",
                });
            }
            let next = c / nc;
            delta = delta.max((&next - &us[k]).norm());
            us[k] = next;
        }
        iterations += 1;
        // As in the symmetric case, a small step alone can leave the
        // residual above its bound, so stopping requires both.
        if delta <= tol {
            let c0 = mode_contraction(&ms, &us, 0);
            let lambda = us[0].dot(&c0);
            let within = (0..us.len()).all(|k| {
                let c = mode_contraction(&ms, &us, k);
                (&c - &us[k] * lambda).norm() <= 10.0 * tol
            });
            if within {
                break;
            }
        }
    }
    let c0 = mode_contraction(&ms, &us, 0);
    let lambda = us[0].dot(&c0);
    let mut residual = 0.0f64;
    for k in 0..us.len() {
        let c = mode_contraction(&ms, &us, k);
        residual = residual.max((&c - &us[k] * lambda).norm());
    }
    if residual > 10.0 * tol {
        return Err(Error::NoConvergence {
            what: "asymmetric power iteration",
            iterations,
            residual,
        });
    }
    Ok(ZEigenpair {
        lambda,
        vectors: us,
        residual,
        iterations,
    })
}

/// Best Z-eigenpair (largest `lambda`) over random sphere restarts;
/// restarts that fail to converge are skipped.
pub fn best_symmetric_eigenpair(
    a: &DenseTensor,
    restarts: usize,
    max_iters: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<ZEigenpair> {
    let dim = a.dims()[0];
    let mut best: Option<ZEigenpair> = None;
    for _ in 0..restarts.max(1) {
        let x0 = random_unit_vector(dim, rng);
        if let Ok(pair) = power_iteration_symmetric(a, &x0, max_iters, tol) {
            if best.as_ref().map_or(true, |b| pair.lambda > b.lambda) {
                best = Some(pair);
            }
        }
    }
    best.ok_or(Error::NoConvergence {
        what: "symmetric power iteration restarts",
        iterations: max_iters,
        residual: f64::INFINITY,
    })
}

/// Best Z-singular pair over random restarts, by largest `lambda`.
pub fn best_asymmetric_eigenpair(
    a: &DenseTensor,
    restarts: usize,
    max_iters: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<ZEigenpair> {
    let dims = a.dims().to_vec();
    let mut best: Option<ZEigenpair> = None;
    for _ in 0..restarts.max(1) {
        let x0: Vec<DVector<f64>> = dims
            .iter()
            .map(|&d| random_unit_vector(d, rng))
            .collect();
        if let Ok(pair) = power_iteration_asymmetric(a, &x0, max_iters, tol) {
            if best.as_ref().map_or(true, |b| pair.lambda > b.lambda) {
                best = Some(pair);
            }
        }
    }
    best.ok_or(Error::NoConvergence {
        what: "asymmetric power iteration restarts",
        iterations: max_iters,
        residual: f64::INFINITY,
    })
}

/// Semicircle radius of the symmetric noise: `2 / sqrt(N (N - 1))`.
pub fn symmetric_noise_radius(order: usize) -> Result<f64> {
    if order < 3 {
        return Err(Error::InvalidModes {
            order,
            detail: "alignment theory needs order at least 3".into(),
        });
    }
    Ok(2.0 / ((order * (order - 1)) as f64).sqrt())
}

/// Lower edge `(N - 1) beta_N` of the admissible eigenvalue domain of the
/// symmetric alignment theory.
pub fn symmetric_domain_edge(order: usize) -> Result<f64> {
    Ok((order as f64 - 1.0) * symmetric_noise_radius(order)?)
}

/// Stieltjes transform of the semicircle law of radius `beta` on its real
/// branch `z > beta`: `(2 / beta^2) (sqrt(z^2 - beta^2) - z)`.
pub fn m_stieltjes(z: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "semicircle radius must be positive, got {beta}"
        )));
    }
    if z <= beta {
        return Err(Error::OutsideDomain {
            what: "semicircle Stieltjes transform",
            point: z,
        });
    }
    Ok(2.0 / (beta * beta) * ((z * z - beta * beta).sqrt() - z))
}

/// Asymptotic alignment prediction of the symmetric model at one signal
/// strength.
#[derive(Clone, Debug)]
pub struct SymmetricAlignment {
    pub beta: f64,
    /// Predicted Z-eigenvalue; NaN when infeasible.
    pub lambda: f64,
    /// Predicted alignment `|<u, x>|`; zero when infeasible.
    pub alignment: f64,
    /// False below the phase transition, where the fixed point has no root.
    pub feasible: bool,
}

struct SymmetricTheory {
    order: f64,
    beta: f64,
    radius: f64,
}

impl SymmetricTheory {
    fn m(&self, z: f64) -> Result<f64> {
        m_stieltjes(z / (self.order - 1.0), self.radius)
    }

    fn omega(&self, z: f64) -> Result<f64> {
        let base = z + self.m(z)? / self.order;
        Ok(base.powf(1.0 / (self.order - 2.0)) / self.beta.powf(1.0 / (self.order - 2.0)))
    }

    fn phi(&self, z: f64) -> Result<f64> {
        Ok(self.beta * self.omega(z)?.powf(self.order) - self.m(z)? / (self.order - 1.0))
    }

    /// Signed fixed-point defect `z - phi(z)`.
    fn defect(&self, z: f64) -> Result<f64> {
        Ok(z - self.phi(z)?)
    }
}

/// Offsets above a domain edge, log-spaced over `[lo, hi]`.
fn log_spaced_offsets(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let ratio = hi / lo;
    (0..count)
        .map(|i| lo * ratio.powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Solves the symmetric fixed-point equation `lambda = phi_N(lambda)` on
/// `lambda > (N - 1) beta_N` by bracketing on a log-spaced grid above the
/// edge and bisecting; reports infeasibility (no root, below the phase
/// transition) rather than erroring.
pub fn symmetric_alignment_prediction(order: usize, beta: f64) -> Result<SymmetricAlignment> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "signal strength must be positive, got {beta}"
        )));
    }
    let radius = symmetric_noise_radius(order)?;
    let edge = symmetric_domain_edge(order)?;
    let theory = SymmetricTheory {
        order: order as f64,
        beta,
        radius,
    };
    let mut bracket: Option<(f64, f64)> = None;
    let mut prev: Option<(f64, f64)> = None;
    for off in log_spaced_offsets(1e-8, 50.0, 160) {
        let z = edge + off;
        let f = theory.defect(z)?;
        if let Some((zp, fp)) = prev {
            if fp.signum() != f.signum() {
                bracket = Some((zp, z));
                break;
            }
        }
        prev = Some((z, f));
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Ok(SymmetricAlignment {
            beta,
            lambda: f64::NAN,
            alignment: 0.0,
            feasible: false,
        });
    };
    let f_lo = theory.defect(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if theory.defect(mid)?.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let residual = theory.defect(lambda)?.abs();
    if residual > 1e-10 {
        return Err(Error::NoConvergence {
            what: "symmetric fixed-point bisection",
            iterations: 200,
            residual,
        });
    }
    let alignment = theory.omega(lambda)?;
    if !(-1e-6..=1.0 + 1e-6).contains(&alignment) {
        return Err(Error::NoConvergence {
            what: "symmetric alignment out of [0, 1]",
            iterations: 200,
            residual: alignment,
        });
    }
    Ok(SymmetricAlignment {
        beta,
        lambda,
        alignment: alignment.clamp(0.0, 1.0),
        feasible: true,
    })
}

/// Per-mode solutions of the coupled quadratics
/// `g_k^2 - (sum_j g_j + z) g_k - c_k = 0`, on the branch with
/// `g_k -> -c_k / z` at large `z`, by damped fixed-point iteration on the
/// sum. Non-convergence marks `z` outside the existence set.
pub fn asymmetric_g_solver(z: f64, c: &[f64]) -> Result<Vec<f64>> {
    if c.is_empty() {
        return Err(Error::InvalidArgument("empty weight list".into()));
    }
    let total: f64 = c.iter().sum();
    if (total - 1.0).abs() > 1e-9 || c.iter().any(|&ck| !(0.0 < ck && ck < 1.0)) {
        return Err(Error::InvalidArgument(format!(
            "weights must lie in (0, 1) and sum to 1, got {c:?}"
        )));
    }
    let g_branch = |s: f64, ck: f64| {
        let b = s + z;
        let root = (b * b + 4.0 * ck).sqrt();
        // Pick the cancellation-free form of the quadratic root.
        if b >= 0.0 {
            -2.0 * ck / (b + root)
        } else {
            0.5 * (b - root)
        }
    };
    let mut s = 0.0f64;
    let mut converged = false;
    for _ in 0..50_000 {
        let s_new: f64 = c.iter().map(|&ck| g_branch(s, ck)).sum();
        if !s_new.is_finite() {
            break;
        }
        let next = 0.5 * s + 0.5 * s_new;
        let delta = (next - s).abs();
        s = next;
        if delta <= 1e-15 * s.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    let gs: Vec<f64> = c.iter().map(|&ck| g_branch(s, ck)).collect();
    let sum: f64 = gs.iter().sum();
    let worst = gs
        .iter()
        .zip(c)
        .map(|(&g, &ck)| (g * g - (sum + z) * g - ck).abs())
        .fold(0.0f64, f64::max);
    if !converged || worst > 1e-12 {
        return Err(Error::OutsideDomain {
            what: "asymmetric g system",
            point: z,
        });
    }
    Ok(gs)
}

/// Asymptotic alignment prediction of the asymmetric model at one signal
/// strength.
#[derive(Clone, Debug)]
pub struct AsymmetricAlignment {
    pub beta: f64,
    /// Predicted Z-singular value; NaN when infeasible.
    pub lambda: f64,
    /// Predicted per-mode alignments `|<u_k, x_k>|`; empty when infeasible.
    pub alignments: Vec<f64>,
    pub feasible: bool,
}

fn asymmetric_q(gs: &[f64], c: &[f64]) -> Option<Vec<f64>> {
    let mut qs = Vec::with_capacity(gs.len());
    for (&g, &ck) in gs.iter().zip(c) {
        let inside = 1.0 - g * g / ck;
        if inside < -1e-10 {
            return None;
        }
        qs.push(inside.max(0.0).sqrt());
    }
    Some(qs)
}

/// Evaluates `lambda + sum g_k(lambda) - beta prod q_k(lambda)`; None when
/// `lambda` is outside the existence set or a `q_k` turns imaginary.
fn asymmetric_defect(z: f64, c: &[f64], beta: f64) -> Option<f64> {
    let gs = asymmetric_g_solver(z, c).ok()?;
    let qs = asymmetric_q(&gs, c)?;
    let sum: f64 = gs.iter().sum();
    let prod: f64 = qs.iter().product();
    Some(z + sum - beta * prod)
}

/// Solves the asymmetric eigenvalue equation
/// `lambda + sum g_k - beta prod q_k = 0` with `c_k = I_k / sum I` by
/// locating the existence-set edge, bracketing on a log-spaced grid above
/// it, and bisecting; no root is reported as infeasible.
pub fn asymmetric_alignment_prediction(dims: &[usize], beta: f64) -> Result<AsymmetricAlignment> {
    if dims.len() < 3 || dims.iter().any(|&d| d == 0) {
        return Err(Error::InvalidModes {
            order: dims.len(),
            detail: "asymmetric prediction needs at least 3 nonzero dims".into(),
        });
    }
    let total: usize = dims.iter().sum();
    let c: Vec<f64> = dims.iter().map(|&d| d as f64 / total as f64).collect();
    asymmetric_alignment_prediction_from_ratios(&c, beta)
}

/// Same as [`asymmetric_alignment_prediction`] but parameterized directly by
/// the mode ratios `c_k` (which must sum to 1), since the asymptotics depend
/// on the dims only through them.
pub fn asymmetric_alignment_prediction_from_ratios(
    c: &[f64],
    beta: f64,
) -> Result<AsymmetricAlignment> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "signal strength must be positive, got {beta}"
        )));
    }

    // Operational existence-set edge: bisect on solver convergence.
    let mut hi = 10.0 * (1.0 + beta);
    while asymmetric_g_solver(hi, &c).is_err() {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::OutsideDomain {
                what: "asymmetric existence set",
                point: hi,
            });
        }
    }
    let mut lo = 1e-9;
    if asymmetric_g_solver(lo, &c).is_ok() {
        hi = lo;
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if asymmetric_g_solver(mid, &c).is_ok() {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-12 * hi.max(1.0) {
                break;
            }
        }
    }
    let edge = hi;

    let mut bracket: Option<(f64, f64)> = None;
    let mut prev: Option<(f64, f64)> = None;
    for off in log_spaced_offsets(1e-7, 50.0, 200) {
        let z = edge + off;
        let Some(f) = asymmetric_defect(z, &c, beta) else {
            prev = None;
            continue;
        };
        if let Some((zp, fp)) = prev {
            if fp.signum() != f.signum() {
                bracket = Some((zp, z));
                break;
            }
        }
        prev = Some((z, f));
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Ok(AsymmetricAlignment {
            beta,
            lambda: f64::NAN,
            alignments: Vec::new(),
            feasible: false,
        });
    };
    let f_lo = asymmetric_defect(lo, &c, beta).expect("bracket endpoint solvable");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = asymmetric_defect(mid, &c, beta);
        match fm {
            Some(f) if f.signum() == f_lo.signum() => lo = mid,
            Some(_) => hi = mid,
            // A non-solvable midpoint can only sit below the edge side.
            None => lo = mid,
        }
        if hi - lo <= 1e-13 * hi.max(1.0) {
            break;
        }
    }
    let lambda = hi;
    let residual = asymmetric_defect(lambda, &c, beta)
        .map(f64::abs)
        .unwrap_or(f64::INFINITY);
    if residual > 1e-10 {
        return Err(Error::NoConvergence {
            what: "asymmetric eigenvalue bisection",
            iterations: 200,
            residual,
        });
    }
    let gs = asymmetric_g_solver(lambda, &c)?;
    let alignments = asymmetric_q(&gs, &c).expect("root inside existence set");
    Ok(AsymmetricAlignment {
        beta,
        lambda,
        alignments,
        feasible: true,
    })
}

/// One signal strength of a symmetric sweep: empirical best-of-restarts
/// power iteration alongside the asymptotic prediction.
#[derive(Clone, Debug)]
pub struct SymmetricSweepRow {
    pub beta: f64,
    /// Mean over trials of `|<u, x>|`.
    pub empirical_alignment: f64,
    /// Mean over trials of the recovered eigenvalue.
    pub empirical_lambda: f64,
    pub theory: SymmetricAlignment,
    pub n_trials: usize,
}

/// Runs the symmetric spiked experiment over a signal-strength grid.
/// Trial `(i, t)` draws from RNG stream `i * n_trials + t`, so results do
/// not depend on parallel scheduling.
pub fn symmetric_alignment_sweep(
    order: usize,
    dim: usize,
    betas: &[f64],
    n_trials: usize,
    restarts: usize,
    max_iters: usize,
    tol: f64,
    seed: u64,
) -> Result<Vec<SymmetricSweepRow>> {
    if betas.is_empty() || n_trials == 0 {
        return Err(Error::InvalidArgument(
            "sweep needs at least one signal strength and one trial".into(),
        ));
    }
    let trials: Vec<Result<(usize, f64, f64)>> = (0..betas.len() * n_trials)
        .into_par_iter()
        .map(|id| {
            let bi = id / n_trials;
            let mut rng = stream_rng(seed, id as u64);
            let model = SymmetricSpikedModel::random(order, dim, betas[bi], &mut rng)?;
            let obs = model.generate(&mut rng)?;
            let pair = best_symmetric_eigenpair(&obs.tensor, restarts, max_iters, tol, &mut rng)?;
            let alignment = pair.vectors[0].dot(model.planted()).abs();
            Ok((bi, alignment, pair.lambda))
        })
        .collect();
    let mut align_sum = vec![0.0f64; betas.len()];
    let mut lambda_sum = vec![0.0f64; betas.len()];
    for t in trials {
        let (bi, alignment, lambda) = t?;
        align_sum[bi] += alignment;
        lambda_sum[bi] += lambda;
    }
    betas
        .iter()
        .enumerate()
        .map(|(bi, &beta)| {
            let theory = if beta > 0.0 {
                symmetric_alignment_prediction(order, beta)?
            } else {
                // A vanishing signal has no alignment theory to solve.
                SymmetricAlignment {
                    beta,
                    lambda: f64::NAN,
                    alignment: 0.0,
                    feasible: false,
                }
            };
            Ok(SymmetricSweepRow {
                beta,
                empirical_alignment: align_sum[bi] / n_trials as f64,
                empirical_lambda: lambda_sum[bi] / n_trials as f64,
                theory,
                n_trials,
            })
        })
        .collect()
}

/// One signal strength of an asymmetric sweep.
#[derive(Clone, Debug)]
pub struct AsymmetricSweepRow {
    pub beta: f64,
    /// Mean over trials of `|<u_k, x_k>|`, one entry per mode.
    pub empirical_alignments: Vec<f64>,
    pub empirical_lambda: f64,
    pub theory: AsymmetricAlignment,
    pub n_trials: usize,
}

/// Runs the asymmetric spiked experiment over a signal-strength grid with
/// the same stream addressing as the symmetric sweep.
pub fn asymmetric_alignment_sweep(
    dims: &[usize],
    betas: &[f64],
    n_trials: usize,
    restarts: usize,
    max_iters: usize,
    tol: f64,
    seed: u64,
) -> Result<Vec<AsymmetricSweepRow>> {
    if betas.is_empty() || n_trials == 0 {
        return Err(Error::InvalidArgument(
            "sweep needs at least one signal strength and one trial".into(),
        ));
    }
    let trials: Vec<Result<(usize, Vec<f64>, f64)>> = (0..betas.len() * n_trials)
        .into_par_iter()
        .map(|id| {
            let bi = id / n_trials;
            let mut rng = stream_rng(seed, id as u64);
            let model = AsymmetricSpikedModel::random(dims.to_vec(), betas[bi], &mut rng)?;
            let obs = model.generate(&mut rng)?;
            let pair =
                best_asymmetric_eigenpair(&obs.tensor, restarts, max_iters, tol, &mut rng)?;
            let alignments: Vec<f64> = pair
                .vectors
                .iter()
                .zip(model.planted())
                .map(|(u, x)| u.dot(x).abs())
                .collect();
            Ok((bi, alignments, pair.lambda))
        })
        .collect();
    let mut align_sum = vec![vec![0.0f64; dims.len()]; betas.len()];
    let mut lambda_sum = vec![0.0f64; betas.len()];
    for t in trials {
        let (bi, alignments, lambda) = t?;
        for (acc, a) in align_sum[bi].iter_mut().zip(alignments) {
            *acc += a;
        }
        lambda_sum[bi] += lambda;
    }
    betas
        .iter()
        .enumerate()
        .map(|(bi, &beta)| {
            let theory = if beta > 0.0 {
                asymmetric_alignment_prediction(dims, beta)?
            } else {
                AsymmetricAlignment {
                    beta,
                    lambda: f64::NAN,
                    alignments: Vec::new(),
                    feasible: false,
                }
            };
            Ok(AsymmetricSweepRow {
                beta,
                empirical_alignments: align_sum[bi]
                    .iter()
                    .map(|s| s / n_trials as f64)
                    .collect(),
                empirical_lambda: lambda_sum[bi] / n_trials as f64,
                theory,
                n_trials,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_noise_is_permutation_invariant() {
        let mut rng = stream_rng(41, 0);
        let w = sample_symmetric_noise(3, 5, &mut rng).unwrap();
        for perm in [[0usize, 2, 1], [1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            assert_eq!(w, w.permute(&perm).unwrap());
        }
    }

    #[test]
    fn symmetric_noise_variance_profile() {
        let dim = 30;
        let mut sums = [0.0f64; 3];
        let mut counts = [0usize; 3];
        for draw in 0..40 {
            let mut rng = stream_rng(42, draw);
            let w = sample_symmetric_noise(3, dim, &mut rng).unwrap();
            for i in 0..dim {
                for j in i..dim {
                    for k in j..dim {
                        let v = w.get(&[i, j, k]).re;
                        let distinct = [i == j, j == k].iter().filter(|&&e| !e).count();
                        sums[distinct] += v * v;
                        counts[distinct] += 1;
                    }
                }
            }
        }
        let expect = [1.0, 1.0 / 3.0, 1.0 / 6.0];
        for (cls, &want) in expect.iter().enumerate() {
            let got = sums[cls] / counts[cls] as f64;
            assert!(
                (got - want).abs() / want < 0.1,
                "class {cls}: variance {got} vs {want}"
            );
        }
    }

    #[test]
    fn multiset_count_matches_brute_force() {
        for sorted in [
            vec![0usize, 0, 1],
            vec![0, 1, 2],
            vec![1, 1, 1],
            vec![0, 0, 1, 1],
            vec![0, 1, 2, 3],
            vec![2, 2, 2, 5],
        ] {
            let mut perm = sorted.clone();
            let mut brute = 1u64;
            while next_permutation(&mut perm) {
                brute += 1;
            }
            assert_eq!(multiset_permutation_count(&sorted), brute, "{sorted:?}");
        }
    }

    #[test]
    fn generate_is_exact_sum_of_parts() {
        let mut rng = stream_rng(43, 0);
        let model = SymmetricSpikedModel::random(3, 6, 1.5, &mut rng).unwrap();
        let obs = model.generate(&mut rng).unwrap();
        assert_eq!(obs.tensor, obs.signal.add(&obs.scaled_noise).unwrap());
        assert!(obs.tensor.is_real_within(0.0));
        assert!(check_symmetric(&obs.tensor).is_ok());

        let null = SymmetricSpikedModel::random(3, 6, 0.0, &mut rng).unwrap();
        let obs0 = null.generate(&mut rng).unwrap();
        assert_eq!(obs0.tensor, obs0.scaled_noise);
    }

    #[test]
    fn pure_rank_one_converges_immediately() {
        let x = DVector::from_vec(vec![0.6, 0.0, 0.8]);
        let model = SymmetricSpikedModel::new(3, 3, 1.0, x.clone()).unwrap();
        let shape = Shape::new([3, 3, 3]).unwrap();
        let a = DenseTensor::from_fn(shape, |idx| {
            Complex64::new(x[idx[0]] * x[idx[1]] * x[idx[2]], 0.0)
        });
        let x0 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let pair = power_iteration_symmetric(&a, &x0, 50, 1e-12).unwrap();
        assert!(pair.iterations <= 3, "took {} iterations", pair.iterations);
        assert!((pair.lambda - 1.0).abs() < 1e-10);
        assert!(pair.vectors[0].dot(model.planted()).abs() > 1.0 - 1e-10);
        assert!(pair.residual <= 1e-11);
    }

    #[test]
    fn strong_signal_recovers_planted_direction() {
        let mut rng = stream_rng(44, 0);
        let model = SymmetricSpikedModel::random(3, 15, 10.0, &mut rng).unwrap();
        let obs = model.generate(&mut rng).unwrap();
        let pair = best_symmetric_eigenpair(&obs.tensor, 3, 500, 1e-10, &mut rng).unwrap();
        let alignment = pair.vectors[0].dot(model.planted()).abs();
        assert!(alignment > 0.99, "alignment {alignment}");
    }

    #[test]
    fn rayleigh_trace_is_nondecreasing() {
        for (beta, stream) in [(2.0, 0), (0.3, 1), (0.0, 2)] {
            let mut rng = stream_rng(45, stream);
            let model = SymmetricSpikedModel::random(3, 12, beta, &mut rng).unwrap();
            let obs = model.generate(&mut rng).unwrap();
            let x0 = random_unit_vector(12, &mut rng);
            let (pair, trace) =
                power_iteration_symmetric_traced(&obs.tensor, &x0, 3000, 1e-10).unwrap();
            assert!(trace.len() >= 2);
            for w in trace.windows(2) {
                assert!(w[1] >= w[0] - 1e-12, "{} < {}", w[1], w[0]);
            }
            let end = symmetric_value(&obs.tensor, &pair.vectors[0]).unwrap();
            assert!((end - pair.lambda).abs() < 1e-9);
        }
    }

    #[test]
    fn loss_gradient_vanishes_at_eigenpair() {
        let mut rng = stream_rng(46, 0);
        let model = SymmetricSpikedModel::random(3, 10, 3.0, &mut rng).unwrap();
        let obs = model.generate(&mut rng).unwrap();
        let pair = best_symmetric_eigenpair(&obs.tensor, 5, 2000, 1e-9, &mut rng).unwrap();
        let u = &pair.vectors[0];
        let h = 1e-5;
        let dl = (symmetric_loss(&obs.tensor, pair.lambda + h, u).unwrap()
            - symmetric_loss(&obs.tensor, pair.lambda - h, u).unwrap())
            / (2.0 * h);
        assert!(dl.abs() < 1e-3, "lambda gradient {dl}");
        let mut grad_norm2 = 0.0f64;
        for i in 0..u.len() {
            let mut up = u.clone();
            let mut dn = u.clone();
            up[i] += h;
            dn[i] -= h;
            let d = (symmetric_loss(&obs.tensor, pair.lambda, &up).unwrap()
                - symmetric_loss(&obs.tensor, pair.lambda, &dn).unwrap())
                / (2.0 * h);
            grad_norm2 += d * d;
        }
        assert!(grad_norm2.sqrt() < 1e-3, "gradient norm {}", grad_norm2.sqrt());
    }

    #[test]
    fn stieltjes_transform_closed_forms() {
        assert!((m_stieltjes(2.5, 2.0).unwrap() + 0.5).abs() < 1e-14);
        assert!(m_stieltjes(1e6, 2.0).unwrap().abs() < 3e-6);
        let near_edge = m_stieltjes(2.0 + 1e-12, 2.0).unwrap();
        assert!((near_edge + 1.0).abs() < 1e-5);
        assert!(m_stieltjes(1.9, 2.0).is_err());
        for z in [2.2f64, 3.0, 7.5] {
            let m = m_stieltjes(z, 2.0).unwrap();
            // Self-consistency of the radius-2 semicircle: m = -1 / (z + m).
            let identity = m + 1.0 / (m + z);
            assert!(identity.abs() < 1e-12, "identity defect {identity} at {z}");
        }
    }

    #[test]
    fn symmetric_prediction_above_and_below_transition() {
        let edge = symmetric_domain_edge(3).unwrap();
        assert!((edge - 4.0 / 6.0f64.sqrt()).abs() < 1e-12);

        let strong = symmetric_alignment_prediction(3, 2.0).unwrap();
        assert!(strong.feasible);
        assert!(strong.lambda > edge);
        assert!(strong.alignment > 0.9 && strong.alignment <= 1.0);

        let weak = symmetric_alignment_prediction(3, 0.8).unwrap();
        assert!(!weak.feasible);
        assert_eq!(weak.alignment, 0.0);

        // The transition sits near sqrt(4/3) = 1.1547.
        assert!(!symmetric_alignment_prediction(3, 1.1).unwrap().feasible);
        assert!(symmetric_alignment_prediction(3, 1.2).unwrap().feasible);
    }

    #[test]
    fn g_solver_matches_quadratic_formula() {
        let c = [1.0 / 3.0; 3];
        let gs = asymmetric_g_solver(3.0, &c).unwrap();
        // Under symmetry the system collapses to 2g^2 + 3g + 1/3 = 0.
        let expect = (-3.0 + (9.0f64 - 8.0 / 3.0).sqrt()) / 4.0;
        for &g in &gs {
            assert!((g - expect).abs() < 1e-9, "g {g} vs {expect}");
        }

        let far = asymmetric_g_solver(1e6, &c).unwrap();
        for (&g, &ck) in far.iter().zip(&c) {
            assert!((g * 1e6 + ck).abs() < 1e-4);
        }

        // Below the existence edge sqrt(8/3) the system has no real root.
        assert!(asymmetric_g_solver(1.5, &c).is_err());
        assert!(asymmetric_g_solver(3.0, &[0.5, 0.5, 0.5]).is_err());
    }

    #[test]
    fn asymmetric_prediction_equal_dims() {
        let pred = asymmetric_alignment_prediction(&[20, 20, 20], 4.0).unwrap();
        assert!(pred.feasible);
        let first = pred.alignments[0];
        for &a in &pred.alignments {
            assert!((a - first).abs() < 1e-9);
            assert!((0.0..=1.0).contains(&a));
        }
        assert!(first > 0.9, "alignment {first}");

        let strong = asymmetric_alignment_prediction(&[20, 20, 20], 50.0).unwrap();
        assert!(strong.alignments[0] > 0.999);
    }

    #[test]
    fn asymmetric_rank_one_recovered() {
        let xs = [
            DVector::from_vec(vec![0.6, 0.8]),
            DVector::from_vec(vec![1.0, 0.0, 0.0]),
            DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0]),
        ];
        let shape = Shape::new([2, 3, 4]).unwrap();
        let a = DenseTensor::from_fn(shape, |idx| {
            Complex64::new(xs[0][idx[0]] * xs[1][idx[1]] * xs[2][idx[2]], 0.0)
        });
        let mut rng = stream_rng(47, 0);
        let pair = best_asymmetric_eigenpair(&a, 4, 200, 1e-12, &mut rng).unwrap();
        assert!((pair.lambda - 1.0).abs() < 1e-9);
        for (u, x) in pair.vectors.iter().zip(&xs) {
            assert!(u.dot(x).abs() > 1.0 - 1e-8);
        }
    }

    #[test]
    fn asymmetric_strong_signal_alignment() {
        let mut rng = stream_rng(48, 0);
        let model = AsymmetricSpikedModel::random(vec![10, 12, 8], 8.0, &mut rng).unwrap();
        let obs = model.generate(&mut rng).unwrap();
        let pair = best_asymmetric_eigenpair(&obs.tensor, 5, 500, 1e-10, &mut rng).unwrap();
        for (u, x) in pair.vectors.iter().zip(model.planted()) {
            let a = u.dot(x).abs();
            assert!(a > 0.95, "alignment {a}");
        }
    }

    #[test]
    fn small_sweep_shows_transition_shape() {
        let rows =
            symmetric_alignment_sweep(3, 10, &[0.0, 2.5], 4, 4, 3000, 1e-8, 49).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(!rows[0].theory.feasible);
        assert!(rows[0].theory.alignment == 0.0);
        assert!(rows[1].theory.feasible);
        assert!(rows[1].empirical_alignment > rows[0].empirical_alignment);
        assert!(rows[1].empirical_alignment > 0.7);
    }

    #[test]
    fn non_symmetric_input_rejected() {
        let shape = Shape::new([2, 2, 2]).unwrap();
        let mut t = DenseTensor::zeros(shape);
        t.set(&[0, 0, 1], Complex64::new(1.0, 0.0));
        let x0 = DVector::from_vec(vec![1.0, 0.0]);
        assert!(power_iteration_symmetric(&t, &x0, 10, 1e-8).is_err());
    }
}
