//! Separability checks for MIMO-style channel correlations.
//!
//! Two empirical drivers: per-index factor estimation for separable channel
//! correlations (uniform across the other domain's indices), and the 4x4
//! two-antenna correlation whose per-mode estimates are uniform even though
//! the full correlation is not a Kronecker product.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::correlation::{CorrelationKind, CorrelationTensor};
use super::moments::estimate_correlation;
use super::sampling::CorrelatedSampler;
use super::VALIDATION_TOL;
use crate::error::{Error, Result};
use crate::shape::{for_each_index, ModeSplit, Shape};
use crate::tensor::DenseTensor;

/// Outcome of the separable-channel uniformity experiment.
#[derive(Clone, Debug)]
pub struct Lemma1Report {
    /// Max over receive indices of the Frobenius distance between the
    /// per-index transmit estimate and their pooled mean.
    pub transmit_uniformity: f64,
    /// Same with the roles of transmit and receive swapped.
    pub receive_uniformity: f64,
    /// Frobenius distance of the pooled transmit estimate to the true factor.
    pub transmit_theory_gap: f64,
    pub receive_theory_gap: f64,
    /// Max deviation of any per-index estimate's pseudo-diagonal from one.
    pub transmit_diag_deviation: f64,
    pub receive_diag_deviation: f64,
    pub n_samples: usize,
}

fn check_unit_pseudo_diagonal(g: &CorrelationTensor, what: &str) -> Result<()> {
    let m = g.matricized();
    for j in 0..m.nrows() {
        if (m[(j, j)] - Complex64::new(1.0, 0.0)).norm() > VALIDATION_TOL {
            return Err(Error::InvalidArgument(format!(
                "{what} factor must have unit pseudo-diagonal, entry {j} is {}",
                m[(j, j)]
            )));
        }
    }
    Ok(())
}

fn multi_indices(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_index(dims, |idx| out.push(idx.to_vec()));
    out
}

/// Per-fixed-index factor estimates sliced out of a full correlation
/// estimate. `fixed` ranges over one domain, `free` over the other;
/// `assemble` maps `(free, free', fixed)` to the full 2(M+N)-mode index.
fn sliced_estimates(
    r_hat: &DenseTensor,
    fixed: &[Vec<usize>],
    free: &[Vec<usize>],
    assemble: impl Fn(&[usize], &[usize], &[usize]) -> Vec<usize>,
) -> Vec<DMatrix<Complex64>> {
    let k = free.len();
    fixed
        .iter()
        .map(|fx| {
            DMatrix::from_fn(k, k, |a, b| {
                r_hat.get(&assemble(&free[a], &free[b], fx))
            })
        })
        .collect()
}

fn uniformity_stats(
    estimates: &[DMatrix<Complex64>],
    truth: &DMatrix<Complex64>,
) -> (f64, f64, f64) {
    let k = truth.nrows();
    let mut pooled = DMatrix::<Complex64>::zeros(k, k);
    for e in estimates {
        pooled += e;
    }
    pooled /= Complex64::new(estimates.len() as f64, 0.0);
    let uniformity = estimates
        .iter()
        .map(|e| (e - &pooled).norm())
        .fold(0.0, f64::max);
    let diag_dev = estimates
        .iter()
        .flat_map(|e| (0..k).map(move |i| (e[(i, i)] - Complex64::new(1.0, 0.0)).norm()))
        .fold(0.0, f64::max);
    ((pooled - truth).norm(), uniformity, diag_dev)
}

/// Samples a channel with the separable correlation built from `g_r`
/// (receive domain) and `g_t` (transmit domain), then estimates each factor
/// once per fixed index of the other domain and measures how uniform the
/// estimates are.
pub fn verify_lemma1(
    g_r: &CorrelationTensor,
    g_t: &CorrelationTensor,
    n_samples: usize,
    rng: &mut impl Rng,
) -> Result<Lemma1Report> {
    check_unit_pseudo_diagonal(g_r, "receive")?;
    check_unit_pseudo_diagonal(g_t, "transmit")?;
    if n_samples < 2 {
        return Err(Error::NotEnoughSamples {
            what: "channel factor estimation",
            min: 2,
            found: n_samples,
        });
    }
    let r_dims = g_r.mode_dims().to_vec();
    let t_dims = g_t.mode_dims().to_vec();
    let m = r_dims.len();
    let n = t_dims.len();
    let channel_dims: Vec<usize> = r_dims.iter().chain(&t_dims).copied().collect();
    let full_dims: Vec<usize> = channel_dims.iter().chain(&channel_dims).copied().collect();
    let g_r_val = g_r.value();
    let g_t_val = g_t.value();
    let full = DenseTensor::from_fn(Shape::new(full_dims)?, |idx| {
        let (j, rest) = idx.split_at(m);
        let (i, rest) = rest.split_at(n);
        let (jp, ip) = rest.split_at(m);
        let rj: Vec<usize> = j.iter().chain(jp).copied().collect();
        let ti: Vec<usize> = i.iter().chain(ip).copied().collect();
        g_r_val.get(&rj) * g_t_val.get(&ti)
    });
    let r = CorrelationTensor::new(full, CorrelationKind::Correlation)?;
    let sampler = CorrelatedSampler::new(&r)?;
    let samples: Vec<_> = (0..n_samples).map(|_| sampler.sample(rng)).collect();
    let r_hat = estimate_correlation(&samples)?;

    let recv_idx = multi_indices(&r_dims);
    let trans_idx = multi_indices(&t_dims);
    let t_estimates = sliced_estimates(r_hat.value(), &recv_idx, &trans_idx, |i, ip, j| {
        j.iter().chain(i).chain(j).chain(ip).copied().collect()
    });
    let r_estimates = sliced_estimates(r_hat.value(), &trans_idx, &recv_idx, |j, jp, i| {
        j.iter().chain(i).chain(jp).chain(i).copied().collect()
    });
    let (t_gap, t_uniform, t_diag) = uniformity_stats(&t_estimates, &g_t.matricized());
    let (r_gap, r_uniform, r_diag) = uniformity_stats(&r_estimates, &g_r.matricized());
    Ok(Lemma1Report {
        transmit_uniformity: t_uniform,
        receive_uniformity: r_uniform,
        transmit_theory_gap: t_gap,
        receive_theory_gap: r_gap,
        transmit_diag_deviation: t_diag,
        receive_diag_deviation: r_diag,
        n_samples,
    })
}

/// Outcome of the non-separable two-antenna correlation check.
#[derive(Clone, Debug)]
pub struct KroneckerReport {
    pub min_eigenvalue: f64,
    /// Exact Frobenius gap between the two per-index receive blocks.
    pub receive_uniformity_gap: f64,
    pub transmit_uniformity_gap: f64,
    /// Frobenius distance of the full correlation to the Kronecker product
    /// of its per-mode factors.
    pub kronecker_gap: f64,
    /// `|nu - rho mu|`: zero exactly when the (1,4) entry is separable.
    pub nu_defect: f64,
    /// `|gamma - mu conj(rho)|`.
    pub gamma_defect: f64,
    pub is_separable: bool,
    /// Max Frobenius error of the per-index empirical receive blocks.
    pub empirical_receive_error: f64,
    pub empirical_transmit_error: f64,
    pub n_samples: usize,
}

/// The 4x4 two-antenna correlation, rows/columns ordered as
/// `(h_11, h_21, h_12, h_22)` with receive index fastest.
pub fn kronecker_mimo_matrix(
    rho: Complex64,
    mu: Complex64,
    nu: Complex64,
    gamma: Complex64,
) -> DMatrix<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    DMatrix::from_row_slice(
        4,
        4,
        &[
            one,
            rho,
            mu,
            nu,
            rho.conj(),
            one,
            gamma,
            mu,
            mu.conj(),
            gamma.conj(),
            one,
            rho,
            nu.conj(),
            mu.conj(),
            rho.conj(),
            one,
        ],
    )
}

/// Same correlation as an order-4 tensor over a 2x2 channel.
pub fn kronecker_mimo_tensor(
    rho: Complex64,
    mu: Complex64,
    nu: Complex64,
    gamma: Complex64,
) -> Result<CorrelationTensor> {
    let m = kronecker_mimo_matrix(rho, mu, nu, gamma);
    let value = crate::algebra::dematricize(
        &m,
        &Shape::new([2, 2, 2, 2])?,
        ModeSplit::square(2),
    )?;
    CorrelationTensor::new(value, CorrelationKind::Correlation)
}

fn block(m: &DMatrix<Complex64>, rows: [usize; 2], cols: [usize; 2]) -> DMatrix<Complex64> {
    DMatrix::from_fn(2, 2, |a, b| m[(rows[a], cols[b])])
}

/// Builds the two-antenna correlation, verifies PSD and uniformity of its
/// per-mode blocks, measures the gap to the Kronecker product of those
/// blocks, and confirms the per-mode blocks empirically on `n_samples`
/// channel draws.
pub fn kronecker_counterexample_check(
    rho: Complex64,
    mu: Complex64,
    nu: Complex64,
    gamma: Complex64,
    n_samples: usize,
    rng: &mut impl Rng,
) -> Result<KroneckerReport> {
    let dominance_row1 = rho.norm() + mu.norm() + nu.norm();
    let dominance_row2 = rho.norm() + gamma.norm() + mu.norm();
    if dominance_row1 >= 1.0 || dominance_row2 >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "diagonal dominance requires |rho|+|mu|+|nu| < 1 and |rho|+|gamma|+|mu| < 1, got {dominance_row1:.3} and {dominance_row2:.3}"
        )));
    }
    if n_samples < 2 {
        return Err(Error::NotEnoughSamples {
            what: "channel correlation estimation",
            min: 2,
            found: n_samples,
        });
    }
    let r_mimo = kronecker_mimo_matrix(rho, mu, nu, gamma);
    let (eigvals, _) = super::correlation::hermitian_eigen(&r_mimo);
    let min_eigenvalue = eigvals.iter().cloned().fold(f64::MAX, f64::min);

    // vec index j + 2i with receive j fastest: receive blocks live on the
    // block diagonal, transmit blocks on strided positions.
    let r_recv = [block(&r_mimo, [0, 1], [0, 1]), block(&r_mimo, [2, 3], [2, 3])];
    let r_trans = [block(&r_mimo, [0, 2], [0, 2]), block(&r_mimo, [1, 3], [1, 3])];
    let receive_uniformity_gap = (&r_recv[0] - &r_recv[1]).norm();
    let transmit_uniformity_gap = (&r_trans[0] - &r_trans[1]).norm();
    let kron = r_trans[0].kronecker(&r_recv[0]);
    let kronecker_gap = (&r_mimo - kron).norm();
    let nu_defect = (nu - rho * mu).norm();
    let gamma_defect = (gamma - mu * rho.conj()).norm();

    let tensor = kronecker_mimo_tensor(rho, mu, nu, gamma)?;
    let sampler = CorrelatedSampler::new(&tensor)?;
    let samples: Vec<_> = (0..n_samples).map(|_| sampler.sample(rng)).collect();
    let r_hat = estimate_correlation(&samples)?;
    let m_hat = r_hat.matricized();
    let empirical_receive_error = (0..2)
        .map(|i| {
            (block(&m_hat, [2 * i, 2 * i + 1], [2 * i, 2 * i + 1]) - &r_recv[i]).norm()
        })
        .fold(0.0, f64::max);
    let empirical_transmit_error = (0..2)
        .map(|j| (block(&m_hat, [j, j + 2], [j, j + 2]) - &r_trans[j]).norm())
        .fold(0.0, f64::max);

    Ok(KroneckerReport {
        min_eigenvalue,
        receive_uniformity_gap,
        transmit_uniformity_gap,
        kronecker_gap,
        nu_defect,
        gamma_defect,
        is_separable: nu_defect <= 1e-12 && gamma_defect <= 1e-12,
        empirical_receive_error,
        empirical_transmit_error,
        n_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn factor(rho: Complex64) -> CorrelationTensor {
        let one = Complex64::new(1.0, 0.0);
        let value = DenseTensor::from_vec(
            Shape::new([2, 2]).unwrap(),
            // first-index-fastest: [0,0], [1,0], [0,1], [1,1]
            vec![one, rho.conj(), rho, one],
        )
        .unwrap();
        CorrelationTensor::new(value, CorrelationKind::Correlation).unwrap()
    }

    #[test]
    fn identity_factors_give_noise_level_uniformity() {
        let g = factor(re(0.0));
        let report = verify_lemma1(&g, &g, 4000, &mut stream_rng(21, 0)).unwrap();
        assert!(report.transmit_uniformity < 0.25);
        assert!(report.receive_uniformity < 0.25);
        assert!(report.transmit_diag_deviation < 0.2);
    }

    #[test]
    fn separable_factors_are_recovered() {
        let g_r = factor(Complex64::new(0.5, 0.0));
        let g_t = factor(Complex64::new(0.3, 0.1));
        let report = verify_lemma1(&g_r, &g_t, 20_000, &mut stream_rng(22, 0)).unwrap();
        assert!(report.transmit_theory_gap < 0.1);
        assert!(report.receive_theory_gap < 0.1);
        assert!(report.transmit_uniformity < 0.1);
    }

    #[test]
    fn unit_diagonal_is_required() {
        let value = DenseTensor::from_vec(
            Shape::new([2, 2]).unwrap(),
            vec![re(2.0), re(0.0), re(0.0), re(2.0)],
        )
        .unwrap();
        let g = CorrelationTensor::new(value, CorrelationKind::Correlation).unwrap();
        assert!(verify_lemma1(&g, &g, 100, &mut stream_rng(0, 0)).is_err());
    }

    #[test]
    fn counterexample_entries_are_uniform_but_not_separable() {
        let report = kronecker_counterexample_check(
            re(0.3),
            re(0.3),
            re(0.2),
            re(0.1),
            2000,
            &mut stream_rng(23, 0),
        )
        .unwrap();
        assert_eq!(report.receive_uniformity_gap, 0.0);
        assert_eq!(report.transmit_uniformity_gap, 0.0);
        assert!((report.nu_defect - (0.2 - 0.09)).abs() < 1e-15);
        assert!(!report.is_separable);
        assert!(report.kronecker_gap > 0.1);
        assert!(report.min_eigenvalue > 0.0);
    }

    #[test]
    fn separable_parameters_give_exact_kronecker() {
        let rho = Complex64::new(0.3, 0.1);
        let mu = Complex64::new(0.2, -0.2);
        let report = kronecker_counterexample_check(
            rho,
            mu,
            rho * mu,
            mu * rho.conj(),
            100,
            &mut stream_rng(24, 0),
        )
        .unwrap();
        assert!(report.is_separable);
        assert!(report.kronecker_gap < 1e-12);
    }

    #[test]
    fn dominance_precondition_is_enforced() {
        assert!(kronecker_counterexample_check(
            re(0.5),
            re(0.4),
            re(0.3),
            re(0.0),
            100,
            &mut stream_rng(0, 0),
        )
        .is_err());
    }
}
