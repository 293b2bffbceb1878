//! Multilinear algebra on dense tensors.
//!
//! The central tool is matricization: a tensor of shape
//! `I_1 x ... x I_N x J_1 x ... x J_M` with the split `(N|M)` maps to the
//! `prod(I) x prod(J)` matrix whose row index linearizes the leading modes and
//! whose column index linearizes the trailing modes, both with the first index
//! fastest. Because tensors store their entries in exactly that order, the
//! matrix is the same buffer read column-major; no data movement is needed.
//!
//! Matricization is a bijection and turns the Einstein product into the
//! ordinary matrix product, which is how the product routines here are
//! implemented. Structural notions (identity, Hermitian, unitary,
//! pseudo-diagonal, inverse) are all defined through the same map.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::shape::{ModeSplit, Shape};
use crate::tensor::DenseTensor;

/// Default absolute tolerance for the structural predicates.
pub const DEFAULT_STRUCT_TOL: f64 = 1e-10;

/// Matricizes `t` under `split` into a dense column-major matrix.
///
/// # Errors
///
/// Returns [`Error::InvalidSplit`] if the split does not partition the order.
pub fn matricize(t: &DenseTensor, split: ModeSplit) -> Result<DMatrix<Complex64>> {
    let (rows, cols) = t.shape().split_dims(split)?;
    Ok(DMatrix::from_column_slice(rows, cols, t.data()))
}

/// Rebuilds a tensor of `shape` from its matricization under `split`.
///
/// # Errors
///
/// Returns [`Error::DimMismatch`] if the matrix dimensions do not match the
/// shape and split.
pub fn dematricize(m: &DMatrix<Complex64>, shape: &Shape, split: ModeSplit) -> Result<DenseTensor> {
    let (rows, cols) = shape.split_dims(split)?;
    if m.nrows() != rows || m.ncols() != cols {
        return Err(Error::DimMismatch {
            context: "dematricize",
            left: vec![m.nrows(), m.ncols()],
            right: vec![rows, cols],
        });
    }
    DenseTensor::from_vec(shape.clone(), m.as_slice().to_vec())
}

/// Einstein product `a *_n b`: contracts the trailing `n` modes of `a` with
/// the leading `n` modes of `b`.
///
/// The result keeps the leading `a.order() - n` modes of `a` followed by the
/// trailing `b.order() - n` modes of `b`; contracting every mode of both
/// operands yields an order-zero (scalar) tensor.
///
/// # Errors
///
/// Returns [`Error::InvalidModes`] if `n` is zero or exceeds either order and
/// [`Error::DimMismatch`] if the contracted dimensions disagree.
pub fn einstein_product(a: &DenseTensor, b: &DenseTensor, n: usize) -> Result<DenseTensor> {
    if n == 0 || n > a.order() || n > b.order() {
        return Err(Error::InvalidModes {
            order: a.order().min(b.order()),
            detail: format!(
                "einstein product over {n} modes of orders {} and {}",
                a.order(),
                b.order()
            ),
        });
    }
    let keep_a = a.order() - n;
    let contracted_a = &a.dims()[keep_a..];
    let contracted_b = &b.dims()[..n];
    if contracted_a != contracted_b {
        return Err(Error::DimMismatch {
            context: "einstein_product",
            left: contracted_a.to_vec(),
            right: contracted_b.to_vec(),
        });
    }

    let rows_a: usize = a.dims()[..keep_a].iter().product();
    let inner: usize = contracted_a.iter().product();
    let cols_b: usize = b.dims()[n..].iter().product();
    let ma = DMatrix::from_column_slice(rows_a, inner, a.data());
    let mb = DMatrix::from_column_slice(inner, cols_b, b.data());
    let prod = ma * mb;

    let mut dims = a.dims()[..keep_a].to_vec();
    dims.extend_from_slice(&b.dims()[n..]);
    DenseTensor::from_vec(Shape::new(dims)?, prod.as_slice().to_vec())
}

/// Contracted product over explicit mode lists: sums over the paired modes
/// `(modes_a[k], modes_b[k])` and keeps the remaining modes of `a` (in their
/// original order) followed by the remaining modes of `b`.
///
/// # Errors
///
/// Returns [`Error::InvalidModes`] for mismatched list lengths, out-of-range
/// or repeated modes, and [`Error::DimMismatch`] if paired dimensions differ.
pub fn contracted_product(
    a: &DenseTensor,
    b: &DenseTensor,
    modes_a: &[usize],
    modes_b: &[usize],
) -> Result<DenseTensor> {
    if modes_a.len() != modes_b.len() || modes_a.is_empty() {
        return Err(Error::InvalidModes {
            order: a.order(),
            detail: format!(
                "contraction lists {modes_a:?} and {modes_b:?} must pair up and be non-empty"
            ),
        });
    }
    validate_mode_list(a.order(), modes_a)?;
    validate_mode_list(b.order(), modes_b)?;
    for (&ma, &mb) in modes_a.iter().zip(modes_b) {
        if a.dims()[ma] != b.dims()[mb] {
            return Err(Error::DimMismatch {
                context: "contracted_product",
                left: vec![a.dims()[ma]],
                right: vec![b.dims()[mb]],
            });
        }
    }

    // Permute the contracted modes to the front of each operand, then reduce
    // to a single matrix product: Z = A^T B with A of shape (inner x rest_a).
    let perm_a = front_permutation(a.order(), modes_a);
    let perm_b = front_permutation(b.order(), modes_b);
    let ap = a.permute(&perm_a)?;
    let bp = b.permute(&perm_b)?;
    let inner: usize = modes_a.iter().map(|&m| a.dims()[m]).product();
    let rest_a = ap.len() / inner;
    let rest_b = bp.len() / inner;
    let ma = DMatrix::from_column_slice(inner, rest_a, ap.data());
    let mb = DMatrix::from_column_slice(inner, rest_b, bp.data());
    let prod = ma.transpose() * mb;

    let mut dims: Vec<usize> = perm_a[modes_a.len()..]
        .iter()
        .map(|&m| a.dims()[m])
        .collect();
    dims.extend(perm_b[modes_b.len()..].iter().map(|&m| b.dims()[m]));
    DenseTensor::from_vec(Shape::new(dims)?, prod.as_slice().to_vec())
}

/// Mode-`n` product `t x_n u`: multiplies mode `n` of `t` by the matrix `u`
/// (`u` has shape `J x I_n`), replacing the mode size `I_n` by `J`.
///
/// # Errors
///
/// Returns [`Error::InvalidModes`] for an out-of-range mode and
/// [`Error::DimMismatch`] if `u.ncols() != I_n`.
pub fn mode_n_product(t: &DenseTensor, u: &DMatrix<Complex64>, n: usize) -> Result<DenseTensor> {
    if n >= t.order() {
        return Err(Error::InvalidModes {
            order: t.order(),
            detail: format!("mode {n} out of range"),
        });
    }
    if u.ncols() != t.dims()[n] {
        return Err(Error::DimMismatch {
            context: "mode_n_product",
            left: vec![u.ncols()],
            right: vec![t.dims()[n]],
        });
    }
    let left: usize = t.dims()[..n].iter().product();
    let mid = t.dims()[n];
    let right: usize = t.dims()[n + 1..].iter().product();
    let j = u.nrows();

    let mut dims = t.dims().to_vec();
    dims[n] = j;
    let mut out = vec![Complex64::new(0.0, 0.0); left * j * right];
    // Each fixed trailing block is a (left x mid) column-major panel; the
    // product with u^T maps it to a (left x j) panel in the same position.
    for r in 0..right {
        let src = &t.data()[r * left * mid..(r + 1) * left * mid];
        let panel = DMatrix::from_column_slice(left, mid, src);
        let mapped = panel * u.transpose();
        out[r * left * j..(r + 1) * left * j].copy_from_slice(mapped.as_slice());
    }
    DenseTensor::from_vec(Shape::new(dims)?, out)
}

/// Outer product `a (x) b`: the result has the modes of `a` followed by the
/// modes of `b`, with entries `a[i] * b[j]`.
pub fn outer_product(a: &DenseTensor, b: &DenseTensor) -> DenseTensor {
    let shape = a.shape().concat(b.shape());
    let mut data = Vec::with_capacity(a.len() * b.len());
    for &bv in b.data() {
        for &av in a.data() {
            data.push(av * bv);
        }
    }
    DenseTensor::from_vec(shape, data).expect("outer product size checked by shape")
}

/// Transpose with respect to `split`: exchanges the leading and trailing mode
/// groups without conjugation.
pub fn transpose(t: &DenseTensor, split: ModeSplit) -> Result<DenseTensor> {
    let m = matricize(t, split)?;
    let (lead, trail) = t.split_shapes(split)?;
    dematricize(&m.transpose(), &trail.concat(&lead), split.flip())
}

/// Hermitian transpose with respect to `split`: exchanges the mode groups and
/// conjugates every entry.
pub fn hermitian_transpose(t: &DenseTensor, split: ModeSplit) -> Result<DenseTensor> {
    let m = matricize(t, split)?;
    let (lead, trail) = t.split_shapes(split)?;
    dematricize(&m.adjoint(), &trail.concat(&lead), split.flip())
}

/// Identity tensor over `dims`: the order-`2N` tensor whose matricization
/// under `(N|N)` is the identity matrix, i.e. the unit of the Einstein
/// product `*_N` on `dims`-shaped tensors.
pub fn identity_tensor(dims: &[usize]) -> Result<DenseTensor> {
    if dims.is_empty() {
        return Err(Error::InvalidArgument(
            "identity tensor needs at least one mode".into(),
        ));
    }
    let mut full = dims.to_vec();
    full.extend_from_slice(dims);
    let shape = Shape::new(full)?;
    let side: usize = dims.iter().product();
    dematricize(
        &DMatrix::identity(side, side),
        &shape,
        ModeSplit::square(dims.len()),
    )
}

/// Inverse under the Einstein product: returns the tensor whose matricization
/// is the inverse of `t`'s matricization under `split`.
///
/// # Errors
///
/// Returns [`Error::NotSquare`] for a non-square split and [`Error::Singular`]
/// if the matricization is not invertible.
pub fn inverse(t: &DenseTensor, split: ModeSplit) -> Result<DenseTensor> {
    t.shape().require_square(split)?;
    let m = matricize(t, split)?;
    let inv = m.try_inverse().ok_or(Error::Singular)?;
    dematricize(&inv, t.shape(), split)
}

/// True when the matricization of `t` under `split` is diagonal: every entry
/// with distinct row and column index has modulus at most `tol`.
pub fn is_pseudo_diagonal(t: &DenseTensor, split: ModeSplit, tol: f64) -> Result<bool> {
    let m = matricize(t, split)?;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if i != j && m[(i, j)].norm() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when `t` equals its Hermitian transpose under `split` within `tol`
/// (largest entry deviation). Requires a square split.
pub fn is_hermitian(t: &DenseTensor, split: ModeSplit, tol: f64) -> Result<bool> {
    t.shape().require_square(split)?;
    Ok(hermitian_deviation(t, split)? <= tol)
}

/// Largest modulus of `t - t^H` under `split`.
pub fn hermitian_deviation(t: &DenseTensor, split: ModeSplit) -> Result<f64> {
    t.shape().require_square(split)?;
    let m = matricize(t, split)?;
    let mut dev: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..=j {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    Ok(dev)
}

/// True when `t^H *_N t` is the identity within `tol` (largest entry
/// deviation). Requires a square split.
pub fn is_unitary(t: &DenseTensor, split: ModeSplit, tol: f64) -> Result<bool> {
    t.shape().require_square(split)?;
    let m = matricize(t, split)?;
    let gram = m.adjoint() * &m;
    let side = gram.nrows();
    let mut dev: f64 = 0.0;
    for j in 0..side {
        for i in 0..side {
            let target = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            dev = dev.max((gram[(i, j)] - target).norm());
        }
    }
    Ok(dev <= tol)
}

fn validate_mode_list(order: usize, modes: &[usize]) -> Result<()> {
    let mut seen = vec![false; order];
    for &m in modes {
        if m >= order || seen[m] {
            return Err(Error::InvalidModes {
                order,
                detail: format!("mode list {modes:?} has out-of-range or repeated entries"),
            });
        }
        seen[m] = true;
    }
    Ok(())
}

/// Permutation placing `front` first (in the given order) and the remaining
/// modes after in ascending order.
fn front_permutation(order: usize, front: &[usize]) -> Vec<usize> {
    let mut perm = front.to_vec();
    for m in 0..order {
        if !front.contains(&m) {
            perm.push(m);
        }
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tensor_from(shape: &[usize], f: impl FnMut(&[usize]) -> Complex64) -> DenseTensor {
        DenseTensor::from_fn(Shape::new(shape).unwrap(), f)
    }

    // ------------------------------------------------------------------
    // matricization
    // ------------------------------------------------------------------

    #[test]
    fn matricize_is_column_major_reinterpretation() {
        let t = tensor_from(&[2, 3, 2], |idx| {
            c((idx[0] + 10 * idx[1] + 100 * idx[2]) as f64, 0.0)
        });
        let m = matricize(&t, ModeSplit::new(2, 1).unwrap()).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (6, 2));
        for i0 in 0..2 {
            for i1 in 0..3 {
                for i2 in 0..2 {
                    assert_eq!(m[(i0 + 2 * i1, i2)], t.get(&[i0, i1, i2]));
                }
            }
        }
    }

    #[test]
    fn dematricize_inverts_matricize() {
        let t = tensor_from(&[2, 2, 3], |idx| {
            c(idx[0] as f64, (idx[1] * 3 + idx[2]) as f64)
        });
        for split in [ModeSplit::new(1, 2).unwrap(), ModeSplit::new(2, 1).unwrap()] {
            let m = matricize(&t, split).unwrap();
            let back = dematricize(&m, t.shape(), split).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn dematricize_rejects_wrong_sizes() {
        let m = DMatrix::from_element(2, 2, c(1.0, 0.0));
        let shape = Shape::new([2, 3]).unwrap();
        assert!(dematricize(&m, &shape, ModeSplit::new(1, 1).unwrap()).is_err());
    }

    // ------------------------------------------------------------------
    // products
    // ------------------------------------------------------------------

    #[test]
    fn einstein_product_matches_brute_force() {
        // (2x3x2) *_1 (2x2): contract the last mode of a with the first of b.
        let a = tensor_from(&[2, 3, 2], |idx| {
            c((idx[0] + idx[1]) as f64, idx[2] as f64)
        });
        let b = tensor_from(&[2, 2], |idx| c(idx[0] as f64, -(idx[1] as f64)));
        let z = einstein_product(&a, &b, 1).unwrap();
        assert_eq!(z.dims(), &[2, 3, 2]);
        for i in 0..2 {
            for j in 0..3 {
                for l in 0..2 {
                    let mut expect = c(0.0, 0.0);
                    for k in 0..2 {
                        expect += a.get(&[i, j, k]) * b.get(&[k, l]);
                    }
                    assert!((z.get(&[i, j, l]) - expect).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn einstein_product_full_contraction_is_scalar() {
        let a = tensor_from(&[2, 2], |idx| c((idx[0] + 2 * idx[1]) as f64, 0.0));
        let z = einstein_product(&a, &a, 2).unwrap();
        // sum of squares of 0,1,2,3
        assert_eq!(z.order(), 0);
        assert_eq!(z.as_scalar().unwrap(), c(14.0, 0.0));
    }

    #[test]
    fn einstein_product_checks_dimensions() {
        let a = DenseTensor::zeros(Shape::new([2, 3]).unwrap());
        let b = DenseTensor::zeros(Shape::new([2, 2]).unwrap());
        assert!(matches!(
            einstein_product(&a, &b, 1),
            Err(Error::DimMismatch { .. })
        ));
        assert!(einstein_product(&a, &b, 0).is_err());
        assert!(einstein_product(&a, &b, 3).is_err());
    }

    #[test]
    fn contracted_product_vector_self_is_squared_norm() {
        let v = DenseTensor::from_vec(
            Shape::new([3]).unwrap(),
            vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
        )
        .unwrap();
        let z = contracted_product(&v, &v, &[0], &[0]).unwrap();
        assert_eq!(z.as_scalar().unwrap(), c(14.0, 0.0));
    }

    #[test]
    fn contracted_product_matches_brute_force_on_middle_modes() {
        // Contract mode 1 of a (2x3x2) with mode 0 of b (3x2).
        let a = tensor_from(&[2, 3, 2], |idx| {
            c(idx[0] as f64 + 2.0 * idx[2] as f64, idx[1] as f64)
        });
        let b = tensor_from(&[3, 2], |idx| c(1.0 + idx[0] as f64, idx[1] as f64));
        let z = contracted_product(&a, &b, &[1], &[0]).unwrap();
        assert_eq!(z.dims(), &[2, 2, 2]);
        for i in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let mut expect = c(0.0, 0.0);
                    for j in 0..3 {
                        expect += a.get(&[i, j, k]) * b.get(&[j, l]);
                    }
                    assert!((z.get(&[i, k, l]) - expect).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn contracted_product_agrees_with_einstein_product() {
        let a = tensor_from(&[2, 3, 4], |idx| {
            c((idx[0] * idx[1]) as f64, idx[2] as f64)
        });
        let b = tensor_from(&[3, 4, 2], |idx| {
            c(idx[0] as f64 - idx[2] as f64, idx[1] as f64)
        });
        let via_einstein = einstein_product(&a, &b, 2).unwrap();
        let via_lists = contracted_product(&a, &b, &[1, 2], &[0, 1]).unwrap();
        assert_eq!(via_einstein.dims(), via_lists.dims());
        let diff: f64 = via_einstein
            .sub(&via_lists)
            .unwrap()
            .frobenius_norm();
        assert!(diff < 1e-12, "diff = {diff}");
    }

    #[test]
    fn mode_n_product_matches_brute_force() {
        let t = tensor_from(&[2, 3, 2], |idx| {
            c(idx[0] as f64, (idx[1] + idx[2]) as f64)
        });
        let u = DMatrix::from_fn(4, 3, |r, c_| c((r + c_) as f64, 1.0));
        let z = mode_n_product(&t, &u, 1).unwrap();
        assert_eq!(z.dims(), &[2, 4, 2]);
        for i in 0..2 {
            for j in 0..4 {
                for k in 0..2 {
                    let mut expect = c(0.0, 0.0);
                    for s in 0..3 {
                        expect += u[(j, s)] * t.get(&[i, s, k]);
                    }
                    assert!((z.get(&[i, j, k]) - expect).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn outer_product_entries_and_shape() {
        let a = DenseTensor::from_vec(
            Shape::new([2]).unwrap(),
            vec![c(1.0, 1.0), c(2.0, 0.0)],
        )
        .unwrap();
        let b = DenseTensor::from_vec(
            Shape::new([3]).unwrap(),
            vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)],
        )
        .unwrap();
        let z = outer_product(&a, &b);
        assert_eq!(z.dims(), &[2, 3]);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(z.get(&[i, j]), a.get(&[i]) * b.get(&[j]));
            }
        }
    }

    #[test]
    fn outer_product_with_scalar_keeps_shape() {
        let a = tensor_from(&[2, 2], |idx| c(idx[0] as f64, idx[1] as f64));
        let s = DenseTensor::scalar(c(2.0, 0.0));
        let z = outer_product(&a, &s);
        assert_eq!(z.dims(), &[2, 2]);
        assert_eq!(z.get(&[1, 0]), a.get(&[1, 0]) * c(2.0, 0.0));
    }

    // ------------------------------------------------------------------
    // structure
    // ------------------------------------------------------------------

    #[test]
    fn hermitian_transpose_conjugates_and_swaps() {
        let t = tensor_from(&[2, 3], |idx| c(idx[0] as f64, idx[1] as f64 + 1.0));
        let h = hermitian_transpose(&t, ModeSplit::new(1, 1).unwrap()).unwrap();
        assert_eq!(h.dims(), &[3, 2]);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(h.get(&[j, i]), t.get(&[i, j]).conj());
            }
        }
    }

    #[test]
    fn double_hermitian_transpose_is_identity() {
        let t = tensor_from(&[2, 2, 3], |idx| {
            c(idx[0] as f64 - idx[2] as f64, idx[1] as f64)
        });
        let split = ModeSplit::new(2, 1).unwrap();
        let back = hermitian_transpose(
            &hermitian_transpose(&t, split).unwrap(),
            split.flip(),
        )
        .unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn identity_tensor_is_einstein_unit() {
        let id = identity_tensor(&[2, 3]).unwrap();
        assert_eq!(id.dims(), &[2, 3, 2, 3]);
        let t = tensor_from(&[2, 3, 4], |idx| {
            c(idx[0] as f64 + idx[1] as f64, idx[2] as f64)
        });
        let z = einstein_product(&id, &t, 2).unwrap();
        assert!(z.sub(&t).unwrap().frobenius_norm() < 1e-12);
        // Identity entries: delta on paired indices.
        assert_eq!(id.get(&[1, 2, 1, 2]), c(1.0, 0.0));
        assert_eq!(id.get(&[1, 2, 0, 2]), c(0.0, 0.0));
    }

    #[test]
    fn inverse_recovers_identity() {
        // A well-conditioned 2x2x2x2 tensor: diagonal plus a small coupling.
        let id = identity_tensor(&[2, 2]).unwrap();
        let bump = tensor_from(&[2, 2, 2, 2], |idx| {
            c(0.1 * ((idx[0] + idx[3]) as f64), 0.05 * (idx[1] as f64))
        });
        let t = id.add(&bump).unwrap();
        let split = ModeSplit::square(2);
        let inv = inverse(&t, split).unwrap();
        let prod = einstein_product(&t, &inv, 2).unwrap();
        assert!(prod.sub(&id).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn inverse_rejects_singular_and_rectangular() {
        let zero = DenseTensor::zeros(Shape::new([2, 2]).unwrap());
        assert!(matches!(
            inverse(&zero, ModeSplit::square(1)),
            Err(Error::Singular)
        ));
        let rect = DenseTensor::zeros(Shape::new([2, 3]).unwrap());
        assert!(matches!(
            inverse(&rect, ModeSplit::new(1, 1).unwrap()),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn predicates_on_identity_and_perturbations() {
        let id = identity_tensor(&[2, 2]).unwrap();
        let split = ModeSplit::square(2);
        assert!(is_pseudo_diagonal(&id, split, DEFAULT_STRUCT_TOL).unwrap());
        assert!(is_hermitian(&id, split, DEFAULT_STRUCT_TOL).unwrap());
        assert!(is_unitary(&id, split, DEFAULT_STRUCT_TOL).unwrap());

        let mut off = id.clone();
        off.set(&[0, 0, 1, 1], c(1e-6, 0.0));
        assert!(!is_pseudo_diagonal(&off, split, DEFAULT_STRUCT_TOL).unwrap());
        assert!(is_pseudo_diagonal(&off, split, 1e-5).unwrap());

        let mut skew = id;
        skew.set(&[0, 0, 1, 1], c(0.0, 1e-6));
        skew.set(&[1, 1, 0, 0], c(0.0, 1e-6)); // equal, not conjugate: breaks Hermitian
        assert!(!is_hermitian(&skew, split, DEFAULT_STRUCT_TOL).unwrap());
    }

    #[test]
    fn predicates_require_square_split() {
        let rect = DenseTensor::zeros(Shape::new([2, 3]).unwrap());
        let split = ModeSplit::new(1, 1).unwrap();
        assert!(is_hermitian(&rect, split, 1e-10).is_err());
        assert!(is_unitary(&rect, split, 1e-10).is_err());
        // Pseudo-diagonality is defined for rectangular matricizations.
        assert!(is_pseudo_diagonal(&rect, split, 1e-10).is_ok());
    }

    #[test]
    fn transpose_without_conjugation() {
        let t = tensor_from(&[2, 2], |idx| c(idx[0] as f64, 1.0 + idx[1] as f64));
        let tt = transpose(&t, ModeSplit::new(1, 1).unwrap()).unwrap();
        assert_eq!(tt.get(&[0, 1]), t.get(&[1, 0]));
        assert_eq!(tt.get(&[0, 1]).im, t.get(&[1, 0]).im);
    }
}
