//! Dense complex tensors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::shape::{for_each_index, ModeSplit, Shape};

/// Dense tensor of `Complex64` entries stored flat with the first index
/// varying fastest (see [`Shape`] for the layout).
///
/// Real-valued tensors are represented with zero imaginary parts; operations
/// that require real data check for this explicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    shape: Shape,
    data: Vec<Complex64>,
}

impl DenseTensor {
    /// Tensor of all zeros.
    pub fn zeros(shape: Shape) -> Self {
        let len = shape.len();
        Self {
            shape,
            data: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// Wraps a flat buffer laid out with the first index fastest.
    ///
    /// # Errors
    ///
    /// Returns [`Error::DataLength`] if the buffer does not match the shape.
    pub fn from_vec(shape: Shape, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::DataLength {
                expected: shape.len(),
                found: data.len(),
            });
        }
        Ok(Self { shape, data })
    }

    /// Builds a tensor from a real buffer, zero imaginary parts.
    pub fn from_real_vec(shape: Shape, data: Vec<f64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::DataLength {
                expected: shape.len(),
                found: data.len(),
            });
        }
        Ok(Self {
            shape,
            data: data.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        })
    }

    /// Fills a tensor by evaluating `f` at every multi-index.
    pub fn from_fn(shape: Shape, mut f: impl FnMut(&[usize]) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(shape.len());
        for_each_index(shape.dims(), |idx| data.push(f(idx)));
        Self { shape, data }
    }

    /// Order-zero tensor holding a single value.
    pub fn scalar(value: Complex64) -> Self {
        Self {
            shape: Shape::scalar(),
            data: vec![value],
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn dims(&self) -> &[usize] {
        self.shape.dims()
    }

    /// Total number of entries.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false // every dimension is >= 1, so a tensor always has entries
    }

    /// Flat data slice, first index fastest.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    /// Entry at a multi-index. Panics on an out-of-range index.
    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.data[self.shape.linear_index(idx)]
    }

    /// Overwrites the entry at a multi-index. Panics on an out-of-range index.
    pub fn set(&mut self, idx: &[usize], value: Complex64) {
        let flat = self.shape.linear_index(idx);
        self.data[flat] = value;
    }

    /// The single entry of an order-zero (or single-element) tensor.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidArgument`] if the tensor has more than one
    /// entry.
    pub fn as_scalar(&self) -> Result<Complex64> {
        if self.data.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "tensor with {} entries is not a scalar",
                self.data.len()
            )));
        }
        Ok(self.data[0])
    }

    /// Elementwise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Scales every entry by `factor`.
    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            shape: self.shape.clone(),
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Elementwise sum.
    ///
    /// # Errors
    ///
    /// Returns [`Error::DimMismatch`] if the shapes differ.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        Ok(Self {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Elementwise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        Ok(Self {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Adds `other` into `self` in place.
    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_same_shape(other, "add_assign")?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(())
    }

    /// Frobenius norm, the root of the summed squared moduli.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// True when every imaginary part is at most `tol` in modulus.
    pub fn is_real_within(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }

    /// Real parts of all entries, in flat order.
    pub fn real_data(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.re).collect()
    }

    /// Reorders modes so that output mode `d` is input mode `perm[d]`.
    ///
    /// `perm` must be a permutation of `0..order`. Entries satisfy
    /// `out[j_1, ..., j_N] = self[j_{perm^-1(1)}, ...]`, i.e.
    /// `out.get(idx) == self.get(gather(idx, perm))`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidModes`] if `perm` is not a permutation.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order();
        if perm.len() != n {
            return Err(Error::InvalidModes {
                order: n,
                detail: format!("permutation {perm:?} has length {}", perm.len()),
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidModes {
                    order: n,
                    detail: format!("{perm:?} is not a permutation"),
                });
            }
            seen[p] = true;
        }

        let src_strides = self.shape.strides();
        let out_dims: Vec<usize> = perm.iter().map(|&p| self.dims()[p]).collect();
        let out_shape = Shape::new(out_dims)?;
        let mut data = vec![Complex64::new(0.0, 0.0); self.data.len()];
        // Walk output positions in flat order with an odometer over the output
        // multi-index, tracking the source flat position incrementally.
        let stride_for_out: Vec<usize> = perm.iter().map(|&p| src_strides[p]).collect();
        let mut idx = vec![0usize; n];
        let mut src = 0usize;
        for slot in data.iter_mut() {
            *slot = self.data[src];
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                src += stride_for_out[k];
                if idx[k] < out_shape.dims()[k] {
                    break;
                }
                src -= stride_for_out[k] * idx[k];
                idx[k] = 0;
                k += 1;
            }
        }
        Ok(Self {
            shape: out_shape,
            data,
        })
    }

    /// Splits the shape into leading and trailing sub-shapes at `split`.
    pub fn split_shapes(&self, split: ModeSplit) -> Result<(Shape, Shape)> {
        self.shape.split_dims(split)?;
        let lead = Shape::new(&self.dims()[..split.row_modes])?;
        let trail = Shape::new(&self.dims()[split.row_modes..])?;
        Ok((lead, trail))
    }

    fn check_same_shape(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::DimMismatch {
                context,
                left: self.dims().to_vec(),
                right: other.dims().to_vec(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn from_vec_checks_length() {
        let s = Shape::new([2, 2]).unwrap();
        assert!(DenseTensor::from_vec(s.clone(), vec![c(1.0, 0.0); 3]).is_err());
        assert!(DenseTensor::from_vec(s, vec![c(1.0, 0.0); 4]).is_ok());
    }

    #[test]
    fn get_set_roundtrip() {
        let mut t = DenseTensor::zeros(Shape::new([2, 3]).unwrap());
        t.set(&[1, 2], c(4.0, -1.0));
        assert_eq!(t.get(&[1, 2]), c(4.0, -1.0));
        assert_eq!(t.data()[1 + 2 * 2], c(4.0, -1.0));
    }

    #[test]
    fn permute_transposes_a_matrix() {
        // 2x3 matrix, permuting modes [1, 0] must transpose it.
        let t = DenseTensor::from_fn(Shape::new([2, 3]).unwrap(), |idx| {
            c((idx[0] * 10 + idx[1]) as f64, 0.0)
        });
        let p = t.permute(&[1, 0]).unwrap();
        assert_eq!(p.dims(), &[3, 2]);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(p.get(&[j, i]), t.get(&[i, j]));
            }
        }
    }

    #[test]
    fn permute_general_order_three() {
        let t = DenseTensor::from_fn(Shape::new([2, 3, 4]).unwrap(), |idx| {
            c((idx[0] * 100 + idx[1] * 10 + idx[2]) as f64, 0.0)
        });
        let p = t.permute(&[2, 0, 1]).unwrap();
        assert_eq!(p.dims(), &[4, 2, 3]);
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..4 {
                    assert_eq!(p.get(&[k, i, j]), t.get(&[i, j, k]));
                }
            }
        }
    }

    #[test]
    fn permute_rejects_non_permutations() {
        let t = DenseTensor::zeros(Shape::new([2, 2]).unwrap());
        assert!(t.permute(&[0, 0]).is_err());
        assert!(t.permute(&[0]).is_err());
        assert!(t.permute(&[0, 2]).is_err());
    }

    #[test]
    fn frobenius_norm_matches_definition() {
        let t = DenseTensor::from_vec(
            Shape::new([2]).unwrap(),
            vec![c(3.0, 0.0), c(0.0, 4.0)],
        )
        .unwrap();
        assert!((t.frobenius_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn scalar_tensor_roundtrip() {
        let t = DenseTensor::scalar(c(2.5, -1.0));
        assert_eq!(t.order(), 0);
        assert_eq!(t.as_scalar().unwrap(), c(2.5, -1.0));
    }
}
