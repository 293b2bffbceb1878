//! Tensor shapes and mode splits.
//!
//! A [`Shape`] is an ordered list of mode sizes. Elements are linearized with
//! the first index varying fastest, so for a shape `I_1 x ... x I_N` the entry
//! at multi-index `(i_1, ..., i_N)` (zero based) lives at flat position
//! `i_1 + I_1 (i_2 + I_2 (i_3 + ...))`. This is the same layout a column-major
//! matrix uses, which makes matricization a pure reinterpretation of the data
//! buffer.
//!
//! A [`ModeSplit`] partitions the modes of a tensor into a leading group
//! (matrix rows) and a trailing group (matrix columns).

use crate::error::{Error, Result};

/// Ordered list of mode sizes. Order zero is the scalar shape.
///
/// Every dimension must be at least 1 and the total element count must fit in
/// `usize`; both are checked at construction. Order-zero shapes arise when a
/// contraction consumes every mode of both operands, and hold exactly one
/// element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    dims: Vec<usize>,
    len: usize,
}

impl Shape {
    /// Builds a shape from mode sizes.
    ///
    /// # Errors
    ///
    /// Returns [`Error::ZeroDimension`] if any dimension is zero and
    /// [`Error::SizeOverflow`] if the element count overflows `usize`.
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::ZeroDimension { dims });
        }
        let mut len: usize = 1;
        for &d in &dims {
            len = match len.checked_mul(d) {
                Some(l) => l,
                None => return Err(Error::SizeOverflow { dims }),
            };
        }
        Ok(Self { dims, len })
    }

    /// The order-zero shape holding a single scalar entry.
    pub fn scalar() -> Self {
        Self {
            dims: Vec::new(),
            len: 1,
        }
    }

    /// Number of modes.
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    /// Mode sizes.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total number of elements (1 for the scalar shape).
    pub fn len(&self) -> usize {
        self.len
    }

    /// True when the shape is order zero.
    pub fn is_scalar(&self) -> bool {
        self.dims.is_empty()
    }

    /// Flat position of a multi-index, first index fastest.
    ///
    /// # Panics
    ///
    /// Panics if the index has the wrong length or any coordinate is out of
    /// range; indexing is a programming error, not a recoverable condition.
    pub fn linear_index(&self, idx: &[usize]) -> usize {
        assert_eq!(
            idx.len(),
            self.dims.len(),
            "index order {} does not match shape order {}",
            idx.len(),
            self.dims.len()
        );
        let mut flat = 0;
        for (k, (&i, &d)) in idx.iter().zip(&self.dims).enumerate().rev() {
            assert!(i < d, "index {i} out of range for mode {k} of size {d}");
            flat = flat * d + i;
        }
        flat
    }

    /// Multi-index of a flat position, inverse of [`Shape::linear_index`].
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        assert!(flat < self.len, "flat index {flat} out of range");
        let mut idx = Vec::with_capacity(self.dims.len());
        for &d in &self.dims {
            idx.push(flat % d);
            flat /= d;
        }
        idx
    }

    /// Stride of each mode in the flat layout.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = Vec::with_capacity(self.dims.len());
        let mut s = 1;
        for &d in &self.dims {
            strides.push(s);
            s *= d;
        }
        strides
    }

    /// Shape obtained by concatenating the modes of `self` and `other`.
    pub fn concat(&self, other: &Shape) -> Shape {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        // Both factors were checked, so the product cannot gain a zero; the
        // overflow check must still run.
        Shape::new(dims).expect("concatenated shape overflows usize")
    }

    /// Validates a split against this shape and returns the matrix dimensions
    /// `(rows, cols)` of the corresponding matricization.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidSplit`] if the split does not partition the
    /// order.
    pub fn split_dims(&self, split: ModeSplit) -> Result<(usize, usize)> {
        if split.row_modes + split.col_modes != self.order() {
            return Err(Error::InvalidSplit {
                row_modes: split.row_modes,
                col_modes: split.col_modes,
                order: self.order(),
            });
        }
        let rows = self.dims[..split.row_modes].iter().product();
        let cols = self.dims[split.row_modes..].iter().product();
        Ok((rows, cols))
    }

    /// Checks that the leading `split.row_modes` dimensions equal the trailing
    /// `split.col_modes` dimensions pairwise, as required by Hermitian and
    /// unitary structure and by tensor inversion.
    ///
    /// # Errors
    ///
    /// Returns [`Error::NotSquare`] when the two groups differ.
    pub fn require_square(&self, split: ModeSplit) -> Result<()> {
        self.split_dims(split)?;
        let rows = &self.dims[..split.row_modes];
        let cols = &self.dims[split.row_modes..];
        if split.row_modes != split.col_modes || rows != cols {
            return Err(Error::NotSquare {
                rows: rows.to_vec(),
                cols: cols.to_vec(),
            });
        }
        Ok(())
    }
}

/// Partition of tensor modes into `row_modes` leading modes (matrix rows) and
/// `col_modes` trailing modes (matrix columns).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeSplit {
    pub row_modes: usize,
    pub col_modes: usize,
}

impl ModeSplit {
    /// Builds a split with at least one mode on each side.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidArgument`] if either group is empty.
    pub fn new(row_modes: usize, col_modes: usize) -> Result<Self> {
        if row_modes == 0 || col_modes == 0 {
            return Err(Error::InvalidArgument(format!(
                "mode split ({row_modes}|{col_modes}) must keep at least one mode per side"
            )));
        }
        Ok(Self {
            row_modes,
            col_modes,
        })
    }

    /// The balanced split `(n|n)` used by Hermitian structure, EVD, and
    /// correlation tensors.
    pub fn square(n: usize) -> Self {
        Self {
            row_modes: n,
            col_modes: n,
        }
    }

    /// Total number of modes covered by the split.
    pub fn order(&self) -> usize {
        self.row_modes + self.col_modes
    }

    /// The split with row and column groups exchanged.
    pub fn flip(&self) -> Self {
        Self {
            row_modes: self.col_modes,
            col_modes: self.row_modes,
        }
    }
}

/// Iterates all multi-indices of `dims` in flat (first index fastest) order,
/// writing each into `idx` and invoking the callback.
pub(crate) fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; dims.len()];
    loop {
        f(&idx);
        // Odometer increment; returns to all zeros after the last index.
        let mut k = 0;
        loop {
            if k == dims.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_index_first_mode_fastest() {
        let s = Shape::new([2, 3, 4]).unwrap();
        assert_eq!(s.linear_index(&[0, 0, 0]), 0);
        assert_eq!(s.linear_index(&[1, 0, 0]), 1);
        assert_eq!(s.linear_index(&[0, 1, 0]), 2);
        assert_eq!(s.linear_index(&[0, 0, 1]), 6);
        assert_eq!(s.linear_index(&[1, 2, 3]), 1 + 2 * 2 + 6 * 3);
    }

    #[test]
    fn multi_index_roundtrip() {
        let s = Shape::new([3, 2, 5]).unwrap();
        for flat in 0..s.len() {
            assert_eq!(s.linear_index(&s.multi_index(flat)), flat);
        }
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            Shape::new([2, 0, 3]),
            Err(Error::ZeroDimension { .. })
        ));
    }

    #[test]
    fn overflow_rejected() {
        assert!(matches!(
            Shape::new([usize::MAX, 2]),
            Err(Error::SizeOverflow { .. })
        ));
    }

    #[test]
    fn scalar_shape_has_one_element() {
        let s = Shape::scalar();
        assert_eq!(s.order(), 0);
        assert_eq!(s.len(), 1);
        assert_eq!(s.linear_index(&[]), 0);
    }

    #[test]
    fn split_dims_and_square() {
        let s = Shape::new([2, 3, 2, 3]).unwrap();
        let (r, c) = s.split_dims(ModeSplit::square(2)).unwrap();
        assert_eq!((r, c), (6, 6));
        assert!(s.require_square(ModeSplit::square(2)).is_ok());
        assert!(s.require_square(ModeSplit::new(1, 3).unwrap()).is_err());
        assert!(s.split_dims(ModeSplit::new(1, 1).unwrap()).is_err());
    }

    #[test]
    fn index_iteration_matches_flat_order() {
        let s = Shape::new([2, 3]).unwrap();
        let mut seen = Vec::new();
        for_each_index(s.dims(), |idx| seen.push(s.linear_index(idx)));
        assert_eq!(seen, (0..6).collect::<Vec<_>>());
    }
}
