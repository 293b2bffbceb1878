//! Dense complex tensors and their statistics.

pub mod algebra;
pub mod error;
pub mod gaussian;
pub mod io;
pub mod process;
pub mod rng;
pub mod spectral;
pub mod spiked;
pub mod shape;
pub mod tensor;

pub use error::{Error, Result};
pub use shape::{ModeSplit, Shape};
pub use tensor::DenseTensor;
