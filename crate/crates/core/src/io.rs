//! Tensor file format and CSV export.
//!
//! # File format
//!
//! A tensor file is line-oriented UTF-8 text:
//!
//! ```text
//! randtensor 1
//! order 3
//! dims 2 3 4
//! kind complex
//! data
//! 1.5 -0.25
//! ...
//! ```
//!
//! The header carries the order, the mode sizes, and whether entries are
//! real or complex. After the `data` line follow exactly as many lines as the
//! tensor has elements, in storage order (first index varies fastest). A
//! `complex` entry line holds the real and imaginary part separated by a
//! space; a `real` line holds a single number. Numbers are written with
//! Rust's shortest round-trip formatting, so a write/read cycle reproduces
//! the tensor bit for bit.
//!
//! # CSV export
//!
//! [`write_matricized_csv`] flattens a tensor through a mode split and emits
//! one record per matrix entry with columns `row,col,re,im` (zero-based
//! indices), suitable for inspection in any spreadsheet or plotting tool.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::algebra::matricize;
use crate::error::{Error, Result};
use crate::shape::{ModeSplit, Shape};
use crate::tensor::DenseTensor;

const MAGIC: &str = "randtensor";
const VERSION: u32 = 1;

/// Writes `t` in the documented text format.
pub fn write_tensor<W: Write>(t: &DenseTensor, mut w: W) -> Result<()> {
    let real = t.data().iter().all(|z| z.im == 0.0);
    writeln!(w, "{MAGIC} {VERSION}")?;
    writeln!(w, "order {}", t.order())?;
    write!(w, "dims")?;
    for d in t.dims() {
        write!(w, " {d}")?;
    }
    writeln!(w)?;
    writeln!(w, "kind {}", if real { "real" } else { "complex" })?;
    writeln!(w, "data")?;
    for z in t.data() {
        if real {
            writeln!(w, "{}", z.re)?;
        } else {
            writeln!(w, "{} {}", z.re, z.im)?;
        }
    }
    Ok(())
}

/// Writes `t` to a file, creating or truncating it.
pub fn write_tensor_file<P: AsRef<Path>>(t: &DenseTensor, path: P) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    write_tensor(t, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Reads a tensor in the documented text format.
///
/// # Errors
///
/// Returns [`Error::Parse`] with the offending line number on any deviation
/// from the format, including trailing garbage after the data block.
pub fn read_tensor<R: BufRead>(r: R) -> Result<DenseTensor> {
    let mut lines = r.lines().enumerate();

    let mut next_line = |expect: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((n, Ok(line))) => Ok((n + 1, line)),
            Some((n, Err(e))) => Err(Error::Parse {
                line: n + 1,
                message: e.to_string(),
            }),
            None => Err(Error::Parse {
                line: 0,
                message: format!("unexpected end of file, expected {expect}"),
            }),
        }
    };

    let (n, header) = next_line("header")?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(MAGIC) {
        return Err(Error::Parse {
            line: n,
            message: format!("missing `{MAGIC}` magic"),
        });
    }
    let version: u32 = parse_field(parts.next(), n, "format version")?;
    if version != VERSION {
        return Err(Error::Parse {
            line: n,
            message: format!("unsupported format version {version}"),
        });
    }

    let (n, line) = next_line("order")?;
    let order: usize = parse_keyed(&line, "order", n)?
        .first()
        .copied()
        .map(|v| v as usize)
        .ok_or(Error::Parse {
            line: n,
            message: "order line needs a value".into(),
        })?;

    let (n, line) = next_line("dims")?;
    let dims: Vec<usize> = parse_keyed(&line, "dims", n)?
        .iter()
        .map(|&v| v as usize)
        .collect();
    if dims.len() != order {
        return Err(Error::Parse {
            line: n,
            message: format!("expected {order} dims, found {}", dims.len()),
        });
    }

    let (n, line) = next_line("kind")?;
    let kind = line
        .strip_prefix("kind ")
        .map(str::trim)
        .ok_or(Error::Parse {
            line: n,
            message: "expected `kind real|complex`".into(),
        })?
        .to_string();
    let complex = match kind.as_str() {
        "complex" => true,
        "real" => false,
        other => {
            return Err(Error::Parse {
                line: n,
                message: format!("unknown kind `{other}`"),
            })
        }
    };

    let (n, line) = next_line("data")?;
    if line.trim() != "data" {
        return Err(Error::Parse {
            line: n,
            message: "expected `data`".into(),
        });
    }

    let shape = Shape::new(dims).map_err(|e| Error::Parse {
        line: n,
        message: e.to_string(),
    })?;
    let mut data = Vec::with_capacity(shape.len());
    for _ in 0..shape.len() {
        let (n, line) = next_line("a data line")?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let expect = if complex { 2 } else { 1 };
        if fields.len() != expect {
            return Err(Error::Parse {
                line: n,
                message: format!("expected {expect} number(s), found {}", fields.len()),
            });
        }
        let re: f64 = fields[0].parse().map_err(|_| Error::Parse {
            line: n,
            message: format!("cannot parse `{}` as a number", fields[0]),
        })?;
        let im: f64 = if complex {
            fields[1].parse().map_err(|_| Error::Parse {
                line: n,
                message: format!("cannot parse `{}` as a number", fields[1]),
            })?
        } else {
            0.0
        };
        data.push(Complex64::new(re, im));
    }

    if let Some((n, line)) = lines.next() {
        let line = line.unwrap_or_default();
        if !line.trim().is_empty() {
            return Err(Error::Parse {
                line: n + 1,
                message: "trailing content after data block".into(),
            });
        }
    }
    DenseTensor::from_vec(shape, data)
}

/// Reads a tensor file written by [`write_tensor_file`].
pub fn read_tensor_file<P: AsRef<Path>>(path: P) -> Result<DenseTensor> {
    read_tensor(BufReader::new(File::open(path)?))
}

/// Writes the matricization of `t` under `split` as CSV with a
/// `row,col,re,im` header and zero-based indices in column-major order.
pub fn write_matricized_csv<W: Write>(t: &DenseTensor, split: ModeSplit, mut w: W) -> Result<()> {
    let m = matricize(t, split)?;
    writeln!(w, "row,col,re,im")?;
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let z = m[(row, col)];
            writeln!(w, "{row},{col},{},{}", z.re, z.im)?;
        }
    }
    Ok(())
}

/// Writes the matricized CSV view to a file.
pub fn write_matricized_csv_file<P: AsRef<Path>>(
    t: &DenseTensor,
    split: ModeSplit,
    path: P,
) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    write_matricized_csv(t, split, &mut w)?;
    w.flush()?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize, what: &str) -> Result<T> {
    field
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("cannot parse {what}"),
        })
}

fn parse_keyed(line: &str, key: &str, n: usize) -> Result<Vec<u64>> {
    let rest = line.strip_prefix(key).ok_or_else(|| Error::Parse {
        line: n,
        message: format!("expected `{key} ...`"),
    })?;
    rest.split_whitespace()
        .map(|f| {
            f.parse().map_err(|_| Error::Parse {
                line: n,
                message: format!("cannot parse `{f}` in {key} line"),
            })
        })
        .collect()
}
