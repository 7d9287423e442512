//! Matrix Market text I/O for [`DenseMatrix`].
//!
//! Reads `array` and `coordinate` files with `real`, `integer` or (coordinate
//! only) `pattern` fields and `general` or `symmetric` symmetry. Writes
//! `real general` in either format; values are printed in shortest
//! round-trip form, so a write/read cycle is bit-exact.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MmFormat {
    /// Dense column-major listing.
    #[default]
    Array,
    /// One `i j value` line per nonzero entry, 1-based indices.
    Coordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::MatrixMarket {
        line,
        message: message.into(),
    }
}

pub fn read_path(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    read(BufReader::new(File::open(path)?))
}

pub fn read<R: BufRead>(reader: R) -> Result<DenseMatrix> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, "empty input"))?;
    let header = header?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_error(1, format!("bad header `{header}`")));
    }
    let format = match tokens[2].as_str() {
        "array" => MmFormat::Array,
        "coordinate" => MmFormat::Coordinate,
        other => return Err(parse_error(1, format!("unknown format `{other}`"))),
    };
    let field = match tokens[3].as_str() {
        "real" | "integer" | "double" => Field::Real,
        "pattern" if format == MmFormat::Coordinate => Field::Pattern,
        other => return Err(parse_error(1, format!("unsupported field `{other}`"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(parse_error(1, format!("unsupported symmetry `{other}`"))),
    };

    let mut data = lines.filter_map(|(no, line)| match line {
        Ok(l) => {
            let t = l.trim();
            if t.is_empty() || t.starts_with('%') {
                None
            } else {
                Some(Ok((no, t.to_string())))
            }
        }
        Err(e) => Some(Err(Error::from(e))),
    });

    let (size_no, size_line) = data
        .next()
        .ok_or_else(|| parse_error(2, "missing size line"))??;
    let sizes = parse_usizes(&size_line, size_no)?;

    let matrix = match format {
        MmFormat::Array => {
            let [rows, cols] = sizes[..] else {
                return Err(parse_error(size_no, "array size line needs `rows cols`"));
            };
            check_symmetric_shape(symmetry, rows, cols, size_no)?;
            let mut m = DMatrix::zeros(rows, cols);
            // column-major; symmetric files list only the lower triangle
            let positions: Vec<(usize, usize)> = match symmetry {
                Symmetry::General => (0..cols)
                    .flat_map(|j| (0..rows).map(move |i| (i, j)))
                    .collect(),
                Symmetry::Symmetric => (0..cols)
                    .flat_map(|j| (j..rows).map(move |i| (i, j)))
                    .collect(),
            };
            let mut last_no = size_no;
            for &(i, j) in &positions {
                let (no, line) = data
                    .next()
                    .ok_or_else(|| parse_error(last_no + 1, "too few values"))??;
                last_no = no;
                let v = parse_value(line.trim(), no)?;
                m[(i, j)] = v;
                if symmetry == Symmetry::Symmetric {
                    m[(j, i)] = v;
                }
            }
            if let Some(extra) = data.next() {
                let (no, _) = extra?;
                return Err(parse_error(no, "more values than the declared size"));
            }
            m
        }
        MmFormat::Coordinate => {
            let [rows, cols, nnz] = sizes[..] else {
                return Err(parse_error(size_no, "coordinate size line needs `rows cols nnz`"));
            };
            check_symmetric_shape(symmetry, rows, cols, size_no)?;
            let mut m = DMatrix::zeros(rows, cols);
            let mut seen = 0usize;
            for entry in data.by_ref() {
                let (no, line) = entry?;
                let mut parts = line.split_whitespace();
                let i = parse_index(parts.next(), rows, no)?;
                let j = parse_index(parts.next(), cols, no)?;
                let v = match field {
                    Field::Pattern => 1.0,
                    Field::Real => parse_value(
                        parts.next().ok_or_else(|| parse_error(no, "missing value"))?,
                        no,
                    )?,
                };
                if parts.next().is_some() {
                    return Err(parse_error(no, "trailing tokens"));
                }
                m[(i, j)] += v;
                if symmetry == Symmetry::Symmetric && i != j {
                    m[(j, i)] += v;
                }
                seen += 1;
            }
            if seen != nnz {
                return Err(parse_error(size_no, format!("declared {nnz} entries, found {seen}")));
            }
            m
        }
    };
    DenseMatrix::new(matrix)
}

fn check_symmetric_shape(symmetry: Symmetry, rows: usize, cols: usize, no: usize) -> Result<()> {
    if symmetry == Symmetry::Symmetric && rows != cols {
        return Err(parse_error(no, "symmetric matrix must be square"));
    }
    Ok(())
}

fn parse_usizes(line: &str, no: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_error(no, format!("bad size `{t}`")))
        })
        .collect()
}

fn parse_index(token: Option<&str>, bound: usize, no: usize) -> Result<usize> {
    let t = token.ok_or_else(|| parse_error(no, "missing index"))?;
    let i: usize = t
        .parse()
        .map_err(|_| parse_error(no, format!("bad index `{t}`")))?;
    if i == 0 || i > bound {
        return Err(parse_error(no, format!("index {i} out of range 1..={bound}")));
    }
    Ok(i - 1)
}

fn parse_value(token: &str, no: usize) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| parse_error(no, format!("bad value `{token}`")))?;
    if !v.is_finite() {
        return Err(parse_error(no, "non-finite value"));
    }
    Ok(v)
}

pub fn write<W: Write>(mut w: W, matrix: &DenseMatrix, format: MmFormat) -> Result<()> {
    let (rows, cols) = matrix.shape();
    match format {
        MmFormat::Array => {
            writeln!(w, "%%MatrixMarket matrix array real general")?;
            writeln!(w, "{rows} {cols}")?;
            for j in 0..cols {
                for i in 0..rows {
                    writeln!(w, "{:?}", matrix[(i, j)])?;
                }
            }
        }
        MmFormat::Coordinate => {
            writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
            let nnz = matrix.iter().filter(|v| **v != 0.0).count();
            writeln!(w, "{rows} {cols} {nnz}")?;
            for j in 0..cols {
                for i in 0..rows {
                    let v = matrix[(i, j)];
                    if v != 0.0 {
                        writeln!(w, "{} {} {:?}", i + 1, j + 1, v)?;
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_path(path: impl AsRef<Path>, matrix: &DenseMatrix, format: MmFormat) -> Result<()> {
    write(BufWriter::new(File::create(path)?), matrix, format)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read_str(s: &str) -> Result<DenseMatrix> {
        read(s.as_bytes())
    }

    #[test]
    fn reads_array_column_major() {
        let m = read_str("%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n2\n3\n4\n")
            .unwrap();
        assert_eq!(m[(0, 0)], 1.0);
        assert_eq!(m[(1, 0)], 2.0);
        assert_eq!(m[(0, 1)], 3.0);
        assert_eq!(m[(1, 1)], 4.0);
    }

    #[test]
    fn reads_symmetric_coordinate() {
        let m = read_str(
            "%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n1 1 2.5\n3 1 -1\n",
        )
        .unwrap();
        assert_eq!(m[(0, 0)], 2.5);
        assert_eq!(m[(2, 0)], -1.0);
        assert_eq!(m[(0, 2)], -1.0);
        assert_eq!(m[(1, 1)], 0.0);
    }

    #[test]
    fn reads_symmetric_array_lower_triangle() {
        let m = read_str("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n").unwrap();
        assert_eq!(m[(1, 0)], 2.0);
        assert_eq!(m[(0, 1)], 2.0);
        assert_eq!(m[(1, 1)], 3.0);
    }

    #[test]
    fn reads_pattern() {
        let m = read_str("%%MatrixMarket matrix coordinate pattern general\n2 3 1\n2 3\n").unwrap();
        assert_eq!(m[(1, 2)], 1.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_str("").is_err());
        assert!(read_str("%%MatrixMarket matrix array complex general\n1 1\n1\n").is_err());
        assert!(read_str("%%MatrixMarket matrix array real general\n2 1\n1\n").is_err());
        assert!(read_str("%%MatrixMarket matrix array real general\n1 1\n1\n2\n").is_err());
        assert!(read_str("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n").is_err());
        assert!(read_str("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n").is_err());
        assert!(read_str("%%MatrixMarket matrix array real general\n1 1\nnan\n").is_err());
        let err = read_str("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 1\n")
            .unwrap_err();
        assert!(matches!(err, Error::MatrixMarket { line: 3, .. }));
    }

    #[test]
    fn write_then_read_is_bit_exact() {
        let m = DenseMatrix::from_fn(3, 4, |i, j| {
            if (i + j) % 3 == 0 {
                0.0
            } else {
                (i as f64 + 0.1).powf(j as f64 + 0.7) / 3.0
            }
        })
        .unwrap();
        for format in [MmFormat::Array, MmFormat::Coordinate] {
            let mut buf = Vec::new();
            write(&mut buf, &m, format).unwrap();
            let back = read(buf.as_slice()).unwrap();
            assert_eq!(back, m);
        }
    }
}
