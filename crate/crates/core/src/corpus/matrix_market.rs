//! Matrix Market coordinate-format reader and writer.
//!
//! The reader accepts `real` or `integer` coordinate files with `general`,
//! `symmetric`, or `skew-symmetric` storage and expands the symmetric
//! variants to full general storage. The writer always emits general
//! coordinate real files with 17 significant digits, enough to round-trip
//! 64-bit values exactly.

use crate::sparse::SparseMatrix;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatrixMarketError {
    #[error("io error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
}

#[derive(Clone, Copy, PartialEq)]
enum Storage {
    General,
    Symmetric,
    SkewSymmetric,
}

fn io_err(path: &Path, source: std::io::Error) -> MatrixMarketError {
    MatrixMarketError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> MatrixMarketError {
    MatrixMarketError::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Reads a coordinate-format file into CSC storage. Symmetric and
/// skew-symmetric storage is expanded, indices are converted from 1-based,
/// and duplicate entries are summed.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrix, MatrixMarketError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let header = header.map_err(|e| io_err(path, e))?;
    let storage = parse_header(path, &header)?;

    // Size line: first non-comment, non-blank line after the header.
    let mut size_fields = None;
    let mut size_lineno = 0;
    for (idx, line) in lines.by_ref() {
        let line = line.map_err(|e| io_err(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        size_lineno = idx + 1;
        size_fields = Some(
            trimmed
                .split_whitespace()
                .map(str::to_owned)
                .collect::<Vec<_>>(),
        );
        break;
    }
    let size_fields =
        size_fields.ok_or_else(|| parse_err(path, size_lineno.max(1), "missing size line"))?;
    if size_fields.len() != 3 {
        return Err(parse_err(
            path,
            size_lineno,
            format!("size line needs 3 fields, got {}", size_fields.len()),
        ));
    }
    let parse_count = |s: &str, what: &str| -> Result<usize, MatrixMarketError> {
        s.parse::<usize>()
            .map_err(|_| parse_err(path, size_lineno, format!("bad {what} {s:?}")))
    };
    let nrows = parse_count(&size_fields[0], "row count")?;
    let ncols = parse_count(&size_fields[1], "column count")?;
    let declared = parse_count(&size_fields[2], "entry count")?;
    if storage != Storage::General && nrows != ncols {
        return Err(parse_err(
            path,
            size_lineno,
            format!("{nrows}x{ncols} file cannot use symmetric storage"),
        ));
    }

    let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(declared * 2);
    let mut seen = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        seen += 1;
        if seen > declared {
            return Err(parse_err(
                path,
                lineno,
                format!("more than the declared {declared} entries"),
            ));
        }
        let mut fields = trimmed.split_whitespace();
        let (r, c, v) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
            (Some(r), Some(c), Some(v), None) => (r, c, v),
            _ => {
                return Err(parse_err(
                    path,
                    lineno,
                    format!("expected 'row col value', got {trimmed:?}"),
                ))
            }
        };
        let row: usize = r
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("bad row index {r:?}")))?;
        let col: usize = c
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("bad column index {c:?}")))?;
        let val: f64 = v
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("bad value {v:?}")))?;
        if row == 0 || row > nrows || col == 0 || col > ncols {
            return Err(parse_err(
                path,
                lineno,
                format!("index ({row}, {col}) outside {nrows}x{ncols}"),
            ));
        }
        let (i, j) = (row - 1, col - 1);
        match storage {
            Storage::General => triplets.push((i, j, val)),
            Storage::Symmetric => {
                triplets.push((i, j, val));
                if i != j {
                    triplets.push((j, i, val));
                }
            }
            Storage::SkewSymmetric => {
                if i == j {
                    return Err(parse_err(
                        path,
                        lineno,
                        "diagonal entry in skew-symmetric storage",
                    ));
                }
                triplets.push((i, j, val));
                triplets.push((j, i, -val));
            }
        }
    }
    if seen != declared {
        return Err(parse_err(
            path,
            size_lineno,
            format!("declared {declared} entries but found {seen}"),
        ));
    }

    Ok(SparseMatrix::from_triplets(nrows, ncols, &triplets)
        .expect("entry indices were validated against the size line"))
}

fn parse_header(path: &Path, header: &str) -> Result<Storage, MatrixMarketError> {
    let fields: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if fields.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(parse_err(path, 1, "missing %%MatrixMarket header"));
    }
    if fields.len() != 5 {
        return Err(parse_err(
            path,
            1,
            format!("header needs 5 fields, got {}", fields.len()),
        ));
    }
    if fields[1] != "matrix" || fields[2] != "coordinate" {
        return Err(parse_err(
            path,
            1,
            format!("unsupported object/format {}/{}", fields[1], fields[2]),
        ));
    }
    if fields[3] != "real" && fields[3] != "integer" {
        return Err(parse_err(
            path,
            1,
            format!("unsupported field type {:?} (need real)", fields[3]),
        ));
    }
    match fields[4].as_str() {
        "general" => Ok(Storage::General),
        "symmetric" => Ok(Storage::Symmetric),
        "skew-symmetric" => Ok(Storage::SkewSymmetric),
        other => Err(parse_err(path, 1, format!("unsupported storage {other:?}"))),
    }
}

/// Writes general coordinate real format, 1-based, one entry per stored
/// value (explicit zeros included), with lossless 64-bit precision.
pub fn write_matrix_market(
    matrix: &SparseMatrix,
    path: impl AsRef<Path>,
) -> Result<(), MatrixMarketError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, s: String| -> Result<(), MatrixMarketError> {
        out.write_all(s.as_bytes()).map_err(|e| io_err(path, e))
    };
    write(
        &mut out,
        "%%MatrixMarket matrix coordinate real general\n".into(),
    )?;
    write(
        &mut out,
        format!("{} {} {}\n", matrix.nrows(), matrix.ncols(), matrix.nnz()),
    )?;
    for (i, j, v) in matrix.triplet_iter() {
        write(&mut out, format!("{} {} {:.16e}\n", i + 1, j + 1, v))?;
    }
    out.flush().map_err(|e| io_err(path, e))
}

/// Writes a dense vector as an n-by-1 coordinate file, zeros included, so
/// the length always round-trips.
pub fn write_vector(values: &[f64], path: impl AsRef<Path>) -> Result<(), MatrixMarketError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    let mut text = String::from("%%MatrixMarket matrix coordinate real general\n");
    text.push_str(&format!("{} 1 {}\n", values.len(), values.len()));
    for (i, v) in values.iter().enumerate() {
        text.push_str(&format!("{} 1 {:.16e}\n", i + 1, v));
    }
    out.write_all(text.as_bytes())
        .map_err(|e| io_err(path, e))?;
    out.flush().map_err(|e| io_err(path, e))
}

/// Reads an n-by-1 coordinate file back into a dense vector.
pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>, MatrixMarketError> {
    let path = path.as_ref();
    let matrix = read_matrix_market(path)?;
    if matrix.ncols() != 1 {
        return Err(parse_err(
            path,
            1,
            format!(
                "expected a single-column vector file, got {} columns",
                matrix.ncols()
            ),
        ));
    }
    Ok(matrix.col_vector(0).to_dense())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn single_entry_file_parses() {
        let f = write_temp("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 2.5\n");
        let m = read_matrix_market(f.path()).unwrap();
        assert_eq!((m.nrows(), m.ncols(), m.nnz()), (1, 1, 1));
        assert_eq!(m.get(0, 0), 2.5);
    }

    #[test]
    fn symmetric_storage_expands() {
        let f = write_temp(
            "%%MatrixMarket matrix coordinate real symmetric\n% a comment\n2 2 1\n2 1 3.0\n",
        );
        let m = read_matrix_market(f.path()).unwrap();
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn skew_storage_expands_with_sign_flip() {
        let f =
            write_temp("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 3.0\n");
        let m = read_matrix_market(f.path()).unwrap();
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.get(0, 1), -3.0);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let f = write_temp("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 5.0\n");
        let err = read_matrix_market(f.path()).unwrap_err();
        match err {
            MatrixMarketError::Parse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("(3, 1)"));
            }
            other => panic!("unexpected error {other:?}"),
        }

        let f = write_temp("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n");
        assert!(matches!(
            read_matrix_market(f.path()),
            Err(MatrixMarketError::Parse { line: 1, .. })
        ));

        let f = write_temp("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 5.0\n");
        assert!(matches!(
            read_matrix_market(f.path()),
            Err(MatrixMarketError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn empty_matrix_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.mtx");
        write_matrix_market(&SparseMatrix::zeros(3, 3), &path).unwrap();
        let back = read_matrix_market(&path).unwrap();
        assert_eq!((back.nrows(), back.ncols(), back.nnz()), (3, 3, 0));
    }

    #[test]
    fn identity_round_trips_with_two_entries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("i2.mtx");
        write_matrix_market(&SparseMatrix::identity(2), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 4);
        let back = read_matrix_market(&path).unwrap();
        assert_eq!(back.get(0, 0), 1.0);
        assert_eq!(back.get(1, 1), 1.0);
    }

    #[test]
    fn awkward_values_round_trip_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.mtx");
        let m = SparseMatrix::from_triplets(
            3,
            2,
            &[
                (0, 0, std::f64::consts::PI),
                (2, 0, -1.0 / 3.0),
                (1, 1, 1e-300),
                (2, 1, 6.02214076e23),
            ],
        )
        .unwrap();
        write_matrix_market(&m, &path).unwrap();
        let back = read_matrix_market(&path).unwrap();
        assert_eq!(m.nnz(), back.nnz());
        for ((i1, j1, v1), (i2, j2, v2)) in m.triplet_iter().zip(back.triplet_iter()) {
            assert_eq!((i1, j1), (i2, j2));
            assert_eq!(v1.to_bits(), v2.to_bits(), "value drifted in round trip");
        }
    }

    #[test]
    fn vectors_round_trip_including_zeros() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.mtx");
        let v = vec![1.5, 0.0, -2.25];
        write_vector(&v, &path).unwrap();
        assert_eq!(read_vector(&path).unwrap(), v);
    }
}
