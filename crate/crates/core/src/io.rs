//! Matrix Market interchange: dense array format (real/complex,
//! general/symmetric/hermitian) and sparse coordinate format
//! (symmetric/hermitian, lower entries). Values are written with 17
//! significant digits so a write/read round trip is within 1 ULP.

use std::io::{BufRead, Write};

use num_complex::Complex;

use crate::error::{DppError, Result};
use crate::kernel::Symmetry;
use crate::matrix::Matrix;
use crate::sparse::SparseKernel;

type C64 = Complex<f64>;

/// Any payload a Matrix Market file can carry for this toolkit.
#[derive(Clone, Debug)]
pub enum MmData {
    DenseReal(Matrix<f64>, Symmetry),
    DenseComplex(Matrix<C64>, Symmetry),
    SparseReal(SparseKernel<f64>),
    SparseComplex(SparseKernel<C64>),
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Dense real matrix in array format; `symmetric` stores only the lower
/// triangle.
pub fn write_dense_real(w: &mut impl Write, m: &Matrix<f64>, symmetric: bool) -> Result<()> {
    let sym = if symmetric { "symmetric" } else { "general" };
    writeln!(w, "%%MatrixMarket matrix array real {sym}")?;
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for j in 0..m.cols() {
        let start = if symmetric { j } else { 0 };
        for i in start..m.rows() {
            writeln!(w, "{}", fmt(m[(i, j)]))?;
        }
    }
    Ok(())
}

/// Dense complex matrix in array format; `hermitian` stores only the lower
/// triangle.
pub fn write_dense_complex(w: &mut impl Write, m: &Matrix<C64>, hermitian: bool) -> Result<()> {
    let sym = if hermitian { "hermitian" } else { "general" };
    writeln!(w, "%%MatrixMarket matrix array complex {sym}")?;
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for j in 0..m.cols() {
        let start = if hermitian { j } else { 0 };
        for i in start..m.rows() {
            writeln!(w, "{} {}", fmt(m[(i, j)].re), fmt(m[(i, j)].im))?;
        }
    }
    Ok(())
}

/// Sparse Hermitian kernel in coordinate format (lower entries, 1-based).
pub fn write_sparse_real(w: &mut impl Write, k: &SparseKernel<f64>) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(w, "{} {} {}", k.order(), k.order(), k.nnz_lower())?;
    for c in 0..k.order() {
        let (rows, vals) = k.col_range(c);
        for (&r, &v) in rows.iter().zip(vals) {
            writeln!(w, "{} {} {}", r + 1, c + 1, fmt(v))?;
        }
    }
    Ok(())
}

pub fn write_sparse_complex(w: &mut impl Write, k: &SparseKernel<C64>) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate complex hermitian")?;
    writeln!(w, "{} {} {}", k.order(), k.order(), k.nnz_lower())?;
    for c in 0..k.order() {
        let (rows, vals) = k.col_range(c);
        for (&r, &v) in rows.iter().zip(vals) {
            writeln!(w, "{} {} {} {}", r + 1, c + 1, fmt(v.re), fmt(v.im))?;
        }
    }
    Ok(())
}

struct Header {
    format: String,
    field: String,
    symmetry: String,
}

fn malformed(msg: impl Into<String>) -> DppError {
    DppError::MalformedSparse(msg.into())
}

fn parse_f64(tok: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| malformed(format!("bad numeric token '{tok}'")))
}

/// Reads any supported Matrix Market file.
pub fn read_matrix_market(r: impl BufRead) -> Result<MmData> {
    let mut lines = r.lines();
    let banner = lines
        .next()
        .ok_or_else(|| malformed("empty file"))??;
    let toks: Vec<&str> = banner.split_whitespace().collect();
    if toks.len() < 5 || !toks[0].eq_ignore_ascii_case("%%MatrixMarket") || toks[1] != "matrix" {
        return Err(malformed("missing %%MatrixMarket matrix banner"));
    }
    let header = Header {
        format: toks[2].to_ascii_lowercase(),
        field: toks[3].to_ascii_lowercase(),
        symmetry: toks[4].to_ascii_lowercase(),
    };
    if header.field == "pattern" || header.field == "integer" {
        return Err(malformed(format!("unsupported field '{}'", header.field)));
    }

    let mut data_lines = Vec::new();
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        data_lines.push(t.to_string());
    }
    if data_lines.is_empty() {
        return Err(malformed("missing size line"));
    }
    let size: Vec<&str> = data_lines[0].split_whitespace().collect();

    match header.format.as_str() {
        "array" => {
            if size.len() != 2 {
                return Err(malformed("array size line must be 'rows cols'"));
            }
            let rows: usize = size[0].parse().map_err(|_| malformed("bad row count"))?;
            let cols: usize = size[1].parse().map_err(|_| malformed("bad col count"))?;
            let lower_only = header.symmetry == "symmetric" || header.symmetry == "hermitian";
            if lower_only && rows != cols {
                return Err(malformed("symmetric array must be square"));
            }
            let symmetry = if lower_only {
                Symmetry::Hermitian
            } else {
                Symmetry::General
            };
            let expected = if lower_only {
                rows * (rows + 1) / 2
            } else {
                rows * cols
            };
            if data_lines.len() - 1 != expected {
                return Err(malformed(format!(
                    "expected {expected} array entries, found {}",
                    data_lines.len() - 1
                )));
            }
            let mut entries = data_lines[1..].iter();
            match header.field.as_str() {
                "real" => {
                    let mut m = Matrix::<f64>::zeros(rows, cols);
                    for j in 0..cols {
                        let start = if lower_only { j } else { 0 };
                        for i in start..rows {
                            let v = parse_f64(entries.next().unwrap())?;
                            m[(i, j)] = v;
                            if lower_only {
                                m[(j, i)] = v;
                            }
                        }
                    }
                    Ok(MmData::DenseReal(m, symmetry))
                }
                "complex" => {
                    let mut m = Matrix::<C64>::zeros(rows, cols);
                    for j in 0..cols {
                        let start = if lower_only { j } else { 0 };
                        for i in start..rows {
                            let line = entries.next().unwrap();
                            let t: Vec<&str> = line.split_whitespace().collect();
                            if t.len() != 2 {
                                return Err(malformed("complex entries need 're im'"));
                            }
                            let v = C64::new(parse_f64(t[0])?, parse_f64(t[1])?);
                            m[(i, j)] = v;
                            if lower_only {
                                m[(j, i)] = v.conj();
                            }
                        }
                    }
                    Ok(MmData::DenseComplex(m, symmetry))
                }
                f => Err(malformed(format!("unsupported array field '{f}'"))),
            }
        }
        "coordinate" => {
            if size.len() != 3 {
                return Err(malformed("coordinate size line must be 'rows cols nnz'"));
            }
            let rows: usize = size[0].parse().map_err(|_| malformed("bad row count"))?;
            let cols: usize = size[1].parse().map_err(|_| malformed("bad col count"))?;
            let nnz: usize = size[2].parse().map_err(|_| malformed("bad nnz count"))?;
            if rows != cols {
                return Err(malformed("sparse kernels must be square"));
            }
            if !(header.symmetry == "symmetric" || header.symmetry == "hermitian") {
                return Err(malformed(
                    "coordinate kernels must be symmetric or hermitian (lower entries)",
                ));
            }
            if data_lines.len() - 1 != nnz {
                return Err(malformed(format!(
                    "expected {nnz} entries, found {}",
                    data_lines.len() - 1
                )));
            }
            match header.field.as_str() {
                "real" => {
                    let mut trips = Vec::with_capacity(nnz);
                    for line in &data_lines[1..] {
                        let t: Vec<&str> = line.split_whitespace().collect();
                        if t.len() != 3 {
                            return Err(malformed("real coordinate entries need 'i j v'"));
                        }
                        let i: usize = t[0].parse().map_err(|_| malformed("bad index"))?;
                        let j: usize = t[1].parse().map_err(|_| malformed("bad index"))?;
                        if i == 0 || j == 0 {
                            return Err(malformed("indices are 1-based"));
                        }
                        trips.push((i - 1, j - 1, parse_f64(t[2])?));
                    }
                    Ok(MmData::SparseReal(SparseKernel::from_lower_triplets(
                        rows, &trips,
                    )?))
                }
                "complex" => {
                    let mut trips = Vec::with_capacity(nnz);
                    for line in &data_lines[1..] {
                        let t: Vec<&str> = line.split_whitespace().collect();
                        if t.len() != 4 {
                            return Err(malformed("complex coordinate entries need 'i j re im'"));
                        }
                        let i: usize = t[0].parse().map_err(|_| malformed("bad index"))?;
                        let j: usize = t[1].parse().map_err(|_| malformed("bad index"))?;
                        if i == 0 || j == 0 {
                            return Err(malformed("indices are 1-based"));
                        }
                        trips.push((
                            i - 1,
                            j - 1,
                            C64::new(parse_f64(t[2])?, parse_f64(t[3])?),
                        ));
                    }
                    Ok(MmData::SparseComplex(SparseKernel::from_lower_triplets(
                        rows, &trips,
                    )?))
                }
                f => Err(malformed(format!("unsupported coordinate field '{f}'"))),
            }
        }
        f => Err(malformed(format!("unsupported format '{f}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn dense_real_roundtrip_exact() {
        let mut rng = RngStream::new(3);
        let m = Matrix::from_fn(5, 4, |_, _| rng.next_gaussian());
        let mut buf = Vec::new();
        write_dense_real(&mut buf, &m, false).unwrap();
        match read_matrix_market(&buf[..]).unwrap() {
            MmData::DenseReal(r, sym) => {
                assert_eq!(sym, Symmetry::General);
                for i in 0..5 {
                    for j in 0..4 {
                        assert_eq!(m[(i, j)].to_bits(), r[(i, j)].to_bits());
                    }
                }
            }
            other => panic!("wrong payload {other:?}"),
        }
    }

    #[test]
    fn dense_hermitian_complex_roundtrip() {
        let mut rng = RngStream::new(4);
        let b = Matrix::from_fn(4, 4, |_, _| C64::new(rng.next_gaussian(), rng.next_gaussian()));
        let m = b.conj_transpose().matmul(&b);
        let mut buf = Vec::new();
        write_dense_complex(&mut buf, &m, true).unwrap();
        match read_matrix_market(&buf[..]).unwrap() {
            MmData::DenseComplex(r, sym) => {
                assert_eq!(sym, Symmetry::Hermitian);
                for i in 0..4 {
                    for j in 0..4 {
                        assert!((m[(i, j)] - r[(i, j)]).norm() < 1e-15 * m.max_abs());
                    }
                }
            }
            other => panic!("wrong payload {other:?}"),
        }
    }

    #[test]
    fn sparse_roundtrip() {
        let trips = vec![(0usize, 0usize, 0.5), (1, 1, 0.4), (1, 0, -0.09), (2, 2, 0.3)];
        let k = SparseKernel::from_lower_triplets(3, &trips).unwrap();
        let mut buf = Vec::new();
        write_sparse_real(&mut buf, &k).unwrap();
        match read_matrix_market(&buf[..]).unwrap() {
            MmData::SparseReal(r) => {
                let (a, b) = (k.to_dense(), r.to_dense());
                for i in 0..3 {
                    for j in 0..3 {
                        assert_eq!(a[(i, j)].to_bits(), b[(i, j)].to_bits());
                    }
                }
            }
            other => panic!("wrong payload {other:?}"),
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_matrix_market("hello\n1 1\n0.5\n".as_bytes()).is_err());
        assert!(read_matrix_market(
            "%%MatrixMarket matrix array pattern general\n2 2\n".as_bytes()
        )
        .is_err());
        assert!(read_matrix_market(
            "%%MatrixMarket matrix array real general\n2 2\n1.0\n".as_bytes()
        )
        .is_err());
    }
}
