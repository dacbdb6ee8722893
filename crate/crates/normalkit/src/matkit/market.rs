//! Matrix Market coordinate I/O.
//!
//! Writes `coordinate real general` with 1-based indices and
//! shortest-roundtrip scientific floats, so a write/read cycle
//! reproduces the matrix bit for bit.  Reading accepts `general` and
//! `symmetric` headers; symmetric files carry one triangle and the
//! reader mirrors the off-diagonal entries.

use std::io::{BufRead, Write};

use super::{CsrMatrix, MatError};

pub fn write_matrix_market<W: Write>(m: &CsrMatrix, out: &mut W) -> Result<(), MatError> {
    writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(out, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    for (i, j, v) in m.entries() {
        writeln!(out, "{} {} {:e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

pub fn read_matrix_market<R: BufRead>(input: R) -> Result<CsrMatrix, MatError> {
    let mut lines = input.lines().enumerate();
    let (line_no, header) = match lines.next() {
        Some((n, l)) => (n + 1, l?),
        None => return Err(parse_err(1, "empty input")),
    };
    let symmetric = parse_header(line_no, &header)?;

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut last_line = line_no;
    for (idx, line) in lines {
        let line_no = idx + 1;
        last_line = line_no;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        match size {
            None => {
                let f = fields(text);
                if f.len() != 3 {
                    return Err(parse_err(line_no, "size line must be `rows cols nnz`"));
                }
                let rows = parse_usize(line_no, f[0], "row count")?;
                let cols = parse_usize(line_no, f[1], "column count")?;
                let nnz = parse_usize(line_no, f[2], "entry count")?;
                size = Some((rows, cols, nnz));
                triplets.reserve(if symmetric { 2 * nnz } else { nnz });
            }
            Some((rows, cols, nnz)) => {
                if triplets_stored(&triplets, symmetric) >= nnz {
                    return Err(parse_err(line_no, "more entries than the size line declared"));
                }
                let f = fields(text);
                if f.len() != 3 {
                    return Err(parse_err(line_no, "entry line must be `row col value`"));
                }
                let i = parse_usize(line_no, f[0], "row index")?;
                let j = parse_usize(line_no, f[1], "column index")?;
                let v: f64 = f[2].parse().map_err(|_| {
                    parse_err(line_no, &format!("bad numeric value `{}`", f[2]))
                })?;
                if i < 1 || i > rows {
                    return Err(parse_err(
                        line_no,
                        &format!("row index {i} outside 1..={rows}"),
                    ));
                }
                if j < 1 || j > cols {
                    return Err(parse_err(
                        line_no,
                        &format!("column index {j} outside 1..={cols}"),
                    ));
                }
                triplets.push((i - 1, j - 1, v));
                if symmetric && i != j {
                    triplets.push((j - 1, i - 1, v));
                }
            }
        }
    }
    let (rows, cols, nnz) = size.ok_or_else(|| parse_err(last_line, "missing size line"))?;
    let stored = triplets_stored(&triplets, symmetric);
    if stored != nnz {
        return Err(parse_err(
            last_line,
            &format!("size line declared {nnz} entries but the file holds {stored}"),
        ));
    }
    if symmetric && rows != cols {
        return Err(parse_err(1, "symmetric matrix must be square"));
    }
    CsrMatrix::from_triplets(rows, cols, triplets)
}

/// Stored entry count as the size line counts it.  Each off-diagonal
/// entry of a symmetric file lands as a mirrored pair with exactly one
/// member in the upper triangle, so counting `i <= j` recovers the
/// number of file entries regardless of which triangle the file stored.
fn triplets_stored(triplets: &[(usize, usize, f64)], symmetric: bool) -> usize {
    if !symmetric {
        return triplets.len();
    }
    triplets.iter().filter(|(i, j, _)| i <= j).count()
}

fn parse_header(line_no: usize, header: &str) -> Result<bool, MatError> {
    let lower = header.to_ascii_lowercase();
    let f = fields(&lower);
    if f.len() != 5 || f[0] != "%%matrixmarket" {
        return Err(parse_err(line_no, "expected `%%MatrixMarket matrix coordinate real <symmetry>`"));
    }
    if f[1] != "matrix" || f[2] != "coordinate" {
        return Err(parse_err(line_no, "only coordinate-format matrices are supported"));
    }
    if f[3] != "real" {
        return Err(parse_err(
            line_no,
            &format!("only real-valued matrices are supported, not `{}`", f[3]),
        ));
    }
    match f[4] {
        "general" => Ok(false),
        "symmetric" => Ok(true),
        other => Err(parse_err(
            line_no,
            &format!("unsupported symmetry `{other}` (general or symmetric)"),
        )),
    }
}

fn fields(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

fn parse_usize(line_no: usize, s: &str, what: &str) -> Result<usize, MatError> {
    s.parse()
        .map_err(|_| parse_err(line_no, &format!("bad {what} `{s}`")))
}

fn parse_err(line: usize, message: &str) -> MatError {
    MatError::Parse { line, message: message.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::test_support::TestRng;

    fn random_sparse(rng: &mut TestRng, n: usize, per_row: usize) -> CsrMatrix {
        let mut triplets = Vec::new();
        for i in 0..n {
            triplets.push((i, i, 4.0 + rng.uniform()));
            for _ in 0..per_row {
                let j = rng.index(n);
                if j != i && !triplets.iter().any(|&(a, b, _)| (a, b) == (i, j)) {
                    triplets.push((i, j, rng.uniform()));
                }
            }
        }
        CsrMatrix::from_triplets(n, n, triplets).unwrap()
    }

    #[test]
    fn roundtrip_is_bit_exact() {
        let mut rng = TestRng::new(501);
        let m = random_sparse(&mut rng, 40, 3);
        let mut buf = Vec::new();
        write_matrix_market(&m, &mut buf).unwrap();
        let back = read_matrix_market(buf.as_slice()).unwrap();
        assert_eq!(m.rows(), back.rows());
        assert_eq!(m.nnz(), back.nnz());
        for ((i1, j1, v1), (i2, j2, v2)) in m.entries().zip(back.entries()) {
            assert_eq!((i1, j1), (i2, j2));
            assert_eq!(v1.to_bits(), v2.to_bits(), "value changed in roundtrip");
        }
    }

    #[test]
    fn roundtrip_preserves_awkward_values() {
        let vals = [0.1, 1.0 / 3.0, 1e-300, -2.5e17, f64::MIN_POSITIVE];
        let triplets: Vec<_> = vals.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        let m = CsrMatrix::from_triplets(5, 5, triplets).unwrap();
        let mut buf = Vec::new();
        write_matrix_market(&m, &mut buf).unwrap();
        let back = read_matrix_market(buf.as_slice()).unwrap();
        for (i, &v) in vals.iter().enumerate() {
            assert_eq!(back.get(i, i).to_bits(), v.to_bits());
        }
    }

    #[test]
    fn indices_are_one_based() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 3 2\n1 1 5.0\n2 3 -1.0\n";
        let m = read_matrix_market(text.as_bytes()).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        assert_eq!(m.get(0, 0), 5.0);
        assert_eq!(m.get(1, 2), -1.0);
    }

    #[test]
    fn symmetric_read_mirrors_lower_triangle() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n\
                    % second-difference matrix\n\
                    3 3 5\n1 1 2.0\n2 1 -1.0\n2 2 2.0\n3 2 -1.0\n3 3 2.0\n";
        let m = read_matrix_market(text.as_bytes()).unwrap();
        assert_eq!(m.nnz(), 7);
        assert_eq!(m.get(0, 1), -1.0);
        assert_eq!(m.get(1, 0), -1.0);
        assert_eq!(m.get(1, 2), -1.0);
        assert_eq!(m.get(2, 2), 2.0);
        assert!(m.is_symmetric(0.0));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "%%MatrixMarket matrix coordinate real general\n\
                    % a comment\n\n2 2 1\n% another\n\n1 2 3.5\n\n";
        let m = read_matrix_market(text.as_bytes()).unwrap();
        assert_eq!(m.get(0, 1), 3.5);
    }

    #[test]
    fn bad_inputs_report_line_numbers() {
        let cases: Vec<(&str, usize)> = vec![
            ("%%MatrixMarket matrix array real general\n1 1 1\n1 1 1.0\n", 1),
            ("%%MatrixMarket matrix coordinate complex general\n1 1 1\n", 1),
            ("%%MatrixMarket matrix coordinate real general\n2 2\n", 2),
            ("%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1.0\n", 3),
            ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 3 1.0\n", 3),
            ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 abc\n", 3),
            ("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n", 3),
            ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n2 2 1.0\n", 4),
        ];
        for (text, want_line) in cases {
            match read_matrix_market(text.as_bytes()) {
                Err(MatError::Parse { line, .. }) => {
                    assert_eq!(line, want_line, "input: {text:?}")
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn duplicate_entries_are_rejected() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 1 2.0\n";
        assert!(read_matrix_market(text.as_bytes()).is_err());
    }
}
