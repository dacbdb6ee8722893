//! Banded LU with partial pivoting, for banded systems that are close to
//! symmetric but not SPD.  Column-aligned band storage with `kl` rows of
//! headroom absorbs the fill pivoting creates.

use super::{CsrMatrix, FactorSolve, MatError};

#[derive(Debug, Clone)]
pub struct BandedLuFactor {
    n: usize,
    kl: usize,
    ku: usize,
    /// Column j holds rows j-(ku+kl)..=j+kl at slot i - j + ku + kl.
    band: Vec<f64>,
    piv: Vec<usize>,
}

impl BandedLuFactor {
    pub fn from_csr(a: &CsrMatrix) -> Result<Self, MatError> {
        if a.rows() != a.cols() {
            return Err(MatError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let (mut kl, mut ku) = (0usize, 0usize);
        for (i, j, _) in a.entries() {
            if i > j {
                kl = kl.max(i - j);
            } else {
                ku = ku.max(j - i);
            }
        }
        let height = ku + 2 * kl + 1;
        let mut band = vec![0.0f64; n * height];
        let off = ku + kl;
        for (i, j, v) in a.entries() {
            band[j * height + (i + off - j)] = v;
        }
        let scale = a.norm_max().max(f64::MIN_POSITIVE);
        let mut piv = vec![0usize; n];

        let slot = |i: usize, j: usize| j * height + (i + off - j);

        for k in 0..n {
            let imax = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = band[slot(k, k)].abs();
            for i in k + 1..=imax {
                let v = band[slot(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= 1e-14 * scale {
                return Err(MatError::PivotBreakdown { index: k, pivot: best });
            }
            piv[k] = p;
            let jmax = (k + ku + kl).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    // Rows p and k both live in column j's slice once fill
                    // from earlier pivots is accounted for.
                    band.swap(slot(k, j), slot(p, j));
                }
            }
            let pivot = band[slot(k, k)];
            for i in k + 1..=imax {
                let m = band[slot(i, k)] / pivot;
                band[slot(i, k)] = m;
                if m != 0.0 {
                    for j in k + 1..=jmax {
                        let u = band[slot(k, j)];
                        band[slot(i, j)] -= m * u;
                    }
                }
            }
        }
        Ok(Self { n, kl, ku, band, piv })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    /// Solve `A x = b`.
    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "solve dimension mismatch");
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let height = ku + 2 * kl + 1;
        let off = ku + kl;
        let at = |i: usize, j: usize| self.band[j * height + (i + off - j)];
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            if xk != 0.0 {
                for i in k + 1..=(k + kl).min(n - 1) {
                    x[i] -= at(i, k) * xk;
                }
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + ku + kl).min(n - 1) {
                s -= at(i, j) * x[j];
            }
            x[i] = s / at(i, i);
        }
        x
    }

    /// Solve `Aᵀ x = b`.
    ///
    /// The factorization interleaves swaps and eliminations, so the
    /// transposed solve replays them in reverse: substitute through
    /// `Uᵀ`, then peel off each elimination step's transpose followed
    /// by its row swap.
    pub fn solve_transpose_vec(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "solve dimension mismatch");
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let height = ku + 2 * kl + 1;
        let off = ku + kl;
        let at = |i: usize, j: usize| self.band[j * height + (i + off - j)];
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for j in i.saturating_sub(ku + kl)..i {
                s -= at(j, i) * x[j];
            }
            x[i] = s / at(i, i);
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for i in k + 1..=(k + kl).min(n - 1) {
                s -= at(i, k) * x[i];
            }
            x[k] = s;
            x.swap(k, self.piv[k]);
        }
        x
    }
}

impl FactorSolve for BandedLuFactor {
    fn nrows(&self) -> usize {
        self.n
    }

    fn solve(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        Ok(self.solve_vec(b))
    }

    fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        Ok(self.solve_transpose_vec(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::test_support::{assert_close, gauss_solve_oracle, TestRng};
    use crate::matkit::{thomas_solve, Tridiagonal};

    #[test]
    fn matches_thomas_on_tridiagonal() {
        let mut rng = TestRng::new(101);
        let n = 60;
        let t = Tridiagonal::from_bands(
            (0..n).map(|_| rng.uniform()).collect(),
            (0..n).map(|_| 4.0 + rng.uniform()).collect(),
            (0..n).map(|_| rng.uniform()).collect(),
        )
        .unwrap();
        let b: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let lu = BandedLuFactor::from_csr(&t.to_csr()).unwrap();
        let x1 = lu.solve_vec(&b);
        let x2 = thomas_solve(&t, &b).unwrap();
        for (a, c) in x1.iter().zip(&x2) {
            assert_close(*a, *c, 1e-13);
        }
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        // Thomas fails on the zero (0,0) pivot; partial pivoting does not.
        let a = CsrMatrix::from_triplets(
            3,
            3,
            vec![
                (0, 1, 1.0),
                (1, 0, 2.0),
                (1, 1, 1.0),
                (1, 2, 1.0),
                (2, 1, 1.0),
                (2, 2, 3.0),
            ],
        )
        .unwrap();
        let b = vec![1.0, 2.0, 3.0];
        let dense = a.to_dense();
        let rows: Vec<Vec<f64>> = (0..3).map(|i| dense.row(i).to_vec()).collect();
        let expected = gauss_solve_oracle(&rows, &b);
        let lu = BandedLuFactor::from_csr(&a).unwrap();
        let x = lu.solve_vec(&b);
        for (xi, ei) in x.iter().zip(&expected) {
            assert_close(*xi, *ei, 1e-13);
        }
    }

    #[test]
    fn wider_bands_match_gauss_oracle() {
        let mut rng = TestRng::new(102);
        let n = 40usize;
        let (kl, ku) = (3usize, 2usize);
        let mut triplets = Vec::new();
        for i in 0..n {
            for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                let v = if i == j { 6.0 + rng.uniform() } else { rng.uniform() };
                triplets.push((i, j, v));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, triplets).unwrap();
        let b: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let dense = a.to_dense();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| dense.row(i).to_vec()).collect();
        let expected = gauss_solve_oracle(&rows, &b);
        let lu = BandedLuFactor::from_csr(&a).unwrap();
        assert_eq!(lu.bandwidths(), (kl, ku));
        let x = lu.solve_vec(&b);
        for (xi, ei) in x.iter().zip(&expected) {
            assert_close(*xi, *ei, 1e-12);
        }
    }

    #[test]
    fn transposed_solve_matches_gauss_oracle() {
        let mut rng = TestRng::new(103);
        let n = 35usize;
        let (kl, ku) = (2usize, 3usize);
        let mut triplets = Vec::new();
        for i in 0..n {
            for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                let v = if i == j { 5.0 + rng.uniform() } else { rng.uniform() };
                triplets.push((i, j, v));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, triplets).unwrap();
        let b: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let dense = a.to_dense().transpose();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| dense.row(i).to_vec()).collect();
        let expected = gauss_solve_oracle(&rows, &b);
        let lu = BandedLuFactor::from_csr(&a).unwrap();
        let x = lu.solve_transpose_vec(&b);
        for (xi, ei) in x.iter().zip(&expected) {
            assert_close(*xi, *ei, 1e-12);
        }
    }

    #[test]
    fn singular_matrix_reports_breakdown() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (1, 0, 1.0)]).unwrap();
        assert!(matches!(
            BandedLuFactor::from_csr(&a),
            Err(MatError::PivotBreakdown { .. })
        ));
    }
}
