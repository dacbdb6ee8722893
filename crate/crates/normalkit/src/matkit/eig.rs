//! Eigenvalues of symmetric matrices.
//!
//! The matrix is reduced to tridiagonal form with Householder
//! reflections, then each eigenvalue is located by bisection on the
//! Sturm pivot count.  Bisection is slower than QL iteration for
//! well-behaved spectra but it cannot stall, and the solver analysis
//! code calls this on Gram matrices whose eigenvalues cluster at
//! machine-precision spacing.

use super::{DenseMatrix, MatError};

const SYMMETRY_REL_TOL: f64 = 1e-8;

/// All eigenvalues of a symmetric matrix, ascending.
pub fn sym_eig(a: &DenseMatrix) -> Result<Vec<f64>, MatError> {
    if !a.is_square() {
        return Err(MatError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = a.norm_max().max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (a.get(i, j), a.get(j, i));
            if (x - y).abs() > SYMMETRY_REL_TOL * scale {
                return Err(MatError::NotSymmetric { i, j, a: x, b: y });
            }
        }
    }
    let (d, e) = tridiagonalize(a);
    Ok(tridiagonal_eigenvalues(&d, &e))
}

/// Householder reduction to tridiagonal form, eigenvalues only.
/// Returns the diagonal and the subdiagonal (length n-1).
fn tridiagonalize(a: &DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    // Work on the symmetrized copy so tiny input skew cannot leak in.
    let mut m = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = 0.5 * (a.get(i, j) + a.get(j, i));
        }
    }
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n.saturating_sub(1)];
    let mut v = vec![0.0f64; n];
    let mut p = vec![0.0f64; n];
    for k in 0..n.saturating_sub(2) {
        let mut norm2 = 0.0;
        for i in k + 1..n {
            let x = m[i * n + k];
            v[i] = x;
            norm2 += x * x;
        }
        let norm = norm2.sqrt();
        d[k] = m[k * n + k];
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let alpha = if v[k + 1] >= 0.0 { -norm } else { norm };
        e[k] = alpha;
        v[k + 1] -= alpha;
        let vtv = norm2 - 2.0 * alpha * m[(k + 1) * n + k] + alpha * alpha;
        if vtv <= 0.0 {
            continue;
        }
        let beta = 2.0 / vtv;
        // Symmetric rank-two update of the trailing block:
        // A <- A - v wT - w vT with w = beta(Av - (beta/2)(vTAv) v).
        for i in k + 1..n {
            let row = &m[i * n..i * n + n];
            let mut s = 0.0;
            for j in k + 1..n {
                s += row[j] * v[j];
            }
            p[i] = beta * s;
        }
        let mut vtp = 0.0;
        for i in k + 1..n {
            vtp += v[i] * p[i];
        }
        let gamma = 0.5 * beta * vtp;
        for i in k + 1..n {
            p[i] -= gamma * v[i];
        }
        for i in k + 1..n {
            let (vi, pi) = (v[i], p[i]);
            let row = &mut m[i * n..i * n + n];
            for j in k + 1..n {
                row[j] -= vi * p[j] + pi * v[j];
            }
        }
    }
    if n >= 2 {
        d[n - 2] = m[(n - 2) * n + (n - 2)];
        e[n - 2] = m[(n - 1) * n + (n - 2)];
    }
    d[n - 1] = m[(n - 1) * n + (n - 1)];
    (d, e)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`,
/// by counting negative pivots of the shifted LDLT recurrence.
fn count_below(d: &[f64], e2: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0usize;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        if q.abs() < pivmin {
            q = -pivmin;
        }
        q = d[i] - x - e2[i - 1] / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn tridiagonal_eigenvalues(d: &[f64], e: &[f64]) -> Vec<f64> {
    let n = d.len();
    let e2: Vec<f64> = e.iter().map(|v| v * v).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - left - right);
        hi = hi.max(d[i] + left + right);
    }
    let span = (hi - lo).max(lo.abs()).max(hi.abs()).max(f64::MIN_POSITIVE);
    let pivmin = (f64::MIN_POSITIVE / f64::EPSILON)
        .max(e2.iter().fold(0.0f64, |m, v| m.max(*v)) * f64::MIN_POSITIVE);
    // Pad the Gershgorin interval so strict-inequality counting is safe
    // at the extreme eigenvalues.
    lo -= 2.0 * f64::EPSILON * span + pivmin;
    hi += 2.0 * f64::EPSILON * span + pivmin;
    let mut out = Vec::with_capacity(n);
    let mut floor = lo;
    for k in 0..n {
        let mut a = floor;
        let mut b = hi;
        while b - a > 4.0 * f64::EPSILON * (a.abs().max(b.abs())) + 2.0 * pivmin {
            let mid = 0.5 * (a + b);
            if count_below(d, &e2, mid, pivmin) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        let lambda = 0.5 * (a + b);
        out.push(lambda);
        // Later eigenvalues cannot sit below this one's bracket.
        floor = a;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::test_support::{
        assert_close, inertia_below_oracle, jacobi_eig_oracle, TestRng,
    };

    fn random_symmetric(rng: &mut TestRng, n: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = rng.uniform();
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }

    #[test]
    fn diagonal_matrix_returns_sorted_diagonal() {
        let a = DenseMatrix::from_rows(&[
            &[3.0, 0.0, 0.0],
            &[0.0, -1.0, 0.0],
            &[0.0, 0.0, 2.0],
        ]);
        let vals = sym_eig(&a).unwrap();
        assert_eq!(vals.len(), 3);
        assert_close(vals[0], -1.0, 1e-13);
        assert_close(vals[1], 2.0, 1e-13);
        assert_close(vals[2], 3.0, 1e-13);
    }

    #[test]
    fn matches_jacobi_oracle_on_random_matrices() {
        let mut rng = TestRng::new(401);
        for n in [2, 3, 7, 25, 60] {
            let a = random_symmetric(&mut rng, n);
            let rows: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
            let (oracle, _) = jacobi_eig_oracle(&rows);
            let vals = sym_eig(&a).unwrap();
            let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for (got, want) in vals.iter().zip(&oracle) {
                assert!(
                    (got - want).abs() <= 1e-11 * scale,
                    "n = {n}: {got} vs oracle {want}"
                );
            }
        }
    }

    #[test]
    fn eigenvalue_counts_match_inertia_oracle() {
        let mut rng = TestRng::new(402);
        let n = 30;
        let a = random_symmetric(&mut rng, n);
        let rows: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
        let vals = sym_eig(&a).unwrap();
        let mut checked = 0;
        for probe in 0..200 {
            let x = -4.0 + 8.0 * (probe as f64) / 199.0;
            if let Some(count) = inertia_below_oracle(&rows, x) {
                let expect = vals.iter().filter(|v| **v < x).count();
                assert_eq!(count, expect, "shift {x}");
                checked += 1;
            }
        }
        assert!(checked > 150, "too few usable probes: {checked}");
    }

    #[test]
    fn trace_and_sum_agree() {
        let mut rng = TestRng::new(403);
        let n = 40;
        let a = random_symmetric(&mut rng, n);
        let vals = sym_eig(&a).unwrap();
        let trace: f64 = (0..n).map(|i| a.get(i, i)).sum();
        let sum: f64 = vals.iter().sum();
        assert_close(sum, trace, 1e-10);
    }

    #[test]
    fn known_laplacian_spectrum() {
        // Second-difference matrix: eigenvalues 2 - 2 cos(k pi / (n+1)).
        let n = 50;
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            a.set(i, i, 2.0);
            if i + 1 < n {
                a.set(i, i + 1, -1.0);
                a.set(i + 1, i, -1.0);
            }
        }
        let vals = sym_eig(&a).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert_close(*v, exact, 1e-12);
        }
    }

    #[test]
    fn repeated_eigenvalues_are_all_reported() {
        let mut a = DenseMatrix::identity(6);
        a.set(0, 0, 5.0);
        let vals = sym_eig(&a).unwrap();
        for v in &vals[..5] {
            assert_close(*v, 1.0, 1e-13);
        }
        assert_close(vals[5], 5.0, 1e-13);
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[0.5, 1.0]]);
        assert!(matches!(sym_eig(&a), Err(MatError::NotSymmetric { .. })));
    }
}
