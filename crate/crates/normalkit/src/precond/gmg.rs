//! Geometric multigrid on the structured square grid.
//!
//! Works on interior nodes of an m×m-cell unit square, the node layout
//! the finite element assembly produces.  Prolongation is the
//! seven-point interpolation consistent with linear elements on the
//! criss-cross triangulation (coincident node, edge midpoints along the
//! axes and the mesh diagonal); restriction is its transpose and coarse
//! matrices come from the Galerkin triple product, so for a nested
//! element hierarchy the coarse matrix equals the coarse assembly.
//! Smoothing is SOR, forward sweeps before coarsening and backward
//! sweeps after, which keeps the V-cycle symmetric when the counts
//! match.

use crate::matkit::{CholeskyFactor, CsrMatrix, FactorSolve, MatError};

#[derive(Debug, Clone)]
pub struct GmgOptions {
    /// Level cap; 0 descends while the cell count stays even and above 4.
    pub levels: usize,
    /// SOR relaxation weight.
    pub omega: f64,
    /// Forward sweeps before the coarse correction.
    pub pre_sweeps: usize,
    /// Backward sweeps after it.  Keep equal to `pre_sweeps`: unequal
    /// counts break the symmetry CG relies on.
    pub post_sweeps: usize,
    /// V-cycles per preconditioner application.
    pub cycles: usize,
}

impl Default for GmgOptions {
    fn default() -> Self {
        GmgOptions { levels: 0, omega: 1.0, pre_sweeps: 2, post_sweeps: 2, cycles: 1 }
    }
}

/// Matrices, transfer operators, and the coarsest-level factorization.
pub struct GmgHierarchy {
    matrices: Vec<CsrMatrix>,
    prolongations: Vec<CsrMatrix>,
    coarse_factor: CholeskyFactor,
    options: GmgOptions,
}

impl GmgHierarchy {
    pub fn build(fine: &CsrMatrix, cells: usize, options: GmgOptions) -> Result<Self, MatError> {
        if cells < 2 {
            return Err(MatError::Invalid(format!("{cells} cells cannot carry interior nodes")));
        }
        let n = (cells - 1) * (cells - 1);
        if fine.rows() != n || fine.cols() != n {
            return Err(MatError::Invalid(format!(
                "matrix is {}x{} but a {cells}-cell grid has {n} interior nodes",
                fine.rows(),
                fine.cols()
            )));
        }
        if options.omega <= 0.0 || options.omega >= 2.0 {
            return Err(MatError::Invalid(format!(
                "SOR weight {} outside (0, 2)",
                options.omega
            )));
        }
        let mut matrices = vec![fine.clone()];
        let mut prolongations = Vec::new();
        let mut m = cells;
        loop {
            let enough_levels = options.levels != 0 && matrices.len() >= options.levels;
            if enough_levels || m % 2 != 0 || m / 2 < 4 {
                break;
            }
            let p = prolongation(m);
            let a = matrices.last().expect("at least the fine level");
            let ap = a.matmul(&p)?;
            let coarse = p.transpose().matmul(&ap)?;
            matrices.push(coarse);
            prolongations.push(p);
            m /= 2;
        }
        let coarse_factor = CholeskyFactor::from_csr(matrices.last().expect("nonempty"))?;
        Ok(Self { matrices, prolongations, coarse_factor, options })
    }

    pub fn levels(&self) -> usize {
        self.matrices.len()
    }

    pub fn fine_dimension(&self) -> usize {
        self.matrices[0].rows()
    }

    /// Apply the preconditioner: `cycles` V-cycles accumulated on `r`.
    pub fn apply(&self, r: &[f64]) -> Vec<f64> {
        let mut x = self.vcycle(0, r);
        for _ in 1..self.options.cycles {
            let ax = self.matrices[0].matvec(&x);
            let rest: Vec<f64> = r.iter().zip(&ax).map(|(ri, ai)| ri - ai).collect();
            let dx = self.vcycle(0, &rest);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
        }
        x
    }

    fn vcycle(&self, level: usize, b: &[f64]) -> Vec<f64> {
        if level + 1 == self.matrices.len() {
            return self.coarse_factor.solve_vec(b);
        }
        let a = &self.matrices[level];
        let p = &self.prolongations[level];
        let mut x = vec![0.0f64; b.len()];
        for _ in 0..self.options.pre_sweeps {
            sor_forward(a, b, &mut x, self.options.omega);
        }
        let ax = a.matvec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let rc = p.matvec_transpose(&r);
        let ec = self.vcycle(level + 1, &rc);
        let e = p.matvec(&ec);
        for (xi, ei) in x.iter_mut().zip(&e) {
            *xi += ei;
        }
        for _ in 0..self.options.post_sweeps {
            sor_backward(a, b, &mut x, self.options.omega);
        }
        x
    }
}

/// The V-cycle as an approximate solve, so a hierarchy can serve as the
/// inner preconditioner of a nested iteration.  Matched forward and
/// backward sweeps make the cycle self-adjoint, hence the transpose
/// solve is the same map.
impl FactorSolve for GmgHierarchy {
    fn nrows(&self) -> usize {
        self.fine_dimension()
    }

    fn solve(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        Ok(self.apply(b))
    }

    fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>, MatError> {
        Ok(self.apply(b))
    }
}

fn sor_update(a: &CsrMatrix, b: &[f64], x: &mut [f64], omega: f64, i: usize) {
    let (cols, vals) = a.row(i);
    let mut s = b[i];
    let mut d = 0.0;
    for (&j, &v) in cols.iter().zip(vals) {
        if j == i {
            d = v;
        } else {
            s -= v * x[j];
        }
    }
    x[i] += omega * (s / d - x[i]);
}

fn sor_forward(a: &CsrMatrix, b: &[f64], x: &mut [f64], omega: f64) {
    for i in 0..b.len() {
        sor_update(a, b, x, omega, i);
    }
}

fn sor_backward(a: &CsrMatrix, b: &[f64], x: &mut [f64], omega: f64) {
    for i in (0..b.len()).rev() {
        sor_update(a, b, x, omega, i);
    }
}

/// Interpolation from the (m/2)-cell grid to the m-cell grid.
///
/// Coincident nodes copy; nodes on horizontal, vertical, or mesh-diagonal
/// edge midpoints average the two coarse endpoints.  Coarse boundary
/// nodes carry the value zero and drop out.
fn prolongation(m: usize) -> CsrMatrix {
    let mc = m / 2;
    let nf = m - 1;
    let nc = mc - 1;
    let fine_index = |i: usize, j: usize| (j - 1) * nf + (i - 1);
    let mut triplets = Vec::with_capacity(3 * nf * nf);
    let push = |t: &mut Vec<(usize, usize, f64)>, row: usize, ci: usize, cj: usize, w: f64| {
        if (1..=nc).contains(&ci) && (1..=nc).contains(&cj) {
            t.push((row, (cj - 1) * nc + (ci - 1), w));
        }
    };
    for j in 1..=nf {
        for i in 1..=nf {
            let row = fine_index(i, j);
            match (i % 2, j % 2) {
                (0, 0) => push(&mut triplets, row, i / 2, j / 2, 1.0),
                (1, 0) => {
                    push(&mut triplets, row, (i - 1) / 2, j / 2, 0.5);
                    push(&mut triplets, row, (i + 1) / 2, j / 2, 0.5);
                }
                (0, 1) => {
                    push(&mut triplets, row, i / 2, (j - 1) / 2, 0.5);
                    push(&mut triplets, row, i / 2, (j + 1) / 2, 0.5);
                }
                _ => {
                    push(&mut triplets, row, (i - 1) / 2, (j - 1) / 2, 0.5);
                    push(&mut triplets, row, (i + 1) / 2, (j + 1) / 2, 0.5);
                }
            }
        }
    }
    CsrMatrix::from_triplets(nf * nf, nc * nc, triplets).expect("indices are in range")
}
