//! Element-by-element assembly of the advection-diffusion forms.

use super::{FemProblem2d, StructuredMesh};
use crate::matkit::{CsrMatrix, MatError};

/// Geometry of one triangle: signed area and the constant gradients of
/// its three barycentric basis functions.
struct Element {
    area: f64,
    grads: [[f64; 2]; 3],
    verts: [(f64, f64); 3],
}

impl Element {
    fn new(verts: [(f64, f64); 3]) -> Self {
        let [(x0, y0), (x1, y1), (x2, y2)] = verts;
        let twice_area = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
        debug_assert!(twice_area > 0.0, "triangle is degenerate or clockwise");
        let grads = [
            [(y1 - y2) / twice_area, (x2 - x1) / twice_area],
            [(y2 - y0) / twice_area, (x0 - x2) / twice_area],
            [(y0 - y1) / twice_area, (x1 - x0) / twice_area],
        ];
        Element { area: twice_area / 2.0, grads, verts }
    }

    fn wind_dot_grad(&self, beta: [f64; 2]) -> [f64; 3] {
        let g = &self.grads;
        [
            beta[0] * g[0][0] + beta[1] * g[0][1],
            beta[0] * g[1][0] + beta[1] * g[1][1],
            beta[0] * g[2][0] + beta[1] * g[2][1],
        ]
    }

    fn edge_midpoints(&self) -> [(f64, f64); 3] {
        let v = &self.verts;
        let mid = |a: (f64, f64), b: (f64, f64)| ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
        [mid(v[0], v[1]), mid(v[1], v[2]), mid(v[2], v[0])]
    }
}

/// Visit every triangle: each square cell is split along its lower-left
/// to upper-right diagonal into (LL, LR, UR) and (LL, UR, UL), both
/// counterclockwise.  The callback receives the element geometry and the
/// grid coordinates of its vertices.
fn for_each_triangle(mesh: &StructuredMesh, visit: &mut dyn FnMut(&Element, &[(usize, usize); 3])) {
    let m = mesh.cells();
    for cy in 0..m {
        for cx in 0..m {
            let corners = [
                (cx, cy),
                (cx + 1, cy),
                (cx + 1, cy + 1),
                (cx, cy + 1),
            ];
            for tri in [[0usize, 1, 2], [0, 2, 3]] {
                let coords = [corners[tri[0]], corners[tri[1]], corners[tri[2]]];
                let verts = [
                    mesh.node_position(coords[0].0, coords[0].1),
                    mesh.node_position(coords[1].0, coords[1].1),
                    mesh.node_position(coords[2].0, coords[2].1),
                ];
                visit(&Element::new(verts), &coords);
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum NodeSet {
    Interior,
    All,
}

fn node_number(mesh: &StructuredMesh, nodes: NodeSet, i: usize, j: usize) -> Option<usize> {
    match nodes {
        NodeSet::Interior => mesh.interior_index(i, j),
        NodeSet::All => Some(mesh.node_index(i, j)),
    }
}

fn assemble_matrix(
    mesh: &StructuredMesh,
    nodes: NodeSet,
    element_matrix: &dyn Fn(&Element) -> [[f64; 3]; 3],
) -> CsrMatrix {
    let n = match nodes {
        NodeSet::Interior => mesh.interior_count(),
        NodeSet::All => mesh.node_count(),
    };
    let mut triplets = Vec::with_capacity(18 * mesh.cells() * mesh.cells());
    for_each_triangle(mesh, &mut |element, coords| {
        let local = element_matrix(element);
        let numbers =
            coords.map(|(i, j)| node_number(mesh, nodes, i, j));
        for a in 0..3 {
            let Some(row) = numbers[a] else { continue };
            for b in 0..3 {
                let Some(col) = numbers[b] else { continue };
                triplets.push((row, col, local[a][b]));
            }
        }
    });
    CsrMatrix::from_triplets_summed(n, n, triplets).expect("indices are in range")
}

fn stiffness_element(e: &Element) -> [[f64; 3]; 3] {
    let mut local = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            local[a][b] =
                e.area * (e.grads[a][0] * e.grads[b][0] + e.grads[a][1] * e.grads[b][1]);
        }
    }
    local
}

fn mass_element(e: &Element) -> [[f64; 3]; 3] {
    let mut local = [[e.area / 12.0; 3]; 3];
    for a in 0..3 {
        local[a][a] *= 2.0;
    }
    local
}

fn advection_element(e: &Element, beta: [f64; 2]) -> [[f64; 3]; 3] {
    let bg = e.wind_dot_grad(beta);
    let mut local = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            local[a][b] = bg[b] * e.area / 3.0;
        }
    }
    local
}

fn anisotropic_element(e: &Element, beta: [f64; 2]) -> [[f64; 3]; 3] {
    let bg = e.wind_dot_grad(beta);
    let mut local = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            local[a][b] = e.area * bg[a] * bg[b];
        }
    }
    local
}

/// Stiffness matrix `K_ij = (∇φ_j, ∇φ_i)` on interior vertices.
pub fn assemble_stiffness(mesh: &StructuredMesh) -> CsrMatrix {
    assemble_matrix(mesh, NodeSet::Interior, &stiffness_element)
}

/// Stiffness over all vertices, boundary rows included.
pub fn assemble_stiffness_full(mesh: &StructuredMesh) -> CsrMatrix {
    assemble_matrix(mesh, NodeSet::All, &stiffness_element)
}

/// Mass matrix `M_ij = (φ_j, φ_i)` on interior vertices.
pub fn assemble_mass(mesh: &StructuredMesh) -> CsrMatrix {
    assemble_matrix(mesh, NodeSet::Interior, &mass_element)
}

/// Mass over all vertices.
pub fn assemble_mass_full(mesh: &StructuredMesh) -> CsrMatrix {
    assemble_matrix(mesh, NodeSet::All, &mass_element)
}

/// Advection matrix `C_ij = (β·∇φ_j, φ_i)`; skew-symmetric for a
/// constant (hence divergence-free) wind on interior vertices.
pub fn assemble_advection(mesh: &StructuredMesh, beta: [f64; 2]) -> CsrMatrix {
    assemble_matrix(mesh, NodeSet::Interior, &|e| advection_element(e, beta))
}

/// Anisotropic diffusion along the wind, `(β·∇φ_j, β·∇φ_i)`.
pub fn assemble_anisotropic(mesh: &StructuredMesh, beta: [f64; 2]) -> CsrMatrix {
    assemble_matrix(mesh, NodeSet::Interior, &|e| anisotropic_element(e, beta))
}

/// Reaction-diffusion combination `νK + ν⁻¹|β|²M`, the sparse symmetric
/// stand-in for the gradient-projected operator.
pub fn assemble_reaction_diffusion(
    mesh: &StructuredMesh,
    nu: f64,
    beta: [f64; 2],
) -> Result<CsrMatrix, MatError> {
    if nu <= 0.0 {
        return Err(MatError::Invalid(format!("diffusion {nu} must be positive")));
    }
    let k = assemble_stiffness(mesh);
    let m = assemble_mass(mesh);
    let beta_sq = beta[0] * beta[0] + beta[1] * beta[1];
    CsrMatrix::linear_combination(nu, &k, beta_sq / nu, &m)
}

fn advdiff_parts(
    mesh: &StructuredMesh,
    p: &FemProblem2d,
    f: &dyn Fn(f64, f64) -> f64,
    nodes: NodeSet,
) -> (CsrMatrix, Vec<f64>) {
    let a = assemble_matrix(mesh, nodes, &|e| {
        let stiff = stiffness_element(e);
        let conv = advection_element(e, p.beta);
        let aniso = anisotropic_element(e, p.beta);
        let mut local = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                local[i][j] = p.nu * stiff[i][j] + conv[i][j] + p.delta_sd * aniso[i][j];
            }
        }
        local
    });
    let n = a.rows();
    let mut rhs = vec![0.0f64; n];
    // Vertex a touches the midpoints of its two incident edges, where
    // its basis function equals one half; the third midpoint lies on
    // the opposite edge where it vanishes.
    let incident = [[0usize, 2], [0, 1], [1, 2]];
    for_each_triangle(mesh, &mut |element, coords| {
        let mids = element.edge_midpoints();
        let fm = [
            f(mids[0].0, mids[0].1),
            f(mids[1].0, mids[1].1),
            f(mids[2].0, mids[2].1),
        ];
        let bg = element.wind_dot_grad(p.beta);
        let third = element.area / 3.0;
        for a in 0..3 {
            let Some(row) = node_number(mesh, nodes, coords[a].0, coords[a].1) else {
                continue;
            };
            let load = third * 0.5 * (fm[incident[a][0]] + fm[incident[a][1]]);
            let streamline = p.delta_sd * bg[a] * third * (fm[0] + fm[1] + fm[2]);
            rhs[row] += load + streamline;
        }
    });
    (a, rhs)
}

/// The stabilized system `A = νK + C + δS` and its load vector
/// `b_i = (f, φ_i) + δ(f, β·∇φ_i)`, on interior vertices.
pub fn assemble_advdiff(
    mesh: &StructuredMesh,
    p: &FemProblem2d,
    f: &dyn Fn(f64, f64) -> f64,
) -> (CsrMatrix, Vec<f64>) {
    advdiff_parts(mesh, p, f, NodeSet::Interior)
}

/// Same as [`assemble_advdiff`] but over all vertices, for consistency
/// checks that need boundary data other than zero.
pub fn assemble_advdiff_full(
    mesh: &StructuredMesh,
    p: &FemProblem2d,
    f: &dyn Fn(f64, f64) -> f64,
) -> (CsrMatrix, Vec<f64>) {
    advdiff_parts(mesh, p, f, NodeSet::All)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::test_support::{assert_close, TestRng};
    use crate::matkit::{vecops, CholeskyFactor};

    fn ones(_: f64, _: f64) -> f64 {
        1.0
    }

    #[test]
    fn single_interior_node_matches_hand_integration() {
        // On the 2x2-cell mesh the lone interior vertex is supported by
        // six triangles.  Working through their basis gradients gives
        // stiffness 4, mass h²/2, x-anisotropy 2, zero advection
        // diagonal, and load h² for f ≡ 1.
        let mesh = StructuredMesh::new(2).unwrap();
        let h = mesh.h();
        assert_eq!(assemble_stiffness(&mesh).get(0, 0), 4.0);
        assert_close(assemble_mass(&mesh).get(0, 0), h * h / 2.0, 1e-15);
        assert_close(assemble_anisotropic(&mesh, [1.0, 0.0]).get(0, 0), 2.0, 1e-15);
        assert_close(assemble_advection(&mesh, [1.0, 0.0]).get(0, 0), 0.0, 1e-15);

        let p = FemProblem2d { nu: 0.3, beta: [1.0, 0.0], delta_sd: 1e-2 };
        let (a, rhs) = assemble_advdiff(&mesh, &p, &ones);
        assert_close(a.get(0, 0), 0.3 * 4.0 + 1e-2 * 2.0, 1e-14);
        assert_close(rhs[0], h * h, 1e-15);
    }

    #[test]
    fn interior_stiffness_is_the_five_point_stencil() {
        let mesh = StructuredMesh::new(6).unwrap();
        let k = assemble_stiffness(&mesh);
        let idx = |i: usize, j: usize| mesh.interior_index(i, j).unwrap();
        assert_close(k.get(idx(3, 3), idx(3, 3)), 4.0, 1e-14);
        for (ni, nj) in [(2, 3), (4, 3), (3, 2), (3, 4)] {
            assert_close(k.get(idx(3, 3), idx(ni, nj)), -1.0, 1e-14);
        }
        // The diagonal neighbours cancel on this triangulation.
        for (ni, nj) in [(2, 2), (4, 4), (2, 4), (4, 2)] {
            assert_close(k.get(idx(3, 3), idx(ni, nj)), 0.0, 1e-14);
        }
    }

    #[test]
    fn full_stiffness_annihilates_constants() {
        let mesh = StructuredMesh::new(5).unwrap();
        let k = assemble_stiffness_full(&mesh);
        let out = k.matvec(&vec![1.0; mesh.node_count()]);
        for v in out {
            assert!(v.abs() < 1e-13);
        }
    }

    #[test]
    fn full_mass_sums_to_unit_area() {
        let mesh = StructuredMesh::new(5).unwrap();
        let m = assemble_mass_full(&mesh);
        let row_sums = m.matvec(&vec![1.0; mesh.node_count()]);
        let total: f64 = row_sums.iter().sum();
        assert_close(total, 1.0, 1e-13);
    }

    #[test]
    fn patch_test_reproduces_linear_functions() {
        // For u(x,y) = 2x - 3y + 1/2 the diffusion term vanishes and
        // β·∇u is the constant c, so row i of the full assembly applied
        // to the nodal values must equal c·(Mφ_i, 1) at interior rows.
        let mesh = StructuredMesh::new(5).unwrap();
        let p = FemProblem2d { nu: 0.37, beta: [0.6, -0.8], delta_sd: 1e-2 };
        let (a, _) = assemble_advdiff_full(&mesh, &p, &ones);
        let m = mesh.cells();
        let mut u = vec![0.0; mesh.node_count()];
        for j in 0..=m {
            for i in 0..=m {
                let (x, y) = mesh.node_position(i, j);
                u[mesh.node_index(i, j)] = 2.0 * x - 3.0 * y + 0.5;
            }
        }
        let c = p.beta[0] * 2.0 + p.beta[1] * (-3.0);
        let au = a.matvec(&u);
        let mass_rows = assemble_mass_full(&mesh).matvec(&vec![1.0; mesh.node_count()]);
        for j in 1..m {
            for i in 1..m {
                let row = mesh.node_index(i, j);
                assert_close(au[row], c * mass_rows[row], 1e-12);
            }
        }
    }

    #[test]
    fn advection_is_skew_symmetric() {
        let mesh = StructuredMesh::new(6).unwrap();
        let c = assemble_advection(&mesh, [std::f64::consts::FRAC_1_SQRT_2; 2]);
        let sum = CsrMatrix::linear_combination(1.0, &c, 1.0, &c.transpose()).unwrap();
        assert!(sum.norm_max() <= 1e-14 * c.norm_max());
    }

    #[test]
    fn transposed_assembly_discretizes_the_reversed_wind() {
        let mesh = StructuredMesh::new(5).unwrap();
        let forward = FemProblem2d { nu: 0.2, beta: [0.3, 0.9], delta_sd: 0.0 };
        let backward = FemProblem2d { nu: 0.2, beta: [-0.3, -0.9], delta_sd: 0.0 };
        let (af, _) = assemble_advdiff(&mesh, &forward, &ones);
        let (ab, _) = assemble_advdiff(&mesh, &backward, &ones);
        let diff = CsrMatrix::linear_combination(1.0, &af.transpose(), -1.0, &ab).unwrap();
        assert!(diff.norm_max() <= 1e-13 * af.norm_max());
    }

    #[test]
    fn diffusion_dominated_limit_approaches_poisson() {
        // At ν = 10³ the advection term is negligible: ν·u solves the
        // Poisson problem K w = b with f ≡ 1 up to O(1/ν).
        let mesh = StructuredMesh::new(16).unwrap();
        let p = FemProblem2d::x_wind(1e3);
        let (a, b) = assemble_advdiff(&mesh, &p, &ones);
        let lu = crate::matkit::BandedLuFactor::from_csr(&a).unwrap();
        let u = lu.solve_vec(&b);
        let k = assemble_stiffness(&mesh);
        let chol = CholeskyFactor::from_csr(&k).unwrap();
        let w = chol.solve_vec(&b);
        let scaled: Vec<f64> = u.iter().map(|v| v * p.nu).collect();
        let diff: Vec<f64> = scaled.iter().zip(&w).map(|(a, b)| a - b).collect();
        assert!(vecops::norm2(&diff) < 1e-3 * vecops::norm2(&w));
    }

    #[test]
    fn anisotropic_matrix_is_positive_semidefinite_along_the_wind() {
        let mesh = StructuredMesh::new(6).unwrap();
        let s = assemble_anisotropic(&mesh, [0.8, 0.6]);
        let mut rng = TestRng::new(41);
        for _ in 0..5 {
            let u: Vec<f64> = (0..mesh.interior_count()).map(|_| rng.uniform()).collect();
            let su = s.matvec(&u);
            assert!(vecops::dot(&u, &su) >= -1e-12);
        }
        let zero = assemble_anisotropic(&mesh, [0.0, 0.0]);
        assert_eq!(zero.norm_max(), 0.0);
    }

    #[test]
    fn reaction_diffusion_matrix_is_spd() {
        let mesh = StructuredMesh::new(8).unwrap();
        let g = assemble_reaction_diffusion(&mesh, 5e-3, [1.0, 0.0]).unwrap();
        assert!(g.is_symmetric(1e-12));
        assert!(CholeskyFactor::from_csr(&g).is_ok());
        assert!(assemble_reaction_diffusion(&mesh, 0.0, [1.0, 0.0]).is_err());
    }

    #[test]
    fn source_quadrature_integrates_quadratics_exactly() {
        // With f(x,y) = x² the load (f, φ_i) summed over all vertices is
        // ∫ x² = 1/3 exactly, because the midpoint rule is exact for
        // quadratics and the basis functions sum to one.
        let mesh = StructuredMesh::new(4).unwrap();
        let p = FemProblem2d { nu: 1.0, beta: [0.0, 0.0], delta_sd: 0.0 };
        let (_, rhs) = assemble_advdiff_full(&mesh, &p, &|x, _| x * x);
        let total: f64 = rhs.iter().sum();
        assert_close(total, 1.0 / 3.0, 1e-14);
    }
}
