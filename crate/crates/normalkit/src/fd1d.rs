//! Finite differences for 1D convection-diffusion on the unit interval.
//!
//! The continuous problem is `-ν u'' + β u' = f` on `(0, 1)` with Dirichlet
//! values at both ends.  Unknowns live at the `n` interior nodes
//! `x_i = i h`, `h = 1/(n+1)`; the boundary values are lifted into the
//! right-hand side.  Two discretizations are provided: second-order
//! centered differences for the convection term, and first-order upwind
//! differences, which stay monotone at any mesh Peclet number where the
//! centered scheme starts to oscillate.
//!
//! [`advection_factor`] builds the upwinded discretization of `β u'`
//! alone.  It is nonsingular on the interior nodes and serves as a right
//! preconditioning factor for the convection-dominated regime.

use crate::matkit::{MatError, Tridiagonal};

#[derive(Debug, Clone, Copy)]
pub struct Problem1d {
    /// Interior unknowns.
    pub n: usize,
    /// Diffusion coefficient `ν > 0`.
    pub nu: f64,
    /// Convection speed `β`.
    pub beta: f64,
    /// Boundary value at `x = 0`.
    pub left: f64,
    /// Boundary value at `x = 1`.
    pub right: f64,
}

impl Problem1d {
    /// The standard outflow-layer test case: `u(0) = 0`, `u(1) = 1`,
    /// unit wind.
    pub fn boundary_layer(n: usize, nu: f64) -> Self {
        Problem1d { n, nu, beta: 1.0, left: 0.0, right: 1.0 }
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.n as f64 + 1.0)
    }

    /// Coordinate of interior node `i` (zero-based).
    pub fn node(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.h()
    }

    /// Exact solution for `f ≡ 0`.
    pub fn exact_homogeneous(&self, x: f64) -> f64 {
        self.left + (self.right - self.left) * layer_profile(self.beta / self.nu, x)
    }
}

/// `(e^{p x} - 1) / (e^p - 1)`, evaluated without overflow for large `|p|`.
///
/// This is the solution of the homogeneous problem with `u(0) = 0`,
/// `u(1) = 1`, and `p = β/ν`; as `p → 0` it degenerates to `x`.
pub fn layer_profile(peclet: f64, x: f64) -> f64 {
    if peclet.abs() < 1e-12 {
        return x;
    }
    if peclet > 0.0 {
        // Multiply through by e^{-p} so no intermediate exceeds one.
        let shifted = (peclet * (x - 1.0)).exp() - (-peclet).exp();
        shifted / (1.0 - (-peclet).exp())
    } else {
        f64::exp_m1(peclet * x) / f64::exp_m1(peclet)
    }
}

fn constant_stencil_system(
    p: &Problem1d,
    f: &dyn Fn(f64) -> f64,
    sub: f64,
    diag: f64,
    sup: f64,
) -> (Tridiagonal, Vec<f64>) {
    let a = Tridiagonal::from_constant(p.n, sub, diag, sup);
    let mut rhs: Vec<f64> = (0..p.n).map(|i| f(p.node(i))).collect();
    rhs[0] -= sub * p.left;
    rhs[p.n - 1] -= sup * p.right;
    (a, rhs)
}

/// Centered-difference system: second order, oscillatory when `βh/2ν > 1`.
pub fn assemble_centered(p: &Problem1d, f: &dyn Fn(f64) -> f64) -> (Tridiagonal, Vec<f64>) {
    let h = p.h();
    let diff = p.nu / (h * h);
    let conv = p.beta / (2.0 * h);
    constant_stencil_system(p, f, -diff - conv, 2.0 * diff, -diff + conv)
}

/// Upwind-difference system: first order, monotone at any Peclet number.
pub fn assemble_upwind(p: &Problem1d, f: &dyn Fn(f64) -> f64) -> (Tridiagonal, Vec<f64>) {
    let h = p.h();
    let diff = p.nu / (h * h);
    let conv = p.beta / h;
    if p.beta >= 0.0 {
        constant_stencil_system(p, f, -diff - conv, 2.0 * diff + conv, -diff)
    } else {
        constant_stencil_system(p, f, -diff, 2.0 * diff - conv, -diff + conv)
    }
}

/// Upwinded discretization of the advection term `β u'` alone.
///
/// Bidiagonal and nonsingular; its Gram matrix `PᵀP` is `(β/h)²` times a
/// discrete Laplacian with a free outflow end, which is why it works as
/// a right factor when convection dominates.
pub fn advection_factor(p: &Problem1d) -> Result<Tridiagonal, MatError> {
    if p.beta == 0.0 {
        return Err(MatError::Invalid(
            "zero wind has no advection factor".to_string(),
        ));
    }
    let conv = p.beta / p.h();
    let t = if p.beta > 0.0 {
        Tridiagonal::from_constant(p.n, -conv, conv, 0.0)
    } else {
        Tridiagonal::from_constant(p.n, 0.0, -conv, conv)
    };
    Ok(t)
}
