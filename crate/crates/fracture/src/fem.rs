//! P1 (linear triangle) finite element infrastructure: constant shape
//! function gradients, scatter-add assembly into a triplet-backed sparse
//! system, Dirichlet elimination with right-hand-side lift, and a direct
//! sparse LU solve.
//!
//! Assembly is single-threaded and element-ordered, which makes repeated
//! runs bit-identical. Exact bitwise equality under element permutation is
//! not promised; matrices agree to summation tolerance.

use faer::prelude::*;
use faer::sparse::SparseColMat;
use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::mesh::Mesh;

/// Gradients of the three barycentric hat functions (constant on the
/// element) and the element area.
#[derive(Debug, Clone, Copy)]
pub struct P1 {
    pub grads: [[f64; 2]; 3],
    pub area: f64,
}

pub fn grad_basis(p: [[f64; 2]; 3]) -> Result<P1> {
    let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1])
        - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    let area = 0.5 * det;
    if !(area > 0.0) {
        return Err(Error::DegenerateTriangle { area });
    }
    // grad of hat i is the inward normal of the opposite edge / (2A)
    let mut grads = [[0.0; 2]; 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        grads[i] = [(p[j][1] - p[k][1]) / det, (p[k][0] - p[j][0]) / det];
    }
    Ok(P1 { grads, area })
}

impl P1 {
    pub fn for_element(mesh: &Mesh, e: usize) -> Result<P1> {
        grad_basis(mesh.triangle_points(e))
    }
}

/// Square sparse system assembled from triplets, with a constrained-DOF set.
pub struct SparseSystem {
    pub ndof: usize,
    triplets: Vec<(usize, usize, f64)>,
    pub rhs: Vec<f64>,
    constraints: Vec<Option<f64>>,
}

impl SparseSystem {
    pub fn new(ndof: usize) -> Self {
        SparseSystem {
            ndof,
            triplets: Vec::new(),
            rhs: vec![0.0; ndof],
            constraints: vec![None; ndof],
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.ndof && j < self.ndof);
        if v != 0.0 {
            self.triplets.push((i, j, v));
        }
    }

    pub fn add_rhs(&mut self, i: usize, v: f64) {
        self.rhs[i] += v;
    }

    /// Prescribes a Dirichlet value; prescribing two different values on the
    /// same DOF is an error.
    pub fn constrain(&mut self, dof: usize, value: f64) -> Result<()> {
        match self.constraints[dof] {
            None => {
                self.constraints[dof] = Some(value);
                Ok(())
            }
            Some(existing) if existing == value => Ok(()),
            Some(existing) => Err(Error::ConflictingConstraint {
                dof,
                first: existing,
                second: value,
            }),
        }
    }

    pub fn constraints(&self) -> &[Option<f64>] {
        &self.constraints
    }

    pub fn is_constrained(&self, dof: usize) -> bool {
        self.constraints[dof].is_some()
    }

    /// Row/column elimination with RHS lift: constrained DOFs become
    /// identity rows carrying the prescribed value; coupling columns move
    /// to the right-hand side. The eliminated system stays symmetric when
    /// the assembled matrix is.
    fn eliminated(&self) -> (Vec<(usize, usize, f64)>, Vec<f64>) {
        let mut rhs = self.rhs.clone();
        let mut trips = Vec::with_capacity(self.triplets.len() + self.ndof);
        for &(i, j, v) in &self.triplets {
            match (self.constraints[i], self.constraints[j]) {
                (None, None) => trips.push((i, j, v)),
                (None, Some(g)) => rhs[i] -= v * g,
                (Some(_), _) => {}
            }
        }
        for (dof, c) in self.constraints.iter().enumerate() {
            if let Some(g) = *c {
                trips.push((dof, dof, 1.0));
                rhs[dof] = g;
            }
        }
        (trips, rhs)
    }

    /// Direct sparse LU solve of the eliminated system. Verifies the scaled
    /// residual ‖Ax − b‖∞ / (‖A‖∞‖x‖∞ + ‖b‖∞) ≤ 1e-10 and reports a
    /// singular system otherwise.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let (trips, rhs) = self.eliminated();
        let n = self.ndof;
        let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trips)
            .map_err(|_| Error::SingularSystem { residual: f64::NAN })?;
        let b = faer::Mat::from_fn(n, 1, |i, _| rhs[i]);
        let lu = mat
            .sp_lu()
            .map_err(|_| Error::SingularSystem { residual: f64::NAN })?;
        let x = lu.solve(&b);
        let x: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();

        // scaled residual check
        let mut r = rhs.clone();
        let mut row_abs = vec![0.0f64; n];
        for &(i, j, v) in &trips {
            r[i] -= v * x[j];
            row_abs[i] += v.abs();
        }
        let r_inf = r.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let a_inf = row_abs.iter().fold(0.0f64, |m, &v| m.max(v));
        let x_inf = x.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let b_inf = rhs.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let denom = a_inf * x_inf + b_inf;
        let rel = if denom > 0.0 { r_inf / denom } else { r_inf };
        if !(rel <= 1e-10) {
            return Err(Error::SingularSystem { residual: rel });
        }
        Ok(x)
    }

    /// Matrix-vector product of the raw (un-eliminated) assembled matrix.
    pub fn multiply_raw(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.ndof];
        for &(i, j, v) in &self.triplets {
            y[i] += v * x[j];
        }
        y
    }

    /// Dense copy of the raw assembled matrix, for small-system checks.
    pub fn dense_raw(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.ndof, self.ndof);
        for &(i, j, v) in &self.triplets {
            m[(i, j)] += v;
        }
        m
    }
}

/// Scatter-add assembly of a one-DOF-per-node problem. The kernel returns
/// the 3×3 element matrix and a 3-vector element load.
pub fn assemble_scalar(
    mesh: &Mesh,
    mut kernel: impl FnMut(usize, &P1) -> ([[f64; 3]; 3], [f64; 3]),
) -> Result<SparseSystem> {
    let mut sys = SparseSystem::new(mesh.node_count());
    for e in 0..mesh.element_count() {
        let p1 = P1::for_element(mesh, e)?;
        let (ke, fe) = kernel(e, &p1);
        let t = mesh.triangle(e);
        for a in 0..3 {
            sys.add_rhs(t[a], fe[a]);
            for b in 0..3 {
                sys.add(t[a], t[b], ke[a][b]);
            }
        }
    }
    Ok(sys)
}

/// Scatter-add assembly of a two-DOF-per-node problem (DOF 2i, 2i+1 for
/// node i). The kernel returns the 6×6 element matrix; local DOF 2a+c is
/// component c of local node a.
pub fn assemble_vector(
    mesh: &Mesh,
    mut kernel: impl FnMut(usize, &P1) -> [[f64; 6]; 6],
) -> Result<SparseSystem> {
    let mut sys = SparseSystem::new(2 * mesh.node_count());
    for e in 0..mesh.element_count() {
        let p1 = P1::for_element(mesh, e)?;
        let ke = kernel(e, &p1);
        let t = mesh.triangle(e);
        for a in 0..3 {
            for ca in 0..2 {
                for b in 0..3 {
                    for cb in 0..2 {
                        sys.add(2 * t[a] + ca, 2 * t[b] + cb, ke[2 * a + ca][2 * b + cb]);
                    }
                }
            }
        }
    }
    Ok(sys)
}

/// Strain-displacement matrix B (3×6): Voigt strain (ε_xx, ε_yy, 2ε_xy)
/// from the 6 local displacement DOFs.
pub fn strain_matrix(p1: &P1) -> [[f64; 6]; 3] {
    let mut b = [[0.0; 6]; 3];
    for a in 0..3 {
        let g = p1.grads[a];
        b[0][2 * a] = g[0];
        b[1][2 * a + 1] = g[1];
        b[2][2 * a] = g[1];
        b[2][2 * a + 1] = g[0];
    }
    b
}

/// Element stiffness `factor · A · BᵀCB` for plane elasticity with a
/// constant Voigt stiffness (one-point quadrature, exact for P1).
pub fn elasticity_element(c: &Matrix3<f64>, p1: &P1, factor: f64) -> [[f64; 6]; 6] {
    let b = strain_matrix(p1);
    let mut cb = [[0.0; 6]; 3];
    for i in 0..3 {
        for j in 0..6 {
            for k in 0..3 {
                cb[i][j] += c[(i, k)] * b[k][j];
            }
        }
    }
    let mut ke = [[0.0; 6]; 6];
    let w = factor * p1.area;
    for i in 0..6 {
        for j in 0..6 {
            let mut s = 0.0;
            for k in 0..3 {
                s += b[k][i] * cb[k][j];
            }
            ke[i][j] = w * s;
        }
    }
    ke
}

/// Scalar Laplace element `coeff · A · gᵢ·gⱼ`.
pub fn laplace_element(p1: &P1, coeff: f64) -> [[f64; 3]; 3] {
    let mut ke = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            ke[i][j] = coeff
                * p1.area
                * (p1.grads[i][0] * p1.grads[j][0] + p1.grads[i][1] * p1.grads[j][1]);
        }
    }
    ke
}

/// Scalar mass element `coeff · ∫NᵢNⱼ = coeff · A/12 · (1 + δᵢⱼ)`, exact
/// for the P1 product.
pub fn mass_element(p1: &P1, coeff: f64) -> [[f64; 3]; 3] {
    let mut ke = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            ke[i][j] = coeff * p1.area / 12.0 * if i == j { 2.0 } else { 1.0 };
        }
    }
    ke
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meshgen;
    use approx::assert_relative_eq;

    fn reference_triangle() -> P1 {
        grad_basis([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap()
    }

    #[test]
    fn grad_basis_reference() {
        let p1 = reference_triangle();
        assert_relative_eq!(p1.area, 0.5);
        assert_eq!(p1.grads[0], [-1.0, -1.0]);
        assert_eq!(p1.grads[1], [1.0, 0.0]);
        assert_eq!(p1.grads[2], [0.0, 1.0]);
    }

    #[test]
    fn grad_basis_scaling_and_translation() {
        let s = 3.0;
        let scaled = grad_basis([[0.0, 0.0], [s, 0.0], [0.0, s]]).unwrap();
        assert_relative_eq!(scaled.area, 0.5 * s * s);
        for i in 0..3 {
            for c in 0..2 {
                assert_relative_eq!(
                    scaled.grads[i][c],
                    reference_triangle().grads[i][c] / s,
                    epsilon = 1e-14
                );
            }
        }
        let t = grad_basis([[5.0, -2.0], [6.0, -2.0], [5.0, -1.0]]).unwrap();
        for i in 0..3 {
            assert_eq!(t.grads[i], reference_triangle().grads[i]);
        }
    }

    #[test]
    fn grad_basis_degenerate() {
        assert!(matches!(
            grad_basis([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]),
            Err(Error::DegenerateTriangle { .. })
        ));
    }

    #[test]
    fn laplace_element_reference() {
        // A * g_i . g_j on the reference triangle:
        // [[1, -.5, -.5], [-.5, .5, 0], [-.5, 0, .5]]
        let ke = laplace_element(&reference_triangle(), 1.0);
        let expected = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(ke[i][j], expected[i][j], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn mass_partition_of_unity() {
        let mesh = meshgen::unit_square(1);
        let sys = assemble_scalar(&mesh, |_, p1| (mass_element(p1, 1.0), [0.0; 3])).unwrap();
        let total: f64 = sys.dense_raw().iter().sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_stiffness_gives_zero_matrix() {
        let mesh = meshgen::unit_square(2);
        let c = Matrix3::zeros();
        let sys = assemble_vector(&mesh, |_, p1| elasticity_element(&c, p1, 1.0)).unwrap();
        assert_eq!(sys.dense_raw().amax(), 0.0);
    }

    #[test]
    fn assembly_order_independent() {
        let mesh = meshgen::unit_square(4);
        let sys = assemble_scalar(&mesh, |_, p1| (laplace_element(p1, 1.0), [0.0; 3])).unwrap();
        // reversed element order
        let mut sys_rev = SparseSystem::new(mesh.node_count());
        for e in (0..mesh.element_count()).rev() {
            let p1 = P1::for_element(&mesh, e).unwrap();
            let ke = laplace_element(&p1, 1.0);
            let t = mesh.triangle(e);
            for a in 0..3 {
                for b in 0..3 {
                    sys_rev.add(t[a], t[b], ke[a][b]);
                }
            }
        }
        let d1 = sys.dense_raw();
        let d2 = sys_rev.dense_raw();
        assert!((&d1 - &d2).amax() <= 1e-12 * d1.amax());
    }

    #[test]
    fn assembled_laplace_symmetric_psd() {
        let mesh = meshgen::unit_square(3);
        let sys = assemble_scalar(&mesh, |_, p1| (laplace_element(p1, 1.0), [0.0; 3])).unwrap();
        let d = sys.dense_raw();
        assert!((&d - d.transpose()).amax() < 1e-12 * d.amax());
        let eig = d.symmetric_eigenvalues();
        assert!(eig.iter().all(|&l| l > -1e-12));
    }

    #[test]
    fn constrain_conflict_is_error() {
        let mut sys = SparseSystem::new(2);
        sys.constrain(0, 0.0).unwrap();
        assert!(matches!(
            sys.constrain(0, 1.0),
            Err(Error::ConflictingConstraint { dof: 0, .. })
        ));
        sys.constrain(0, 0.0).unwrap(); // same value is fine
    }

    #[test]
    fn solve_identity_and_2x2() {
        let mut sys = SparseSystem::new(2);
        sys.add(0, 0, 1.0);
        sys.add(1, 1, 1.0);
        sys.add_rhs(0, 1.0);
        let x = sys.solve().unwrap();
        assert_eq!(x, vec![1.0, 0.0]);

        let mut sys = SparseSystem::new(2);
        sys.add(0, 0, 2.0);
        sys.add(0, 1, 1.0);
        sys.add(1, 0, 1.0);
        sys.add(1, 1, 2.0);
        sys.add_rhs(0, 3.0);
        sys.add_rhs(1, 3.0);
        let x = sys.solve().unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(x[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn all_constrained_to_zero() {
        let mesh = meshgen::unit_square(2);
        let mut sys =
            assemble_scalar(&mesh, |_, p1| (laplace_element(p1, 1.0), [0.0; 3])).unwrap();
        for i in 0..sys.ndof {
            sys.constrain(i, 0.0).unwrap();
        }
        let x = sys.solve().unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn laplace_patch_test_linear_function() {
        // prescribing a linear function on the boundary reproduces it exactly
        let mesh = meshgen::unit_square(5);
        let f = |p: [f64; 2]| 3.0 * p[0] - 2.0 * p[1] + 0.25;
        let mut sys =
            assemble_scalar(&mesh, |_, p1| (laplace_element(p1, 1.0), [0.0; 3])).unwrap();
        for (i, on_b) in mesh.boundary_nodes().iter().enumerate() {
            if *on_b {
                sys.constrain(i, f(mesh.node(i))).unwrap();
            }
        }
        let x = sys.solve().unwrap();
        for i in 0..mesh.node_count() {
            assert_relative_eq!(x[i], f(mesh.node(i)), epsilon = 1e-10);
        }
    }

    #[test]
    fn unconstrained_elasticity_is_singular() {
        let mesh = meshgen::unit_square(2);
        let c = Matrix3::new(3.0, 1.0, 0.0, 1.0, 3.0, 0.0, 0.0, 0.0, 1.0);
        let mut sys =
            assemble_vector(&mesh, |_, p1| elasticity_element(&c, p1, 1.0)).unwrap();
        sys.add_rhs(0, 1.0);
        assert!(matches!(sys.solve(), Err(Error::SingularSystem { .. })));
    }
}
