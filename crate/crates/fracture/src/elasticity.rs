//! Plane-strain linear elasticity on the P1 core: stiffness assembly with
//! optional per-element degradation, Dirichlet solve, strains, stresses,
//! stored energy and boundary reactions.
//!
//! Stiffness enters in GPa and is converted once at assembly, so with
//! lengths in mm the displacements come out in mm, reactions in N (per mm
//! thickness) and energies in N·mm.

use crate::error::{Error, Result};
use crate::fem::{assemble_vector, elasticity_element, strain_matrix, SparseSystem, P1};
use crate::material::{energy_density, StiffnessVoigt, GPA_TO_N_PER_MM2};
use crate::mesh::Mesh;

/// Displacement solution together with the raw (un-eliminated) stiffness,
/// kept so reactions can be recovered as internal forces at constrained
/// dofs.
pub struct ElasticSolution {
    pub u: Vec<f64>,
    system: SparseSystem,
}

/// Assemble the degraded stiffness `K = sum_e g_e A_e B^T C B` (units
/// N/mm^2) without boundary conditions.
pub fn assemble_stiffness(
    mesh: &Mesh,
    c: &StiffnessVoigt,
    degradation: Option<&[f64]>,
) -> Result<SparseSystem> {
    if let Some(g) = degradation {
        if g.len() != mesh.element_count() {
            return Err(Error::IndexOutOfRange { index: g.len(), count: mesh.element_count() });
        }
    }
    assemble_vector(mesh, |e, p1| {
        let g = degradation.map_or(1.0, |g| g[e]);
        elasticity_element(c.matrix(), p1, g * GPA_TO_N_PER_MM2)
    })
}

/// Solve the displacement problem with Dirichlet data given as
/// `(dof, value)` pairs, dof = `2*node + component`.
pub fn solve_elasticity(
    mesh: &Mesh,
    c: &StiffnessVoigt,
    degradation: Option<&[f64]>,
    bcs: &[(usize, f64)],
) -> Result<ElasticSolution> {
    let mut system = assemble_stiffness(mesh, c, degradation)?;
    for &(dof, value) in bcs {
        if dof >= system.ndof {
            return Err(Error::IndexOutOfRange { index: dof, count: system.ndof });
        }
        system.constrain(dof, value)?;
    }
    let u = system.solve()?;
    Ok(ElasticSolution { u, system })
}

impl ElasticSolution {
    /// Net internal force (N) over a set of dofs; meaningful at constrained
    /// dofs, where it equals the reaction holding the boundary in place.
    pub fn reaction(&self, dofs: impl IntoIterator<Item = usize>) -> f64 {
        let ku = self.system.multiply_raw(&self.u);
        dofs.into_iter().map(|d| ku[d]).sum()
    }

    /// Reaction component summed over all nodes carrying a boundary tag.
    pub fn reaction_on_tag(&self, mesh: &Mesh, tag: &str, comp: usize) -> f64 {
        self.reaction(mesh.nodes_with_tag(tag).into_iter().map(|n| 2 * n + comp))
    }
}

/// Voigt strain (e_xx, e_yy, 2 e_xy) of element `e`, constant per element.
pub fn element_strain(mesh: &Mesh, u: &[f64], e: usize) -> Result<[f64; 3]> {
    let p1 = P1::for_element(mesh, e)?;
    let b = strain_matrix(&p1);
    let tri = mesh.triangle(e);
    let mut eps = [0.0; 3];
    for a in 0..3 {
        for c in 0..2 {
            let v = u[2 * tri[a] + c];
            for r in 0..3 {
                eps[r] += b[r][2 * a + c] * v;
            }
        }
    }
    Ok(eps)
}

/// Per-element Voigt strains for the whole mesh.
pub fn strains(mesh: &Mesh, u: &[f64]) -> Result<Vec<[f64; 3]>> {
    (0..mesh.element_count()).map(|e| element_strain(mesh, u, e)).collect()
}

/// Element Cauchy stress in N/mm^2 including degradation.
pub fn element_stress(c: &StiffnessVoigt, g: f64, eps: [f64; 3]) -> [f64; 3] {
    let s = c.stress(eps);
    [
        s[0] * g * GPA_TO_N_PER_MM2,
        s[1] * g * GPA_TO_N_PER_MM2,
        s[2] * g * GPA_TO_N_PER_MM2,
    ]
}

/// Stored elastic energy (N·mm): `sum_e g_e A_e 1/2 eps:C:eps`.
pub fn bulk_energy(
    mesh: &Mesh,
    c: &StiffnessVoigt,
    degradation: Option<&[f64]>,
    u: &[f64],
) -> Result<f64> {
    let mut total = 0.0;
    for e in 0..mesh.element_count() {
        let eps = element_strain(mesh, u, e)?;
        let g = degradation.map_or(1.0, |g| g[e]);
        total += g * mesh.area(e)? * energy_density(c, eps);
    }
    Ok(total * GPA_TO_N_PER_MM2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::MaterialSpec;
    use crate::meshgen;
    use approx::assert_relative_eq;
    use nalgebra::Matrix3;

    fn iso() -> StiffnessVoigt {
        StiffnessVoigt::isotropic_plane_strain(121.15, 80.77)
    }

    fn sent_aniso(theta: f64) -> StiffnessVoigt {
        let spec = MaterialSpec::Anisotropic {
            c_ref: StiffnessVoigt::new(Matrix3::new(
                65.0, 20.0, 0.0, 20.0, 260.0, 0.0, 0.0, 0.0, 30.0,
            ))
            .unwrap(),
            theta_rad: theta,
            gc_n_per_mm: 1.0,
        };
        crate::material::effective_stiffness(&spec).unwrap()
    }

    fn boundary_bcs(mesh: &Mesh, field: impl Fn(f64, f64) -> [f64; 2]) -> Vec<(usize, f64)> {
        let mut bcs = Vec::new();
        for n in mesh.boundary_nodes() {
            let [x, y] = mesh.node(n);
            let u = field(x, y);
            bcs.push((2 * n, u[0]));
            bcs.push((2 * n + 1, u[1]));
        }
        bcs
    }

    fn patch_test(c: &StiffnessVoigt) {
        // affine boundary data must be reproduced exactly in the interior
        let mesh = meshgen::unit_square(5);
        let field = |x: f64, y: f64| [1e-3 * x + 2e-3 * y, -3e-4 * x + 5e-4 * y];
        let sol = solve_elasticity(&mesh, c, None, &boundary_bcs(&mesh, field)).unwrap();
        for n in 0..mesh.node_count() {
            let [x, y] = mesh.node(n);
            let exact = field(x, y);
            assert!((sol.u[2 * n] - exact[0]).abs() < 1e-9, "node {n} ux");
            assert!((sol.u[2 * n + 1] - exact[1]).abs() < 1e-9, "node {n} uy");
        }
        let eps0 = element_strain(&mesh, &sol.u, 0).unwrap();
        for e in 1..mesh.element_count() {
            let eps = element_strain(&mesh, &sol.u, e).unwrap();
            for r in 0..3 {
                assert!((eps[r] - eps0[r]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn patch_isotropic() {
        patch_test(&iso());
    }

    #[test]
    fn patch_anisotropic_rotations() {
        for theta in [0.0, 0.5, 1.0471975511965976, 1.5707963267948966] {
            patch_test(&sent_aniso(theta));
        }
    }

    #[test]
    fn rigid_rotation_stores_no_energy() {
        let mesh = meshgen::unit_square(4);
        let field = |x: f64, y: f64| [-1e-3 * y, 1e-3 * x];
        let sol = solve_elasticity(&mesh, &iso(), None, &boundary_bcs(&mesh, field)).unwrap();
        let energy = bulk_energy(&mesh, &iso(), None, &sol.u).unwrap();
        assert!(energy.abs() < 1e-12, "energy {energy}");
    }

    #[test]
    fn energy_matches_quadratic_form() {
        let mesh = meshgen::unit_square(6);
        let c = sent_aniso(0.7);
        let mut bcs = vec![];
        for n in mesh.nodes_with_tag("bottom") {
            bcs.push((2 * n + 1, 0.0));
        }
        for n in mesh.nodes_with_tag("top") {
            bcs.push((2 * n + 1, 1e-3));
        }
        bcs.push((0, 0.0));
        let sol = solve_elasticity(&mesh, &c, None, &bcs).unwrap();
        let energy = bulk_energy(&mesh, &c, None, &sol.u).unwrap();
        let ku = assemble_stiffness(&mesh, &c, None).unwrap().multiply_raw(&sol.u);
        let quad: f64 = 0.5 * sol.u.iter().zip(&ku).map(|(a, b)| a * b).sum::<f64>();
        assert_relative_eq!(energy, quad, max_relative = 1e-10);
        assert!(energy > 0.0);
    }

    #[test]
    fn uniaxial_tension_reaction() {
        // bottom clamped in y, top pulled; sides free => sigma_xx = 0 and
        // sigma_yy = (lam + 2 mu - lam^2/(lam + 2 mu)) * eps_yy
        let (lam, mu, delta) = (121.15, 80.77, 1e-3);
        let c = StiffnessVoigt::isotropic_plane_strain(lam, mu);
        let mesh = meshgen::unit_square(8);
        let mut bcs = vec![];
        for n in mesh.nodes_with_tag("bottom") {
            bcs.push((2 * n + 1, 0.0));
        }
        for n in mesh.nodes_with_tag("top") {
            bcs.push((2 * n + 1, delta));
        }
        bcs.push((0, 0.0));
        let sol = solve_elasticity(&mesh, &c, None, &bcs).unwrap();
        let m = lam + 2.0 * mu;
        let sigma_yy = (m - lam * lam / m) * delta * GPA_TO_N_PER_MM2;
        let top = sol.reaction_on_tag(&mesh, "top", 1);
        assert_relative_eq!(top, sigma_yy, max_relative = 1e-8);
        let bottom = sol.reaction_on_tag(&mesh, "bottom", 1);
        assert_relative_eq!(bottom, -sigma_yy, max_relative = 1e-8);
    }

    #[test]
    fn uniform_degradation_scales_energy_not_displacement() {
        let mesh = meshgen::unit_square(5);
        let c = iso();
        let mut bcs = vec![];
        for n in mesh.nodes_with_tag("bottom") {
            bcs.push((2 * n + 1, 0.0));
        }
        for n in mesh.nodes_with_tag("top") {
            bcs.push((2 * n + 1, 2e-3));
        }
        bcs.push((0, 0.0));
        let g = vec![0.5; mesh.element_count()];
        let full = solve_elasticity(&mesh, &c, None, &bcs).unwrap();
        let half = solve_elasticity(&mesh, &c, Some(&g), &bcs).unwrap();
        for (a, b) in full.u.iter().zip(&half.u) {
            assert!((a - b).abs() < 1e-12);
        }
        let e_full = bulk_energy(&mesh, &c, None, &full.u).unwrap();
        let e_half = bulk_energy(&mesh, &c, Some(&g), &half.u).unwrap();
        assert_relative_eq!(e_half, 0.5 * e_full, max_relative = 1e-12);
    }

    #[test]
    fn stress_strain_roundtrip() {
        let c = iso();
        let eps = [1e-3, -2e-4, 5e-4];
        let s = element_stress(&c, 1.0, eps);
        let expected = c.stress(eps);
        for i in 0..3 {
            assert_relative_eq!(s[i], expected[i] * GPA_TO_N_PER_MM2, max_relative = 1e-14);
        }
    }
}
