//! Plane-strain stiffness matrices in Voigt notation, with the rotation
//! machinery for anisotropic materials, and energy density evaluation.
//!
//! Conventions:
//! - Voigt strain vector (ε_xx, ε_yy, 2ε_xy) with engineering shear, stress
//!   (σ_xx, σ_yy, σ_xy), so that εᵛ·C·εᵛ reproduces ε:ℂ:ε.
//! - Stiffness entries are stored in GPa; [`GPA_TO_N_PER_MM2`] converts
//!   energy densities and stresses into the N–mm system used for energies
//!   (N·mm) and forces (N).
//! - The isotropic stiffness uses plane-strain kinematics:
//!   C11 = C22 = λ + 2μ, C12 = λ, C33 = μ.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// 1 GPa in N/mm².
pub const GPA_TO_N_PER_MM2: f64 = 1.0e3;

/// Symmetric positive definite 3×3 stiffness in Voigt notation (GPa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffnessVoigt {
    m: Matrix3<f64>,
}

impl StiffnessVoigt {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let scale = m.amax();
        if scale == 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        for i in 0..3 {
            for j in 0..3 {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::Material(format!(
                        "stiffness not symmetric: C[{i}][{j}] = {} vs C[{j}][{i}] = {}",
                        m[(i, j)],
                        m[(j, i)]
                    )));
                }
            }
        }
        let sym = 0.5 * (m + m.transpose());
        let eig = sym.symmetric_eigenvalues();
        if eig.iter().any(|&l| l <= 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(StiffnessVoigt { m: sym })
    }

    pub fn isotropic_plane_strain(lambda: f64, mu: f64) -> Self {
        StiffnessVoigt {
            m: Matrix3::new(
                lambda + 2.0 * mu, lambda, 0.0,
                lambda, lambda + 2.0 * mu, 0.0,
                0.0, 0.0, mu,
            ),
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// Stress (GPa, Voigt) for a given Voigt strain.
    pub fn stress(&self, eps_v: [f64; 3]) -> [f64; 3] {
        let s = self.m * Vector3::new(eps_v[0], eps_v[1], eps_v[2]);
        [s[0], s[1], s[2]]
    }
}

/// Material description for one scenario: elasticity plus the Griffith
/// critical energy release rate Gc (independent of orientation).
#[derive(Debug, Clone)]
pub enum MaterialSpec {
    Isotropic {
        lambda_gpa: f64,
        mu_gpa: f64,
        gc_n_per_mm: f64,
    },
    Anisotropic {
        c_ref: StiffnessVoigt,
        theta_rad: f64,
        gc_n_per_mm: f64,
    },
}

impl MaterialSpec {
    pub fn gc(&self) -> f64 {
        match self {
            MaterialSpec::Isotropic { gc_n_per_mm, .. } => *gc_n_per_mm,
            MaterialSpec::Anisotropic { gc_n_per_mm, .. } => *gc_n_per_mm,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MaterialSpec::Isotropic {
                lambda_gpa,
                mu_gpa,
                gc_n_per_mm,
            } => {
                if !(*lambda_gpa > 0.0 && *mu_gpa > 0.0) {
                    return Err(Error::Material("lambda and mu must be positive".into()));
                }
                if !(*gc_n_per_mm > 0.0) {
                    return Err(Error::Material("Gc must be positive".into()));
                }
            }
            MaterialSpec::Anisotropic {
                theta_rad,
                gc_n_per_mm,
                ..
            } => {
                if !(*gc_n_per_mm > 0.0) {
                    return Err(Error::Material("Gc must be positive".into()));
                }
                if !(0.0..=std::f64::consts::PI).contains(theta_rad) {
                    return Err(Error::Material(format!(
                        "theta = {theta_rad} outside [0, pi]"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Voigt-space rotation matrix P(θ) for plane anisotropy.
pub fn rotation_matrix(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(
        c * c, s * s, -2.0 * c * s,
        s * s, c * c, 2.0 * c * s,
        c * s, -c * s, c * c - s * s,
    )
}

/// Effective stiffness: C_0 for isotropy, P(θ)ᵀ C_ref P(θ) for anisotropy.
pub fn effective_stiffness(spec: &MaterialSpec) -> Result<StiffnessVoigt> {
    match spec {
        MaterialSpec::Isotropic {
            lambda_gpa, mu_gpa, ..
        } => Ok(StiffnessVoigt::isotropic_plane_strain(*lambda_gpa, *mu_gpa)),
        MaterialSpec::Anisotropic { c_ref, theta_rad, .. } => {
            let p = rotation_matrix(*theta_rad);
            StiffnessVoigt::new(p.transpose() * c_ref.matrix() * p)
        }
    }
}

/// Elastic energy density ½ εᵛ·C·εᵛ (GPa).
pub fn energy_density(c: &StiffnessVoigt, eps_v: [f64; 3]) -> f64 {
    let e = Vector3::new(eps_v[0], eps_v[1], eps_v[2]);
    0.5 * (c.matrix() * e).dot(&e)
}

/// Crack-driving energy density (GPa).
///
/// Isotropic materials use the volumetric/deviatoric split
/// K/2 ⟨tr ε⟩₊² + μ εᵈᵉᵛ:εᵈᵉᵛ with the 2D bulk modulus K = λ + μ, so that
/// pure compression drives no fracture. For anisotropy no strain
/// decomposition is used and the full energy density drives the crack.
pub fn tensile_energy_density(spec: &MaterialSpec, c_eff: &StiffnessVoigt, eps_v: [f64; 3]) -> f64 {
    match spec {
        MaterialSpec::Isotropic {
            lambda_gpa, mu_gpa, ..
        } => {
            let k2d = lambda_gpa + mu_gpa;
            let tr = eps_v[0] + eps_v[1];
            let tr_pos = tr.max(0.0);
            let exy = 0.5 * eps_v[2];
            let dxx = eps_v[0] - 0.5 * tr;
            let dyy = eps_v[1] - 0.5 * tr;
            let dev_dd = dxx * dxx + dyy * dyy + 2.0 * exy * exy;
            0.5 * k2d * tr_pos * tr_pos + mu_gpa * dev_dd
        }
        MaterialSpec::Anisotropic { .. } => energy_density(c_eff, eps_v),
    }
}
