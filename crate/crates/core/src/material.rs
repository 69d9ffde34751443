//! Plate constitutive data.
//!
//! Symmetric 2x2 tensors are written in Voigt form. Moments are stored as
//! `(m_xx, m_yy, m_xy)` and strains as `(e_xx, e_yy, 2 e_xy)`, so that
//! `m : e` is the plain dot product of the two 3-vectors.

use nalgebra::Matrix3;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaterialError {
    #[error("Young's modulus must be positive, got {0}")]
    YoungsModulus(f64),
    #[error("Poisson ratio must lie in [0, 0.5), got {0}")]
    PoissonRatio(f64),
    #[error("shear correction factor must be positive, got {0}")]
    ShearCorrection(f64),
    #[error("thickness must be positive for a solve, got {0}")]
    Thickness(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub shear_correction: f64,
    pub thickness: f64,
}

impl MaterialParams {
    pub fn new(youngs_modulus: f64, poisson_ratio: f64, shear_correction: f64, thickness: f64) -> Self {
        Self { youngs_modulus, poisson_ratio, shear_correction, thickness }
    }

    pub fn validate(&self) -> Result<(), MaterialError> {
        if !(self.youngs_modulus > 0.0) {
            return Err(MaterialError::YoungsModulus(self.youngs_modulus));
        }
        if !(0.0..0.5).contains(&self.poisson_ratio) {
            return Err(MaterialError::PoissonRatio(self.poisson_ratio));
        }
        if !(self.shear_correction > 0.0) {
            return Err(MaterialError::ShearCorrection(self.shear_correction));
        }
        if !(self.thickness >= 0.0) {
            return Err(MaterialError::Thickness(self.thickness));
        }
        Ok(())
    }

    pub fn with_thickness(self, thickness: f64) -> Self {
        Self { thickness, ..self }
    }

    /// Weight `mu / t^2` of the shear term.
    pub fn shear_penalty(&self) -> Result<f64, MaterialError> {
        if !(self.thickness > 0.0) {
            return Err(MaterialError::Thickness(self.thickness));
        }
        Ok(derive_tensors(self)?.shear_modulus / (self.thickness * self.thickness))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendingTensors {
    /// Bending moduli: Voigt strain to Voigt moment.
    pub bending: Matrix3<f64>,
    /// Compliance, the inverse of `bending`.
    pub compliance: Matrix3<f64>,
    pub shear_modulus: f64,
}

pub fn derive_tensors(p: &MaterialParams) -> Result<BendingTensors, MaterialError> {
    p.validate()?;
    let (e, nu) = (p.youngs_modulus, p.poisson_ratio);
    let d = e / (12.0 * (1.0 - nu * nu));
    #[rustfmt::skip]
    let bending = Matrix3::new(
        d,      d * nu, 0.0,
        d * nu, d,      0.0,
        0.0,    0.0,    d * (1.0 - nu) / 2.0,
    );
    let a = 12.0 / e;
    #[rustfmt::skip]
    let compliance = Matrix3::new(
        a,       -a * nu, 0.0,
        -a * nu, a,       0.0,
        0.0,     0.0,     a * 2.0 * (1.0 + nu),
    );
    Ok(BendingTensors {
        bending,
        compliance,
        shear_modulus: p.shear_correction * e / (2.0 * (1.0 + nu)),
    })
}
