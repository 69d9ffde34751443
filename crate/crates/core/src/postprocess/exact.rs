//! Closed-form solution of the clamped unit square benchmark.

use std::sync::Arc;

use crate::assembly::{BCSpec, LoadSpec, MarkerBc};
use crate::material::MaterialParams;
use crate::mesh::Point;

/// Clamped plate on the unit square with `E = 12`, `nu = 0`, `k_s = 5/6`,
/// whose rotation, deflection and load are known in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSolution {
    pub material: MaterialParams,
}

fn b3(s: f64) -> f64 {
    (s * (s - 1.0)).powi(3)
}

fn b2(s: f64) -> f64 {
    (s * (s - 1.0)).powi(2)
}

fn b1(s: f64) -> f64 {
    s * (s - 1.0)
}

fn q(s: f64) -> f64 {
    5.0 * s * s - 5.0 * s + 1.0
}

impl ExactSolution {
    pub fn clamped_square(thickness: f64) -> Self {
        Self { material: MaterialParams::new(12.0, 0.0, 5.0 / 6.0, thickness) }
    }

    fn nu(&self) -> f64 {
        self.material.poisson_ratio
    }

    pub fn theta(&self, [x, y]: Point) -> [f64; 2] {
        [b3(y) * b2(x) * (2.0 * x - 1.0), b3(x) * b2(y) * (2.0 * y - 1.0)]
    }

    pub fn w(&self, [x, y]: Point) -> f64 {
        let t = self.material.thickness;
        b3(x) * b3(y) / 3.0 - 2.0 * t * t / (5.0 * (1.0 - self.nu())) * (b3(y) * b1(x) * q(x) + b3(x) * b1(y) * q(y))
    }

    /// Source `g` of the deflection equation.
    pub fn g(&self, [x, y]: Point) -> f64 {
        let nu = self.nu();
        self.material.youngs_modulus / (1.0 - nu * nu)
            * (b1(y) * q(x) * (2.0 * b2(y) + b1(x) * q(y)) + b1(x) * q(y) * (2.0 * b2(x) + b1(y) * q(x)))
    }

    /// Bending moment `C eps(theta)` as `(m_xx, m_yy, m_xy)`.
    pub fn moment(&self, [x, y]: Point) -> [f64; 3] {
        // d/ds [b2(s) (2s - 1)] = 2 b1(s) (5s^2 - 5s + 1)
        let db2l = |s: f64| 2.0 * b1(s) * q(s);
        let db3 = |s: f64| 3.0 * b2(s) * (2.0 * s - 1.0);
        let exx = b3(y) * db2l(x);
        let eyy = b3(x) * db2l(y);
        let exy = 0.5 * (db3(y) * b2(x) * (2.0 * x - 1.0) + db3(x) * b2(y) * (2.0 * y - 1.0));
        let nu = self.nu();
        let d = self.material.youngs_modulus / (12.0 * (1.0 - nu * nu));
        [d * (exx + nu * eyy), d * (eyy + nu * exx), d * (1.0 - nu) * exy]
    }

    pub fn load(&self) -> LoadSpec {
        let s = *self;
        LoadSpec { g: Some(Arc::new(move |p| s.g(p))) }
    }

    pub fn bc(&self) -> BCSpec {
        BCSpec::uniform(MarkerBc::clamped())
    }
}
