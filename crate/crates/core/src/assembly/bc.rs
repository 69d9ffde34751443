//! Boundary conditions and loads.
//!
//! Each boundary marker carries one condition per row: deflection,
//! tangential rotation and normal-normal moment. A row is either essential
//! (the trace is prescribed, zero when no data is given) or natural (the
//! paired quantity is prescribed, zero when no data is given).
//!
//! Tangential quantities refer to the counter-clockwise tangent
//! `t = (-n_y, n_x)` of the outward normal `n`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::fespace::Trace;
use crate::mesh::Point;

pub type ScalarField = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

pub fn field(f: impl Fn(Point) -> f64 + Send + Sync + 'static) -> ScalarField {
    Arc::new(f)
}

#[derive(Clone)]
pub enum Condition {
    Essential(Option<ScalarField>),
    Natural(Option<ScalarField>),
}

impl Condition {
    pub fn is_essential(&self) -> bool {
        matches!(self, Condition::Essential(_))
    }

    pub(crate) fn data(&self) -> Option<&ScalarField> {
        match self {
            Condition::Essential(d) | Condition::Natural(d) => d.as_ref(),
        }
    }
}

impl fmt::Debug for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, d) = match self {
            Condition::Essential(d) => ("Essential", d),
            Condition::Natural(d) => ("Natural", d),
        };
        write!(f, "{name}({})", if d.is_some() { "data" } else { "zero" })
    }
}

/// Conditions on one boundary portion.
///
/// * `deflection`: essential `w`, natural shear `mu t^-2 (d_n w - theta_n) = g0`.
/// * `rotation`: essential `theta_t`, natural `M_nt = g1`.
/// * `moment`: essential `m_nn`, natural `theta_n = g2`.
#[derive(Debug, Clone)]
pub struct MarkerBc {
    pub deflection: Condition,
    pub rotation: Condition,
    pub moment: Condition,
}

impl MarkerBc {
    pub fn clamped() -> Self {
        Self {
            deflection: Condition::Essential(None),
            rotation: Condition::Essential(None),
            moment: Condition::Natural(None),
        }
    }

    pub fn free() -> Self {
        Self {
            deflection: Condition::Natural(None),
            rotation: Condition::Natural(None),
            moment: Condition::Essential(None),
        }
    }

    /// Free edge carrying the shear load `g0`.
    pub fn shear_load(g0: ScalarField) -> Self {
        Self { deflection: Condition::Natural(Some(g0)), ..Self::free() }
    }

    pub fn simply_supported() -> Self {
        Self {
            deflection: Condition::Essential(None),
            rotation: Condition::Natural(None),
            moment: Condition::Essential(None),
        }
    }
}

/// Per-marker conditions; markers without an entry use `default`.
#[derive(Debug, Clone)]
pub struct BCSpec {
    pub default: MarkerBc,
    pub markers: BTreeMap<i32, MarkerBc>,
}

impl BCSpec {
    pub fn uniform(bc: MarkerBc) -> Self {
        Self { default: bc, markers: BTreeMap::new() }
    }

    pub fn with(mut self, marker: i32, bc: MarkerBc) -> Self {
        self.markers.insert(marker, bc);
        self
    }

    pub fn get(&self, marker: i32) -> &MarkerBc {
        self.markers.get(&marker).unwrap_or(&self.default)
    }

    /// Essential markers per trace for the markers present in `used`.
    pub(crate) fn essential(&self, used: impl IntoIterator<Item = i32>) -> [Vec<(i32, Trace)>; 3] {
        let mut out: [Vec<(i32, Trace)>; 3] = Default::default();
        for m in used {
            let bc = self.get(m);
            if bc.deflection.is_essential() {
                out[0].push((m, Trace::Deflection));
            }
            if bc.rotation.is_essential() {
                out[1].push((m, Trace::TangentialRotation));
            }
            if bc.moment.is_essential() {
                out[2].push((m, Trace::NormalMoment));
            }
        }
        out
    }
}

/// Scalar source `g` of the deflection equation (the physical volume load
/// is `t^2 g`).
#[derive(Clone)]
pub struct LoadSpec {
    pub g: Option<ScalarField>,
}

impl LoadSpec {
    pub fn none() -> Self {
        Self { g: None }
    }

    pub fn new(g: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        Self { g: Some(Arc::new(g)) }
    }
}

impl fmt::Debug for LoadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LoadSpec({})", if self.g.is_some() { "g" } else { "none" })
    }
}
