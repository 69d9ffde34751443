//! Element-local polynomial bases and Legendre polynomials.
//!
//! The raw basis of `P^d` on a triangle is `P_a(X) P_b(Y)`, `a + b <= d`,
//! with `(X, Y)` the bounding box mapped to `[-1, 1]^2`. It is far better
//! conditioned than plain monomials at degree 4.

use crate::mesh::{Point, TriMesh};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LocalFrame {
    /// Bounding box centre.
    pub origin: Point,
    /// Diameter, for the isotropic coordinates.
    pub scale: f64,
    /// Bounding box half widths.
    pub half: [f64; 2],
}

impl LocalFrame {
    pub fn for_triangle(mesh: &TriMesh, t: usize) -> Self {
        let v = mesh.triangle(t).map(|i| mesh.vertex(i));
        let lo = [v.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min), v.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min)];
        let hi = [v.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max), v.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max)];
        Self {
            origin: [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])],
            scale: mesh.diameter(t),
            half: [0.5 * (hi[0] - lo[0]), 0.5 * (hi[1] - lo[1])],
        }
    }

    /// Isotropic coordinates `(x - origin) / scale`.
    pub fn local(&self, p: Point) -> [f64; 2] {
        [(p[0] - self.origin[0]) / self.scale, (p[1] - self.origin[1]) / self.scale]
    }

    fn boxed(&self, p: Point) -> [f64; 2] {
        [(p[0] - self.origin[0]) / self.half[0], (p[1] - self.origin[1]) / self.half[1]]
    }
}

/// Exponents `(a, b)` with `a + b <= degree`, by increasing total degree.
pub(crate) fn exponents(degree: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(dim(degree));
    for d in 0..=degree {
        for b in 0..=d {
            out.push((d - b, b));
        }
    }
    out
}

pub(crate) fn dim(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

/// Values and physical derivatives of every raw basis function at a point.
#[derive(Debug, Clone, Default)]
pub(crate) struct MonomialJet {
    pub val: Vec<f64>,
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
    pub dxx: Vec<f64>,
    pub dyy: Vec<f64>,
    pub dxy: Vec<f64>,
}

/// Legendre values with first and second derivatives on [-1, 1], up to `n`.
fn legendre_jet(x: f64, n: usize) -> [Vec<f64>; 3] {
    let mut p = vec![0.0; n + 1];
    let mut d1 = vec![0.0; n + 1];
    let mut d2 = vec![0.0; n + 1];
    p[0] = 1.0;
    if n >= 1 {
        p[1] = x;
        d1[1] = 1.0;
    }
    for k in 1..n {
        let kf = k as f64;
        p[k + 1] = ((2.0 * kf + 1.0) * x * p[k] - kf * p[k - 1]) / (kf + 1.0);
        d1[k + 1] = d1[k - 1] + (2.0 * kf + 1.0) * p[k];
        d2[k + 1] = d2[k - 1] + (2.0 * kf + 1.0) * d1[k];
    }
    [p, d1, d2]
}

pub(crate) fn jet(frame: &LocalFrame, degree: usize, point: Point) -> MonomialJet {
    let [xi, eta] = frame.boxed(point);
    let [px, px1, px2] = legendre_jet(xi, degree);
    let [py, py1, py2] = legendre_jet(eta, degree);
    let (sx, sy) = (1.0 / frame.half[0], 1.0 / frame.half[1]);
    let n = dim(degree);
    let mut j = MonomialJet {
        val: Vec::with_capacity(n),
        dx: Vec::with_capacity(n),
        dy: Vec::with_capacity(n),
        dxx: Vec::with_capacity(n),
        dyy: Vec::with_capacity(n),
        dxy: Vec::with_capacity(n),
    };
    for (a, b) in exponents(degree) {
        j.val.push(px[a] * py[b]);
        j.dx.push(sx * px1[a] * py[b]);
        j.dy.push(sy * px[a] * py1[b]);
        j.dxx.push(sx * sx * px2[a] * py[b]);
        j.dyy.push(sy * sy * px[a] * py2[b]);
        j.dxy.push(sx * sy * px1[a] * py1[b]);
    }
    j
}

/// Legendre polynomial of degree `n` shifted to [0, 1].
pub(crate) fn legendre(n: usize, s: f64) -> f64 {
    let x = 2.0 * s - 1.0;
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}
