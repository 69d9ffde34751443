//! Element-local shape functions obtained by inverting the matrix of degree
//! of freedom functionals applied to a monomial basis.

use nalgebra::DMatrix;

use super::poly::{self, LocalFrame};
use super::SpaceKind;
use crate::mesh::{Point, TriMesh};
use crate::quadrature::{segment_rule, triangle_rule, MAX_DEGREE};

/// A linear functional `u -> sum_q w_q . u(x_q)` over component-weighted
/// points. Scalar fields use component 0, vector fields components 0..2 and
/// symmetric tensors the Voigt components `(xx, yy, xy)`.
pub(crate) type Functional = Vec<(Point, [f64; 3])>;

pub(crate) fn apply(functional: &Functional, f: &mut impl FnMut(Point) -> [f64; 3]) -> f64 {
    functional
        .iter()
        .map(|(p, w)| {
            let v = f(*p);
            w[0] * v[0] + w[1] * v[1] + w[2] * v[2]
        })
        .sum()
}

/// Physical points and weights of a triangle rule on triangle `t`.
pub(crate) fn volume_points(mesh: &TriMesh, t: usize, degree: usize) -> Vec<(Point, f64)> {
    let rule = triangle_rule(degree.min(MAX_DEGREE)).expect("degree is clamped");
    let [a, b, c] = mesh.triangle(t).map(|v| mesh.vertex(v));
    let jac = 2.0 * mesh.area(t);
    rule.iter()
        .map(|(r, w)| {
            let x = a[0] + r[0] * (b[0] - a[0]) + r[1] * (c[0] - a[0]);
            let y = a[1] + r[0] * (b[1] - a[1]) + r[1] * (c[1] - a[1]);
            ([x, y], w * jac)
        })
        .collect()
}

/// Points `x(s)` on edge `e` for the global parameter `s` in [0, 1] running
/// from its lower to its higher vertex, with parameter weights.
pub(crate) fn edge_points(mesh: &TriMesh, e: usize, degree: usize) -> Vec<(Point, f64, f64)> {
    let rule = segment_rule(degree.min(MAX_DEGREE)).expect("degree is clamped");
    let [a, b] = mesh.edge(e).map(|v| mesh.vertex(v));
    rule.iter()
        .map(|(s, w)| {
            let s = s[0];
            ([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])], s, w)
        })
        .collect()
}

fn lagrange_functionals(mesh: &TriMesh, t: usize, p: usize) -> Vec<Functional> {
    let tri = mesh.triangle(t);
    let v = tri.map(|i| mesh.vertex(i));
    let mut out: Vec<Functional> = v.iter().map(|&x| vec![(x, [1.0, 0.0, 0.0])]).collect();
    for e in mesh.triangle_edges(t) {
        let [a, b] = mesh.edge(e).map(|i| mesh.vertex(i));
        for m in 1..p {
            let s = m as f64 / p as f64;
            out.push(vec![([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])], [1.0, 0.0, 0.0])]);
        }
    }
    for (i, j) in interior_lattice(p) {
        let (si, sj) = (i as f64 / p as f64, j as f64 / p as f64);
        let x = v[0][0] + si * (v[1][0] - v[0][0]) + sj * (v[2][0] - v[0][0]);
        let y = v[0][1] + si * (v[1][1] - v[0][1]) + sj * (v[2][1] - v[0][1]);
        out.push(vec![([x, y], [1.0, 0.0, 0.0])]);
    }
    out
}

/// Strictly interior barycentric lattice points `(i, j)` of degree `p`.
pub(crate) fn interior_lattice(p: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 1..p {
        for i in 1..p {
            if i + j < p {
                out.push((i, j));
            }
        }
    }
    out
}

/// Moments `int_0^1 (w . u)(x(s)) L_j(s) ds`, `j = 0..=order`, on edge `e`
/// for the constant component weights `w`.
fn edge_moments(mesh: &TriMesh, e: usize, order: usize, weight: [f64; 3], quad: usize) -> Vec<Functional> {
    let pts = edge_points(mesh, e, quad);
    (0..=order)
        .map(|j| {
            pts.iter()
                .map(|&(x, s, w)| {
                    let l = w * poly::legendre(j, s);
                    (x, [weight[0] * l, weight[1] * l, weight[2] * l])
                })
                .collect()
        })
        .collect()
}

/// Voigt weights extracting `n . tau . n`.
pub(crate) fn nn_weights(n: Point) -> [f64; 3] {
    [n[0] * n[0], n[1] * n[1], 2.0 * n[0] * n[1]]
}

/// Interior moments `|T|^-1 int_T u . q_i` against an L2(T)-orthonormalised
/// version of the test fields `tests`, which hold polynomials of degree at
/// most `degree`.
fn interior_moments(
    mesh: &TriMesh,
    t: usize,
    degree: usize,
    quad: usize,
    tests: &[Box<dyn Fn(Point) -> [f64; 3] + '_>],
) -> Vec<Functional> {
    let n = tests.len();
    let inv_area = 1.0 / mesh.area(t);
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let mut g = DMatrix::<f64>::zeros(n, n);
    for (x, w) in volume_points(mesh, t, 2 * degree) {
        let v: Vec<[f64; 3]> = tests.iter().map(|q| q(x)).collect();
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] += w * inv_area * dot(v[i], v[j]);
            }
        }
    }
    let linv = g.cholesky().expect("test fields are independent").l().try_inverse().expect("triangular");
    let pts = volume_points(mesh, t, quad);
    let vals: Vec<Vec<[f64; 3]>> = pts.iter().map(|&(x, _)| tests.iter().map(|q| q(x)).collect()).collect();
    (0..n)
        .map(|i| {
            pts.iter()
                .zip(&vals)
                .map(|(&(x, w), v)| {
                    let mut wt = [0.0; 3];
                    for j in 0..=i {
                        for c in 0..3 {
                            wt[c] += linv[(i, j)] * v[j][c];
                        }
                    }
                    (x, wt.map(|c| c * w * inv_area))
                })
                .collect()
        })
        .collect()
}

fn rotation_functionals(mesh: &TriMesh, t: usize, k: usize, quad: usize) -> Vec<Functional> {
    let mut out = Vec::new();
    for e in mesh.triangle_edges(t) {
        let tau = mesh.edge_tangent(e);
        out.extend(edge_moments(mesh, e, k, [tau[0], tau[1], 0.0], quad));
    }
    if k >= 2 {
        // Raviart-Thomas fields of index k - 2.
        let frame = LocalFrame::for_triangle(mesh, t);
        let mut tests: Vec<Box<dyn Fn(Point) -> [f64; 3]>> = Vec::new();
        for i in 0..poly::dim(k - 2) {
            tests.push(Box::new(move |x: Point| [poly::jet(&frame, k - 2, x).val[i], 0.0, 0.0]));
            tests.push(Box::new(move |x: Point| [0.0, poly::jet(&frame, k - 2, x).val[i], 0.0]));
        }
        for (a, b) in poly::exponents(k - 2).into_iter().filter(|(a, b)| a + b == k - 2) {
            tests.push(Box::new(move |x: Point| {
                let l = frame.local(x);
                let m = l[0].powi(a as i32) * l[1].powi(b as i32);
                [l[0] * m, l[1] * m, 0.0]
            }));
        }
        out.extend(interior_moments(mesh, t, k - 1, quad, &tests));
    }
    out
}

fn moment_functionals(mesh: &TriMesh, t: usize, k: usize, quad: usize) -> Vec<Functional> {
    let mut out = Vec::new();
    for e in mesh.triangle_edges(t) {
        out.extend(edge_moments(mesh, e, k, nn_weights(mesh.edge_normal(e)), quad));
    }
    // Symmetric tensors of degree k - 1, component by component.
    let frame = LocalFrame::for_triangle(mesh, t);
    let mut tests: Vec<Box<dyn Fn(Point) -> [f64; 3]>> = Vec::new();
    for c in 0..3 {
        for i in 0..poly::dim(k - 1) {
            tests.push(Box::new(move |x: Point| {
                let mut v = [0.0; 3];
                v[c] = poly::jet(&frame, k - 1, x).val[i];
                v
            }));
        }
    }
    out.extend(interior_moments(mesh, t, k - 1, quad, &tests));
    out
}

/// All local functionals of triangle `t`, integrated with rules of exactness
/// `quad`. Ordering: vertex (Lagrange only), then local edges 0, 1, 2, then
/// interior.
pub(crate) fn element_functionals(mesh: &TriMesh, t: usize, kind: SpaceKind, quad: usize) -> Vec<Functional> {
    match kind {
        SpaceKind::Deflection { order } => lagrange_functionals(mesh, t, order),
        SpaceKind::Rotation { order } => rotation_functionals(mesh, t, order, quad),
        SpaceKind::Moment { order, .. } => moment_functionals(mesh, t, order, quad),
        SpaceKind::Multiplier { .. } => Vec::new(),
    }
}

/// Shape function values and physical derivatives at one point, indexed
/// `[shape][component]`.
#[derive(Debug, Clone)]
pub(crate) struct LocalEval {
    pub val: Vec<[f64; 3]>,
    pub dx: Vec<[f64; 3]>,
    pub dy: Vec<[f64; 3]>,
    pub dxx: Vec<[f64; 3]>,
    pub dyy: Vec<[f64; 3]>,
    pub dxy: Vec<[f64; 3]>,
}

/// Inverse computed after scaling rows and columns to unit max norm, then
/// polished with one step of Newton-Schulz refinement.
fn equilibrated_inverse(mut d: DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = d.nrows();
    let orig = d.clone();
    let mut r = vec![1.0; n];
    let mut c = vec![1.0; n];
    for _ in 0..3 {
        for i in 0..n {
            let m = d.row(i).amax();
            if m == 0.0 {
                return None;
            }
            r[i] /= m;
            d.row_mut(i).scale_mut(1.0 / m);
        }
        for j in 0..n {
            let m = d.column(j).amax();
            c[j] /= m;
            d.column_mut(j).scale_mut(1.0 / m);
        }
    }
    let inv = d.try_inverse()?;
    // orig^-1 = C inv R with C, R the accumulated diagonal scalings.
    let mut x = DMatrix::from_fn(n, n, |i, j| c[i] * inv[(i, j)] * r[j]);
    let residual = DMatrix::identity(n, n) - &orig * &x;
    x += &x * residual;
    Some(x)
}

#[derive(Debug, Clone)]
pub(crate) struct LocalBasis {
    frame: LocalFrame,
    degree: usize,
    ncomp: usize,
    /// Maps raw box-Legendre values to an L2(T)-orthonormal basis.
    ortho: DMatrix<f64>,
    /// `(ncomp * npoly) x nshape`; column `j` holds shape `j` in the
    /// orthonormal basis.
    coeffs: DMatrix<f64>,
}

/// `L^-1` for the Cholesky factor `L` of the raw basis Gram matrix on `t`.
fn orthonormalizer(mesh: &TriMesh, t: usize, frame: &LocalFrame, degree: usize) -> Option<DMatrix<f64>> {
    let n = poly::dim(degree);
    let mut g = DMatrix::<f64>::zeros(n, n);
    let area = mesh.area(t);
    for (x, w) in volume_points(mesh, t, 2 * degree) {
        let v = nalgebra::DVector::from_vec(poly::jet(frame, degree, x).val);
        g.ger(w / area, &v, &v, 1.0);
    }
    let l = g.cholesky()?.l();
    l.try_inverse()
}

impl LocalBasis {
    /// Returns `None` when the functionals are not unisolvent.
    pub fn new(mesh: &TriMesh, t: usize, degree: usize, ncomp: usize, functionals: &[Functional]) -> Option<Self> {
        let frame = LocalFrame::for_triangle(mesh, t);
        let ortho = orthonormalizer(mesh, t, &frame, degree)?;
        let npoly = poly::dim(degree);
        let n = ncomp * npoly;
        if functionals.len() != n {
            return None;
        }
        let mut d = DMatrix::zeros(n, n);
        for (l, func) in functionals.iter().enumerate() {
            for (x, w) in func {
                let q = &ortho * nalgebra::DVector::from_vec(poly::jet(&frame, degree, *x).val);
                for c in 0..ncomp {
                    if w[c] != 0.0 {
                        for i in 0..npoly {
                            d[(l, c * npoly + i)] += w[c] * q[i];
                        }
                    }
                }
            }
        }
        let coeffs = equilibrated_inverse(d)?;
        Some(Self { frame, degree, ncomp, ortho, coeffs })
    }

    pub fn nshape(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn eval(&self, point: Point) -> LocalEval {
        let m = poly::jet(&self.frame, self.degree, point);
        let npoly = m.val.len();
        let ns = self.nshape();
        let combine = |raw: &[f64]| -> Vec<[f64; 3]> {
            let src = &self.ortho * nalgebra::DVector::from_column_slice(raw);
            (0..ns)
                .map(|j| {
                    let col = self.coeffs.column(j);
                    let mut out = [0.0; 3];
                    for (c, o) in out.iter_mut().enumerate().take(self.ncomp) {
                        let base = c * npoly;
                        *o = (0..npoly).map(|i| col[base + i] * src[i]).sum();
                    }
                    out
                })
                .collect()
        };
        LocalEval {
            val: combine(&m.val),
            dx: combine(&m.dx),
            dy: combine(&m.dy),
            dxx: combine(&m.dxx),
            dyy: combine(&m.dyy),
            dxy: combine(&m.dxy),
        }
    }
}
