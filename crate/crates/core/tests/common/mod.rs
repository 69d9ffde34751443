//! Independent evaluations shared by the integration tests and the
//! acceptance harness.
#![allow(dead_code)]

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::RngExt;
use tdnns::assembly::{form_degrees, BCSpec, MarkerBc};
use tdnns::fespace::{build_space, element_shapes, interpolate_gradient, SpaceKind};
use tdnns::mesh::{unit_square_mesh, TriMesh};

pub fn square(n: usize) -> Arc<TriMesh> {
    Arc::new(unit_square_mesh(n).unwrap())
}

pub fn free() -> BCSpec {
    BCSpec::uniform(MarkerBc::free())
}

pub fn random_vec(rng: &mut StdRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Both element-wise forms of the duality product, summed over the mesh:
/// `-sum_T (int_T tau : eps(eta) - int_dT tau_nn eta_n)` and
/// `sum_T (int_T div tau . eta - int_dT tau_nt eta_t)`, plus the sum of
/// absolute integrand contributions as a scale.
pub struct DualityPair {
    pub strain_form: f64,
    pub divergence_form: f64,
    pub scale: f64,
}

pub fn duality_pair(mesh: &Arc<TriMesh>, k: usize, tau: &[f64], eta: &[f64]) -> DualityPair {
    let ms = build_space(mesh.clone(), SpaceKind::Moment { order: k, broken: false }, &[]).unwrap();
    let ts = build_space(mesh.clone(), SpaceKind::Rotation { order: k }, &[]).unwrap();
    duality_pair_on(&ms, &ts, tau, eta)
}

pub fn duality_pair_on(
    ms: &tdnns::fespace::FESpace,
    ts: &tdnns::fespace::FESpace,
    tau: &[f64],
    eta: &[f64],
) -> DualityPair {
    let (vd, ed) = form_degrees(ms.kind().moment_order());
    let mut out = DualityPair { strain_form: 0.0, divergence_form: 0.0, scale: 0.0 };
    for t in 0..ms.mesh().num_triangles() {
        let mt = element_shapes(ms, t, vd, ed);
        let tt = element_shapes(ts, t, vd, ed);
        let cm: Vec<f64> = ms.element_dofs(t).iter().map(|&d| tau[d]).collect();
        let ct: Vec<f64> = ts.element_dofs(t).iter().map(|&d| eta[d]).collect();
        let comb = |rows: &[f64], c: &[f64]| rows.iter().zip(c).map(|(a, b)| a * b).sum::<f64>();
        for q in 0..mt.volume.points.len() {
            let w = mt.volume.weights[q];
            let (mut m, mut e, mut dv, mut v) = ([0.0; 3], [0.0; 3], [0.0; 2], [0.0; 2]);
            for (j, &c) in cm.iter().enumerate() {
                for i in 0..3 {
                    m[i] += c * mt.volume.values[q][j][i];
                }
                for i in 0..2 {
                    dv[i] += c * mt.volume.divergences[q][j][i];
                }
            }
            for (j, &c) in ct.iter().enumerate() {
                for i in 0..3 {
                    e[i] += c * tt.volume.strains[q][j][i];
                }
                for i in 0..2 {
                    v[i] += c * tt.volume.values[q][j][i];
                }
            }
            let se = m[0] * e[0] + m[1] * e[1] + m[2] * e[2];
            let dve = dv[0] * v[0] + dv[1] * v[1];
            out.strain_form -= w * se;
            out.divergence_form += w * dve;
            out.scale += w * (se.abs() + dve.abs());
        }
        for (me, te) in mt.edges.iter().zip(&tt.edges) {
            for q in 0..me.points.len() {
                let w = me.weights[q];
                let nn: Vec<f64> = me.normal_trace[q].clone();
                let nt: Vec<f64> = me.tangential_trace[q].clone();
                let a = comb(&nn, &cm) * comb(&te.normal_trace[q], &ct);
                let b = comb(&nt, &cm) * comb(&te.tangential_trace[q], &ct);
                out.strain_form += w * a;
                out.divergence_form -= w * b;
                out.scale += w * (a.abs() + b.abs());
            }
        }
    }
    out
}

/// Largest pointwise `|grad w_h - theta_h|` at quadrature points after
/// `interpolate_gradient`, relative to the largest `|grad w_h|`.
pub fn gradient_inclusion_residual(mesh: &Arc<TriMesh>, k: usize, w: &[f64]) -> f64 {
    let ws = build_space(mesh.clone(), SpaceKind::Deflection { order: k + 1 }, &[]).unwrap();
    let ts = build_space(mesh.clone(), SpaceKind::Rotation { order: k }, &[]).unwrap();
    let theta = interpolate_gradient(&ws, &ts, w).unwrap();
    let (vd, ed) = form_degrees(k);
    let (mut worst, mut size) = (0.0f64, 0.0f64);
    for t in 0..mesh.num_triangles() {
        let wt = element_shapes(&ws, t, vd, ed);
        let tt = element_shapes(&ts, t, vd, ed);
        for q in 0..wt.volume.points.len() {
            let (mut g, mut th) = ([0.0; 2], [0.0; 2]);
            for (j, &d) in ws.element_dofs(t).iter().enumerate() {
                g[0] += w[d] * wt.volume.gradients[q][j][0];
                g[1] += w[d] * wt.volume.gradients[q][j][1];
            }
            for (j, &d) in ts.element_dofs(t).iter().enumerate() {
                th[0] += theta[d] * tt.volume.values[q][j][0];
                th[1] += theta[d] * tt.volume.values[q][j][1];
            }
            worst = worst.max((g[0] - th[0]).hypot(g[1] - th[1]));
            size = size.max(g[0].hypot(g[1]));
        }
    }
    worst / size
}

pub fn relative_difference(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let n: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    d / n
}
