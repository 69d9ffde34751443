use super::*;
use crate::fespace::interpolate_gradient;
use crate::mesh::unit_square_mesh;
use crate::solver::{solve_system, Method};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

fn benchmark(t: f64) -> MaterialParams {
    MaterialParams::new(12.0, 0.0, 5.0 / 6.0, t)
}

fn square(n: usize) -> Arc<TriMesh> {
    Arc::new(unit_square_mesh(n).unwrap())
}

fn clamped() -> BCSpec {
    BCSpec::uniform(MarkerBc::clamped())
}

fn random(rng: &mut StdRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn clamped_square_dimensions() {
    let mesh = square(2);
    let mono = Spaces::new(mesh.clone(), 1, &clamped(), false).unwrap();
    let sys = assemble(&mono, &benchmark(1e-3), &LoadSpec::none(), &clamped()).unwrap();
    assert_eq!((sys.layout.moment.len(), sys.layout.rotation.len(), sys.layout.deflection.len()), (56, 16, 9));
    assert_eq!(sys.dim(), 56 + 16 + 9);
    let hyb = Spaces::new(mesh, 1, &clamped(), true).unwrap();
    let sys = assemble(&hyb, &benchmark(1e-3), &LoadSpec::none(), &clamped()).unwrap();
    assert_eq!(sys.dim(), 72 + 16 + 9 + 16);
}

#[test]
fn zero_load_gives_zero_solution() {
    for hybrid in [false, true] {
        let sp = Spaces::new(square(2), 1, &clamped(), hybrid).unwrap();
        let sys = assemble(&sp, &benchmark(1e-2), &LoadSpec::none(), &clamped()).unwrap();
        assert!(sys.rhs.iter().all(|&v| v == 0.0));
        let rep = solve_system(&sys, Method::Direct, 1e-10).unwrap();
        assert!(rep.solution.iter().all(|&v| v == 0.0));
    }
}

#[test]
fn system_is_symmetric() {
    for (k, hybrid) in [(1, false), (2, false), (1, true), (3, true)] {
        let sp = Spaces::new(square(3), k, &clamped(), hybrid).unwrap();
        let sys = assemble(&sp, &MaterialParams::new(7.0, 0.3, 5.0 / 6.0, 0.05), &LoadSpec::none(), &clamped()).unwrap();
        assert!(sys.matrix.is_symmetric());
        assert!(sys.matrix.symmetry_error() <= 1e-13 * sys.matrix.max_abs());
    }
}

#[test]
fn compliance_block_is_positive_definite() {
    let sp = Spaces::new(square(2), 2, &clamped(), true).unwrap();
    let sys = assemble(&sp, &MaterialParams::new(3.0, 0.25, 5.0 / 6.0, 0.1), &LoadSpec::none(), &clamped()).unwrap();
    let eig = sys.a_mm().to_dense().symmetric_eigenvalues();
    assert!(eig.min() > 0.0);
}

#[test]
fn shear_block_annihilates_gradients() {
    let mut rng = StdRng::seed_from_u64(11);
    for k in 1..=3 {
        let sp = Spaces::new(square(3), k, &clamped(), false).unwrap();
        let sys = assemble(&sp, &benchmark(1e-3), &LoadSpec::none(), &clamped()).unwrap();
        let l = &sys.layout;
        let mut w = vec![0.0; sp.deflection.ndof()];
        for &d in &l.deflection.free {
            w[d] = rng.random_range(-1.0..1.0);
        }
        let theta = interpolate_gradient(&sp.deflection, &sp.rotation, &w).unwrap();
        for (d, v) in theta.iter().enumerate() {
            if sp.rotation.is_essential(d) {
                assert!(v.abs() < 1e-12);
            }
        }
        let mut x: Vec<f64> = l.rotation.free.iter().map(|&d| theta[d]).collect();
        x.extend(l.deflection.free.iter().map(|&d| w[d]));
        let s = sys.s_block();
        let r = s.mul_vec(&x);
        let scale = s.max_abs() * norm(&x);
        assert!(norm(&r) <= 1e-12 * scale, "k={k}: {}", norm(&r) / scale);
        // Positive on anything else.
        let y = random(&mut rng, x.len());
        let sy: f64 = s.mul_vec(&y).iter().zip(&y).map(|(a, b)| a * b).sum();
        assert!(sy > 0.0);
    }
}

#[test]
fn duality_of_constant_fields_vanishes() {
    let mesh = Arc::new(crate::mesh::TriMesh::new(vec![[0.1, 0.0], [1.3, 0.4], [0.2, 0.9]], vec![[0, 1, 2]], &[]).unwrap());
    let bc = BCSpec::uniform(MarkerBc::free());
    let sp = Spaces::new(mesh, 2, &bc, true).unwrap();
    let tau = sp.moment.interpolate(|_| [1.0, 1.0, 0.0]);
    let eta = sp.rotation.interpolate(|_| [1.0, 0.0, 0.0]);
    let tabs = element_tables(&sp, 0);
    let b = duality_product_element(&tabs.m, &tabs.th);
    let lt = sp.moment.element_dofs(0).iter().map(|&d| tau[d]).collect::<Vec<_>>();
    let le = sp.rotation.element_dofs(0).iter().map(|&d| eta[d]).collect::<Vec<_>>();
    let v = nalgebra::DVector::from_vec(lt).dot(&(b * nalgebra::DVector::from_vec(le)));
    assert!(v.abs() < 1e-13, "{v}");
}

#[test]
fn duality_with_zero_normal_moments_is_a_volume_integral() {
    let mut rng = StdRng::seed_from_u64(5);
    for k in 1..=2 {
        let mesh = square(2);
        let bc = BCSpec::uniform(MarkerBc::free());
        let sp = Spaces::new(mesh.clone(), k, &bc, false).unwrap();
        let mut tau = random(&mut rng, sp.moment.ndof());
        for e in 0..mesh.num_edges() {
            for &d in sp.moment.edge_dofs(e) {
                tau[d] = 0.0;
            }
        }
        let w = random(&mut rng, sp.deflection.ndof());
        let eta = interpolate_gradient(&sp.deflection, &sp.rotation, &w).unwrap();
        let (mut dual, mut direct, mut scale) = (0.0, 0.0, 0.0);
        for t in 0..mesh.num_triangles() {
            let tabs = element_tables(&sp, t);
            let b = duality_product_element(&tabs.m, &tabs.th);
            let dm = sp.moment.element_dofs(t);
            let dt = sp.rotation.element_dofs(t);
            for (i, &di) in dm.iter().enumerate() {
                for (j, &dj) in dt.iter().enumerate() {
                    dual += tau[di] * b[(i, j)] * eta[dj];
                }
            }
            let dw = sp.deflection.element_dofs(t);
            let vol = &tabs.w.volume;
            for q in 0..vol.points.len() {
                let mut m = [0.0; 3];
                for (j, &d) in dm.iter().enumerate() {
                    for c in 0..3 {
                        m[c] += tau[d] * tabs.m.volume.values[q][j][c];
                    }
                }
                let mut h = [0.0; 3];
                for (j, &d) in dw.iter().enumerate() {
                    for c in 0..3 {
                        h[c] += w[d] * vol.hessians[q][j][c];
                    }
                }
                let f = m[0] * h[0] + m[1] * h[1] + 2.0 * m[2] * h[2];
                direct -= vol.weights[q] * f;
                scale += vol.weights[q] * f.abs();
            }
        }
        assert!((dual - direct).abs() <= 1e-12 * scale, "k={k}: {dual} vs {direct}");
    }
}

#[test]
fn discrete_norm_of_identity() {
    let mesh = square(3);
    let bc = clamped();
    let sp = Spaces::new(mesh.clone(), 1, &bc, false).unwrap();
    let id = sp.moment.interpolate(|_| [1.0, 1.0, 0.0]);
    let n = discrete_moment_norm(&sp.moment, &id, &sp.deflection).unwrap();
    assert!((n.l2_sq - 2.0).abs() < 1e-12);
    let edges: f64 = (0..mesh.num_edges()).map(|e| mesh.edge_length(e).powi(2)).sum();
    assert!((n.edge_sq - edges).abs() < 1e-12);
    assert!(n.sup_sq >= 0.0);

    let zero = discrete_moment_norm(&sp.moment, &vec![0.0; id.len()], &sp.deflection).unwrap();
    assert_eq!(zero.total(), 0.0);

    let mut rng = StdRng::seed_from_u64(2);
    let m = random(&mut rng, sp.moment.ndof());
    let base = discrete_moment_norm(&sp.moment, &m, &sp.deflection).unwrap().total();
    for c in [-3.0, 0.5, 7.0] {
        let scaled: Vec<f64> = m.iter().map(|v| c * v).collect();
        let s = discrete_moment_norm(&sp.moment, &scaled, &sp.deflection).unwrap().total();
        assert!((s - c.abs() * base).abs() <= 1e-12 * s);
    }
}

#[test]
fn shear_recovery() {
    let mut rng = StdRng::seed_from_u64(9);
    let bc = clamped();
    let sp = Spaces::new(square(2), 2, &bc, false).unwrap();
    let w = random(&mut rng, sp.deflection.ndof());
    let grad = interpolate_gradient(&sp.deflection, &sp.rotation, &w).unwrap();
    let gamma = recover_shear(&sp, &benchmark(0.1), &grad, &w).unwrap();
    assert!(gamma.iter().all(|g| g.abs() < 1e-8));

    let theta = random(&mut rng, sp.rotation.ndof());
    let g1 = recover_shear(&sp, &benchmark(0.1), &theta, &w).unwrap();
    let g2 = recover_shear(&sp, &benchmark(0.2), &theta, &w).unwrap();
    for (a, b) in g1.iter().zip(&g2) {
        assert!((a - 4.0 * b).abs() <= 1e-12 * a.abs().max(1.0));
    }
    let r = shear_residual(&sp, &benchmark(0.1), &theta, &w, &g1).unwrap();
    assert!(r.relative() <= 1e-12, "{}", r.relative());
}

#[test]
fn rejects_mismatched_spaces_and_zero_thickness() {
    let bc = clamped();
    let mut sp = Spaces::new(square(2), 1, &bc, false).unwrap();
    assert!(matches!(assemble(&sp, &benchmark(0.0), &LoadSpec::none(), &bc), Err(AssemblyError::Material(_))));
    sp.rotation = build_space(square(2), SpaceKind::Rotation { order: 2 }, &[]).unwrap();
    assert!(matches!(assemble(&sp, &benchmark(0.1), &LoadSpec::none(), &bc), Err(AssemblyError::Incompatible(_))));
}

#[test]
fn edge_shear_load_bends_a_cantilever() {
    use crate::mesh::{plate_with_hole_mesh, HoleMarkers};
    let mesh = Arc::new(plate_with_hole_mesh(10.0, 2.0, 8, 0).unwrap());
    let bc = BCSpec::uniform(MarkerBc::free())
        .with(HoleMarkers::CLAMPED, MarkerBc::clamped())
        .with(HoleMarkers::TRACTION, MarkerBc::shear_load(field(|_| -1.0)));
    let mut tips = Vec::new();
    for hybrid in [false, true] {
        let sp = Spaces::new(mesh.clone(), 1, &bc, hybrid).unwrap();
        let sys = assemble(&sp, &benchmark(0.5), &LoadSpec::none(), &bc).unwrap();
        assert!(sys.rhs.iter().any(|&v| v != 0.0));
        let rep = solve_system(&sys, Method::Direct, 1e-10).unwrap();
        let (lo, hi) = rep.fields.deflection_range();
        assert!(lo < 0.0 && hi.abs() < 1e-12 * lo.abs(), "{lo} {hi}");
        tips.push(lo);
    }
    assert!((tips[0] - tips[1]).abs() <= 1e-8 * tips[0].abs());
}
