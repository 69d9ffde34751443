mod common;

use rand::rngs::StdRng;
use rand::SeedableRng;
use tdnns::assembly::{assemble, Spaces};
use tdnns::fespace::{build_space, SpaceKind};
use tdnns::postprocess::ExactSolution;
use tdnns::solver::{relative_residual, solve_system, Method};

use common::*;

#[test]
fn duality_forms_agree_on_conforming_pairs() {
    let mut rng = StdRng::seed_from_u64(21);
    for n in [2, 3] {
        for k in 1..=3 {
            let mesh = square(n);
            let ms = build_space(mesh.clone(), SpaceKind::Moment { order: k, broken: false }, &[]).unwrap();
            let ts = build_space(mesh.clone(), SpaceKind::Rotation { order: k }, &[]).unwrap();
            for _ in 0..5 {
                let tau = random_vec(&mut rng, ms.ndof());
                let eta = random_vec(&mut rng, ts.ndof());
                let d = duality_pair_on(&ms, &ts, &tau, &eta);
                let err = (d.strain_form - d.divergence_form).abs();
                assert!(err <= 1e-12 * d.strain_form.abs(), "n={n} k={k}: {err:e} of {:e}", d.strain_form);
            }
        }
    }
}

#[test]
fn assembled_duality_block_matches_the_divergence_form() {
    // The assembled block uses the strain form; check it against the
    // divergence form computed independently.
    let mut rng = StdRng::seed_from_u64(4);
    let mesh = square(2);
    let sp = Spaces::new(mesh.clone(), 2, &free(), false).unwrap();
    let sys = assemble(&sp, &ExactSolution::clamped_square(0.1).material, &tdnns::assembly::LoadSpec::none(), &free()).unwrap();
    let b = sys.b_mtheta();
    let l = &sys.layout;
    // Free edges prescribe m_nn = 0, so essential coefficients stay zero.
    let mut tau = random_vec(&mut rng, sp.moment.ndof());
    let mut eta = random_vec(&mut rng, sp.rotation.ndof());
    for (d, v) in tau.iter_mut().enumerate() {
        if sp.moment.is_essential(d) {
            *v = 0.0;
        }
    }
    for (d, v) in eta.iter_mut().enumerate() {
        if sp.rotation.is_essential(d) {
            *v = 0.0;
        }
    }
    let xt: Vec<f64> = l.rotation.free.iter().map(|&d| eta[d]).collect();
    let bx = b.mul_vec(&xt);
    let assembled: f64 = l.moment.free.iter().zip(&bx).map(|(&d, v)| tau[d] * v).sum();
    let d = duality_pair(&mesh, 2, &tau, &eta);
    assert!((assembled - d.divergence_form).abs() <= 1e-12 * d.scale, "{assembled} vs {}", d.divergence_form);
}

#[test]
fn gradients_lie_in_the_rotation_space() {
    let mut rng = StdRng::seed_from_u64(8);
    for k in 1..=4 {
        let mesh = square(3);
        let ndof = build_space(mesh.clone(), SpaceKind::Deflection { order: k + 1 }, &[]).unwrap().ndof();
        for _ in 0..3 {
            let w = random_vec(&mut rng, ndof);
            let r = gradient_inclusion_residual(&mesh, k, &w);
            assert!(r <= 1e-12, "k={k}: {r:e}");
        }
    }
}

#[test]
fn hybrid_and_monolithic_solutions_coincide() {
    for k in 1..=3 {
        let ex = ExactSolution::clamped_square(0.05);
        let mesh = square(3);
        let mut sols = Vec::new();
        for hybrid in [true, false] {
            let sp = Spaces::new(mesh.clone(), k, &ex.bc(), hybrid).unwrap();
            let sys = assemble(&sp, &ex.material, &ex.load(), &ex.bc()).unwrap();
            let rep = solve_system(&sys, Method::Direct, 1e-10).unwrap();
            let mut v = rep.fields.rotation.clone();
            v.extend(&rep.fields.deflection);
            sols.push(v);
        }
        let d = relative_difference(&sols[0], &sols[1]);
        assert!(d <= 1e-8, "k={k}: {d:e}");
    }
}

#[test]
fn interpolated_exact_solution_has_vanishing_residual() {
    let ex = ExactSolution::clamped_square(0.1);
    let mut residuals = Vec::new();
    for n in [2, 4, 8] {
        let sp = Spaces::new(square(n), 1, &ex.bc(), false).unwrap();
        let sys = assemble(&sp, &ex.material, &ex.load(), &ex.bc()).unwrap();
        let l = &sys.layout;
        let m = sp.moment.interpolate(|p| ex.moment(p));
        let th = sp.rotation.interpolate(|p| {
            let v = ex.theta(p);
            [v[0], v[1], 0.0]
        });
        let w = sp.deflection.interpolate(|p| [ex.w(p), 0.0, 0.0]);
        let mut x = vec![0.0; sys.dim()];
        for (map, c) in [(&l.moment, &m), (&l.rotation, &th), (&l.deflection, &w)] {
            for (i, &d) in map.free.iter().enumerate() {
                x[map.offset + i] = c[d];
            }
        }
        residuals.push(relative_residual(&sys.matrix, &x, &sys.rhs));
    }
    assert!(residuals.windows(2).all(|p| p[1] < 0.5 * p[0]), "{residuals:?}");
}

#[test]
fn thickness_does_not_lock_the_deflection() {
    let mesh = square(8);
    let mut errs = Vec::new();
    for t in [1e-1, 1e-3, 1e-5] {
        let ex = ExactSolution::clamped_square(t);
        let sp = Spaces::new(mesh.clone(), 1, &ex.bc(), true).unwrap();
        let sys = assemble(&sp, &ex.material, &ex.load(), &ex.bc()).unwrap();
        let rep = solve_system(&sys, Method::Direct, 1e-10).unwrap();
        errs.push(tdnns::postprocess::l2_error(&sp.deflection, &rep.fields.deflection, |p| [ex.w(p), 0.0, 0.0]));
    }
    let (lo, hi) = errs.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &e| (a.min(e), b.max(e)));
    assert!(hi <= 3.0 * lo, "{errs:?}");
}
