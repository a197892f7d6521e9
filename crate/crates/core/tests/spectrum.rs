use approx::assert_relative_eq;
use gkcs_core::quadrature::integrate_finite;
use gkcs_core::spectrum::{
    apply_hamiltonian, apply_ladder, eigenfunction, energy, fock_state, normalization_k, partner_potential,
    potential, superpotential, verify_operator_products, Direction, UniformGrid,
};
use gkcs_core::ModelParams;

const GRID_POINTS: usize = 2000;

// 8th-order central difference at a single point
fn fd_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let c = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    c.iter()
        .enumerate()
        .map(|(j, cj)| {
            let k = (j + 1) as f64;
            cj * (f(x + k * h) - f(x - k * h))
        })
        .sum::<f64>()
        / h
}

fn inner(p: &ModelParams, f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64) -> f64 {
    integrate_finite(|x| f(x) * g(x), 0.0, p.box_l(), 1e-12).unwrap().value
}

#[test]
fn eigenfunctions_are_orthonormal() {
    let p = ModelParams::new(1.0, 0.7, 1.0, 2.0).unwrap();
    let phis: Vec<_> = (0..=5).map(|n| eigenfunction(&p, n).unwrap()).collect();
    for (n, a) in phis.iter().enumerate() {
        for (m, b) in phis.iter().enumerate() {
            let ip = inner(&p, |x| a.evaluate(x), |x| b.evaluate(x));
            let delta = if n == m { 1.0 } else { 0.0 };
            assert!((ip - delta).abs() <= 1e-8, "<{n}|{m}> = {ip}");
        }
    }
}

#[test]
fn closed_form_norm_matches_quadrature() {
    for &(nu, beta) in &[(0.5, 0.0), (2.3, 2.0)] {
        let p = ModelParams::unit(nu, beta).unwrap();
        for n in [0, 4, 8] {
            let phi = eigenfunction(&p, n).unwrap();
            let q = integrate_finite(|x| phi.profile(x).norm_sqr(), 0.0, 1.0, 1e-13).unwrap().value;
            let k = normalization_k(&p, n).unwrap();
            assert_relative_eq!(1.0 / (k * k), q, max_relative = 1e-10);
        }
    }
}

#[test]
fn jacobi_and_gegenbauer_forms_agree() {
    for &nu in &[0.0, 0.5, 1.0, 2.3] {
        let p = ModelParams::unit(nu, 0.0).unwrap();
        for n in 0..=6 {
            let phi = eigenfunction(&p, n).unwrap();
            for i in 1..=50 {
                let x = i as f64 / 51.0;
                let a = phi.evaluate(x);
                let b = phi.evaluate_gegenbauer(x).unwrap();
                assert!((a - b).abs() <= 1e-9, "nu = {nu}, n = {n}, x = {x}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn fock_states_are_orthonormal() {
    let p = ModelParams::new(0.5, 0.0, 1.0, 1.0).unwrap();
    let states: Vec<_> = (0..=12).map(|n| fock_state(&p, n).unwrap()).collect();
    for (n, a) in states.iter().enumerate() {
        for (m, b) in states.iter().enumerate().skip(n) {
            let ip = inner(&p, |x| a.evaluate(x), |x| b.evaluate(x));
            let delta = if n == m { 1.0 } else { 0.0 };
            assert!((ip - delta).abs() <= 1e-10, "<{n}|{m}> = {ip}");
        }
    }
    let ground = eigenfunction(&p, 0).unwrap();
    for i in 1..20 {
        let x = i as f64 / 20.0;
        assert_relative_eq!(states[0].evaluate(x), ground.evaluate(x), max_relative = 1e-12);
    }
}

#[test]
fn superpotential_is_log_derivative_of_ground_state() {
    let p = ModelParams::new(1.3, 0.9, 2.0, 1.5).unwrap();
    let phi0 = eigenfunction(&p, 0).unwrap();
    for i in 1..=20 {
        let x = 1.5 * i as f64 / 21.0;
        let d = fd_derivative(|t| phi0.evaluate(t), x, 1e-3);
        let w = -p.hbar() * d / phi0.evaluate(x);
        let exact = superpotential(&p, x).unwrap();
        assert!((w - exact).abs() <= 1e-8 * (1.0 + exact.abs()), "x = {x}: {w} vs {exact}");
    }
}

#[test]
fn lowering_annihilates_the_ground_state() {
    for &(nu, beta) in &[(0.5, 0.0), (1.0, 0.7), (2.3, 2.0)] {
        let p = ModelParams::unit(nu, beta).unwrap();
        let grid = UniformGrid::interior(1.0, GRID_POINTS).unwrap();
        let phi0 = eigenfunction(&p, 0).unwrap();
        let f = grid.sample(|x| phi0.evaluate(x));
        let a = apply_ladder(&p, Direction::Lower, &f).unwrap();
        assert!(a.sup_norm() <= 1e-6 * f.sup_norm(), "nu = {nu}: {}", a.sup_norm());
    }
}

#[test]
fn lowering_maps_levels_to_the_partner_family() {
    for &(nu, beta) in &[(0.5, 0.7), (1.0, 0.0), (2.3, 2.0)] {
        let p = ModelParams::new(nu, beta, 1.7, 1.0).unwrap();
        let grid = UniformGrid::interior(1.0, GRID_POINTS).unwrap();
        for n in 0..4 {
            let upper = eigenfunction(&p, n + 1).unwrap();
            let partner = eigenfunction(&p.shifted(1), n).unwrap();
            let coeff = (p.scale_s() * (energy(&p, n + 1) - energy(&p, 0))).sqrt();
            let a = apply_ladder(&p, Direction::Lower, &grid.sample(|x| upper.evaluate(x))).unwrap();
            let want = a.resample(|x| coeff * partner.evaluate(x));
            let r = a.sup_distance(&want).unwrap();
            // x^{nu+1} wall behavior limits the stencil when nu < 1
            let tol = if nu >= 1.0 { 1e-6 } else { 1e-5 };
            assert!(r <= tol * want.sup_norm().max(1.0), "nu = {nu}, n = {n}: {r}");
            // and back up
            let up = apply_ladder(&p, Direction::Raise, &grid.sample(|x| partner.evaluate(x))).unwrap();
            let want = up.resample(|x| coeff * upper.evaluate(x));
            assert!(up.sup_distance(&want).unwrap() <= 1e-5 * want.sup_norm().max(1.0));
        }
    }
}

#[test]
fn partner_potential_identity_with_numerical_derivative() {
    let p = ModelParams::new(0.8, 1.4, 1.0, 1.0).unwrap();
    for i in 1..40 {
        let x = 0.05 + 0.9 * i as f64 / 40.0;
        let w = superpotential(&p, x).unwrap();
        let wp = fd_derivative(|t| superpotential(&p, t).unwrap(), x, 1e-3);
        let lhs = (w * w + p.hbar() * wp) / p.scale_s() + energy(&p, 0);
        let rhs = potential(&p.shifted(1), x).unwrap();
        assert!((lhs - rhs).abs() <= 1e-8 * rhs.abs().max(1.0), "x = {x}: {lhs} vs {rhs}");
    }
}

#[test]
fn shape_invariance_on_the_grid() {
    let p = ModelParams::new(2.0, 0.3, 3.0, 2.0).unwrap();
    let grid = UniformGrid::interior(2.0, GRID_POINTS).unwrap();
    let diff = grid.sample(|x| partner_potential(&p, x).unwrap() - potential(&p.shifted(1), x).unwrap());
    let scale = grid.sample(|x| potential(&p.shifted(1), x).unwrap().abs().max(1.0));
    for (d, s) in diff.values().iter().zip(scale.values()) {
        assert!(d.abs() <= 1e-8 * s);
    }
}

#[test]
fn raising_operator_intertwines_the_hamiltonians() {
    let p = ModelParams::unit(1.0, 0.7).unwrap();
    let grid = UniformGrid::interior(1.0, GRID_POINTS).unwrap();
    for m in 0..3 {
        let f = eigenfunction(&p.shifted(1), m).unwrap();
        let raised = apply_ladder(&p, Direction::Raise, &grid.sample(|x| f.evaluate(x))).unwrap();
        let lhs = apply_hamiltonian(&p, &raised).unwrap();
        let e = energy(&p.shifted(1), m);
        let rhs = lhs.resample(|_| 0.0);
        let rhs_values: Vec<f64> = raised.values()[4..raised.len() - 4].iter().map(|v| e * v).collect();
        let r = lhs
            .values()
            .iter()
            .zip(&rhs_values)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        let scale = rhs_values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        assert_eq!(rhs.len(), rhs_values.len());
        assert!(r <= 1e-5 * scale, "m = {m}: {r} vs scale {scale}");
    }
}

#[test]
fn operator_products_up_to_three_ladder_steps() {
    let p = ModelParams::unit(0.5, 0.7).unwrap();
    let grid = UniformGrid::interior(1.0, GRID_POINTS).unwrap();
    for n in 0..=3 {
        for r in verify_operator_products(&p, n, n + 1, &grid).unwrap() {
            assert!(r.passed, "{r}");
        }
    }
}

#[test]
fn b_dagger_b_expectation_is_not_the_t_product() {
    // informational: <B_1^dag B_1> in phi_1 is 11 c0^2 at nu = beta = 0, not 8
    let p = ModelParams::unit(0.0, 0.0).unwrap();
    let grid = UniformGrid::interior(1.0, GRID_POINTS).unwrap();
    let reports = verify_operator_products(&p, 1, 1, &grid).unwrap();
    let info = reports.iter().find(|r| r.informational).unwrap();
    assert_relative_eq!(info.residual, 3.0 / 8.0, max_relative = 1e-6);
}
