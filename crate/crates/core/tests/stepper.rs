mod common;

use std::f64::consts::PI;

use dgtime_core::norms::{discrete_norm, SpaceTimeNormSpec};
use dgtime_core::spatial::apply_divergence;
use dgtime_core::stepper::{
    dg_solve_linear_nonautonomous, dg_solve_nonlinear, dg_step_nonlinear, radau_solve_linear, stage_rhs_averages, Damping,
    NewtonConfig, RhsMode, StageForcing,
};
use dgtime_core::{radau_tableau, Error, FluxFunction, Grid1D, SpatialNorm, TimePartition};
use proptest::prelude::*;

fn l2(grid: &Grid1D, u: &[f64]) -> f64 {
    SpatialNorm::Lr(2.0).eval(Some(grid), u).unwrap()
}

/// Discrete Dirichlet Laplacian eigenvalue of `sin(pi x / X)`.
fn sine_eigenvalue(grid: &Grid1D) -> f64 {
    let h = grid.spacing();
    let s = (PI * h / (2.0 * grid.length())).sin();
    -4.0 / (h * h) * s * s
}

/// One scalar Radau IIA step `(I - k lam A) Y = v 1 + k A phi`.
fn scalar_radau_step(q: usize, k: f64, lambda: f64, v: f64, phi: &[f64]) -> Vec<f64> {
    let tab = radau_tableau(q).unwrap();
    let mat = (0..q)
        .map(|i| (0..q).map(|j| f64::from(u8::from(i == j)) - k * lambda * tab.a(i, j)).collect())
        .collect();
    let rhs = (0..q).map(|i| v + k * (0..q).map(|j| tab.a(i, j) * phi[j]).sum::<f64>()).collect();
    common::dense_solve(mat, rhs)
}

#[test]
fn q1_step_is_implicit_euler_with_averaged_source() {
    let grid = Grid1D::new(1.0, 8).unwrap();
    let flux = FluxFunction::Cubic { strength: 1.0 };
    let tab = radau_tableau(1).unwrap();
    let (t_n, k) = (0.3f64, 0.2f64);
    // Quadratic in time, so the three-point Gauss average is exact.
    let source = |x: f64, t: f64| (PI * x).sin() * (1.0 + t * t);
    let mean = 1.0 + ((t_n + k).powi(3) - t_n.powi(3)) / (3.0 * k);
    let u_n = grid.sample(|x| 1.5 * (PI * x).sin() + 0.3 * x * (1.0 - x));
    let newton = NewtonConfig { tol: 1e-14, ..NewtonConfig::default() };
    let (stages, _) = dg_step_nonlinear(&flux, &grid, &tab, k, t_n, &u_n, Some(&source), &newton).unwrap();

    // Oracle: Newton with a finite-difference Jacobian on
    // G(Y) = Y - U_n - k (D f(D Y) + gbar).
    let gbar = grid.sample(|x| (PI * x).sin() * mean);
    let g = |y: &[f64]| -> Vec<f64> {
        let div = apply_divergence(&flux, &grid, y).unwrap();
        (0..8).map(|j| y[j] - u_n[j] - k * (div[j] + gbar[j])).collect()
    };
    let mut y = u_n.clone();
    for _ in 0..30 {
        let r = g(&y);
        let jac: Vec<Vec<f64>> = (0..8)
            .map(|row| {
                (0..8)
                    .map(|col| {
                        let mut yp = y.clone();
                        let mut ym = y.clone();
                        yp[col] += 1e-6;
                        ym[col] -= 1e-6;
                        (g(&yp)[row] - g(&ym)[row]) / 2e-6
                    })
                    .collect()
            })
            .collect();
        let d = common::dense_solve(jac, r);
        y.iter_mut().zip(&d).for_each(|(a, b)| *a -= b);
    }
    let gap = stages[0].iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(gap < 1e-12, "gap {gap:e}");
}

#[test]
fn linear_sine_mode_matches_scalar_radau() {
    let grid = Grid1D::new(1.0, 24).unwrap();
    let lambda = sine_eigenvalue(&grid);
    let mode = grid.sample(|x| (PI * x).sin());
    let heat = FluxFunction::Linear { scale: 1.0 };
    let newton = NewtonConfig { tol: 1e-14, ..NewtonConfig::default() };
    for q in 1..=3 {
        let tab = radau_tableau(q).unwrap();
        let part = TimePartition::new(0.5, 10).unwrap();
        let sol = dg_solve_nonlinear(&heat, &grid, None, &mode, &part, &tab, &newton).unwrap();
        let mut v = 1.0;
        for n in 0..10 {
            let y = scalar_radau_step(q, part.step(), lambda, v, &vec![0.0; q]);
            for i in 0..q {
                for (s, m) in sol.trajectory.radau_value(n, i).iter().zip(&mode) {
                    assert!((s - y[i] * m).abs() <= 1e-10 * v.abs(), "q={q} n={n}");
                }
            }
            v = y[q - 1];
        }
    }
}

#[test]
fn stationary_state_is_a_fixed_point() {
    let grid = Grid1D::new(1.0, 16).unwrap();
    let flux = FluxFunction::BoundedSlope { strength: 1.0 };
    let u_star = grid.sample(|x| 0.8 * (PI * x).sin() + x * (1.0 - x));
    let div = apply_divergence(&flux, &grid, &u_star).unwrap();
    let h = grid.spacing();
    let source = move |x: f64, _t: f64| -div[((x / h).round() as usize) - 1];
    for q in 1..=3 {
        let tab = radau_tableau(q).unwrap();
        let (stages, diag) =
            dg_step_nonlinear(&flux, &grid, &tab, 0.1, 0.0, &u_star, Some(&source), &NewtonConfig::default()).unwrap();
        assert_eq!(diag.iterations, 0);
        for s in &stages {
            assert_eq!(s, &u_star);
        }
    }
}

#[test]
fn single_interval_solve_is_one_step() {
    let grid = Grid1D::new(1.0, 12).unwrap();
    let flux = FluxFunction::Cubic { strength: 0.5 };
    let u0 = grid.sample(|x| (PI * x).sin());
    let source = |x: f64, t: f64| x * t;
    let newton = NewtonConfig::default();
    for q in 1..=3 {
        let tab = radau_tableau(q).unwrap();
        let part = TimePartition::new(0.25, 1).unwrap();
        let sol = dg_solve_nonlinear(&flux, &grid, Some(&source), &u0, &part, &tab, &newton).unwrap();
        let (stages, _) = dg_step_nonlinear(&flux, &grid, &tab, 0.25, 0.0, &u0, Some(&source), &newton).unwrap();
        for (i, s) in stages.iter().enumerate() {
            assert_eq!(sol.trajectory.radau_value(0, i), s.as_slice());
        }
        assert_eq!(sol.trajectory.initial_value(), Some(u0.as_slice()));
        assert_eq!(sol.reconstruction.nodal(0, 0), u0.as_slice());
    }
}

#[test]
fn zero_data_gives_zero_solution() {
    let grid = Grid1D::new(2.0, 10).unwrap();
    let part = TimePartition::new(1.0, 5).unwrap();
    for q in 1..=3 {
        let tab = radau_tableau(q).unwrap();
        let sol = dg_solve_nonlinear(&FluxFunction::BoundedSlope { strength: 1.0 }, &grid, None, &[0.0; 10], &part, &tab, &NewtonConfig::default())
            .unwrap();
        assert_eq!(sol.trajectory.max_interior_jump(), 0.0);
        assert!((0..5).all(|n| sol.trajectory.end_value(n).iter().all(|&v| v == 0.0)));
        let lin = dg_solve_linear_nonautonomous(&|_, _| 1.0, &grid, &|_, _| 0.0, &part, &tab, RhsMode::Quadrature).unwrap();
        assert!((0..5).all(|n| lin.trajectory.end_value(n).iter().all(|&v| v == 0.0)));
    }
}

#[test]
fn heat_is_dissipative() {
    let grid = Grid1D::new(1.0, 32).unwrap();
    let u0 = grid.sample(|x| (PI * x).sin() + 0.5 * (5.0 * PI * x).sin() + 0.2 * x * (1.0 - x));
    let part = TimePartition::new(0.4, 20).unwrap();
    for q in 1..=3 {
        let tab = radau_tableau(q).unwrap();
        let sol = dg_solve_nonlinear(&FluxFunction::Linear { scale: 1.0 }, &grid, None, &u0, &part, &tab, &NewtonConfig::default()).unwrap();
        let mut prev = l2(&grid, &u0);
        for n in 0..20 {
            let now = l2(&grid, sol.trajectory.end_value(n));
            assert!(now <= prev * (1.0 + 1e-14), "q={q} n={n}: {now} > {prev}");
            prev = now;
        }
    }
}

#[test]
fn newton_has_a_quadratic_tail() {
    let grid = Grid1D::new(1.0, 32).unwrap();
    let flux = FluxFunction::Cubic { strength: 1.0 };
    let u0 = grid.sample(|x| 1.5 * (PI * x).sin());
    let newton = NewtonConfig { tol: 1e-14, max_iter: 25, damping: Damping::None };
    let mut checked = 0;
    for q in 1..=3 {
        let tab = radau_tableau(q).unwrap();
        let sol = dg_solve_nonlinear(&flux, &grid, None, &u0, &TimePartition::new(0.2, 4).unwrap(), &tab, &newton).unwrap();
        for d in &sol.diagnostics {
            let scale = d.residuals[0];
            for w in d.residuals.windows(2) {
                if w[0] <= 1e-3 * scale && w[1] > 1e-12 {
                    assert!(w[1] <= 10.0 * w[0] * w[0] / scale, "{w:?} scale {scale:e}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn step_failures_name_the_interval() {
    let grid = Grid1D::new(1.0, 8).unwrap();
    let tab = radau_tableau(2).unwrap();
    // f' = cos p is negative for the initial gradients near 3.
    let bad = dgtime_core::spatial::CustomFlux { name: "sin", f: f64::sin, df: f64::cos };
    let u0 = grid.sample(|x| 3.0 * x * (1.0 - x) * 4.0);
    let err = dg_solve_nonlinear(&bad, &grid, None, &u0, &TimePartition::new(1.0, 2).unwrap(), &tab, &NewtonConfig::default()).unwrap_err();
    match err {
        Error::StepFailed { interval: 0, source } => assert!(matches!(*source, Error::Ellipticity { .. })),
        other => panic!("unexpected {other:?}"),
    }
    let strict = NewtonConfig { tol: 1e-15, max_iter: 1, damping: Damping::None };
    let u0 = grid.sample(|x| (PI * x).sin());
    let err = dg_solve_nonlinear(&FluxFunction::Cubic { strength: 1.0 }, &grid, None, &u0, &TimePartition::new(1.0, 2).unwrap(), &tab, &strict)
        .unwrap_err();
    assert!(matches!(err, Error::StepFailed { interval: 0, .. }));
}

#[test]
fn averages_and_quadrature_agree_for_low_degree_forcing() {
    let grid = Grid1D::new(1.0, 20).unwrap();
    let part = TimePartition::new(1.0, 8).unwrap();
    let coeff = |x: f64, _t: f64| 1.0 + 0.5 * x;
    for q in 1..=4 {
        let tab = radau_tableau(q).unwrap();
        let f = move |x: f64, t: f64| (PI * x).sin() * (0..q).map(|j| (1.0 + j as f64) * t.powi(j as i32)).sum::<f64>();
        let a = dg_solve_linear_nonautonomous(&coeff, &grid, &f, &part, &tab, RhsMode::Averages).unwrap();
        let b = dg_solve_linear_nonautonomous(&coeff, &grid, &f, &part, &tab, RhsMode::Quadrature).unwrap();
        for n in 0..8 {
            for i in 0..q {
                for (x, y) in a.trajectory.radau_value(n, i).iter().zip(b.trajectory.radau_value(n, i)) {
                    assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0), "q={q} n={n}");
                }
            }
        }
    }
}

#[test]
fn linear_dg_matches_radau_with_averages() {
    let grid = Grid1D::new(1.0, 32).unwrap();
    let coeff = |x: f64, _t: f64| 1.0 + 0.3 * (PI * x).cos().powi(2);
    let f = |x: f64, t: f64| (PI * x).sin() * (3.0 * t).cos() + 4.0 * x * (1.0 - x) * (-t).exp();
    for q in 1..=3 {
        for n in [1, 16, 64] {
            let tab = radau_tableau(q).unwrap();
            let part = TimePartition::new(1.0, n).unwrap();
            let dg = dg_solve_linear_nonautonomous(&coeff, &grid, &f, &part, &tab, RhsMode::Quadrature).unwrap();
            let rk = radau_solve_linear(&coeff, &grid, StageForcing::Averaged(&f), &part, &tab).unwrap();
            let dg_stages: Vec<Vec<f64>> = (0..n).flat_map(|l| (0..q).map(move |i| (l, i))).map(|(l, i)| dg.trajectory.radau_value(l, i).to_vec()).collect();
            let rk_stages: Vec<Vec<f64>> = rk.stages.iter().flatten().cloned().collect();
            assert!(common::relative_gap(&dg_stages, &rk_stages) <= 1e-10, "q={q} N={n}");
        }
    }
}

#[test]
fn radau_last_stage_is_the_update() {
    let grid = Grid1D::new(1.0, 10).unwrap();
    let part = TimePartition::new(1.0, 6).unwrap();
    for q in 1..=4 {
        let tab = radau_tableau(q).unwrap();
        let sol = radau_solve_linear(&|_, t| 1.0 + t, &grid, StageForcing::Pointwise(&|x, t| x + t), &part, &tab).unwrap();
        assert_eq!(sol.nodal.len(), 7);
        for n in 0..6 {
            assert_eq!(sol.nodal[n + 1], sol.stages[n][q - 1]);
        }
    }
}

#[test]
fn radau_q1_is_implicit_euler() {
    let grid = Grid1D::new(1.0, 9).unwrap();
    let part = TimePartition::new(1.0, 4).unwrap();
    let k = part.step();
    let lambda = sine_eigenvalue(&grid);
    let f = |x: f64, t: f64| (PI * x).sin() * (1.0 + t);
    let sol = radau_solve_linear(&|_, _| 1.0, &grid, StageForcing::Pointwise(&f), &part, &radau_tableau(1).unwrap()).unwrap();
    let mut v = 0.0;
    for n in 0..4 {
        v = (v + k * (1.0 + part.node(n + 1))) / (1.0 - k * lambda);
        for (j, s) in sol.nodal[n + 1].iter().enumerate() {
            assert!((s - v * (PI * grid.x(j)).sin()).abs() < 1e-12);
        }
    }
}

#[test]
fn radau_without_operator_is_quadrature() {
    let grid = Grid1D::new(1.0, 5).unwrap();
    let part = TimePartition::new(1.0, 3).unwrap();
    let f = |x: f64, t: f64| x * (2.0 * t).cos();
    for q in 1..=3 {
        let tab = radau_tableau(q).unwrap();
        let sol = radau_solve_linear(&|_, _| 0.0, &grid, StageForcing::Pointwise(&f), &part, &tab).unwrap();
        for n in 0..3 {
            for i in 0..q {
                for j in 0..5 {
                    let x = grid.x(j);
                    let quad: f64 = (0..q).map(|l| tab.a(i, l) * f(x, part.local_time(n, tab.nodes()[l]))).sum();
                    let expected = sol.nodal[n][j] + part.step() * quad;
                    assert!((sol.stages[n][i][j] - expected).abs() < 1e-14);
                }
            }
        }
    }
}

#[test]
fn radau_scalar_mode_recursion() {
    let grid = Grid1D::new(1.0, 16).unwrap();
    let alpha = 0.7;
    let lambda = alpha * sine_eigenvalue(&grid);
    let phi = |t: f64| (2.0 * t).sin() + 1.0;
    let f = |x: f64, t: f64| (PI * x).sin() * phi(t);
    let part = TimePartition::new(1.0, 12).unwrap();
    for q in 1..=4 {
        let tab = radau_tableau(q).unwrap();
        let sol = radau_solve_linear(&|_, _| alpha, &grid, StageForcing::Pointwise(&f), &part, &tab).unwrap();
        let mut v = 0.0;
        for n in 0..12 {
            let phis: Vec<f64> = tab.nodes().iter().map(|&c| phi(part.local_time(n, c))).collect();
            let y = scalar_radau_step(q, part.step(), lambda, v, &phis);
            for i in 0..q {
                for (j, s) in sol.stages[n][i].iter().enumerate() {
                    assert!((s - y[i] * (PI * grid.x(j)).sin()).abs() < 1e-12, "q={q} n={n} i={i}");
                }
            }
            v = y[q - 1];
        }
    }
}

#[test]
fn averages_q2_closed_form() {
    let grid = Grid1D::new(1.0, 3).unwrap();
    let part = TimePartition::new(2.0, 5).unwrap();
    let tab = radau_tableau(2).unwrap();
    let k = part.step();
    for n in 0..5 {
        let t = part.node(n);
        let lin = stage_rhs_averages(&|_, s| s, &grid, &part, &tab, n).unwrap();
        let quad = stage_rhs_averages(&|_, s| s * s, &grid, &part, &tab, n).unwrap();
        // int l_1 (t_n + tau k) = 3/4 t_n + k/4 and so on, divided by b.
        for j in 0..3 {
            assert!((lin[0][j] - (t + k / 3.0)).abs() < 1e-14);
            assert!((lin[1][j] - (t + k)).abs() < 1e-14);
            assert!((quad[0][j] - (t * t + 2.0 * t * k / 3.0 + k * k / 6.0)).abs() < 1e-13);
            assert!((quad[1][j] - (t * t + 2.0 * t * k + 5.0 * k * k / 6.0)).abs() < 1e-13);
        }
    }
}

#[test]
fn averages_are_bounded_by_the_forcing() {
    let grid = Grid1D::new(1.0, 16).unwrap();
    let spec = SpaceTimeNormSpec::new(8.0, SpatialNorm::Lr(4.0));
    for q in 1..=3 {
        let tab = radau_tableau(q).unwrap();
        for (a, b) in [(1.0, 1.0), (2.0, 5.0), (3.0, 11.0)] {
            let f = move |x: f64, t: f64| (a * PI * x).sin() * (b * t).cos() + x * t;
            for n in [4, 16, 64] {
                let part = TimePartition::new(1.0, n).unwrap();
                let values = (0..n).map(|l| stage_rhs_averages(&f, &grid, &part, &tab, l).unwrap()).collect();
                let avg = dgtime_core::PiecewiseTrajectory::discontinuous(part, tab.nodes(), values).unwrap();
                let field = dgtime_core::trajectory::FnField::new(part, 16, |t, out: &mut [f64]| {
                    for (j, o) in out.iter_mut().enumerate() {
                        *o = f(grid.x(j), t);
                    }
                });
                let lhs = discrete_norm(&avg, &spec, Some(&grid)).unwrap();
                let rhs = dgtime_core::norms::continuous_norm(&field, &part, q, &spec, Some(&grid)).unwrap();
                assert!(lhs <= 2.0 * rhs, "q={q} N={n}: {lhs} vs {rhs}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stiff_accuracy_in_nonlinear_solves(q in 1usize..=3, amp in 0.1f64..2.0, n in 1usize..5) {
        let grid = Grid1D::new(1.0, 10).unwrap();
        let tab = radau_tableau(q).unwrap();
        let part = TimePartition::new(0.5, n).unwrap();
        let u0 = grid.sample(|x| amp * (PI * x).sin());
        let sol = dg_solve_nonlinear(&FluxFunction::Cubic { strength: 1.0 }, &grid, None, &u0, &part, &tab, &NewtonConfig::default()).unwrap();
        for l in 0..n {
            prop_assert_eq!(sol.trajectory.end_value(l), sol.trajectory.radau_value(l, q - 1));
            prop_assert_eq!(sol.reconstruction.end_value(l), sol.trajectory.end_value(l));
        }
    }

    #[test]
    fn equivalence_for_random_autonomous_coefficients(q in 1usize..=3, c0 in 0.2f64..3.0, c1 in -0.15f64..0.15, n in 1usize..=64) {
        let grid = Grid1D::new(1.0, 16).unwrap();
        let tab = radau_tableau(q).unwrap();
        let part = TimePartition::new(1.0, n).unwrap();
        let coeff = move |x: f64, _t: f64| c0 * (1.0 + c1 * (3.0 * x).sin());
        let f = |x: f64, t: f64| (PI * x).sin() * (5.0 * t).sin() + 1.0;
        let dg = dg_solve_linear_nonautonomous(&coeff, &grid, &f, &part, &tab, RhsMode::Averages).unwrap();
        let rk = radau_solve_linear(&coeff, &grid, StageForcing::Averaged(&f), &part, &tab).unwrap();
        let dg_nodal: Vec<Vec<f64>> = (0..n).map(|l| dg.trajectory.end_value(l).to_vec()).collect();
        prop_assert!(common::relative_gap(&dg_nodal, &rk.nodal[1..]) <= 1e-10);
    }
}
