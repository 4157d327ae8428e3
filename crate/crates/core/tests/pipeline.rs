use sheathlab::epsolve::{run, SolverConfig, Stepper, System};
use sheathlab::harness::{limit_solution, Scenario};

/// `||n^eps - n_a||_L2` at `t` for the EP run started from the assembled
/// first-order expansion.
fn distance_to_expansion(sc: &Scenario, eps: f64, t: f64) -> f64 {
    let grid = sc.eps_grid(eps).unwrap();
    let params = sheathlab::Parameters { final_time: t, ..sc.params_for(eps) };
    let st = Stepper::new(&grid, &params, &SolverConfig::default(), sc.regime, System::EulerPoisson).unwrap();
    let out = run(&st, sc.eps_initial(eps, &grid).unwrap(), t, None, &mut []).unwrap();
    let a = sc.expansion(eps, 1).unwrap().assemble(grid.centers(), t).unwrap();
    let diff: Vec<f64> = out.state.n.iter().zip(&a.n).map(|(x, y)| x - y).collect();
    grid.l2_norm(&diff)
}

#[test]
fn ep_runs_track_the_assembled_expansion() {
    let sc = Scenario::supersonic();
    let d: Vec<f64> = [0.02, 0.01, 0.005].iter().map(|&e| distance_to_expansion(&sc, e, 0.05)).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    assert!(d[2] < 1e-3, "{d:?}");
}

#[test]
fn intermediate_limit_holds_the_wall_density() {
    let sc = Scenario::intermediate();
    let (_, s) = limit_solution(&sc, &SolverConfig::default()).unwrap();
    let target = (-sc.params.phi_b()).exp();
    assert!((s.n[0] - target).abs() < 1e-3, "{} vs {target}", s.n[0]);
    assert!(s.u3[0] > -(sc.params.ion_temperature + 1.0).sqrt() && s.u3[0] < -sc.params.ion_temperature.sqrt());
}

/// Largest leftover `|n_bump - n_flat| / amplitude` once a bump has left
/// through the wall.
fn wall_reflection(system: System, eps: f64) -> f64 {
    let mut sc = Scenario::supersonic();
    sc.bump = sheathlab::expansion::Bump { center: 0.2, width: 0.15, amplitude: 0.05 };
    sc.params.final_time = 0.4;
    let flat = Scenario { bump: sheathlab::expansion::Bump::none(), ..sc };
    let solve = |sc: &Scenario| {
        let (grid, params, init) = match system {
            System::EulerPoisson => {
                let g = sc.eps_grid(eps).unwrap();
                let init = sc.eps_initial(eps, &g).unwrap();
                (g, sc.params_for(eps), init)
            }
            System::QuasineutralLimit => {
                let g = sc.bulk_grid().unwrap();
                let init = sc.limit_initial(&g).unwrap();
                (g, sc.params, init)
            }
        };
        let st = Stepper::new(&grid, &params, &SolverConfig::default(), sc.regime, system).unwrap();
        run(&st, init, params.final_time, None, &mut []).unwrap().state
    };
    let (a, b) = (solve(&sc), solve(&flat));
    a.n.iter().zip(&b.n).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / sc.bump.amplitude
}

#[test]
fn supersonic_wall_does_not_reflect() {
    let limit = wall_reflection(System::QuasineutralLimit, 0.0);
    let ep = wall_reflection(System::EulerPoisson, 0.02);
    eprintln!("reflection: limit {limit:.2e}, ep {ep:.2e}");
    assert!(limit < 1e-4 && ep < 1e-2, "{limit} {ep}");
}
