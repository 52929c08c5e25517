use jfds::bench1d::{find_case, run_case, RunOptions};
use jfds::fds::interface_flux;
use jfds::riemann::{solve_star, RiemannSolution};
use jfds::solver1d::{advance, primitives_unchecked, Boundaries, BoundaryCondition, Grid1D, ReconstructionConfig, TimeControls};
use jfds::state::{physical_flux, GasModel, Primitive};
use jfds::SchemeKind;
use proptest::prelude::*;

fn w(rho: f64, u: f64, p: f64) -> Primitive<f64> {
    Primitive::new(rho, u, p).unwrap()
}

/// Star pressure by bisection on the textbook pressure function, written
/// out independently of the library.
fn star_pressure_bisection(l: &Primitive<f64>, r: &Primitive<f64>, g: f64) -> f64 {
    let f = |p: f64, s: &Primitive<f64>| {
        let a = (g * s.p / s.rho).sqrt();
        if p > s.p {
            let ak = 2.0 / ((g + 1.0) * s.rho);
            let bk = (g - 1.0) / (g + 1.0) * s.p;
            (p - s.p) * (ak / (p + bk)).sqrt()
        } else {
            2.0 * a / (g - 1.0) * ((p / s.p).powf((g - 1.0) / (2.0 * g)) - 1.0)
        }
    };
    let total = |p: f64| f(p, l) + f(p, r) + (r.u - l.u);
    let (mut lo, mut hi) = (1e-12, 1e6);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if total(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn star_pressure_matches_bisection() {
    let gas = GasModel::air();
    let problems = [
        (w(1.0, 0.0, 1.0), w(0.125, 0.0, 0.1)),
        (w(1.0, -2.0, 0.4), w(1.0, 2.0, 0.4)),
        (w(1.0, 0.0, 1000.0), w(1.0, 0.0, 0.01)),
        (w(1.0, 0.0, 0.01), w(1.0, 0.0, 100.0)),
        (w(5.99924, 19.5975, 460.894), w(5.99242, -6.19633, 46.095)),
        (w(0.445, 0.698, 3.528), w(0.5, 0.0, 0.571)),
    ];
    for (l, r) in problems {
        let star = solve_star(&l, &r, &gas).unwrap();
        let p = star_pressure_bisection(&l, &r, 1.4);
        assert!((star.p_star - p).abs() <= 1e-8 * p, "{} vs {p}", star.p_star);
    }
}

#[test]
fn riemann_solution_far_field_is_initial_data() {
    let gas = GasModel::air();
    let (l, r) = (w(1.0, 0.75, 1.0), w(0.125, 0.0, 0.1));
    let sol = RiemannSolution::new(l, r, 0.3, gas).unwrap();
    assert_eq!(sol.at(-5.0, 0.2), l);
    assert_eq!(sol.at(5.0, 0.2), r);
}

#[test]
fn periodic_second_order_run_conserves_totals() {
    let gas = GasModel::air();
    let grid = Grid1D::from_fn(
        0.0,
        1.0,
        64,
        |x: f64| w(1.0 + 0.5 * (6.0 * x).sin().abs(), 0.3 * (2.0 * std::f64::consts::PI * x).cos(), 1.0 + x * (1.0 - x)),
        &gas,
    )
    .unwrap();
    let before = grid.totals();
    for scheme in SchemeKind::ALL {
        let (out, log) = advance(
            &grid,
            scheme,
            ReconstructionConfig::second_order(0.1),
            Boundaries::both(BoundaryCondition::Periodic),
            TimeControls::new(0.5, 0.3),
            &gas,
        )
        .unwrap();
        assert!(log.reached_final && log.steps > 20);
        let after = out.totals();
        for k in 0..3 {
            assert!((after[k] - before[k]).abs() <= 1e-12 * before[k].abs().max(1.0), "{scheme} component {k}");
        }
    }
}

#[test]
fn mirrored_riemann_problem_gives_mirrored_solution() {
    let gas = GasModel::air();
    let case = find_case::<f64>("lax").unwrap();
    let mut mirror = case.clone();
    let jfds::bench1d::InitialCondition::Riemann { x0, left, right } = case.initial else { panic!() };
    mirror.initial = jfds::bench1d::InitialCondition::Riemann { x0: 1.0 - x0, left: right.mirrored(), right: left.mirrored() };
    for scheme in SchemeKind::ALL {
        for recon in [ReconstructionConfig::first_order(), ReconstructionConfig::second_order(0.1)] {
            let a = run_case(&case, scheme, recon, RunOptions::default(), &gas).unwrap();
            let b = run_case(&mirror, scheme, recon, RunOptions::default(), &gas).unwrap();
            let (wa, wb) = (primitives_unchecked(&a.grid, &gas), primitives_unchecked(&b.grid, &gas));
            let n = wa.len();
            for i in 0..n {
                let m = wb[n - 1 - i];
                assert!((wa[i].rho - m.rho).abs() <= 1e-12 * wa[i].rho, "{scheme} cell {i}");
                assert!((wa[i].u + m.u).abs() <= 1e-12 * (1.0 + wa[i].u.abs()), "{scheme} cell {i}");
                assert!((wa[i].p - m.p).abs() <= 1e-12 * wa[i].p, "{scheme} cell {i}");
            }
        }
    }
}

fn state() -> impl Strategy<Value = Primitive<f64>> {
    (0.05f64..20.0, -10.0f64..10.0, 0.05f64..50.0).prop_map(|(rho, u, p)| Primitive::new(rho, u, p).unwrap())
}

proptest! {
    #[test]
    fn flux_of_equal_states_is_the_physical_flux(wl in state()) {
        let gas = GasModel::air();
        let exact = physical_flux(&wl, &gas);
        for scheme in SchemeKind::ALL {
            let f = interface_flux(scheme, &wl, &wl, &gas);
            for k in 0..3 {
                prop_assert!((f[k] - exact[k]).abs() <= 1e-12 * exact[k].abs().max(1.0));
            }
        }
    }

    #[test]
    fn flux_is_mirror_symmetric(wl in state(), wr in state()) {
        let gas = GasModel::air();
        for scheme in SchemeKind::ALL {
            let f = interface_flux(scheme, &wl, &wr, &gas);
            let g = interface_flux(scheme, &wr.mirrored(), &wl.mirrored(), &gas);
            let scale = f[0].abs().max(f[1].abs()).max(f[2].abs()).max(1.0);
            prop_assert!((f[0] + g[0]).abs() <= 1e-12 * scale);
            prop_assert!((f[1] - g[1]).abs() <= 1e-12 * scale);
            prop_assert!((f[2] + g[2]).abs() <= 1e-12 * scale);
        }
    }
}
