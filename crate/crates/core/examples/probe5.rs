//! Solver conservation/entropy probe: grid + quadrature scan for the desk runs.

use noncutoff_core::barrier::mollified_initial_data;
use noncutoff_core::collision::QuadratureSpec;
use noncutoff_core::model::*;
use noncutoff_core::solver::*;
use noncutoff_core::vec3::Vec3;
use std::time::Instant;

fn main() {
    let presets = [
        ("moderate", ModelParams::new(-1.0, 0.7, 1.0, 0.2).unwrap()),
        ("very_soft", ModelParams::new(-2.0, 0.5, 1.0, 0.2).unwrap()),
    ];
    let ball = DensityFunction::<f64>::ball_indicator(Vec3::zero(), 1.5, 0.5);

    for (name, p) in presets {
        for (gn, gl, nt, np, nr, na) in [
            (12usize, 6.0f64, 8usize, 6usize, 8usize, 6usize),
            (14, 6.0, 8, 6, 8, 8),
        ] {
            let datum = mollified_initial_data(&ball, 0.5, gl, gn).unwrap();
            let config = SolverConfig {
                grid_l: gl,
                grid_n: gn,
                dt: None,
                t_end: 0.1,
                quad: QuadratureSpec {
                    n_theta: nt,
                    n_phi: np,
                    n_vstar_radial: nr,
                    n_vstar_angular: na,
                    plane_radial_nodes: 12,
                    plane_angular_nodes: 8,
                    r_max: 12.0,
                    pv_inner_radius: 1e-3,
                    tail_nodes: 24,
                },
                monitor_qs: vec![5.0],
                operator_form: OperatorForm::Sigma,
                negativity_tol: 1e-4,
            };
            let t0 = Instant::now();
            let out = run(&datum, &config, &p, None).unwrap();
            let d0 = &out.diagnostics[0];
            let dl = out.diagnostics.last().unwrap();
            let mass_drift = (dl.mass - d0.mass).abs() / d0.mass;
            let mom_drift = (0..3)
                .map(|i| (dl.momentum[i] - d0.momentum[i]).abs())
                .fold(0.0f64, f64::max)
                / d0.energy;
            let energy_drift = (dl.energy - d0.energy).abs() / d0.energy;
            let entropy_monotone = out
                .diagnostics
                .windows(2)
                .all(|w| w[1].entropy <= w[0].entropy + 1e-2 * w[0].entropy.abs());
            let min_f = out
                .diagnostics
                .iter()
                .map(|d| d.min_value)
                .fold(f64::INFINITY, f64::min);
            println!(
                "{name} grid {gn}x{gl} quad({nt},{np},{nr},{na}): steps {} mass {:.4}% mom {:.4}% energy {:.4}% entropy_ok {} minf {:.2e} term {:?} ({:.0?})",
                out.times.len() - 1,
                100.0 * mass_drift,
                100.0 * mom_drift,
                100.0 * energy_drift,
                entropy_monotone,
                min_f,
                out.termination,
                t0.elapsed()
            );
        }
    }
}
