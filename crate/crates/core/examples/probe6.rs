//! Conservation scan: datum amplitude × θ_min × quadrature.

use noncutoff_core::barrier::mollified_initial_data;
use noncutoff_core::collision::QuadratureSpec;
use noncutoff_core::model::*;
use noncutoff_core::solver::*;
use noncutoff_core::vec3::Vec3;
use std::time::Instant;

fn main() {
    let cases = [
        ("A", -1.0, 0.7, 0.25, 1.2, 0.3, 12usize, 5.0, 8usize, 8usize, 10usize, 10usize),
        ("B", -1.0, 0.7, 0.25, 1.2, 0.3, 14, 5.0, 12, 8, 12, 12),
        ("C", -1.0, 0.7, 0.3, 1.2, 0.15, 12, 5.0, 8, 8, 10, 10),
        ("D", -2.0, 0.5, 0.25, 1.2, 0.3, 12, 5.0, 8, 8, 10, 10),
    ];
    for (name, gamma, s, theta_min, radius, height, gn, gl, nt, np, nr, na) in cases {
        let p = ModelParams::new(gamma, s, 1.0, theta_min).unwrap();
        let ball = DensityFunction::<f64>::ball_indicator(Vec3::zero(), radius, height);
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
                r_max: 10.0,
                pv_inner_radius: 1e-3,
                tail_nodes: 24,
            },
            monitor_qs: vec![5.0],
            operator_form: OperatorForm::Sigma,
            negativity_tol: 1e-4,
        };
        let t0 = Instant::now();
        match run(&datum, &config, &p, None) {
            Ok(out) => {
                let d0 = &out.diagnostics[0];
                let dl = out.diagnostics.last().unwrap();
                let mass_drift = (dl.mass - d0.mass).abs() / d0.mass;
                let mom_drift = (0..3)
                    .map(|i| (dl.momentum[i] - d0.momentum[i]).abs())
                    .fold(0.0f64, f64::max)
                    / d0.energy;
                let energy_drift = (dl.energy - d0.energy).abs() / d0.energy;
                let entropy_ok = out
                    .diagnostics
                    .windows(2)
                    .all(|w| w[1].entropy <= w[0].entropy + 1e-2 * w[0].entropy.abs());
                println!(
                    "{name}: steps {} mass0 {:.3} drift m {:.3}% p {:.3}% e {:.3}% entropy_ok {} term {:?} ({:.0?})",
                    out.times.len() - 1,
                    d0.mass,
                    100.0 * mass_drift,
                    100.0 * mom_drift,
                    100.0 * energy_drift,
                    entropy_ok,
                    out.termination,
                    t0.elapsed()
                );
            }
            Err(e) => println!("{name}: error {e}"),
        }
    }
}
