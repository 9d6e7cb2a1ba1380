//! Deep weak-identity convergence probe.

use noncutoff_core::collision::*;
use noncutoff_core::fields::{Gaussian, TestFunction};
use noncutoff_core::model::*;
use noncutoff_core::quad::{gl_interval, SphereGrid};
use noncutoff_core::vec3::Vec3;
use rayon::prelude::*;
use std::time::Instant;

fn main() {
    let p = ModelParams::new(-1.0, 0.6, 1.0, 1e-2).unwrap();
    let f = DensityFunction::<f64>::inverse_power(8.0);
    // Wider Gaussian: smaller collision-sphere footprint demands.
    let phi = Gaussian { alpha: 0.5 };

    let mk = |nt, np, nr, na| QuadratureSpec {
        n_theta: nt,
        n_phi: np,
        n_vstar_radial: nr,
        n_vstar_angular: na,
        plane_radial_nodes: 16,
        plane_angular_nodes: 12,
        r_max: 10.0,
        pv_inner_radius: 1e-3,
        tail_nodes: 32,
    };

    for (nt, np, nr, na) in [(16usize, 12usize, 12usize, 10usize), (24, 16, 16, 14), (24, 16, 20, 18)] {
        let q = mk(nt, np, nr, na);
        let t0 = Instant::now();
        let w = weak_form_integral(&f, &f, &phi, &p, &q).unwrap();
        println!("intW ({nt},{np},{nr},{na}): {w:.5} ({:.0?})", t0.elapsed());
        let outer_radial = gl_interval(14, 0.0f64, 6.5);
        let outer_sphere = SphereGrid::<f64>::new(8, 12);
        let mut nodes = Vec::new();
        for &(r, w_r) in &outer_radial {
            for (omega, w_omega) in outer_sphere.dirs.iter().zip(&outer_sphere.weights) {
                nodes.push((*omega * r, w_r * r * r * *w_omega));
            }
        }
        let t0 = Instant::now();
        let (total, gross): (f64, f64) = nodes
            .par_iter()
            .map(|&(v, wv)| {
                let phiv = phi.value(v);
                if phiv < 1e-12 {
                    return (0.0, 0.0);
                }
                let qv = q_sigma(&f, &f, v, &p, &q).unwrap().value;
                (wv * phiv * qv, wv * phiv * qv.abs())
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        println!(
            "intPhiQ        : {total:.5} gross {gross:.4} | diff {:.5} = {:.2}% of gross ({:.0?})",
            (total - w).abs(),
            100.0 * (total - w).abs() / gross,
            t0.elapsed()
        );
    }
}
