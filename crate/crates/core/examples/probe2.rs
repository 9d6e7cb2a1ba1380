//! Weak-form convergence probe along individual quadrature axes.

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
    let phi = Gaussian::unit();

    let base = QuadratureSpec {
        n_theta: 12,
        n_phi: 8,
        n_vstar_radial: 8,
        n_vstar_angular: 6,
        plane_radial_nodes: 16,
        plane_angular_nodes: 12,
        r_max: 10.0,
        pv_inner_radius: 1e-3,
        tail_nodes: 32,
    };

    println!("== intW axis scan ==");
    let scan = |label: &str, q: QuadratureSpec<f64>| {
        let t0 = Instant::now();
        let w = weak_form_integral(&f, &f, &phi, &p, &q).unwrap();
        println!("{label}: {w:.5}   ({:.1?})", t0.elapsed());
    };
    scan("base           ", base);
    scan("theta x2       ", QuadratureSpec { n_theta: 24, ..base });
    scan("theta x4       ", QuadratureSpec { n_theta: 48, ..base });
    scan("phi x2         ", QuadratureSpec { n_phi: 16, ..base });
    scan("radial x2      ", QuadratureSpec { n_vstar_radial: 16, ..base });
    scan("angular x2     ", QuadratureSpec { n_vstar_angular: 12, ..base });
    scan("angular x3     ", QuadratureSpec { n_vstar_angular: 18, ..base });
    scan(
        "all x2         ",
        QuadratureSpec {
            n_theta: 24,
            n_phi: 16,
            n_vstar_radial: 16,
            n_vstar_angular: 12,
            ..base
        },
    );

    println!("== intPhiQ (q_sigma strong) ==");
    let quad = QuadratureSpec {
        n_theta: 24,
        n_phi: 16,
        n_vstar_radial: 16,
        n_vstar_angular: 12,
        ..base
    };
    for (orad, opol, oaz, rball) in [(10usize, 6usize, 8usize, 5.0f64), (16, 8, 12, 6.0)] {
        let outer_radial = gl_interval(orad, 0.0f64, rball);
        let outer_sphere = SphereGrid::<f64>::new(opol, oaz);
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
                let q = q_sigma(&f, &f, v, &p, &quad).unwrap().value;
                (wv * phiv * q, wv * phiv * q.abs())
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        println!(
            "outer ({orad},{opol},{oaz},R={rball}): intPhiQ {total:.5} gross {gross:.4} ({:.1?})",
            t0.elapsed()
        );
    }
}
