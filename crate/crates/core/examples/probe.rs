//! Scratch numerics probe (not part of the deliverable surface).

use noncutoff_core::collision::*;
use noncutoff_core::fields::{Gaussian, TestFunction};
use noncutoff_core::model::*;
use noncutoff_core::quad::{gl_interval, SphereGrid};
use noncutoff_core::vec3::Vec3;
use rayon::prelude::*;

fn main() {
    let p = ModelParams::new(-1.0, 0.6, 1.0, 1e-2).unwrap();
    let f = DensityFunction::<f64>::inverse_power(8.0);
    let m = DensityFunction::<f64>::maxwellian();

    let mk = |nt, np, nr, na| QuadratureSpec {
        n_theta: nt,
        n_phi: np,
        n_vstar_radial: nr,
        n_vstar_angular: na,
        plane_radial_nodes: 16,
        plane_angular_nodes: 12,
        r_max: 12.0,
        pv_inner_radius: 1e-3,
        tail_nodes: 32,
    };

    println!("== q_sigma(M, <v>^-8, 0) convergence ==");
    for (nt, np, nr, na) in [
        (8usize, 6usize, 8usize, 6usize),
        (16, 8, 12, 8),
        (16, 8, 12, 12),
        (24, 16, 24, 16),
        (24, 16, 24, 24),
        (32, 16, 32, 24),
        (48, 32, 48, 32),
    ] {
        let q = q_sigma(&m, &f, Vec3::zero(), &p, &mk(nt, np, nr, na)).unwrap();
        println!(
            "theta {nt} phi {np} rad {nr} ang {na}: value {:.6} gain {:.3} loss {:.3}",
            q.value, q.gain, q.loss
        );
    }

    println!("== weak identity: f=<v>^-8, phi=Gaussian ==");
    let phi = Gaussian::unit();
    for (nt, np, nr, na) in [(8usize, 6usize, 8usize, 6usize), (16, 8, 12, 12), (24, 16, 16, 16)] {
        let quad = mk(nt, np, nr, na);
        let w = weak_form_integral(&f, &f, &phi, &p, &quad).unwrap();
        // ∫ φ Q dv with the same quad for q_sigma, outer ball GL
        let outer_radial = gl_interval(12, 0.0f64, 6.0);
        let outer_sphere = SphereGrid::<f64>::new(8, 10);
        let mut nodes = Vec::new();
        for &(r, w_r) in &outer_radial {
            for (omega, w_omega) in outer_sphere.dirs.iter().zip(&outer_sphere.weights) {
                nodes.push((*omega * r, w_r * r * r * *w_omega));
            }
        }
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
        println!("quad({nt},{np},{nr},{na}): intW {w:.5}  intPhiQ {total:.5} gross {gross:.4}");
    }

    println!("== qs vs sigma-singular across v ==");
    let quad = mk(24, 16, 16, 16);
    for v in [
        Vec3::zero(),
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, -2.0, 1.0),
        Vec3::new(3.0, 0.0, 0.0),
    ] {
        let qs = q_s_carleman(&m, &f, v, &p, &quad).unwrap();
        println!("v {:?}: qs {:.5} rem {:.2e}", v.0, qs.value, qs.pv_remainder);
    }

    println!("== convolve indicator ==");
    let ball = DensityFunction::<f64>::ball_indicator(Vec3::zero(), 1.0, 1.0);
    for (nr, na) in [(8usize, 6usize), (12, 8), (24, 12), (48, 24)] {
        let quad = mk(8, 6, nr, na);
        let c = convolve_power(&ball, -2.0, Vec3::zero(), &quad).unwrap();
        println!("rad {nr} ang {na}: {c:.5} (4pi = {:.5})", 4.0 * std::f64::consts::PI);
    }
}
