//! Calibration probe for the remaining test tolerances.

use noncutoff_core::collision::*;
use noncutoff_core::fields::{Gaussian, TestFunction};
use noncutoff_core::model::*;
use noncutoff_core::quad::{gl_interval, radial_composite, SphereGrid};
use noncutoff_core::vec3::Vec3;
use rayon::prelude::*;
use std::time::Instant;

fn main() {
    let p = ModelParams::new(-1.0, 0.6, 1.0, 1e-2).unwrap();
    let p_half = ModelParams::new(-1.0, 0.5, 1.0, 1e-2).unwrap();

    println!("== (a) composite step integral per-panel scan ==");
    for per in [4usize, 8, 16, 32] {
        let rule = radial_composite::<f64>(per, 1e-3, 12.0, 2.0, true);
        let step: f64 = rule.iter().map(|&(r, w)| if r < 4.0 { w } else { 0.0 }).sum();
        println!("per {per}: {step:.5} vs {:.5} rel {:.4}", 64.0 / 3.0, (step - 64.0 / 3.0).abs() / (64.0 / 3.0));
    }

    println!("== (b) convolve ball indicator ==");
    let ball = DensityFunction::<f64>::ball_indicator(Vec3::zero(), 1.0, 1.0);
    for nr in [12usize, 24, 48, 96] {
        let quad = QuadratureSpec {
            n_theta: 8,
            n_phi: 6,
            n_vstar_radial: nr,
            n_vstar_angular: 8,
            plane_radial_nodes: 12,
            plane_angular_nodes: 8,
            r_max: 9.0,
            pv_inner_radius: 1e-3,
            tail_nodes: 24,
        };
        let c = convolve_power(&ball, -2.0, Vec3::zero(), &quad).unwrap();
        println!("nr {nr}: {c:.5} rel {:.4}", (c - 4.0 * std::f64::consts::PI).abs() / (4.0 * std::f64::consts::PI));
    }

    println!("== (c) carleman grid indicator coarse vs 4x ==");
    let f_grid = DensityFunction::grid_from_fn(6.0f64, 24, 0.0, 40.0, |v| {
        if v.norm() < 4.0 { 1.0 } else { 0.0 }
    })
    .unwrap();
    for (pr, pa) in [(16usize, 12usize), (32, 16), (48, 24)] {
        let mut quad = QuadratureSpec::desk();
        quad.plane_radial_nodes = pr;
        quad.plane_angular_nodes = pa;
        let coarse = carleman_kernel(&f_grid, Vec3::zero(), Vec3::axis(0), &p_half, &quad).unwrap();
        let mut dense = quad;
        dense.plane_radial_nodes *= 4;
        dense.plane_angular_nodes *= 4;
        let fine = carleman_kernel(&f_grid, Vec3::zero(), Vec3::axis(0), &p_half, &dense).unwrap();
        println!("plane ({pr},{pa}): {coarse:.4} vs {fine:.4} rel {:.4}", (coarse - fine).abs() / fine);
    }

    println!("== (d) q_sigma base vs doubled at acceptance scale ==");
    let m = DensityFunction::<f64>::maxwellian();
    let g8 = DensityFunction::<f64>::inverse_power(8.0);
    let quad_acc = QuadratureSpec {
        n_theta: 24,
        n_phi: 16,
        n_vstar_radial: 24,
        n_vstar_angular: 16,
        plane_radial_nodes: 16,
        plane_angular_nodes: 12,
        r_max: 12.0,
        pv_inner_radius: 1e-3,
        tail_nodes: 32,
    };
    let t0 = Instant::now();
    let c = q_sigma(&m, &g8, Vec3::zero(), &p, &quad_acc).unwrap().value;
    let f = q_sigma(&m, &g8, Vec3::zero(), &p, &quad_acc.doubled()).unwrap().value;
    println!("coarse {c:.5} fine {f:.5} rel {:.4} ({:.1?})", (c - f).abs() / f.abs(), t0.elapsed());

    println!("== (e) weak identity oriented, alpha 0.5 ==");
    let f8 = DensityFunction::<f64>::inverse_power(8.0);
    let phi = Gaussian { alpha: 0.5 };
    for (nt, np, nr, na) in [(16usize, 8usize, 12usize, 12usize), (24, 16, 16, 16), (24, 16, 20, 20)] {
        let quad = QuadratureSpec {
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
        let t0 = Instant::now();
        let w = weak_form_integral(&f8, &f8, &phi, &p, &quad).unwrap();
        let outer_radial = gl_interval(14, 0.0f64, 6.5);
        let outer_sphere = SphereGrid::<f64>::new(8, 12);
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
                let qv = q_sigma(&f8, &f8, v, &p, &quad).unwrap().value;
                (wv * phiv * qv, wv * phiv * qv.abs())
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        println!(
            "({nt},{np},{nr},{na}): W {w:.5} phiQ {total:.5} diff {:.2}% of gross {gross:.3} ({:.0?})",
            100.0 * (total - w).abs() / gross,
            t0.elapsed()
        );
    }

    println!("== (f) qs vs sigma-singular, filtered ==");
    let quad = QuadratureSpec {
        n_theta: 24,
        n_phi: 16,
        n_vstar_radial: 20,
        n_vstar_angular: 16,
        plane_radial_nodes: 20,
        plane_angular_nodes: 12,
        r_max: 10.0,
        pv_inner_radius: 1e-3,
        tail_nodes: 32,
    };
    for v in [
        Vec3::zero(),
        Vec3::new(0.3, 0.0, 0.0),
        Vec3::new(0.0, 0.5, 0.0),
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, -2.0, 1.0),
    ] {
        let qs = q_s_carleman(&m, &g8, v, &p, &quad).unwrap().value;
        println!("v {:?}: qs {qs:.5}", v.0);
    }
}
