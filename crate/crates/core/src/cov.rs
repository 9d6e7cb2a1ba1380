//! Anisotropic change of variables around a base point z₀ = (t₀, x₀, v₀):
//! the linear map T₀ compressing along v₀, the affine kinetic map 𝒯₀, the
//! transformed kernel K̄_f, ellipsoids E_r and twisted cylinders 𝓔_r, and
//! the Hölder seminorm transfer between the straight and twisted pictures.
//!
//! Two regimes share the rank-one structure T₀ = a·P_∥ + b·P_⊥:
//!   γ + 2s ≥ 0:  a = 1/|v₀|, b = 1, and 𝒯₀ rescales (t, x) by |v₀|^{-(γ+2s)};
//!   γ + 2s < 0:  a = |v₀|^{γ/2s}, b = |v₀|^{(γ+2s)/2s}, and 𝒯₀ leaves t alone.
//! For |v₀| ≤ 2 the map is the plain left translation z₀ ∘ z.

use crate::collision::{carleman_kernel_offset, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::{
    holder_seminorm, lie_inverse, lie_product, DistanceOpts, HolderEstimate, KineticPoint,
};
use crate::model::{DensityFunction, ModelParams};
use crate::scalar::{as_f64, lit, Real};
use crate::vec3::{Mat3, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    ModeratelySoft,
    VerySoft,
    SmallV0,
}

/// Base point with its linear map, inverse, regime flag, and the Hölder
/// transfer exponent c̄.
#[derive(Debug, Clone, Copy)]
pub struct CovFrame<R> {
    pub z0: KineticPoint<R>,
    pub params: ModelParams<R>,
    pub regime: Regime,
    pub t0_map: Mat3<R>,
    pub t0_inv: Mat3<R>,
    pub c_bar: R,
}

/// Construct the frame for z₀; the regime is decided by |v₀| and the sign
/// of γ + 2s.
pub fn build_frame<R: Real>(z0: KineticPoint<R>, params: &ModelParams<R>) -> CovFrame<R> {
    let v0 = z0.v;
    let n0 = v0.norm();
    let g2s = params.gamma_plus_2s();
    let c_bar = if g2s >= R::zero() {
        R::one()
    } else {
        -params.gamma / (params.s * lit(2.0))
    };
    if n0 <= lit(2.0) {
        return CovFrame {
            z0,
            params: *params,
            regime: Regime::SmallV0,
            t0_map: Mat3::identity(),
            t0_inv: Mat3::identity(),
            c_bar,
        };
    }
    let e = v0.scale(R::one() / n0);
    let (regime, par, perp) = if g2s >= R::zero() {
        (Regime::ModeratelySoft, R::one() / n0, R::one())
    } else {
        let two_s = params.s * lit(2.0);
        (
            Regime::VerySoft,
            n0.powf(params.gamma / two_s),
            n0.powf(g2s / two_s),
        )
    };
    CovFrame {
        z0,
        params: *params,
        regime,
        t0_map: Mat3::axial(e, par, perp),
        t0_inv: Mat3::axial(e, R::one() / par, R::one() / perp),
        c_bar,
    }
}

impl<R: Real> CovFrame<R> {
    pub fn v0_norm(&self) -> R {
        self.z0.v.norm()
    }

    /// Scale factor applied to (t, x) inside the map: |v₀|^{-(γ+2s)} in the
    /// moderately soft regime, 1 otherwise.
    fn tx_scale(&self) -> R {
        match self.regime {
            Regime::ModeratelySoft => self.v0_norm().powf(-self.params.gamma_plus_2s()),
            _ => R::one(),
        }
    }
}

/// 𝒯₀(z) = z₀ ∘ (scaled t, T₀x scaled, T₀v).
pub fn apply_cov<R: Real>(frame: &CovFrame<R>, z: KineticPoint<R>) -> KineticPoint<R> {
    let inner = match frame.regime {
        Regime::SmallV0 => z,
        _ => {
            let s = frame.tx_scale();
            KineticPoint::new(
                z.t * s,
                frame.t0_map.apply(z.x) * s,
                frame.t0_map.apply(z.v),
            )
        }
    };
    lie_product(frame.z0, inner)
}

/// Exact algebraic inverse of `apply_cov`.
pub fn apply_cov_inverse<R: Real>(frame: &CovFrame<R>, z_bar: KineticPoint<R>) -> KineticPoint<R> {
    let inner = lie_product(lie_inverse(frame.z0), z_bar);
    match frame.regime {
        Regime::SmallV0 => inner,
        _ => {
            let s = frame.tx_scale();
            KineticPoint::new(
                inner.t / s,
                frame.t0_inv.apply(inner.x.scale(R::one() / s)),
                frame.t0_inv.apply(inner.v),
            )
        }
    }
}

/// Prefactor of the transformed kernel.
fn kernel_prefactor<R: Real>(frame: &CovFrame<R>) -> R {
    let n0 = frame.v0_norm();
    match frame.regime {
        Regime::SmallV0 => R::one(),
        Regime::ModeratelySoft => n0.powf(-(R::one() + frame.params.gamma_plus_2s())),
        Regime::VerySoft => n0.powf(
            lit::<R>(2.0) + lit::<R>(3.0) * frame.params.gamma / (frame.params.s * lit(2.0)),
        ),
    }
}

/// K̄_f(v, v') = prefactor · K_f(v₀ + T₀v, v₀ + T₀v').
pub fn transformed_kernel<R: Real>(
    frame: &CovFrame<R>,
    f: &DensityFunction<R>,
    v: Vec3<R>,
    v_prime: Vec3<R>,
    quad: &QuadratureSpec<R>,
) -> Result<R> {
    transformed_kernel_offset(frame, f, v, v_prime - v, quad)
}

/// K̄_f(v, v + w) in offset form; ±w symmetry is inherited bit-exactly.
pub fn transformed_kernel_offset<R: Real>(
    frame: &CovFrame<R>,
    f: &DensityFunction<R>,
    v: Vec3<R>,
    w: Vec3<R>,
    quad: &QuadratureSpec<R>,
) -> Result<R> {
    let v_bar = frame.z0.v + frame.t0_map.apply(v);
    let w_bar = frame.t0_map.apply(w);
    Ok(kernel_prefactor(frame) * carleman_kernel_offset(f, v_bar, w_bar, &frame.params, quad)?)
}

/// Radii (parallel to v₀, perpendicular to v₀) of E_r(v₀) = v₀ + T₀(B_r).
pub fn ellipsoid_radii<R: Real>(frame: &CovFrame<R>, r: R) -> Result<(R, R)> {
    if !(r > R::zero()) {
        return Err(Error::Parameter("ellipsoid radius must be positive".into()));
    }
    let n0 = frame.v0_norm();
    Ok(match frame.regime {
        Regime::SmallV0 => (r, r),
        Regime::ModeratelySoft => (r / n0, r),
        Regime::VerySoft => {
            let two_s = frame.params.s * lit(2.0);
            let perp = r * n0.powf(frame.params.gamma_plus_2s() / two_s);
            (perp / n0, perp)
        }
    })
}

/// Membership in E_r(v₀) via the pulled-back ball.
pub fn ellipsoid_contains<R: Real>(frame: &CovFrame<R>, u: Vec3<R>, r: R) -> bool {
    frame.t0_inv.apply(u - frame.z0.v).norm() < r
}

/// Membership in the twisted cylinder 𝓔_r(z₀) = 𝒯₀(Q_r).
pub fn twisted_cylinder_contains<R: Real>(frame: &CovFrame<R>, z: KineticPoint<R>, r: R) -> bool {
    let back = apply_cov_inverse(frame, z);
    let q = crate::geometry::KineticCylinder::new(KineticPoint::origin(), r).expect("r > 0");
    crate::geometry::cylinder_contains(&q, back, frame.params.s)
}

/// Uniform sample in Q_r at the origin (deterministic given the generator).
pub fn sample_unit_cylinder<R: Real>(rng: &mut ChaCha8Rng, r: R, s: R) -> KineticPoint<R> {
    let two_s = s * lit(2.0);
    let t = -lit::<R>(rng.gen_range(0.0..1.0f64)) * r.powf(two_s);
    let x = sample_ball(rng).scale(r.powf(R::one() + two_s));
    let v = sample_ball(rng).scale(r);
    KineticPoint::new(t, x, v)
}

fn sample_ball<R: Real>(rng: &mut ChaCha8Rng) -> Vec3<R> {
    loop {
        let p = Vec3::new(
            lit::<R>(rng.gen_range(-1.0..1.0f64)),
            lit::<R>(rng.gen_range(-1.0..1.0f64)),
            lit::<R>(rng.gen_range(-1.0..1.0f64)),
        );
        if p.norm_sq() < R::one() {
            return p;
        }
    }
}

/// Measured outcome of the Hölder seminorm transfer at one frame.
#[derive(Debug, Clone, Copy)]
pub struct TransferReport<R> {
    pub seminorm_straight: HolderEstimate<R>,
    pub seminorm_twisted: HolderEstimate<R>,
    /// ‖F̄‖ / ‖F‖ (expected O(1))
    pub ratio_forward: R,
    /// ‖F‖ / (|v₀|^{c̄β} ‖F̄‖) (expected O(1))
    pub ratio_backward: R,
}

/// Sample F on 𝓔_R(z₀), pull back to Q_R, and compare the two seminorms
/// with the |v₀|^{c̄β} weight.
pub fn holder_transfer_check<R: Real>(
    frame: &CovFrame<R>,
    field: &dyn Fn(KineticPoint<R>) -> R,
    beta: R,
    big_r: R,
    n_samples: usize,
    seed: u64,
) -> Result<TransferReport<R>> {
    if !(beta > R::zero() && beta < R::one().min(frame.params.s * lit(2.0))) {
        return Err(Error::Parameter(
            "transfer exponent must lie in (0, min(1, 2s))".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut straight = Vec::with_capacity(n_samples);
    let mut twisted = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let y = sample_unit_cylinder(&mut rng, big_r, frame.params.s);
        let z = apply_cov(frame, y);
        let val = field(z);
        straight.push((y, val));
        twisted.push((z, val));
    }
    let opts = DistanceOpts::default();
    let s = frame.params.s;
    let sem_bar = holder_seminorm(&straight, beta, R::zero(), s, &opts)?;
    let sem_f = holder_seminorm(&twisted, beta, R::zero(), s, &opts)?;
    let n0cb = frame.v0_norm().max(R::one()).powf(frame.c_bar * beta);
    let tiny = lit::<R>(1e-300);
    Ok(TransferReport {
        seminorm_straight: sem_bar,
        seminorm_twisted: sem_f,
        ratio_forward: sem_bar.value / sem_f.value.max(tiny),
        ratio_backward: sem_f.value / (n0cb * sem_bar.value.max(tiny)),
    })
}

/// Serializable summary used by the CLI diagnostics command.
pub fn frame_summary_json<R: Real>(frame: &CovFrame<R>, r: R) -> serde_json::Value {
    let (par, perp) = ellipsoid_radii(frame, r).unwrap_or((R::zero(), R::zero()));
    serde_json::json!({
        "regime": match frame.regime {
            Regime::ModeratelySoft => "moderately_soft",
            Regime::VerySoft => "very_soft",
            Regime::SmallV0 => "small_v0",
        },
        "v0_norm": as_f64(frame.v0_norm()),
        "c_bar": as_f64(frame.c_bar),
        "t0": frame.t0_map.0.iter().map(|row| row.map(as_f64).to_vec()).collect::<Vec<_>>(),
        "radius": as_f64(r),
        "radius_parallel": as_f64(par),
        "radius_perp": as_f64(perp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn very_soft_params() -> ModelParams<f64> {
        ModelParams::new(-2.0, 0.5, 1.0, 1e-2).unwrap()
    }

    fn moderately_soft_params() -> ModelParams<f64> {
        ModelParams::new(-1.0, 0.7, 1.0, 1e-2).unwrap()
    }

    fn frame_at(v0: Vec3<f64>, params: &ModelParams<f64>) -> CovFrame<f64> {
        build_frame(
            KineticPoint::new(1.0, Vec3::new(0.5, -0.25, 2.0), v0),
            params,
        )
    }

    #[test]
    fn regimes_are_total_and_exclusive() {
        let p_vs = very_soft_params();
        let p_ms = moderately_soft_params();
        assert_eq!(frame_at(Vec3::axis(0) * 0.5, &p_vs).regime, Regime::SmallV0);
        assert_eq!(frame_at(Vec3::axis(0) * 2.0, &p_vs).regime, Regime::SmallV0);
        assert_eq!(frame_at(Vec3::axis(0) * 4.0, &p_vs).regime, Regime::VerySoft);
        assert_eq!(
            frame_at(Vec3::axis(0) * 4.0, &p_ms).regime,
            Regime::ModeratelySoft
        );
    }

    #[test]
    fn t0_values_match_hand_calculation() {
        // moderately soft, v0 = 4e1: T0 v0 = e1, T0 e2 = e2
        let f = frame_at(Vec3::axis(0) * 4.0, &moderately_soft_params());
        assert!((f.t0_map.apply(Vec3::axis(0) * 4.0) - Vec3::axis(0)).norm() < 1e-14);
        assert!((f.t0_map.apply(Vec3::axis(1)) - Vec3::axis(1)).norm() < 1e-14);
        // very soft γ=-2, s=1/2, v0 = 4e1: exponent (γ+2s)/2s = -1:
        // T0 v0 = e1/4, T0 e2 = e2/4
        let f = frame_at(Vec3::axis(0) * 4.0, &very_soft_params());
        assert!((f.t0_map.apply(Vec3::axis(0) * 4.0) - Vec3::axis(0) * 0.25).norm() < 1e-14);
        assert!((f.t0_map.apply(Vec3::axis(1)) - Vec3::axis(1) * 0.25).norm() < 1e-14);
        // c̄ = -γ/2s = 2 in the very soft case, 1 otherwise
        assert_eq!(f.c_bar, 2.0);
        assert_eq!(frame_at(Vec3::axis(0) * 4.0, &moderately_soft_params()).c_bar, 1.0);
    }

    #[test]
    fn t0_inverse_to_tolerance() {
        for p in [very_soft_params(), moderately_soft_params()] {
            let f = frame_at(Vec3::new(3.0, -2.0, 1.0), &p);
            let prod = f.t0_map.matmul(&f.t0_inv);
            assert!(prod.max_abs_diff(&Mat3::identity()) < 1e-12);
        }
    }

    #[test]
    fn apply_cov_reference_points() {
        let p = very_soft_params();
        let f = frame_at(Vec3::axis(0) * 4.0, &p);
        // z = 0 maps to z0
        let img = apply_cov(&f, KineticPoint::origin());
        assert_eq!(img, f.z0);
        // very soft, z = (1, 0, e2): z0 ∘ (1, 0, e2/4)
        let img = apply_cov(&f, KineticPoint::new(1.0, Vec3::zero(), Vec3::axis(1)));
        assert!((img.t - (f.z0.t + 1.0)).abs() < 1e-14);
        assert!((img.x - (f.z0.x + f.z0.v)).norm() < 1e-14);
        assert!((img.v - (f.z0.v + Vec3::axis(1) * 0.25)).norm() < 1e-14);
    }

    #[test]
    fn apply_then_invert_is_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [very_soft_params(), moderately_soft_params()] {
            for v0 in [Vec3::axis(0) * 0.5, Vec3::new(3.0, 1.0, -2.0)] {
                let f = frame_at(v0, &p);
                for _ in 0..20 {
                    let mut c = || rng.gen_range(-2.0..2.0);
                    let z = KineticPoint::new(c(), Vec3::new(c(), c(), c()), Vec3::new(c(), c(), c()));
                    let back = apply_cov_inverse(&f, apply_cov(&f, z));
                    assert!((back.t - z.t).abs() < 1e-12);
                    assert!((back.x - z.x).norm() < 1e-12);
                    assert!((back.v - z.v).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn ellipsoid_radii_hand_values() {
        let f = frame_at(Vec3::axis(0) * 4.0, &very_soft_params());
        let (par, perp) = ellipsoid_radii(&f, 1.0).unwrap();
        assert!((par - 1.0 / 16.0).abs() < 1e-14);
        assert!((perp - 0.25).abs() < 1e-14);
        // |v0| <= 2: both radii r
        let f = frame_at(Vec3::axis(0), &very_soft_params());
        let (par, perp) = ellipsoid_radii(&f, 0.7).unwrap();
        assert_eq!((par, perp), (0.7, 0.7));
        assert!(ellipsoid_radii(&f, 0.0).is_err());
    }

    #[test]
    fn ellipsoid_membership_two_routes() {
        // pulled-back ball vs explicit quadratic form
        use rand::{Rng, SeedableRng};
        let f = frame_at(Vec3::new(2.0, 3.0, -1.0), &very_soft_params());
        let r = 0.8;
        let quadratic = |u: Vec3<f64>| {
            let d = u - f.z0.v;
            let m = f.t0_inv;
            // (T0^{-1}d)·(T0^{-1}d) < r²
            m.apply(d).norm_sq() < r * r
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let mut c = || rng.gen_range(-6.0..6.0);
            let u = Vec3::new(c(), c(), c());
            assert_eq!(ellipsoid_contains(&f, u, r), quadratic(u));
        }
    }

    #[test]
    fn transformed_kernel_inherits_symmetry_exactly() {
        let p = very_soft_params();
        let quad = QuadratureSpec::desk();
        let f = frame_at(Vec3::axis(0) * 8.0, &p);
        let m = DensityFunction::<f64>::maxwellian();
        let v = Vec3::new(0.2, -0.4, 0.1);
        for w in [Vec3::new(0.5, 0.2, -0.3), Vec3::axis(2) * 1.5] {
            let kp = transformed_kernel_offset(&f, &m, v, w, &quad).unwrap();
            let km = transformed_kernel_offset(&f, &m, v, -w, &quad).unwrap();
            assert_eq!(kp.to_bits(), km.to_bits());
        }
        // zero density → zero kernel
        let z = DensityFunction::<f64>::zero();
        assert_eq!(
            transformed_kernel(&f, &z, v, v + Vec3::axis(1), &quad).unwrap(),
            0.0
        );
    }

    #[test]
    fn distance_contraction_bounds_very_soft() {
        // d(𝒯z, 𝒯z₁) ≤ d(z,z₁) and d(𝒯⁻¹z, 𝒯⁻¹z₁) ≤ |v₀|^{-γ/2s} d(z,z₁),
        // with minimizer slack.
        use crate::geometry::distance_value;
        use rand::{Rng, SeedableRng};
        let p = very_soft_params();
        let f = frame_at(Vec3::axis(0) * 6.0, &p);
        let slack = 1e-5;
        let expand = f.v0_norm().powf(-p.gamma / (2.0 * p.s));
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..12 {
            let mut c = || rng.gen_range(-0.8..0.8);
            let z1 = KineticPoint::new(c(), Vec3::new(c(), c(), c()), Vec3::new(c(), c(), c()));
            let z2 = KineticPoint::new(c(), Vec3::new(c(), c(), c()), Vec3::new(c(), c(), c()));
            let d = distance_value(z1, z2, p.s).unwrap();
            let d_fwd = distance_value(apply_cov(&f, z1), apply_cov(&f, z2), p.s).unwrap();
            assert!(d_fwd <= d * (1.0 + slack) + slack, "{d_fwd} vs {d}");
            let d_bwd =
                distance_value(apply_cov_inverse(&f, z1), apply_cov_inverse(&f, z2), p.s).unwrap();
            assert!(
                d_bwd <= expand * d * (1.0 + slack) + slack,
                "{d_bwd} vs {} * {d}",
                expand
            );
        }
    }

    #[test]
    fn small_cylinder_contained_in_twisted() {
        // Q_{r|v₀|^{-c̄}}(z₀) ⊆ 𝓔_r(z₀) by random membership.
        use rand::SeedableRng;
        for p in [very_soft_params(), moderately_soft_params()] {
            let f = frame_at(Vec3::axis(0) * 4.0, &p);
            let r = 0.9;
            let r_small = r * f.v0_norm().powf(-f.c_bar);
            let mut rng = ChaCha8Rng::seed_from_u64(33);
            for _ in 0..300 {
                let y = sample_unit_cylinder(&mut rng, r_small, p.s);
                // shrink slightly off the boundary to keep strict inequalities
                let y = KineticPoint::new(y.t * 0.999, y.x * 0.999, y.v * 0.999);
                let z = lie_product(f.z0, y);
                assert!(
                    twisted_cylinder_contains(&f, z, r),
                    "point escaped the twisted cylinder"
                );
            }
        }
    }

    #[test]
    fn transfer_check_constant_field_is_zero() {
        let p = very_soft_params();
        let f = frame_at(Vec3::axis(0) * 8.0, &p);
        let rep = holder_transfer_check(&f, &|_| 3.0, 0.4, 1.0, 24, 7).unwrap();
        assert_eq!(rep.seminorm_straight.value, 0.0);
        assert_eq!(rep.seminorm_twisted.value, 0.0);
    }

    #[test]
    fn transfer_check_small_v0_is_isometric() {
        // 𝒯₀ is a left translation, d is left invariant: seminorms agree.
        // Sample well inside the unit-distance admissibility cutoff so no
        // pair sits on the boundary.
        let p = very_soft_params();
        let f = frame_at(Vec3::axis(0), &p);
        let field = |z: KineticPoint<f64>| z.v[1] + 0.2 * z.v[0];
        let rep = holder_transfer_check(&f, &field, 0.4, 0.35, 24, 11).unwrap();
        let rel = (rep.seminorm_straight.value - rep.seminorm_twisted.value).abs()
            / rep.seminorm_twisted.value;
        assert!(rel < 1e-3, "seminorms differ: {rep:?}");
    }

    #[test]
    fn transfer_ratios_stable_across_v0() {
        let p = very_soft_params();
        let beta = 0.4;
        let field = |z: KineticPoint<f64>| z.v[0] + 0.5 * z.v[1] * z.v[1];
        let mut fwd = Vec::new();
        let mut bwd = Vec::new();
        for v0 in [4.0, 8.0, 16.0] {
            let f = frame_at(Vec3::axis(0) * v0, &p);
            let rep = holder_transfer_check(&f, &field, beta, 1.0, 32, 13).unwrap();
            fwd.push(rep.ratio_forward);
            bwd.push(rep.ratio_backward);
        }
        for list in [&fwd, &bwd] {
            let max = list.iter().cloned().fold(f64::MIN, f64::max);
            let min = list.iter().cloned().fold(f64::MAX, f64::min);
            assert!(min > 0.0, "ratios collapsed: {list:?}");
            assert!(max / min < 4.0, "ratio drift across v0: {list:?}");
        }
    }
}
