//! Kinetic Lie-group geometry: products, dilations, the left-invariant
//! distance, kinetic cylinders, kinetic degree, and scattered-sample Hölder
//! seminorm estimation.
//!
//! The distance
//!   d(z₁,z₂) = min over w of max(|t₁-t₂|^{1/2s}, |x₁-x₂-(t₁-t₂)w|^{1/(1+2s)},
//!                               |v₁-w|, |v₂-w|)
//! has no closed form in general and fails the triangle inequality when
//! s < 1/2, so nothing here assumes it. The reported value is an upper bound
//! for the true minimum, computed by deterministic multi-start Nelder–Mead.

use crate::error::{Error, Result};
use crate::minimize::{multi_start, NelderMeadOpts};
use crate::scalar::{as_f64, lit, Real};
use crate::vec3::Vec3;

/// A point z = (t, x, v) of the kinetic Lie group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticPoint<R> {
    pub t: R,
    pub x: Vec3<R>,
    pub v: Vec3<R>,
}

impl<R: Real> KineticPoint<R> {
    pub fn new(t: R, x: Vec3<R>, v: Vec3<R>) -> Self {
        KineticPoint { t, x, v }
    }

    pub fn origin() -> Self {
        KineticPoint {
            t: R::zero(),
            x: Vec3::zero(),
            v: Vec3::zero(),
        }
    }

    /// Pure velocity translation (0, 0, w).
    pub fn velocity(w: Vec3<R>) -> Self {
        KineticPoint {
            t: R::zero(),
            x: Vec3::zero(),
            v: w,
        }
    }
}

/// z₁ ∘ z₂ = (t₁+t₂, x₁+x₂+t₂v₁, v₁+v₂).
pub fn lie_product<R: Real>(z1: KineticPoint<R>, z2: KineticPoint<R>) -> KineticPoint<R> {
    KineticPoint {
        t: z1.t + z2.t,
        x: z1.x + z2.x + z1.v * z2.t,
        v: z1.v + z2.v,
    }
}

/// Group inverse: (-t, -x + tv, -v).
pub fn lie_inverse<R: Real>(z: KineticPoint<R>) -> KineticPoint<R> {
    KineticPoint {
        t: -z.t,
        x: -z.x + z.v * z.t,
        v: -z.v,
    }
}

/// δ_r(z) = (r^{2s} t, r^{1+2s} x, r v).
pub fn dilate<R: Real>(r: R, z: KineticPoint<R>, s: R) -> KineticPoint<R> {
    let two_s = s * lit(2.0);
    KineticPoint {
        t: z.t * r.powf(two_s),
        x: z.x * r.powf(R::one() + two_s),
        v: z.v * r,
    }
}

/// Settings for the distance minimizer.
#[derive(Debug, Clone)]
pub struct DistanceOpts<R> {
    pub extra_starts: Vec<Vec3<R>>,
    pub nm: NelderMeadOpts<R>,
}

impl<R: Real> Default for DistanceOpts<R> {
    fn default() -> Self {
        DistanceOpts {
            extra_starts: Vec::new(),
            nm: NelderMeadOpts::default(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DistanceResult<R> {
    pub value: R,
    /// The minimizing w achieved by the search.
    pub achieved_w: Vec3<R>,
}

/// d_ℓ(z₁, z₂). Deterministic start set {v₁, v₂, midpoint} plus any
/// caller-provided extras; the result is an upper bound for the true min.
pub fn kinetic_distance<R: Real>(
    z1: KineticPoint<R>,
    z2: KineticPoint<R>,
    s: R,
    opt: &DistanceOpts<R>,
) -> Result<DistanceResult<R>> {
    let dt = z1.t - z2.t;
    let dx = z1.x - z2.x;
    let two_s = s * lit(2.0);
    let et = R::one() / two_s;
    let ex = R::one() / (R::one() + two_s);
    let tt = dt.abs().powf(et);
    let objective = move |w: Vec3<R>| {
        let xs = (dx - w * dt).norm().powf(ex);
        tt.max(xs).max((z1.v - w).norm()).max((z2.v - w).norm())
    };
    let mut starts = vec![z1.v, z2.v, (z1.v + z2.v) * lit(0.5)];
    starts.extend(opt.extra_starts.iter().copied());
    let mut nm = opt.nm;
    nm.scale = lit::<R>(0.25) * (R::one() + (z1.v - z2.v).norm());
    let res = multi_start(objective, &starts, &nm);
    if !res.converged {
        return Err(Error::MinimizerDiverged {
            best: as_f64(res.value),
        });
    }
    Ok(DistanceResult {
        value: res.value,
        achieved_w: res.arg,
    })
}

/// Convenience wrapper returning just the value.
pub fn distance_value<R: Real>(z1: KineticPoint<R>, z2: KineticPoint<R>, s: R) -> Result<R> {
    Ok(kinetic_distance(z1, z2, s, &DistanceOpts::default())?.value)
}

/// Kinetic cylinder Q_r(z₀).
#[derive(Debug, Clone, Copy)]
pub struct KineticCylinder<R> {
    pub center: KineticPoint<R>,
    pub radius: R,
}

impl<R: Real> KineticCylinder<R> {
    pub fn new(center: KineticPoint<R>, radius: R) -> Result<Self> {
        if !(radius > R::zero()) {
            return Err(Error::Parameter("cylinder radius must be positive".into()));
        }
        Ok(KineticCylinder { center, radius })
    }
}

/// Membership: t₀ - r^{2s} < t ≤ t₀, |x - x₀ - (t - t₀)v₀| < r^{1+2s},
/// |v - v₀| < r.
pub fn cylinder_contains<R: Real>(q: &KineticCylinder<R>, z: KineticPoint<R>, s: R) -> bool {
    let z0 = q.center;
    let r = q.radius;
    let two_s = s * lit(2.0);
    let dt = z.t - z0.t;
    if !(dt <= R::zero() && dt > -r.powf(two_s)) {
        return false;
    }
    let xs = z.x - z0.x - z0.v * dt;
    if !(xs.norm() < r.powf(R::one() + two_s)) {
        return false;
    }
    (z.v - z0.v).norm() < r
}

/// Kinetic degree of a monomial t^{α₀} x^{α₁..α₃} v^{α₄..α₆}:
/// 2s·α₀ + (1+2s)(α₁+α₂+α₃) + α₄+α₅+α₆.
pub fn kinetic_degree<R: Real>(exponents: [u32; 7], s: R) -> R {
    let two_s = s * lit(2.0);
    let a0: R = lit(exponents[0] as f64);
    let ax: R = lit((exponents[1] + exponents[2] + exponents[3]) as f64);
    let av: R = lit((exponents[4] + exponents[5] + exponents[6]) as f64);
    two_s * a0 + (R::one() + two_s) * ax + av
}

/// Outcome of a scattered-sample seminorm estimate.
#[derive(Debug, Clone, Copy)]
pub struct HolderEstimate<R> {
    pub value: R,
    /// Number of admissible sample pairs that entered the sup.
    pub pairs_used: usize,
}

/// Weighted finite-difference Hölder seminorm over a sample cloud:
/// sup over admissible pairs of (1+|v|)^{weight_q} |F(z₁)-F(z₂)| / d^α,
/// the weight evaluated at the pair's smaller |v|. Pairs are admissible when
/// they fit in a common unit-scale cylinder, realized here as d ≤ 1.
///
/// Requires α < min(1, 2s) so the finite-difference form is exact.
pub fn holder_seminorm<R: Real>(
    samples: &[(KineticPoint<R>, R)],
    alpha: R,
    weight_q: R,
    s: R,
    opt: &DistanceOpts<R>,
) -> Result<HolderEstimate<R>> {
    if !(alpha > R::zero() && alpha < R::one().min(s * lit(2.0))) {
        return Err(Error::Parameter(
            "holder exponent must lie in (0, min(1, 2s))".into(),
        ));
    }
    if samples.len() < 2 {
        return Err(Error::Parameter("need at least 2 samples".into()));
    }
    let mut sup = R::zero();
    let mut pairs_used = 0usize;
    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            let (z1, f1) = samples[i];
            let (z2, f2) = samples[j];
            let d = kinetic_distance(z1, z2, s, opt)?.value;
            if d == R::zero() {
                if f1 != f2 {
                    return Err(Error::InfiniteSeminorm);
                }
                continue;
            }
            if d > R::one() {
                continue;
            }
            let vmin = z1.v.norm().min(z2.v.norm());
            let weight = (R::one() + vmin).powf(weight_q);
            let quot = weight * (f1 - f2).abs() / d.powf(alpha);
            if quot > sup {
                sup = quot;
            }
            pairs_used += 1;
        }
    }
    Ok(HolderEstimate {
        value: sup,
        pairs_used,
    })
}

/// One invariant check of the self-test battery.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SelftestCheck {
    pub name: String,
    pub max_err: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Aggregate outcome of the geometry invariant battery.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SelftestReport {
    pub s: f64,
    pub pairs: usize,
    pub seed: u64,
    pub checks: Vec<SelftestCheck>,
    pub pass: bool,
}

/// Run the invariant battery on random pairs: left invariance, dilation
/// homogeneity, right-velocity-translation bound, symmetry, and the group
/// axioms.
pub fn selftest(s: f64, n_pairs: usize, seed: u64) -> Result<SelftestReport> {
    use rand::{Rng, SeedableRng};
    fn rand_point(rng: &mut rand_chacha::ChaCha8Rng, scale: f64) -> KineticPoint<f64> {
        let mut c = || rng.gen_range(-scale..scale);
        let t = c();
        let x = Vec3::new(c(), c(), c());
        let v = Vec3::new(c(), c(), c());
        KineticPoint::new(t, x, v)
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut left_err = 0.0f64;
    let mut dil_err = 0.0f64;
    let mut right_excess = 0.0f64;
    let mut sym_err = 0.0f64;
    let mut group_err = 0.0f64;
    let ex = 1.0 / (1.0 + 2.0 * s);
    for _ in 0..n_pairs {
        let z1 = rand_point(&mut rng, 1.5);
        let z2 = rand_point(&mut rng, 1.5);
        let xi = rand_point(&mut rng, 1.5);
        let d = distance_value(z1, z2, s)?;
        let d_shift = distance_value(lie_product(xi, z1), lie_product(xi, z2), s)?;
        left_err = left_err.max((d - d_shift).abs() / (1.0 + d));
        let r: f64 = rng.gen_range(0.3..3.0);
        let d_dil = distance_value(dilate(r, z1, s), dilate(r, z2, s), s)?;
        dil_err = dil_err.max((d_dil - r * d).abs() / (1.0 + r * d));
        let w = Vec3::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let shift = KineticPoint::velocity(w);
        let lhs = distance_value(lie_product(z1, shift), lie_product(z2, shift), s)?;
        let bound = d + (z1.t - z2.t).abs().powf(ex) * w.norm().powf(ex);
        right_excess = right_excess.max((lhs - bound) / (1.0 + bound));
        let d_rev = distance_value(z2, z1, s)?;
        sym_err = sym_err.max((d - d_rev).abs() / (1.0 + d));
        // group axioms
        let assoc_l = lie_product(lie_product(z1, z2), xi);
        let assoc_r = lie_product(z1, lie_product(z2, xi));
        let scale = 1.0 + assoc_l.x.norm() + assoc_l.v.norm() + assoc_l.t.abs();
        group_err = group_err.max(
            ((assoc_l.t - assoc_r.t).abs()
                + (assoc_l.x - assoc_r.x).norm()
                + (assoc_l.v - assoc_r.v).norm())
                / scale,
        );
    }
    let checks = vec![
        SelftestCheck {
            name: "left_invariance".into(),
            max_err: left_err,
            tol: 1e-6,
            pass: left_err <= 1e-6,
        },
        SelftestCheck {
            name: "dilation_homogeneity".into(),
            max_err: dil_err,
            tol: 1e-6,
            pass: dil_err <= 1e-6,
        },
        SelftestCheck {
            name: "right_translation_bound".into(),
            max_err: right_excess.max(0.0),
            tol: 1e-6,
            pass: right_excess <= 1e-6,
        },
        SelftestCheck {
            name: "symmetry".into(),
            max_err: sym_err,
            tol: 1e-12,
            pass: sym_err <= 1e-12,
        },
        SelftestCheck {
            name: "group_axioms".into(),
            max_err: group_err,
            tol: 16.0 * f64::EPSILON,
            pass: group_err <= 16.0 * f64::EPSILON,
        },
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(SelftestReport {
        s,
        pairs: n_pairs,
        seed,
        checks,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e1() -> Vec3<f64> {
        Vec3::axis(0)
    }

    fn e2() -> Vec3<f64> {
        Vec3::axis(1)
    }

    fn rand_point(rng: &mut ChaCha8Rng, scale: f64) -> KineticPoint<f64> {
        let mut c = || rng.gen_range(-scale..scale);
        KineticPoint::new(c(), Vec3::new(c(), c(), c()), Vec3::new(c(), c(), c()))
    }

    #[test]
    fn product_identity_and_translation() {
        let z = KineticPoint::new(0.7, Vec3::new(1.0, 2.0, 3.0), Vec3::new(-1.0, 0.5, 0.0));
        assert_eq!(lie_product(z, KineticPoint::origin()), z);
        // x picks up t₂·v₁
        let a = KineticPoint::new(1.0, Vec3::zero(), e1());
        let b = KineticPoint::new(1.0, Vec3::zero(), Vec3::zero());
        let ab = lie_product(a, b);
        assert_eq!(ab.t, 2.0);
        assert_eq!(ab.x, e1());
        assert_eq!(ab.v, e1());
    }

    #[test]
    fn inverse_in_both_orders() {
        let z = KineticPoint::new(1.0, e1(), e2());
        let inv = lie_inverse(z);
        assert_eq!(inv.t, -1.0);
        assert_eq!(inv.x, -e1() + e2());
        assert_eq!(inv.v, -e2());
        for w in [lie_product(z, inv), lie_product(inv, z)] {
            assert!(w.t.abs() < 1e-15 && w.x.norm() < 1e-15 && w.v.norm() < 1e-15);
        }
        // involution
        let z2 = lie_inverse(lie_inverse(z));
        assert_eq!(z2, z);
    }

    #[test]
    fn group_axioms_within_ulps() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = rand_point(&mut rng, 2.0);
            let b = rand_point(&mut rng, 2.0);
            let c = rand_point(&mut rng, 2.0);
            let left = lie_product(lie_product(a, b), c);
            let right = lie_product(a, lie_product(b, c));
            let scale = 1.0 + left.x.norm() + left.v.norm() + left.t.abs();
            assert!((left.t - right.t).abs() <= 4.0 * f64::EPSILON * scale);
            assert!((left.x - right.x).norm() <= 8.0 * f64::EPSILON * scale);
            assert!((left.v - right.v).norm() <= 4.0 * f64::EPSILON * scale);
            let id = lie_product(a, lie_inverse(a));
            assert!(id.t.abs() + id.x.norm() + id.v.norm() <= 8.0 * f64::EPSILON * scale);
        }
    }

    #[test]
    fn dilation_arithmetic() {
        let z = KineticPoint::new(1.0, e1(), e1());
        assert_eq!(dilate(1.0, z, 0.63), z);
        let d = dilate(2.0, z, 0.5);
        assert_eq!(d.t, 2.0);
        assert_eq!(d.x, e1() * 4.0);
        assert_eq!(d.v, e1() * 2.0);
        // r-group law
        let back = dilate(2.0, dilate(0.5, z, 0.71), 0.71);
        assert!((back.t - z.t).abs() < 1e-14);
        assert!((back.x - z.x).norm() < 1e-14);
        assert!((back.v - z.v).norm() < 1e-14);
    }

    #[test]
    fn distance_of_equal_points_is_zero() {
        let z = KineticPoint::new(0.2, e1(), e2());
        let d = distance_value(z, z, 0.6).unwrap();
        assert!(d.abs() < 1e-9);
    }

    #[test]
    fn distance_pure_velocity_separation() {
        // t, x equal; v₁ = 0, v₂ = 2e₁ → minimax at the midpoint: d = 1.
        let z1 = KineticPoint::new(0.0, Vec3::zero(), Vec3::zero());
        let z2 = KineticPoint::new(0.0, Vec3::zero(), e1() * 2.0);
        let r = kinetic_distance(z1, z2, 0.5, &DistanceOpts::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-7, "d = {}", r.value);
        assert!((r.achieved_w - e1()).norm() < 1e-3);
    }

    #[test]
    fn distance_left_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = 0.6;
        for _ in 0..25 {
            let z1 = rand_point(&mut rng, 1.5);
            let z2 = rand_point(&mut rng, 1.5);
            let xi = rand_point(&mut rng, 1.5);
            let d0 = distance_value(z1, z2, s).unwrap();
            let d1 = distance_value(lie_product(xi, z1), lie_product(xi, z2), s).unwrap();
            assert!(
                (d0 - d1).abs() <= 1e-6 * (1.0 + d0),
                "left invariance broke: {d0} vs {d1}"
            );
        }
    }

    #[test]
    fn distance_dilation_homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let s = 0.5;
        for _ in 0..25 {
            let z1 = rand_point(&mut rng, 1.5);
            let z2 = rand_point(&mut rng, 1.5);
            let r = rng.gen_range(0.3..3.0);
            let d0 = distance_value(z1, z2, s).unwrap();
            let d1 = distance_value(dilate(r, z1, s), dilate(r, z2, s), s).unwrap();
            assert!(
                (d1 - r * d0).abs() <= 1e-6 * (1.0 + r * d0),
                "dilation homogeneity broke: {d1} vs {}",
                r * d0
            );
        }
    }

    #[test]
    fn distance_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let s = 0.7;
        for _ in 0..10 {
            let z1 = rand_point(&mut rng, 1.5);
            let z2 = rand_point(&mut rng, 1.5);
            let d12 = distance_value(z1, z2, s).unwrap();
            let d21 = distance_value(z2, z1, s).unwrap();
            assert!((d12 - d21).abs() <= 1e-12 * (1.0 + d12));
        }
    }

    #[test]
    fn distance_right_velocity_translation_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let s = 0.6;
        let ex = 1.0 / (1.0 + 2.0 * s);
        for _ in 0..15 {
            let z1 = rand_point(&mut rng, 1.2);
            let z2 = rand_point(&mut rng, 1.2);
            let w = Vec3::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let shift = KineticPoint::velocity(w);
            let lhs = distance_value(lie_product(z1, shift), lie_product(z2, shift), s).unwrap();
            let d = distance_value(z1, z2, s).unwrap();
            let bound = d + (z1.t - z2.t).abs().powf(ex) * w.norm().powf(ex);
            assert!(
                lhs <= bound + 1e-6 * (1.0 + bound),
                "right translation bound broke: {lhs} vs {bound}"
            );
        }
    }

    #[test]
    fn cylinder_membership_boundaries() {
        let s = 0.5;
        let z0 = KineticPoint::new(1.0, e1(), e2());
        let q = KineticCylinder::new(z0, 0.5).unwrap();
        assert!(cylinder_contains(&q, z0, s));
        // open lower time face: t = t₀ - r^{2s} excluded
        let z_low = KineticPoint::new(1.0 - 0.5f64.powf(1.0), e1(), e2());
        assert!(!cylinder_contains(&q, z_low, s));
    }

    #[test]
    fn cylinder_transform_route_agreement() {
        // Q_r(z₀) = z₀ ∘ δ_r(Q₁): membership agrees between direct test and
        // pulling the point back through the transform.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let s = 0.62;
        let z0 = KineticPoint::new(0.4, Vec3::new(0.3, -1.0, 0.2), Vec3::new(0.5, 0.1, -0.7));
        let r = 0.8;
        let q_r = KineticCylinder::new(z0, r).unwrap();
        let q_1 = KineticCylinder::new(KineticPoint::origin(), 1.0).unwrap();
        for _ in 0..200 {
            let z = rand_point(&mut rng, 1.2);
            let direct = cylinder_contains(&q_r, z, s);
            // z = z₀ ∘ δ_r(y) ⇒ y = δ_{1/r}(z₀⁻¹ ∘ z)
            let y = dilate(1.0 / r, lie_product(lie_inverse(z0), z), s);
            let transformed = cylinder_contains(&q_1, y, s);
            assert_eq!(direct, transformed);
        }
    }

    #[test]
    fn kinetic_degree_values() {
        assert_eq!(kinetic_degree([0, 0, 0, 0, 0, 0, 0], 0.77f64), 0.0);
        // s = 1/2: t·x₁·v₂ → 1 + 2 + 1 = 4
        assert_eq!(kinetic_degree([1, 1, 0, 0, 0, 1, 0], 0.5f64), 4.0);
    }

    #[test]
    fn degree_scaling_compatibility() {
        // deg_k(p ∘ δ_r) multiplies monomial coefficients by r^{deg_k}.
        let s = 0.65f64;
        let exps = [1u32, 0, 1, 0, 2, 0, 0];
        let deg = kinetic_degree(exps, s);
        let r = 1.7f64;
        let z = KineticPoint::new(0.9, Vec3::new(0.4, 1.1, -0.3), Vec3::new(0.2, -0.5, 0.8));
        let monomial = |p: KineticPoint<f64>| {
            p.t.powi(exps[0] as i32)
                * p.x[0].powi(exps[1] as i32)
                * p.x[1].powi(exps[2] as i32)
                * p.x[2].powi(exps[3] as i32)
                * p.v[0].powi(exps[4] as i32)
                * p.v[1].powi(exps[5] as i32)
                * p.v[2].powi(exps[6] as i32)
        };
        let lhs = monomial(dilate(r, z, s));
        let rhs = r.powf(deg) * monomial(z);
        assert!((lhs - rhs).abs() < 1e-12 * rhs.abs());
    }

    #[test]
    fn seminorm_constant_field_is_zero() {
        let pts = [
            (KineticPoint::new(0.0, Vec3::zero(), Vec3::zero()), 2.0),
            (KineticPoint::new(0.0, Vec3::zero(), e1() * 0.5), 2.0),
            (KineticPoint::new(-0.1, e2() * 0.2, e1()), 2.0),
        ];
        let est = holder_seminorm(&pts, 0.4, 0.0, 0.6, &DistanceOpts::default()).unwrap();
        assert_eq!(est.value, 0.0);
        assert!(est.pairs_used > 0);
    }

    #[test]
    fn seminorm_coordinate_field_two_points() {
        // F(z) = v₁, α = 1/2, s = 1/2, points at v = 0 and v = e₁:
        // d = 1/2 (midpoint), quotient = 1 / (1/2)^{1/2} = √2.
        let pts = [
            (KineticPoint::new(0.0, Vec3::zero(), Vec3::zero()), 0.0),
            (KineticPoint::new(0.0, Vec3::zero(), e1()), 1.0),
        ];
        let est = holder_seminorm(&pts, 0.5, 0.0, 0.5, &DistanceOpts::default()).unwrap();
        assert!(
            (est.value - 2.0f64.sqrt()).abs() < 1e-6,
            "got {}",
            est.value
        );
    }

    #[test]
    fn seminorm_invariant_under_left_shift_of_cloud() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let s = 0.6;
        let field = |z: KineticPoint<f64>| z.v[0] + 0.3 * z.v[1];
        let cloud: Vec<KineticPoint<f64>> = (0..12).map(|_| rand_point(&mut rng, 0.6)).collect();
        let xi = rand_point(&mut rng, 0.8);
        let base: Vec<_> = cloud.iter().map(|&z| (z, field(z))).collect();
        // Shift the cloud and transport the values: F ∘ (ξ ∘ ·) on ξ⁻¹-shifted
        // points reproduces the same value pattern.
        let shifted: Vec<_> = cloud
            .iter()
            .map(|&z| (lie_product(xi, z), field(z)))
            .collect();
        let e0 = holder_seminorm(&base, 0.5, 0.0, s, &DistanceOpts::default()).unwrap();
        let e1 = holder_seminorm(&shifted, 0.5, 0.0, s, &DistanceOpts::default()).unwrap();
        assert!(
            (e0.value - e1.value).abs() <= 2e-5 * (1.0 + e0.value),
            "{} vs {}",
            e0.value,
            e1.value
        );
    }

    #[test]
    fn selftest_battery_passes() {
        let rep = selftest(0.6, 40, 7).unwrap();
        assert!(rep.pass, "selftest failed: {rep:?}");
        assert_eq!(rep.checks.len(), 5);
    }

    #[test]
    fn seminorm_duplicate_points_flag() {
        let z = KineticPoint::new(0.0, Vec3::zero(), Vec3::zero());
        let pts = [(z, 1.0), (z, 2.0)];
        let err = holder_seminorm(&pts, 0.4, 0.0, 0.6, &DistanceOpts::default());
        assert!(matches!(err, Err(Error::InfiniteSeminorm)));
    }
}
