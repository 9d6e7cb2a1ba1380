//! Collision geometry and the three forms of the collision operator:
//! the σ-representation
//!   Q(f,g)(v) = ∫∫ B(v-v_*,σ)[f(v_*')g(v') - f(v_*)g(v)] dσ dv_*,
//! the Carleman split Q = Q_s + Q_ns with
//!   Q_s(f,g)(v) = ∫ (g(v') - g(v)) K_f(v,v') dv',
//!   K_f(v,v') = |v'-v|^{-3-2s} ∫_{w ⊥ v'-v} f(v+w) |w|^{γ+2s+1} dw,
//!   Q_ns(f,g)(v) = c_b g(v) (f ∗ |·|^γ)(v),
//! and the weak trilinear form W(g,h,φ).
//!
//! Grazing collisions are handled by a hard cutoff at θ_min together with
//! azimuthally paired nodes, which cancel the O(θ) odd part of the integrand
//! discretely; the principal value at v' = v uses annular ±w pairing.

use crate::error::{Error, Result};
use crate::fields::TestFunction;
use crate::model::{DensityFunction, DensityKind, ModelParams};
use crate::quad::{gl_log, radial_power_rule, sphere_avg_bracket_pow, tail_integral, SphereGrid};
use crate::scalar::{lit, Real};
use crate::vec3::Vec3;
use rayon::prelude::*;

/// Post-collision velocity pair.
#[derive(Debug, Clone, Copy)]
pub struct CollisionOutcome<R> {
    pub v_post: Vec3<R>,
    pub v_star_post: Vec3<R>,
}

/// v' = (v+v_*)/2 + (|v-v_*|/2)σ, v_*' = (v+v_*)/2 - (|v-v_*|/2)σ.
pub fn post_collision<R: Real>(
    v: Vec3<R>,
    v_star: Vec3<R>,
    sigma: Vec3<R>,
) -> Result<CollisionOutcome<R>> {
    if (sigma.norm() - R::one()).abs() > lit(1e-12) {
        return Err(Error::Input("sigma must be a unit vector".into()));
    }
    let mid = (v + v_star) * lit(0.5);
    let half_sep = (v - v_star).norm() * lit(0.5);
    Ok(CollisionOutcome {
        v_post: mid + sigma * half_sep,
        v_star_post: mid - sigma * half_sep,
    })
}

/// Angular cross-section model b(cosθ) = c_b θ^{-1-2s} / sinθ, which
/// saturates the standard two-sided bounds on b·sinθ with constant c_b.
/// Below θ_min the value at θ_min is returned.
pub fn angular_b<R: Real>(cos_theta: R, params: &ModelParams<R>) -> Result<R> {
    let c = cos_theta.max(-R::one()).min(R::one());
    let theta = c.acos();
    if theta <= R::zero() {
        return Err(Error::Domain("angular cross-section undefined at θ = 0".into()));
    }
    let theta = theta.max(params.theta_min);
    let two_s = params.s * lit(2.0);
    Ok(params.c_b * theta.powf(-R::one() - two_s) / theta.sin())
}

/// B(v_rel, σ) = b(cosθ)|v_rel|^γ with cosθ = σ·v_rel/|v_rel|.
pub fn collision_kernel_b<R: Real>(
    v_rel: Vec3<R>,
    sigma: Vec3<R>,
    params: &ModelParams<R>,
) -> Result<R> {
    let n = v_rel.norm();
    if n == R::zero() {
        return Err(Error::Domain(
            "collision kernel undefined at zero relative velocity".into(),
        ));
    }
    let cos_theta = sigma.dot(v_rel) / n;
    Ok(angular_b(cos_theta, params)? * n.powf(params.gamma))
}

/// Quadrature node counts and truncation radii for collision integrals.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec<R> {
    pub n_theta: usize,
    pub n_phi: usize,
    pub n_vstar_radial: usize,
    pub n_vstar_angular: usize,
    pub plane_radial_nodes: usize,
    pub plane_angular_nodes: usize,
    pub r_max: R,
    /// Innermost annulus radius for principal-value decompositions.
    pub pv_inner_radius: R,
    /// 1D node count for closed tail-model integrals.
    pub tail_nodes: usize,
}

impl<R: Real> QuadratureSpec<R> {
    pub fn new(
        n_theta: usize,
        n_phi: usize,
        n_vstar_radial: usize,
        n_vstar_angular: usize,
        plane_radial_nodes: usize,
        plane_angular_nodes: usize,
        r_max: R,
    ) -> Result<Self> {
        let spec = QuadratureSpec {
            n_theta,
            n_phi,
            n_vstar_radial,
            n_vstar_angular,
            plane_radial_nodes,
            plane_angular_nodes,
            r_max,
            pv_inner_radius: lit(1e-3),
            tail_nodes: 32,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            self.n_theta,
            self.n_phi,
            self.n_vstar_radial,
            self.n_vstar_angular,
            self.plane_radial_nodes,
            self.plane_angular_nodes,
        ];
        if counts.iter().any(|&c| c < 2) {
            return Err(Error::Parameter("all node counts must be >= 2".into()));
        }
        if !(self.r_max > R::zero()) {
            return Err(Error::Parameter("r_max must be positive".into()));
        }
        Ok(())
    }

    /// Doubled node counts (and halved PV inner radius) for refinement runs.
    pub fn doubled(&self) -> Self {
        QuadratureSpec {
            n_theta: self.n_theta * 2,
            n_phi: self.n_phi * 2,
            n_vstar_radial: self.n_vstar_radial * 2,
            n_vstar_angular: self.n_vstar_angular * 2,
            plane_radial_nodes: self.plane_radial_nodes * 2,
            plane_angular_nodes: self.plane_angular_nodes * 2,
            r_max: self.r_max,
            pv_inner_radius: self.pv_inner_radius * lit(0.5),
            tail_nodes: self.tail_nodes * 2,
        }
    }

    /// Desk-scale default.
    pub fn desk() -> Self {
        QuadratureSpec {
            n_theta: 16,
            n_phi: 8,
            n_vstar_radial: 12,
            n_vstar_angular: 8,
            plane_radial_nodes: 16,
            plane_angular_nodes: 12,
            r_max: lit(12.0),
            pv_inner_radius: lit(1e-3),
            tail_nodes: 32,
        }
    }
}

/// σ-form evaluation with gain/loss split and truncation indicators.
#[derive(Debug, Clone, Copy)]
pub struct QSigma<R> {
    pub value: R,
    pub gain: R,
    pub loss: R,
    /// Angular mass of the Taylor-cancelled order below θ_min:
    /// c_b θ_min^{2-2s}/(2-2s).
    pub neglected_grazing: R,
}

fn check_sigma_decay<R: Real>(f: &DensityFunction<R>, params: &ModelParams<R>) -> Result<()> {
    let needed = lit::<R>(3.0) + params.gamma_plus_2s();
    if f.q_tail() <= needed {
        return Err(Error::Integrability(format!(
            "tail exponent {} does not exceed 3 + gamma + 2s = {}",
            crate::scalar::as_f64(f.q_tail()),
            crate::scalar::as_f64(needed),
        )));
    }
    Ok(())
}

/// Q(f,g)(v) in σ-form. The θ integral is truncated at θ_min (with paired
/// azimuths so the grazing O(θ) part cancels discretely) and the v_* integral
/// is truncated at r_max with a closed tail-model correction on the loss
/// side.
pub fn q_sigma<R: Real>(
    f: &DensityFunction<R>,
    g: &DensityFunction<R>,
    v: Vec3<R>,
    params: &ModelParams<R>,
    quad: &QuadratureSpec<R>,
) -> Result<QSigma<R>> {
    check_sigma_decay(f, params)?;
    check_sigma_decay(g, params)?;
    quad.validate()?;

    let two_s = params.s * lit(2.0);
    let theta_rule = gl_log(quad.n_theta, params.theta_min, R::PI());
    let n_phi = quad.n_phi + quad.n_phi % 2;
    let dphi = lit::<R>(2.0) * R::PI() / lit(n_phi as f64);
    let sphere = SphereGrid::oriented(quad.n_vstar_angular, quad.n_vstar_angular, axis_for(v));
    let radial = radial_power_rule(quad.n_vstar_radial, quad.r_max, params.gamma + lit(2.0));

    let g_v = g.eval(v);
    let mut gain = R::zero();
    let mut loss = R::zero();

    for &(r, w_r) in &radial {
        for (omega, w_omega) in sphere.dirs.iter().zip(&sphere.weights) {
            let v_star = v + *omega * r;
            let f_star = f.eval(v_star);
            // k̂ points from v_* to v.
            let k_hat = -*omega;
            let (u1, u2) = k_hat.orthonormal_complement();
            let mid = (v + v_star) * lit(0.5);
            let half_r = r * lit(0.5);
            let mut ang_gain = R::zero();
            let mut ang_loss = R::zero();
            for &(theta, w_theta) in &theta_rule {
                // b(cosθ) sinθ = c_b θ^{-1-2s}
                let b_sin = params.c_b * theta.powf(-R::one() - two_s);
                let (sin_t, cos_t) = (theta.sin(), theta.cos());
                let mut pair_sum = R::zero();
                for j in 0..n_phi / 2 {
                    let phi = dphi * lit(j as f64);
                    for sgn in [R::one(), -R::one()] {
                        let planar = u1 * (phi.cos() * sgn) + u2 * (phi.sin() * sgn);
                        let sigma = k_hat * cos_t + planar * sin_t;
                        let v_prime = mid + sigma * half_r;
                        let v_star_prime = mid - sigma * half_r;
                        pair_sum = pair_sum + f.eval(v_star_prime) * g.eval(v_prime);
                    }
                }
                ang_gain = ang_gain + w_theta * b_sin * dphi * pair_sum;
                ang_loss =
                    ang_loss + w_theta * b_sin * dphi * lit(n_phi as f64) * f_star * g_v;
            }
            gain = gain + w_r * *w_omega * ang_gain;
            loss = loss + w_r * *w_omega * ang_loss;
        }
    }

    // Loss-side tail beyond r_max via the tail model (exact sphere average).
    if f.tail_amplitude > R::zero() {
        let theta_total = theta_rule
            .iter()
            .map(|&(theta, w)| w * params.c_b * theta.powf(-R::one() - two_s))
            .fold(R::zero(), |a, b| a + b)
            * lit::<R>(2.0)
            * R::PI();
        let qt = f.tail_exponent;
        let amp = f.tail_amplitude;
        let vn = v.norm();
        let conv_tail = tail_integral(quad.tail_nodes, quad.r_max, |r: R| {
            r.powf(params.gamma + lit(2.0))
                * amp
                * sphere_avg_bracket_pow(vn, r, qt)
                * lit::<R>(4.0)
                * R::PI()
        });
        loss = loss + theta_total * g_v * conv_tail;
    }

    let neglected_grazing =
        params.c_b * params.theta_min.powf(lit::<R>(2.0) - two_s) / (lit::<R>(2.0) - two_s);
    Ok(QSigma {
        value: gain - loss,
        gain,
        loss,
        neglected_grazing,
    })
}

/// Carleman kernel K_f(v, v') by polar quadrature over the hyperplane
/// through v orthogonal to v' - v, with b̃ ≡ 1.
pub fn carleman_kernel<R: Real>(
    f: &DensityFunction<R>,
    v: Vec3<R>,
    v_prime: Vec3<R>,
    params: &ModelParams<R>,
    quad: &QuadratureSpec<R>,
) -> Result<R> {
    carleman_kernel_offset(f, v, v_prime - v, params, quad)
}

/// K_f(v, v + w) in offset form. The offset is canonicalized in sign, so
/// ±w evaluate on bit-identical node sets and the kernel symmetry
/// K_f(v, v+w) = K_f(v, v-w) is exact.
pub fn carleman_kernel_offset<R: Real>(
    f: &DensityFunction<R>,
    v: Vec3<R>,
    w_off: Vec3<R>,
    params: &ModelParams<R>,
    quad: &QuadratureSpec<R>,
) -> Result<R> {
    let d = canonical_direction(w_off);
    let dist = d.norm();
    if dist == R::zero() {
        return Err(Error::Domain("Carleman kernel undefined at v' = v".into()));
    }
    let e = d.scale(R::one() / dist);
    let (u1, u2) = e.orthonormal_complement();
    let two_s = params.s * lit(2.0);
    let exponent = params.gamma + two_s + lit(2.0);
    let per_panel = (quad.plane_radial_nodes / 4).max(3);
    let radial = crate::quad::radial_composite(
        per_panel,
        quad.pv_inner_radius.min(quad.r_max * lit(0.25)),
        quad.r_max,
        exponent,
        true,
    );
    let n_phi = quad.plane_angular_nodes + quad.plane_angular_nodes % 2;
    let dphi = lit::<R>(2.0) * R::PI() / lit(n_phi as f64);

    let mut acc = R::zero();
    for &(rho, w_rho) in &radial {
        let mut ring = R::zero();
        for j in 0..n_phi {
            let phi = dphi * lit(j as f64);
            let w = u1 * (rho * phi.cos()) + u2 * (rho * phi.sin());
            ring = ring + f.eval(v + w);
        }
        acc = acc + w_rho * dphi * ring;
    }

    if f.tail_amplitude > R::zero() {
        let amp = f.tail_amplitude;
        let qt = f.tail_exponent;
        let probe = 8usize;
        let dphi_p = lit::<R>(2.0) * R::PI() / lit(probe as f64);
        acc = acc
            + tail_integral(quad.tail_nodes, quad.r_max, |rho: R| {
                let mut ring = R::zero();
                for j in 0..probe {
                    let phi = dphi_p * lit(j as f64);
                    let w = u1 * (rho * phi.cos()) + u2 * (rho * phi.sin());
                    ring = ring + amp * (v + w).bracket().powf(-qt);
                }
                rho.powf(exponent) * dphi_p * ring
            });
    }

    Ok(dist.powf(-lit::<R>(3.0) - two_s) * acc)
}

/// Polar axis for v_*-sphere grids: along v when nonzero. Radial densities
/// make the integrand axially symmetric about v̂, which the oriented grid
/// exploits.
fn axis_for<R: Real>(v: Vec3<R>) -> Vec3<R> {
    v.normalized().unwrap_or(Vec3::axis(2))
}

/// Sign-canonical unit direction: the plane and prefactor only depend on ±e,
/// so pin the sign for exact ±w symmetry.
fn canonical_direction<R: Real>(e: Vec3<R>) -> Vec3<R> {
    for i in 0..3 {
        if e[i] > R::zero() {
            return e;
        }
        if e[i] < R::zero() {
            return -e;
        }
    }
    e
}

/// Q_s(f,g)(v) by principal-value annular decomposition with exact ±w node
/// pairing, plus an estimate of the remainder inside the innermost annulus.
#[derive(Debug, Clone, Copy)]
pub struct QsCarleman<R> {
    pub value: R,
    /// Second-moment bound for the skipped core: ½‖D²g‖_loc · conv_{γ+2s} ·
    /// r_in^{2-2s}.
    pub pv_remainder: R,
}

/// Spec-level entry: g is a density (analytic, or grid with stencil width
/// at least two cells).
pub fn q_s_carleman<R: Real>(
    f: &DensityFunction<R>,
    g: &DensityFunction<R>,
    v: Vec3<R>,
    params: &ModelParams<R>,
    quad: &QuadratureSpec<R>,
) -> Result<QsCarleman<R>> {
    check_sigma_decay(f, params)?;
    check_sigma_decay(g, params)?;
    let r_inner = match &g.kind {
        DensityKind::Grid(grid) => {
            if grid.n < 4 {
                return Err(Error::Parameter(
                    "grid density needs a stencil width of at least 2 cells".into(),
                ));
            }
            quad.pv_inner_radius.max(grid.spacing())
        }
        DensityKind::Analytic(_) => quad.pv_inner_radius,
    };
    q_s_carleman_with(f, &|u| g.eval(u), v, r_inner, params, quad)
}

/// Generic-g entry used by the verifier (e.g. C² test functions).
pub fn q_s_carleman_with<R: Real>(
    f: &DensityFunction<R>,
    g: &(dyn Fn(Vec3<R>) -> R + Sync),
    v: Vec3<R>,
    r_inner: R,
    params: &ModelParams<R>,
    quad: &QuadratureSpec<R>,
) -> Result<QsCarleman<R>> {
    quad.validate()?;
    let r_outer = quad.r_max * lit(2.0);
    let per_panel = (quad.n_vstar_radial / 3).max(3);
    let radial = crate::quad::radial_composite(per_panel, r_inner, r_outer, lit(2.0), false);
    let sphere = SphereGrid::oriented(quad.n_vstar_angular, quad.n_vstar_angular, axis_for(v));
    let pairs = sphere.antipodal_pairs();
    let g_v = g(v);

    let mut acc = R::zero();
    for &(r, w_r) in &radial {
        let mut shell = R::zero();
        for &(i, _) in &pairs {
            let w = sphere.dirs[i] * r;
            let kf = carleman_kernel_offset(f, v, w, params, quad)?;
            let paired = g(v + w) + g(v - w) - g_v - g_v;
            shell = shell + sphere.weights[i] * kf * paired;
        }
        acc = acc + w_r * shell;
    }

    // Remainder bound for the skipped core B_{r_inner}: second differences
    // of g give a local D² estimate.
    let h = r_inner;
    let mut d2 = R::zero();
    for i in 0..3 {
        let e = Vec3::axis(i);
        let second = (g(v + e * h) + g(v - e * h) - g_v - g_v) / (h * h);
        d2 = d2.max(second.abs());
    }
    let conv = convolve_power(f, params.gamma_plus_2s(), v, quad)?;
    let pv_remainder =
        lit::<R>(0.5) * d2 * conv * r_inner.powf(lit::<R>(2.0) - params.s * lit(2.0));

    Ok(QsCarleman {
        value: acc,
        pv_remainder,
    })
}

/// Q_ns(f,g)(v) = c_b · g(v) · (f ∗ |·|^γ)(v). The constant multiple of the
/// convolution is pinned to c_b; downstream checks are constant-free.
pub fn q_ns<R: Real>(
    f: &DensityFunction<R>,
    g: &DensityFunction<R>,
    v: Vec3<R>,
    params: &ModelParams<R>,
    quad: &QuadratureSpec<R>,
) -> Result<R> {
    if f.q_tail() <= lit::<R>(3.0) + params.gamma {
        return Err(Error::Integrability(
            "q_ns needs tail exponent > 3 + gamma".into(),
        ));
    }
    let g_v = g.eval(v);
    if g_v == R::zero() {
        return Ok(R::zero());
    }
    Ok(params.c_b * g_v * convolve_power(f, params.gamma, v, quad)?)
}

/// (f ∗ |·|^p)(v) = ∫ f(v+w)|w|^p dw for p > -3. The singular shell |w| < h
/// uses a local average times the closed-form shell integral; beyond r_max
/// the power tail is integrated against the exact spherical average of the
/// tail model.
pub fn convolve_power<R: Real>(
    f: &DensityFunction<R>,
    p: R,
    v: Vec3<R>,
    quad: &QuadratureSpec<R>,
) -> Result<R> {
    if p <= lit(-3.0) {
        return Err(Error::Domain("convolution power must exceed -3".into()));
    }
    if f.q_tail() <= lit::<R>(3.0) + p {
        return Err(Error::Integrability(
            "convolution needs tail exponent > 3 + p".into(),
        ));
    }
    let h = quad.pv_inner_radius;
    // Local average over center + 6 axis probes at radius h/2.
    let mut local = f.eval(v);
    for i in 0..3 {
        let e = Vec3::axis(i) * (h * lit(0.5));
        local = local + f.eval(v + e) + f.eval(v - e);
    }
    local = local / lit(7.0);
    let p3 = p + lit(3.0);
    let mut acc = local * lit::<R>(4.0) * R::PI() * h.powf(p3) / p3;

    let per_panel = (quad.n_vstar_radial / 3).max(3);
    let radial = crate::quad::radial_composite(per_panel, h, quad.r_max, p + lit(2.0), false);
    let sphere = SphereGrid::oriented(quad.n_vstar_angular, quad.n_vstar_angular, axis_for(v));
    for &(r, w_r) in &radial {
        let mut shell = R::zero();
        for (omega, w_omega) in sphere.dirs.iter().zip(&sphere.weights) {
            shell = shell + *w_omega * f.eval(v + *omega * r);
        }
        acc = acc + w_r * shell;
    }

    if f.tail_amplitude > R::zero() {
        let amp = f.tail_amplitude;
        let qt = f.tail_exponent;
        let vn = v.norm();
        acc = acc
            + tail_integral(quad.tail_nodes, quad.r_max, |r: R| {
                r.powf(p + lit(2.0))
                    * amp
                    * sphere_avg_bracket_pow(vn, r, qt)
                    * lit::<R>(4.0)
                    * R::PI()
            });
    }
    Ok(acc)
}

/// ∫ W(g, h, φ) dv over the velocity ball of radius r_max, with the inner
/// sphere integral using the same paired-azimuth grazing treatment as
/// `q_sigma`. Outer nodes run in parallel with a deterministic reduction.
pub fn weak_form_integral<R: Real>(
    g: &DensityFunction<R>,
    h: &DensityFunction<R>,
    phi: &dyn TestFunction<R>,
    params: &ModelParams<R>,
    quad: &QuadratureSpec<R>,
) -> Result<R> {
    check_sigma_decay(g, params)?;
    check_sigma_decay(h, params)?;
    quad.validate()?;

    let outer_radial = crate::quad::gl_interval(quad.n_vstar_radial, R::zero(), quad.r_max);
    let outer_sphere = SphereGrid::new(quad.n_vstar_angular, quad.n_vstar_angular);

    let mut outer_nodes: Vec<(Vec3<R>, R)> = Vec::new();
    for &(r, w_r) in &outer_radial {
        for (omega, w_omega) in outer_sphere.dirs.iter().zip(&outer_sphere.weights) {
            outer_nodes.push((*omega * r, w_r * r * r * *w_omega));
        }
    }

    let contributions: Vec<R> = outer_nodes
        .par_iter()
        .map(|&(v, w_v)| {
            let g_v = g.eval(v);
            if g_v == R::zero() {
                return R::zero();
            }
            w_v * g_v * weak_inner(g, h, phi, v, params, quad)
        })
        .collect();

    // Deterministic summation order.
    Ok(contributions.into_iter().fold(R::zero(), |a, b| a + b) * lit(0.5))
}

/// Inner double integral of W at fixed v (without the leading 1/2 and g(v)).
fn weak_inner<R: Real>(
    _g: &DensityFunction<R>,
    h: &DensityFunction<R>,
    phi: &dyn TestFunction<R>,
    v: Vec3<R>,
    params: &ModelParams<R>,
    quad: &QuadratureSpec<R>,
) -> R {
    let two_s = params.s * lit(2.0);
    let theta_rule = gl_log(quad.n_theta, params.theta_min, R::PI());
    let n_phi = quad.n_phi + quad.n_phi % 2;
    let dphi = lit::<R>(2.0) * R::PI() / lit(n_phi as f64);
    let sphere = SphereGrid::oriented(quad.n_vstar_angular, quad.n_vstar_angular, axis_for(v));
    let radial = radial_power_rule(quad.n_vstar_radial, quad.r_max, params.gamma + lit(2.0));
    let phi_v = phi.value(v);

    let mut acc = R::zero();
    for &(r, w_r) in &radial {
        for (omega, w_omega) in sphere.dirs.iter().zip(&sphere.weights) {
            let v_star = v + *omega * r;
            let h_star = h.eval(v_star);
            if h_star == R::zero() {
                continue;
            }
            let phi_star = phi.value(v_star);
            let k_hat = -*omega;
            let (u1, u2) = k_hat.orthonormal_complement();
            let mid = (v + v_star) * lit(0.5);
            let half_r = r * lit(0.5);
            let mut ang = R::zero();
            for &(theta, w_theta) in &theta_rule {
                let b_sin = params.c_b * theta.powf(-R::one() - two_s);
                let (sin_t, cos_t) = (theta.sin(), theta.cos());
                let mut bracket_sum = R::zero();
                for j in 0..n_phi {
                    let phi_az = dphi * lit(j as f64);
                    let planar = u1 * phi_az.cos() + u2 * phi_az.sin();
                    let sigma = k_hat * cos_t + planar * sin_t;
                    let v_prime = mid + sigma * half_r;
                    let v_star_prime = mid - sigma * half_r;
                    bracket_sum = bracket_sum + phi.value(v_star_prime) + phi.value(v_prime)
                        - phi_star
                        - phi_v;
                }
                ang = ang + w_theta * b_sin * dphi * bracket_sum;
            }
            acc = acc + w_r * *w_omega * h_star * ang;
        }
    }
    acc
}
