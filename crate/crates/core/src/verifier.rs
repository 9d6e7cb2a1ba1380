//! Sweep-based numerical verification of the quantitative kernel estimates:
//! each operation measures the governing ratio of one inequality over a
//! parameter grid and renders a boundedness/positivity verdict. The
//! inequalities come with non-numeric constants, so "pass" always means
//! bounded and refinement-stable, never equal to a prescribed number; every
//! report archives the measured constant.

use crate::collision::{
    carleman_kernel_offset, convolve_power, q_s_carleman_with, QuadratureSpec,
};
use crate::cov::{build_frame, transformed_kernel, transformed_kernel_offset, CovFrame};
use crate::error::{Error, Result};
use crate::fields::TestFunction;
use crate::geometry::{holder_seminorm, DistanceOpts, KineticPoint};
use crate::model::{
    weighted_sup_norm, DensityFunction, LowerBoundSpec, ModelParams, SampleSpec,
};
use crate::quad::{gl_log, SphereGrid};
use crate::scalar::{as_f64, lit, Real};
use crate::vec3::Vec3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// One sweep location, as labeled coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub coords: BTreeMap<String, f64>,
}

impl SweepPoint {
    pub fn new(pairs: &[(&str, f64)]) -> Self {
        SweepPoint {
            coords: pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

/// Outcome of one lemma-verification sweep.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub lemma_id: String,
    pub sweep: Vec<SweepPoint>,
    pub measured: Vec<f64>,
    pub sup_ratio: f64,
    pub inf_value: f64,
    pub verdict: Verdict,
    pub refinement_drift: Option<f64>,
    /// Large-|v| over mid-|v| ratio trend where an op reports one.
    pub trend_large_v: Option<f64>,
}

impl EstimateReport {
    fn assemble(
        lemma_id: &str,
        sweep: Vec<SweepPoint>,
        measured: Vec<f64>,
        drift: Option<f64>,
        drift_bound: f64,
        base_verdict: Verdict,
    ) -> Self {
        let sup_ratio = measured.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let inf_value = measured.iter().cloned().fold(f64::INFINITY, f64::min);
        let finite = measured.iter().all(|m| m.is_finite());
        let verdict = if !finite {
            Verdict::Fail
        } else if let Some(d) = drift {
            if d > drift_bound {
                Verdict::Inconclusive
            } else {
                base_verdict
            }
        } else {
            base_verdict
        };
        EstimateReport {
            lemma_id: lemma_id.to_string(),
            sweep,
            measured,
            sup_ratio,
            inf_value,
            verdict,
            refinement_drift: drift,
            trend_large_v: None,
        }
    }

    /// CSV rendering of the sweep (coordinate columns then `measured`).
    pub fn to_csv(&self) -> String {
        let mut cols: Vec<String> = Vec::new();
        for p in &self.sweep {
            for k in p.coords.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
        let mut out = String::new();
        out.push_str(&cols.join(","));
        out.push_str(",measured\n");
        for (p, m) in self.sweep.iter().zip(&self.measured) {
            let row: Vec<String> = cols
                .iter()
                .map(|c| {
                    p.coords
                        .get(c)
                        .map(|v| format!("{v}"))
                        .unwrap_or_default()
                })
                .collect();
            out.push_str(&row.join(","));
            out.push_str(&format!(",{m}\n"));
        }
        out
    }
}

/// Parameter grid shared by the sweep operations; deterministic given seed.
#[derive(Debug, Clone)]
pub struct SweepSpec<R> {
    pub v_samples: Vec<Vec3<R>>,
    pub r_samples: Vec<R>,
    pub q_values: Vec<R>,
    pub v0_samples: Vec<R>,
    pub seed: u64,
}

impl<R: Real> SweepSpec<R> {
    pub fn with_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v_samples = vec![Vec3::zero()];
        for mag in [1.0, 2.0, 4.0, 6.0] {
            for _ in 0..2 {
                v_samples.push(random_dir(&mut rng).scale(lit(mag)));
            }
        }
        SweepSpec {
            v_samples,
            r_samples: [0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0]
                .iter()
                .map(|&r| lit(r))
                .collect(),
            q_values: vec![lit(5.0), lit(6.0), lit(8.0)],
            v0_samples: vec![lit(4.0), lit(8.0), lit(16.0)],
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.v_samples.is_empty() || self.r_samples.is_empty() {
            return Err(Error::Parameter("sweep sample lists must be nonempty".into()));
        }
        Ok(())
    }
}

fn random_dir<R: Real>(rng: &mut ChaCha8Rng) -> Vec3<R> {
    loop {
        let p = Vec3::new(
            lit::<R>(rng.gen_range(-1.0..1.0f64)),
            lit::<R>(rng.gen_range(-1.0..1.0f64)),
            lit::<R>(rng.gen_range(-1.0..1.0f64)),
        );
        let n = p.norm();
        if n > lit(0.1) && n <= R::one() {
            return p.scale(R::one() / n);
        }
    }
}

const DRIFT_BOUND: f64 = 0.20;

/// Kernel closure abstraction: plain K_f or transformed K̄_f.
enum KernelKind<'a, R: Real> {
    Plain(&'a DensityFunction<R>),
    Transformed(&'a CovFrame<R>, &'a DensityFunction<R>),
}

impl<'a, R: Real> KernelKind<'a, R> {
    fn eval_offset(
        &self,
        v: Vec3<R>,
        w: Vec3<R>,
        params: &ModelParams<R>,
        quad: &QuadratureSpec<R>,
    ) -> Result<R> {
        match self {
            KernelKind::Plain(f) => carleman_kernel_offset(f, v, w, params, quad),
            KernelKind::Transformed(frame, f) => transformed_kernel_offset(frame, f, v, w, quad),
        }
    }

    fn eval(
        &self,
        v: Vec3<R>,
        v_prime: Vec3<R>,
        params: &ModelParams<R>,
        quad: &QuadratureSpec<R>,
    ) -> Result<R> {
        self.eval_offset(v, v_prime - v, params, quad)
    }
}

/// ∫ over the annulus r_lo < |w| < r_hi of K(v, v+w)·|w|^{moment} dw.
fn annulus_integral<R: Real>(
    kernel: &KernelKind<R>,
    v: Vec3<R>,
    r_lo: R,
    r_hi: R,
    moment: u32,
    params: &ModelParams<R>,
    quad: &QuadratureSpec<R>,
) -> Result<R> {
    let n_rad = (quad.n_vstar_radial / 2).max(4);
    let radial = gl_log(n_rad, r_lo, r_hi);
    let sphere = SphereGrid::oriented(
        quad.n_vstar_angular,
        quad.n_vstar_angular,
        v.normalized().unwrap_or(Vec3::axis(2)),
    );
    let pairs = sphere.antipodal_pairs();
    let mut acc = R::zero();
    for &(r, w_r) in &radial {
        let mut shell = R::zero();
        for &(i, _) in &pairs {
            let w = sphere.dirs[i] * r;
            // ±w give the same kernel value; count the pair once with
            // doubled weight.
            let k = kernel.eval_offset(v, w, params, quad)?;
            shell = shell + sphere.weights[i] * k * lit(2.0);
        }
        acc = acc + w_r * r * r * r.powi(moment as i32) * shell;
    }
    Ok(acc)
}

/// ∫_{B_r} K(v, v+w)|w|² dw by dyadic annuli down to the PV inner radius.
fn ball_second_moment<R: Real>(
    kernel: &KernelKind<R>,
    v: Vec3<R>,
    r: R,
    params: &ModelParams<R>,
    quad: &QuadratureSpec<R>,
) -> Result<R> {
    let mut acc = R::zero();
    let mut hi = r;
    for _ in 0..30 {
        let lo = (hi * lit(0.5)).max(quad.pv_inner_radius);
        acc = acc + annulus_integral(kernel, v, lo, hi, 2, params, quad)?;
        hi = lo;
        if hi <= quad.pv_inner_radius {
            break;
        }
    }
    Ok(acc)
}

/// ∫_{|w| > r} K(v, v+w) dw by dyadic annuli up to 2·r_max.
fn outside_ball_integral<R: Real>(
    kernel: &KernelKind<R>,
    v: Vec3<R>,
    r: R,
    params: &ModelParams<R>,
    quad: &QuadratureSpec<R>,
) -> Result<R> {
    let r_top = quad.r_max * lit(2.0);
    let mut acc = R::zero();
    let mut lo = r;
    for _ in 0..30 {
        let hi = (lo * lit(2.0)).min(r_top);
        acc = acc + annulus_integral(kernel, v, lo, hi, 0, params, quad)?;
        lo = hi;
        if lo >= r_top {
            break;
        }
    }
    Ok(acc)
}

fn norm_scale<R: Real>(f: &DensityFunction<R>, q: R) -> Result<R> {
    let q_eff = q.min(f.q_tail());
    weighted_sup_norm(f, q_eff, &SampleSpec::default())
}

/// Annulus upper bound: ∫_{B_{2r}\B_r} K_f dw ≤ C (f ∗ |·|^{γ+2s}) r^{-2s}.
pub fn verify_annulus_bound<R: Real>(
    f: &DensityFunction<R>,
    params: &ModelParams<R>,
    sweep: &SweepSpec<R>,
    quad: &QuadratureSpec<R>,
    refine: bool,
) -> Result<EstimateReport> {
    sweep.validate()?;
    let needed = lit::<R>(3.0) + params.gamma_plus_2s();
    if f.q_tail() <= needed {
        return Err(Error::Integrability(
            "annulus bound needs tail exponent > 3 + gamma + 2s".into(),
        ));
    }
    let points: Vec<(Vec3<R>, R)> = sweep
        .v_samples
        .iter()
        .flat_map(|&v| sweep.r_samples.iter().map(move |&r| (v, r)))
        .collect();
    let eval = |quad: &QuadratureSpec<R>| -> Result<Vec<f64>> {
        points
            .par_iter()
            .map(|&(v, r)| {
                let kernel = KernelKind::Plain(f);
                let num = annulus_integral(&kernel, v, r, r * lit(2.0), 0, params, quad)?;
                let den = convolve_power(f, params.gamma_plus_2s(), v, quad)?
                    * r.powf(-params.s * lit(2.0));
                Ok(ratio_or_zero(num, den))
            })
            .collect()
    };
    let measured = eval(quad)?;
    let drift = if refine {
        Some(sup_drift(&measured, &eval(&quad.doubled())?))
    } else {
        None
    };
    let sweep_pts = points
        .iter()
        .map(|(v, r)| SweepPoint::new(&[("vx", as_f64(v[0])), ("vy", as_f64(v[1])), ("vz", as_f64(v[2])), ("r", as_f64(*r))]))
        .collect();
    Ok(EstimateReport::assemble(
        "annulus",
        sweep_pts,
        measured,
        drift,
        DRIFT_BOUND,
        Verdict::Pass,
    ))
}

fn ratio_or_zero<R: Real>(num: R, den: R) -> f64 {
    if den == R::zero() {
        if num == R::zero() {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        as_f64(num / den)
    }
}

fn sup_drift(a: &[f64], b: &[f64]) -> f64 {
    let sup_a = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sup_b = b.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (sup_a - sup_b).abs() / sup_b.abs().max(1e-300)
}

/// Ball second-moment and outside-ball bounds:
/// ∫_{B_r}K|w|²dw ≤ C·conv·r^{2-2s} and ∫_{B_r^c}K dw ≤ C·conv·r^{-2s}.
pub fn verify_ball_and_tail_bounds<R: Real>(
    f: &DensityFunction<R>,
    params: &ModelParams<R>,
    sweep: &SweepSpec<R>,
    quad: &QuadratureSpec<R>,
    refine: bool,
) -> Result<EstimateReport> {
    sweep.validate()?;
    let needed = lit::<R>(3.0) + params.gamma_plus_2s();
    if f.q_tail() <= needed {
        return Err(Error::Integrability(
            "ball/tail bounds need tail exponent > 3 + gamma + 2s".into(),
        ));
    }
    let two_s = params.s * lit(2.0);
    let points: Vec<(Vec3<R>, R, bool)> = sweep
        .v_samples
        .iter()
        .flat_map(|&v| {
            sweep
                .r_samples
                .iter()
                .flat_map(move |&r| [(v, r, true), (v, r, false)])
        })
        .collect();
    let eval = |quad: &QuadratureSpec<R>| -> Result<Vec<f64>> {
        points
            .par_iter()
            .map(|&(v, r, is_ball)| {
                let kernel = KernelKind::Plain(f);
                let conv = convolve_power(f, params.gamma_plus_2s(), v, quad)?;
                let (num, den) = if is_ball {
                    (
                        ball_second_moment(&kernel, v, r, params, quad)?,
                        conv * r.powf(lit::<R>(2.0) - two_s),
                    )
                } else {
                    (
                        outside_ball_integral(&kernel, v, r, params, quad)?,
                        conv * r.powf(-two_s),
                    )
                };
                Ok(ratio_or_zero(num, den))
            })
            .collect()
    };
    let measured = eval(quad)?;
    let drift = if refine {
        Some(sup_drift(&measured, &eval(&quad.doubled())?))
    } else {
        None
    };
    let sweep_pts = points
        .iter()
        .map(|(v, r, is_ball)| {
            SweepPoint::new(&[
                ("vx", as_f64(v[0])),
                ("vy", as_f64(v[1])),
                ("vz", as_f64(v[2])),
                ("r", as_f64(*r)),
                ("family_ball", if *is_ball { 1.0 } else { 0.0 }),
            ])
        })
        .collect();
    Ok(EstimateReport::assemble(
        "ball-tail",
        sweep_pts,
        measured,
        drift,
        DRIFT_BOUND,
        Verdict::Pass,
    ))
}

/// |Q_s(f,φ)| ≤ C·conv_{γ+2s}·‖φ‖_∞^{1-s}‖D²φ‖_∞^{s} for bounded C² φ.
pub fn verify_interpolation_bound<R: Real>(
    f: &DensityFunction<R>,
    phi: &dyn TestFunction<R>,
    params: &ModelParams<R>,
    sweep: &SweepSpec<R>,
    quad: &QuadratureSpec<R>,
    refine: bool,
) -> Result<EstimateReport> {
    sweep.validate()?;
    if !(phi.sup_value().is_finite() && phi.sup_hessian().is_finite()) {
        return Err(Error::Parameter(
            "interpolation bound needs bounded φ and D²φ".into(),
        ));
    }
    let s = params.s;
    let phi_factor =
        phi.sup_value().powf(R::one() - s) * phi.sup_hessian().powf(s);
    let eval = |quad: &QuadratureSpec<R>| -> Result<Vec<f64>> {
        sweep
            .v_samples
            .par_iter()
            .map(|&v| {
                let qs = q_s_carleman_with(
                    f,
                    &|u| phi.value(u),
                    v,
                    quad.pv_inner_radius,
                    params,
                    quad,
                )?;
                let den = convolve_power(f, params.gamma_plus_2s(), v, quad)? * phi_factor;
                Ok(ratio_or_zero(qs.value.abs(), den))
            })
            .collect()
    };
    let measured = eval(quad)?;
    let drift = if refine {
        Some(sup_drift(&measured, &eval(&quad.doubled())?))
    } else {
        None
    };
    let sweep_pts = sweep
        .v_samples
        .iter()
        .map(|v| SweepPoint::new(&[("vx", as_f64(v[0])), ("vy", as_f64(v[1])), ("vz", as_f64(v[2]))]))
        .collect();
    Ok(EstimateReport::assemble(
        "interp",
        sweep_pts,
        measured,
        drift,
        DRIFT_BOUND,
        Verdict::Pass,
    ))
}

/// Barrier inequality: ⟨v⟩^q Q(f, ⟨·⟩^{-q})(v) ≤ C ‖f‖_{L∞_{q0}} over
/// |v| up to 16, with q ∈ [q0, q0 - γ].
pub fn verify_barrier_inequality<R: Real>(
    f: &DensityFunction<R>,
    q0: R,
    q: R,
    params: &ModelParams<R>,
    quad: &QuadratureSpec<R>,
    refine: bool,
) -> Result<EstimateReport> {
    if !(q0 > lit::<R>(3.0) + params.gamma_plus_2s()) {
        return Err(Error::Parameter("q0 must exceed 3 + gamma + 2s".into()));
    }
    if !(q >= q0 && q <= q0 - params.gamma) {
        return Err(Error::Parameter(
            "q must lie in [q0, q0 - gamma] (lemma hypothesis)".into(),
        ));
    }
    if f.q_tail() < q0 {
        return Err(Error::Integrability("f must lie in L∞_{q0}".into()));
    }
    let norm = norm_scale(f, q0)?;
    // Deterministic |v| ladder up to 16 in three directions.
    let mut vs: Vec<Vec3<R>> = vec![Vec3::zero()];
    for mag in [1.0, 2.0, 4.0, 8.0, 12.0, 16.0] {
        vs.push(Vec3::axis(0) * lit(mag));
        vs.push(Vec3::new(lit(0.577_35), lit(0.577_35), lit(0.577_35)) * lit(mag));
    }
    let eval = |quad: &QuadratureSpec<R>| -> Result<Vec<f64>> {
        vs.par_iter()
            .map(|&v| {
                let g = move |u: Vec3<R>| u.bracket().powf(-q);
                let qs = q_s_carleman_with(f, &g, v, quad.pv_inner_radius, params, quad)?;
                let qns = params.c_b * g(v) * convolve_power(f, params.gamma, v, quad)?;
                let total = qs.value + qns;
                Ok(as_f64(v.bracket().powf(q) * total / norm))
            })
            .collect()
    };
    let measured = eval(quad)?;
    let drift = if refine {
        Some(sup_drift(&measured, &eval(&quad.doubled())?))
    } else {
        None
    };
    let sweep_pts: Vec<SweepPoint> = vs
        .iter()
        .map(|v| SweepPoint::new(&[("vnorm", as_f64(v.norm())), ("q", as_f64(q)), ("q0", as_f64(q0))]))
        .collect();
    let mut report = EstimateReport::assemble(
        "barrier-ineq",
        sweep_pts,
        measured,
        drift,
        DRIFT_BOUND,
        Verdict::Pass,
    );
    // Large-|v| trend: ratio magnitude at |v| = 16 over |v| = 4.
    let pick = |mag: f64| -> Option<f64> {
        report
            .sweep
            .iter()
            .zip(&report.measured)
            .filter(|(p, _)| (p.coords["vnorm"] - mag).abs() < 1e-9)
            .map(|(_, m)| m.abs())
            .fold(None, |acc: Option<f64>, m| Some(acc.map_or(m, |a| a.max(m))))
    };
    if let (Some(hi), Some(mid)) = (pick(16.0), pick(4.0)) {
        report.trend_large_v = Some(hi / mid.max(1e-300));
    }
    Ok(report)
}

/// Cone of nondegeneracy: direction set A(v), its measure scaling, the
/// |σ·v| bound, and the aligned kernel lower bound λ.
pub fn verify_cone<R: Real>(
    f: &DensityFunction<R>,
    lower: &LowerBoundSpec<R>,
    params: &ModelParams<R>,
    sweep: &SweepSpec<R>,
    quad: &QuadratureSpec<R>,
) -> Result<EstimateReport> {
    lower.check(f)?;
    let two_s = params.s * lit(2.0);
    // Half-diameter rule: the plane through v with normal σ must cut
    // B_{r/2}(v_m) with chord radius at least r/4.
    let band: R = lower.r * lit(0.75f64.sqrt() * 0.5);
    let mut sweep_pts = Vec::new();
    let mut measured = Vec::new();
    let mut lambda_min = f64::INFINITY;
    let mut mu_min = f64::INFINITY;
    let mut rng = ChaCha8Rng::seed_from_u64(sweep.seed);

    for &v in &sweep.v_samples {
        let d_vec = lower.v_m - v;
        let dist = d_vec.norm();
        let u = if dist == R::zero() {
            R::one()
        } else {
            (band / dist).min(R::one())
        };
        // Band measure: |{σ : |σ·d̂| ≤ u}| = 4π·u.
        let mu_measure = lit::<R>(4.0) * R::PI() * u;
        let mu_scaled = as_f64(mu_measure * (R::one() + v.norm()));
        mu_min = mu_min.min(mu_scaled);
        sweep_pts.push(SweepPoint::new(&[
            ("vnorm", as_f64(v.norm())),
            ("family", 0.0),
        ]));
        measured.push(mu_scaled);

        // Sample directions in the band (symmetric by construction).
        let (b1, b2) = if dist == R::zero() {
            (Vec3::axis(0), Vec3::axis(1))
        } else {
            d_vec.orthonormal_complement()
        };
        let d_hat = if dist == R::zero() {
            Vec3::axis(2)
        } else {
            d_vec.scale(R::one() / dist)
        };
        let mut sup_sv = R::zero();
        for k in 0..4 {
            let cos_psi = u * lit((k as f64 + 0.5) / 4.0);
            let sin_psi = (R::one() - cos_psi * cos_psi).max(R::zero()).sqrt();
            let az: R = lit(rng.gen_range(0.0..std::f64::consts::TAU));
            let sigma = d_hat * cos_psi + (b1 * az.cos() + b2 * az.sin()) * sin_psi;
            sup_sv = sup_sv.max(sigma.dot(v).abs());
            for &t in &[lit::<R>(0.5), R::one(), lit(2.0)] {
                let w = sigma * t;
                let k_val = carleman_kernel_offset(f, v, w, params, quad)?;
                let lam = k_val
                    * t.powf(lit::<R>(3.0) + two_s)
                    * (R::one() + v.norm()).powf(-(R::one() + params.gamma_plus_2s()));
                let lam = as_f64(lam);
                lambda_min = lambda_min.min(lam);
                sweep_pts.push(SweepPoint::new(&[
                    ("vnorm", as_f64(v.norm())),
                    ("family", 2.0),
                    ("t", as_f64(t)),
                    ("sigma_idx", k as f64),
                ]));
                measured.push(lam);
            }
        }
        sweep_pts.push(SweepPoint::new(&[
            ("vnorm", as_f64(v.norm())),
            ("family", 1.0),
        ]));
        measured.push(as_f64(sup_sv));
    }

    let floor = 1e-10;
    let base = if lambda_min > floor && mu_min > floor {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    let mut report =
        EstimateReport::assemble("cone", sweep_pts, measured, None, DRIFT_BOUND, base);
    report.inf_value = lambda_min.min(mu_min);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CancellationOrder {
    First,
    Second,
}

/// Cancellation conditions: |PV ∫ (K(v,v') - K(v',v)) dv'| bounded (first),
/// and the first-moment version on B_r(v) against 1 + r^{1-2s} (second,
/// s ≥ 1/2 only). Kernel is K_f or K̄_f per the optional frame.
pub fn verify_cancellation<R: Real>(
    frame: Option<&CovFrame<R>>,
    f: &DensityFunction<R>,
    params: &ModelParams<R>,
    sweep: &SweepSpec<R>,
    quad: &QuadratureSpec<R>,
    order: CancellationOrder,
    refine: bool,
) -> Result<EstimateReport> {
    if order == CancellationOrder::Second && params.s < lit(0.5) {
        return Err(Error::Parameter(
            "second cancellation condition requires s >= 1/2".into(),
        ));
    }
    if frame.is_some() && f.q_tail() <= lit::<R>(3.0) + params.s * lit(2.0) {
        return Err(Error::Integrability(
            "transformed-kernel runs need tail exponent > 3 + 2s".into(),
        ));
    }
    let norm = norm_scale(f, lit::<R>(3.0) + params.s * lit(2.0) + R::one())?;
    // v sweep restricted to B_{7/4}.
    let vs: Vec<Vec3<R>> = sweep
        .v_samples
        .iter()
        .cloned()
        .map(|v| {
            let n = v.norm();
            if n > lit(1.75) {
                v.scale(lit::<R>(1.6) / n)
            } else {
                v
            }
        })
        .collect();
    let two_s = params.s * lit(2.0);
    let r_list: Vec<R> = match order {
        CancellationOrder::First => vec![R::zero()],
        CancellationOrder::Second => vec![lit(0.03125), lit(0.0625), lit(0.125), lit(0.25)],
    };
    let points: Vec<(Vec3<R>, R)> = vs
        .iter()
        .flat_map(|&v| r_list.iter().map(move |&r| (v, r)))
        .collect();

    let eval = |quad: &QuadratureSpec<R>| -> Result<Vec<f64>> {
        points
            .par_iter()
            .map(|&(v, r)| {
                let kernel = match frame {
                    Some(fr) => KernelKind::Transformed(fr, f),
                    None => KernelKind::Plain(f),
                };
                let r_hi = match order {
                    CancellationOrder::First => quad.r_max * lit::<R>(2.0),
                    CancellationOrder::Second => r,
                };
                let sphere = SphereGrid::oriented(
                    quad.n_vstar_angular,
                    quad.n_vstar_angular,
                    v.normalized().unwrap_or(Vec3::axis(2)),
                );
                let n_rad = (quad.n_vstar_radial / 3).max(3);
                let mut scalar_acc = R::zero();
                let mut moment = Vec3::zero();
                let mut hi = r_hi;
                for _ in 0..40 {
                    let lo = (hi * lit(0.5)).max(quad.pv_inner_radius);
                    for (rr, w_r) in gl_log(n_rad, lo, hi) {
                        for (dir, w_o) in sphere.dirs.iter().zip(&sphere.weights) {
                            let w = *dir * rr;
                            let k_fwd = kernel.eval_offset(v, w, params, quad)?;
                            let k_bwd = kernel.eval(v + w, v, params, quad)?;
                            let diff = (k_fwd - k_bwd) * *w_o * w_r * rr * rr;
                            match order {
                                CancellationOrder::First => scalar_acc = scalar_acc + diff,
                                CancellationOrder::Second => moment += w * diff,
                            }
                        }
                    }
                    hi = lo;
                    if hi <= quad.pv_inner_radius {
                        break;
                    }
                }
                let val = match order {
                    CancellationOrder::First => scalar_acc.abs() / norm,
                    CancellationOrder::Second => {
                        moment.norm() / ((R::one() + r.powf(R::one() - two_s)) * norm)
                    }
                };
                Ok(as_f64(val))
            })
            .collect()
    };
    let measured = eval(quad)?;
    let drift = if refine {
        Some(sup_drift(&measured, &eval(&quad.doubled())?))
    } else {
        None
    };
    let sweep_pts = points
        .iter()
        .map(|(v, r)| {
            let mut pairs = vec![
                ("vnorm", as_f64(v.norm())),
                ("r", as_f64(*r)),
            ];
            if let Some(fr) = frame {
                pairs.push(("v0", as_f64(fr.v0_norm())));
            }
            SweepPoint::new(&pairs)
        })
        .collect();
    Ok(EstimateReport::assemble(
        match order {
            CancellationOrder::First => "cancel1",
            CancellationOrder::Second => "cancel2",
        },
        sweep_pts,
        measured,
        drift,
        DRIFT_BOUND,
        Verdict::Pass,
    ))
}

/// Transformed-kernel boundedness families, swept over |v₀|:
/// (i) ∫_{B_r(v)^c} K̄ dv'·r^{2s}, (ii) the v/v' swapped version,
/// (iii) ∫_{B_r} K̄|w|² dw·r^{2s-2}; all normalized by ‖f‖ and required
/// uniform in |v₀| within ×3 of the per-v₀ median.
pub fn verify_bar_boundedness<R: Real>(
    f: &DensityFunction<R>,
    params: &ModelParams<R>,
    sweep: &SweepSpec<R>,
    quad: &QuadratureSpec<R>,
    refine: bool,
) -> Result<EstimateReport> {
    if f.q_tail() <= lit::<R>(3.0) + params.s * lit(2.0) {
        return Err(Error::Integrability(
            "bar-boundedness needs tail exponent > 3 + 2s".into(),
        ));
    }
    let two_s = params.s * lit(2.0);
    let norm = norm_scale(f, lit::<R>(3.0) + two_s + R::one())?;
    let v_list = [Vec3::zero(), Vec3::new(lit(0.8), lit(0.5), lit(-0.3))];
    let r_list: Vec<R> = sweep
        .r_samples
        .iter()
        .cloned()
        .filter(|&r| r <= lit(2.0))
        .collect();

    #[derive(Clone, Copy)]
    struct Pt<R> {
        v0: R,
        v: usize,
        r: R,
        family: u8,
    }
    let mut points: Vec<Pt<R>> = Vec::new();
    for &v0 in &sweep.v0_samples {
        for (vi, _) in v_list.iter().enumerate() {
            for &r in &r_list {
                for family in 0..3u8 {
                    points.push(Pt { v0, v: vi, r, family });
                }
            }
        }
    }

    let eval = |quad: &QuadratureSpec<R>| -> Result<Vec<f64>> {
        points
            .par_iter()
            .map(|pt| {
                let frame = build_frame(
                    KineticPoint::new(R::zero(), Vec3::zero(), Vec3::axis(0) * pt.v0),
                    params,
                );
                let v = v_list[pt.v];
                let kernel = KernelKind::Transformed(&frame, f);
                let val = match pt.family {
                    0 => outside_ball_integral(&kernel, v, pt.r, params, quad)? * pt.r.powf(two_s),
                    2 => {
                        ball_second_moment(&kernel, v, pt.r, params, quad)?
                            * pt.r.powf(two_s - lit(2.0))
                    }
                    _ => {
                        // roles of v, v' swapped: integrate over the first slot
                        let mut acc = R::zero();
                        let mut lo = pt.r;
                        let r_top = quad.r_max * lit::<R>(2.0);
                        let sphere =
                            SphereGrid::new(quad.n_vstar_angular, quad.n_vstar_angular);
                        for _ in 0..30 {
                            let hi = (lo * lit::<R>(2.0)).min(r_top);
                            let n_rad = (quad.n_vstar_radial / 2).max(4);
                            for (rr, w_r) in gl_log(n_rad, lo, hi) {
                                for (dir, w_o) in sphere.dirs.iter().zip(&sphere.weights) {
                                    let u = *dir * rr;
                                    let k = transformed_kernel(&frame, f, v + u, v, quad)?;
                                    acc = acc + *w_o * w_r * rr * rr * k;
                                }
                            }
                            lo = hi;
                            if lo >= r_top {
                                break;
                            }
                        }
                        acc * pt.r.powf(two_s)
                    }
                };
                Ok(as_f64(val / norm))
            })
            .collect()
    };
    let measured = eval(quad)?;
    let drift = if refine {
        Some(sup_drift(&measured, &eval(&quad.doubled())?))
    } else {
        None
    };

    // Uniformity in v0: per-v0 sup within ×3 of the median of the sups.
    let mut per_v0: BTreeMap<String, f64> = BTreeMap::new();
    for (pt, m) in points.iter().zip(&measured) {
        let key = format!("{:.6}", as_f64(pt.v0));
        let e = per_v0.entry(key).or_insert(f64::NEG_INFINITY);
        *e = e.max(*m);
    }
    let mut sups: Vec<f64> = per_v0.values().cloned().collect();
    sups.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sups[sups.len() / 2];
    let uniform = sups
        .iter()
        .all(|s| *s <= 3.0 * median && median.is_finite());
    let base = if uniform { Verdict::Pass } else { Verdict::Fail };

    let sweep_pts = points
        .iter()
        .map(|pt| {
            SweepPoint::new(&[
                ("v0", as_f64(pt.v0)),
                ("v_idx", pt.v as f64),
                ("r", as_f64(pt.r)),
                ("family", pt.family as f64),
            ])
        })
        .collect();
    Ok(EstimateReport::assemble(
        "bar-bounded",
        sweep_pts,
        measured,
        drift,
        DRIFT_BOUND,
        base,
    ))
}

/// Sphere estimate: the σ-integral of B against the collision bracket of a
/// C² function obeys the |v-v_*|^γ(1+|v-v_*|^{2s}) envelope.
pub fn verify_sphere_estimate<R: Real>(
    phi: &dyn TestFunction<R>,
    params: &ModelParams<R>,
    sweep: &SweepSpec<R>,
    quad: &QuadratureSpec<R>,
    refine: bool,
) -> Result<EstimateReport> {
    if !phi.sup_hessian().is_finite() {
        return Err(Error::Parameter("sphere estimate needs bounded D²φ".into()));
    }
    let c2 = phi.c2_norm();
    let two_s = params.s * lit(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(sweep.seed);
    let mut pairs: Vec<(Vec3<R>, Vec3<R>)> = Vec::new();
    for k in -3i32..=3 {
        let sep: R = lit(2.0f64.powi(k));
        for _ in 0..2 {
            let v = random_dir::<R>(&mut rng).scale(lit(rng.gen_range(0.0..1.5f64)));
            let dir = random_dir::<R>(&mut rng);
            pairs.push((v, v + dir * sep));
        }
    }
    let eval = |quad: &QuadratureSpec<R>| -> Result<Vec<f64>> {
        pairs
            .par_iter()
            .map(|&(v, v_star)| {
                let rel = v - v_star;
                let sep = rel.norm();
                let k_hat = rel.scale(R::one() / sep);
                let (u1, u2) = k_hat.orthonormal_complement();
                let mid = (v + v_star) * lit(0.5);
                let half = sep * lit(0.5);
                // two-domain split of the θ range at 1/|v - v_*|
                let theta_c = (R::one() / sep).max(params.theta_min * lit(2.0)).min(R::PI() * lit(0.5));
                let mut rules = gl_log(quad.n_theta / 2 + 2, params.theta_min, theta_c);
                rules.extend(gl_log(quad.n_theta / 2 + 2, theta_c, R::PI()));
                let n_phi = quad.n_phi + quad.n_phi % 2;
                let dphi = lit::<R>(2.0) * R::PI() / lit(n_phi as f64);
                let phi_v = phi.value(v);
                let phi_star = phi.value(v_star);
                let mut acc = R::zero();
                for &(theta, w_t) in &rules {
                    let b_sin = params.c_b * theta.powf(-R::one() - two_s);
                    let (st, ct) = (theta.sin(), theta.cos());
                    let mut ring = R::zero();
                    for j in 0..n_phi {
                        let az = dphi * lit(j as f64);
                        let sigma = k_hat * ct + (u1 * az.cos() + u2 * az.sin()) * st;
                        let v_prime = mid + sigma * half;
                        let v_star_prime = mid - sigma * half;
                        ring = ring + phi.value(v_star_prime) + phi.value(v_prime)
                            - phi_star
                            - phi_v;
                    }
                    acc = acc + w_t * b_sin * dphi * ring;
                }
                let num = (acc * sep.powf(params.gamma)).abs();
                let den = c2 * sep.powf(params.gamma) * (R::one() + sep.powf(two_s));
                Ok(ratio_or_zero(num, den))
            })
            .collect()
    };
    let measured = eval(quad)?;
    let drift = if refine {
        Some(sup_drift(&measured, &eval(&quad.doubled())?))
    } else {
        None
    };
    let sweep_pts = pairs
        .iter()
        .map(|(v, vs)| {
            SweepPoint::new(&[("sep", as_f64((*v - *vs).norm())), ("vnorm", as_f64(v.norm()))])
        })
        .collect();
    Ok(EstimateReport::assemble(
        "sphere",
        sweep_pts,
        measured,
        drift,
        DRIFT_BOUND,
        Verdict::Pass,
    ))
}

/// Convolution estimate: (f ∗ |·|^p)(v) against ‖f‖_{L∞_q}⟨v⟩^{p+(3-q)_+}
/// with the log factor at q = 3.
pub fn verify_convolution_lemma<R: Real>(
    f: &DensityFunction<R>,
    p_exp: R,
    q: R,
    sweep: &SweepSpec<R>,
    quad: &QuadratureSpec<R>,
    refine: bool,
) -> Result<EstimateReport> {
    if p_exp <= lit(-3.0) {
        return Err(Error::Parameter("p must exceed -3".into()));
    }
    if !(q > lit::<R>(3.0) + p_exp) {
        return Err(Error::Parameter("q must exceed 3 + p".into()));
    }
    if f.q_tail() < q {
        return Err(Error::Integrability("f must lie in L∞_q".into()));
    }
    let norm = weighted_sup_norm(f, q, &SampleSpec::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(sweep.seed);
    let off_axis = random_dir::<R>(&mut rng);
    let mut vs: Vec<Vec3<R>> = vec![Vec3::zero()];
    for mag in [1.0, 2.0, 4.0, 8.0, 16.0] {
        vs.push(Vec3::axis(0) * lit(mag));
        vs.push(off_axis * lit(mag));
    }
    let envelope_pow = p_exp + (lit::<R>(3.0) - q).max(R::zero());
    let with_log = (q - lit(3.0)).abs() < lit(1e-6);
    let eval = |quad: &QuadratureSpec<R>| -> Result<Vec<f64>> {
        vs.par_iter()
            .map(|&v| {
                let conv = convolve_power(f, p_exp, v, quad)?;
                let mut den = norm * v.bracket().powf(envelope_pow);
                if with_log {
                    den = den * (R::one() + v.bracket().ln());
                }
                Ok(ratio_or_zero(conv, den))
            })
            .collect()
    };
    let measured = eval(quad)?;
    let drift = if refine {
        Some(sup_drift(&measured, &eval(&quad.doubled())?))
    } else {
        None
    };
    let sweep_pts = vs
        .iter()
        .map(|v| SweepPoint::new(&[("vnorm", as_f64(v.norm())), ("p", as_f64(p_exp)), ("q", as_f64(q))]))
        .collect();
    Ok(EstimateReport::assemble(
        "convolution",
        sweep_pts,
        measured,
        drift,
        DRIFT_BOUND,
        Verdict::Pass,
    ))
}

/// Moment interpolation: ‖φ‖_{C^β_{ℓ,m}} against
/// [φ]_{C^α_{ℓ,q2}}^{β/α}·‖φ‖_{L∞_{q1}}^{1-β/α} on a scattered cloud.
#[allow(clippy::too_many_arguments)]
pub fn verify_moment_interpolation<R: Real>(
    field: &dyn Fn(KineticPoint<R>) -> R,
    alpha: R,
    beta: R,
    q1: R,
    q2: R,
    s: R,
    sweep: &SweepSpec<R>,
    n_samples: usize,
    refine: bool,
) -> Result<EstimateReport> {
    if !(beta > R::zero() && beta < alpha && alpha < R::one().min(s * lit(2.0))) {
        return Err(Error::Parameter(
            "need 0 < beta < alpha < min(1, 2s)".into(),
        ));
    }
    if q1 < q2 {
        return Err(Error::Parameter("need q1 >= q2".into()));
    }
    let m = q1 * (R::one() - beta / alpha) + q2 * (beta / alpha);
    let eval = |n: usize| -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(sweep.seed);
        let mut samples: Vec<(KineticPoint<R>, R)> = Vec::with_capacity(n);
        for _ in 0..n {
            let x = random_dir::<R>(&mut rng).scale(lit(rng.gen_range(0.0..0.5f64)));
            let vmag: f64 = rng.gen_range(0.0..4.0f64);
            let v = random_dir::<R>(&mut rng).scale(lit(vmag));
            let z = KineticPoint::new(R::zero(), x, v);
            samples.push((z, field(z)));
        }
        let opts = DistanceOpts::default();
        let sem_alpha = holder_seminorm(&samples, alpha, q2, s, &opts)?.value;
        let sem_beta = holder_seminorm(&samples, beta, m, s, &opts)?.value;
        let sup = |w: R| {
            samples
                .iter()
                .map(|(z, val)| (R::one() + z.v.norm()).powf(w) * val.abs())
                .fold(R::zero(), |a, b| a.max(b))
        };
        let sup_m = sup(m);
        let sup_q1 = sup(q1);
        let lhs = sup_m + sem_beta;
        let rhs = if sem_alpha == R::zero() {
            sup_q1
        } else {
            sem_alpha.powf(beta / alpha) * sup_q1.powf(R::one() - beta / alpha)
        };
        Ok(ratio_or_zero(lhs, rhs))
    };
    let measured = vec![eval(n_samples)?];
    let drift = if refine {
        let fine = eval(n_samples * 2)?;
        Some((measured[0] - fine).abs() / fine.abs().max(1e-300))
    } else {
        None
    };
    let sweep_pts = vec![SweepPoint::new(&[
        ("alpha", as_f64(alpha)),
        ("beta", as_f64(beta)),
        ("q1", as_f64(q1)),
        ("q2", as_f64(q2)),
        ("m", as_f64(m)),
        ("n_samples", n_samples as f64),
    ])];
    // Sample-count drift on scattered-estimator sups is inherently loose.
    Ok(EstimateReport::assemble(
        "moment-interp",
        sweep_pts,
        measured,
        drift,
        0.5,
        Verdict::Pass,
    ))
}

/// Linear kinetic-equation kernel assumptions: ±w symmetry (exact by
/// construction), the annulus bound with measured Λ, and |c(v)| ≤ Λ⟨v⟩^γ.
pub fn verify_kide_assumptions<R: Real>(
    f: &DensityFunction<R>,
    c_field: &(dyn Fn(Vec3<R>) -> R + Sync),
    params: &ModelParams<R>,
    sweep: &SweepSpec<R>,
    quad: &QuadratureSpec<R>,
    refine: bool,
) -> Result<EstimateReport> {
    sweep.validate()?;
    let two_s = params.s * lit(2.0);
    // Symmetry probe (bit-exact by node construction).
    let mut rng = ChaCha8Rng::seed_from_u64(sweep.seed);
    for _ in 0..4 {
        let v = random_dir::<R>(&mut rng).scale(lit(rng.gen_range(0.0..2.0f64)));
        let w = random_dir::<R>(&mut rng).scale(lit(rng.gen_range(0.1..2.0f64)));
        let kp = carleman_kernel_offset(f, v, w, params, quad)?;
        let km = carleman_kernel_offset(f, v, -w, params, quad)?;
        if kp != km {
            return Err(Error::Domain(
                "kernel symmetry violated (construction bug)".into(),
            ));
        }
    }
    let points: Vec<(Vec3<R>, R, bool)> = sweep
        .v_samples
        .iter()
        .flat_map(|&v| {
            sweep
                .r_samples
                .iter()
                .map(move |&r| (v, r, true))
                .chain(std::iter::once((v, R::one(), false)))
        })
        .collect();
    let eval = |quad: &QuadratureSpec<R>| -> Result<Vec<f64>> {
        points
            .par_iter()
            .map(|&(v, r, is_kernel)| {
                if is_kernel {
                    let kernel = KernelKind::Plain(f);
                    let num = annulus_integral(&kernel, v, r, r * lit(2.0), 0, params, quad)?;
                    let den = v.bracket().powf(params.gamma_plus_2s()) * r.powf(-two_s);
                    Ok(ratio_or_zero(num, den))
                } else {
                    Ok(as_f64(
                        c_field(v).abs() / v.bracket().powf(params.gamma),
                    ))
                }
            })
            .collect()
    };
    let measured = eval(quad)?;
    let drift = if refine {
        Some(sup_drift(&measured, &eval(&quad.doubled())?))
    } else {
        None
    };
    let sweep_pts = points
        .iter()
        .map(|(v, r, is_kernel)| {
            SweepPoint::new(&[
                ("vnorm", as_f64(v.norm())),
                ("r", as_f64(*r)),
                ("family_kernel", if *is_kernel { 1.0 } else { 0.0 }),
            ])
        })
        .collect();
    Ok(EstimateReport::assemble(
        "kide",
        sweep_pts,
        measured,
        drift,
        DRIFT_BOUND,
        Verdict::Pass,
    ))
}
