//! Space-homogeneous non-cutoff Boltzmann time stepper ∂_t f = Q(f,f) on a
//! velocity grid, with conservation/entropy/decay diagnostics wired to the
//! barrier ledger. Explicit midpoint stepping; no positivity projection —
//! negativity beyond tolerance aborts the run and is reported, never fixed.

use crate::barrier::DecayLedger;
use crate::collision::{q_ns, q_s_carleman, q_sigma, QuadratureSpec};
use crate::error::{Error, Result};
use crate::model::{
    weighted_sup_norm, DensityFunction, DensityKind, GridField, ModelParams, SampleSpec,
};
use crate::quad::tail_integral;
use crate::scalar::{as_f64, lit, Real};
use crate::vec3::Vec3;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorForm {
    Sigma,
    CarlemanSplit,
}

#[derive(Debug, Clone)]
pub struct SolverConfig<R> {
    pub grid_l: R,
    pub grid_n: usize,
    /// None selects dt from the measured collision frequency bound.
    pub dt: Option<R>,
    pub t_end: R,
    pub quad: QuadratureSpec<R>,
    pub monitor_qs: Vec<R>,
    pub operator_form: OperatorForm,
    pub negativity_tol: R,
}

impl<R: Real> SolverConfig<R> {
    pub fn validate(&self, initial: &DensityFunction<R>) -> Result<()> {
        if self.grid_n < 4 {
            return Err(Error::Config("grid_n must be at least 4".into()));
        }
        if !(self.t_end > R::zero()) {
            return Err(Error::Config("t_end must be positive".into()));
        }
        if let Some(dt) = self.dt {
            if !(dt > R::zero()) {
                return Err(Error::Config("dt must be positive".into()));
            }
        }
        for &q in &self.monitor_qs {
            if q > initial.q_tail() {
                return Err(Error::Config(
                    "monitored decay exponent exceeds the datum's tail exponent".into(),
                ));
            }
        }
        self.quad.validate()
    }

    /// A small-grid preset for a (γ, s) pair; both change-of-variables
    /// regimes get exercised by (-1, 0.7) and (-2, 0.5).
    pub fn desk_preset() -> Self {
        SolverConfig {
            grid_l: lit(6.0),
            grid_n: 12,
            dt: None,
            t_end: lit(0.1),
            quad: QuadratureSpec {
                n_theta: 8,
                n_phi: 6,
                n_vstar_radial: 8,
                n_vstar_angular: 6,
                plane_radial_nodes: 12,
                plane_angular_nodes: 8,
                r_max: lit(12.0),
                pv_inner_radius: lit(1e-3),
                tail_nodes: 24,
            },
            monitor_qs: vec![lit(5.0), lit(6.0), lit(8.0)],
            operator_form: OperatorForm::Sigma,
            negativity_tol: lit(1e-4),
        }
    }
}

/// Per-frame diagnostics (working precision reduced to f64 for records).
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub momentum: [f64; 3],
    pub energy: f64,
    pub entropy: f64,
    pub min_value: f64,
    pub weighted_norms: Vec<(f64, f64)>,
    pub barrier_margins: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub enum Termination {
    Completed,
    BarrierCrossing { q: f64, time: f64 },
    Stability { step: usize, min_value: f64 },
}

#[derive(Debug, Clone)]
pub struct Trajectory<R> {
    pub times: Vec<R>,
    pub frames: Vec<DensityFunction<R>>,
    pub diagnostics: Vec<DiagnosticsRecord>,
    pub termination: Termination,
}

fn grid_of<R: Real>(f: &DensityFunction<R>) -> Result<&GridField<R>> {
    match &f.kind {
        DensityKind::Grid(g) => Ok(g),
        _ => Err(Error::Input("solver frames must be grid densities".into())),
    }
}

/// Q(f,f) evaluated at every lattice node, parallel over nodes with a
/// deterministic ordering.
fn collision_field<R: Real>(
    f: &DensityFunction<R>,
    config: &SolverConfig<R>,
    params: &ModelParams<R>,
) -> Result<Vec<R>> {
    let g = grid_of(f)?;
    let n = g.n;
    let idx: Vec<usize> = (0..n * n * n).collect();
    idx.par_iter()
        .map(|&flat| {
            let i = flat / (n * n);
            let j = (flat / n) % n;
            let k = flat % n;
            let v = GridField::node_coords(g.l, n, [i, j, k]);
            match config.operator_form {
                OperatorForm::Sigma => Ok(q_sigma(f, f, v, params, &config.quad)?.value),
                OperatorForm::CarlemanSplit => {
                    let qs = q_s_carleman(f, f, v, params, &config.quad)?.value;
                    let qn = q_ns(f, f, v, params, &config.quad)?;
                    Ok(qs + qn)
                }
            }
        })
        .collect()
}

fn frame_plus<R: Real>(f: &DensityFunction<R>, rate: &[R], dt: R) -> Result<DensityFunction<R>> {
    let g = grid_of(f)?;
    let values: Vec<R> = g
        .values
        .iter()
        .zip(rate)
        .map(|(&a, &b)| a + dt * b)
        .collect();
    Ok(DensityFunction {
        kind: DensityKind::Grid(GridField {
            l: g.l,
            n: g.n,
            values,
        }),
        tail_amplitude: f.tail_amplitude,
        tail_exponent: f.tail_exponent,
    })
}

/// One explicit midpoint step f ← f + dt·Q(f_half, f_half). Values below
/// -negativity_tol abort with a stability error.
pub fn step<R: Real>(
    f: &DensityFunction<R>,
    dt: R,
    config: &SolverConfig<R>,
    params: &ModelParams<R>,
) -> Result<DensityFunction<R>> {
    let k1 = collision_field(f, config, params)?;
    let half = frame_plus(f, &k1, dt * lit(0.5))?;
    let k2 = collision_field(&half, config, params)?;
    let next = frame_plus(f, &k2, dt)?;
    let min_value = grid_of(&next)?
        .values
        .iter()
        .cloned()
        .fold(R::infinity(), |a, b| a.min(b));
    if min_value < -config.negativity_tol {
        return Err(Error::Stability {
            step: 0,
            min_value: as_f64(min_value),
            tolerance: as_f64(config.negativity_tol),
        });
    }
    Ok(next)
}

/// Total angular mass of the truncated cross-section:
/// ∫_{S²} b(cosθ) dσ = 2π c_b (θ_min^{-2s} - π^{-2s}) / (2s).
pub fn angular_mass<R: Real>(params: &ModelParams<R>) -> R {
    let two_s = params.s * lit(2.0);
    lit::<R>(2.0) * R::PI() * params.c_b
        * (params.theta_min.powf(-two_s) - R::PI().powf(-two_s))
        / two_s
}

/// Collision frequency bound ν = (angular mass) · sup (f ∗ |·|^γ) over a
/// coarse sub-lattice; auto time steps satisfy dt·ν ≤ 1/2. The loss rate of
/// the truncated operator carries the full θ_min^{-2s} angular mass, which
/// is what explicit stepping must resolve.
pub fn collision_frequency_bound<R: Real>(
    f: &DensityFunction<R>,
    config: &SolverConfig<R>,
    params: &ModelParams<R>,
) -> Result<R> {
    let g = grid_of(f)?;
    let stride = (g.n / 6).max(1);
    let mut nodes = Vec::new();
    for i in (0..g.n).step_by(stride) {
        for j in (0..g.n).step_by(stride) {
            for k in (0..g.n).step_by(stride) {
                nodes.push(GridField::node_coords(g.l, g.n, [i, j, k]));
            }
        }
    }
    nodes.push(Vec3::zero());
    let freqs: Vec<R> = nodes
        .par_iter()
        .map(|&v| crate::collision::convolve_power(f, params.gamma, v, &config.quad))
        .collect::<Result<_>>()?;
    let conv_sup = freqs.into_iter().fold(R::zero(), |a, b| a.max(b));
    Ok(angular_mass(params).max(params.c_b) * conv_sup)
}

/// Grid moments plus closed-form tail corrections where the tail model is
/// active. The entropy integrand is floored at 1e-30 inside the log.
pub fn diagnostics<R: Real>(
    t: R,
    f: &DensityFunction<R>,
    config: &SolverConfig<R>,
    ledger: Option<&DecayLedger>,
) -> Result<DiagnosticsRecord> {
    let g = grid_of(f)?;
    let h = g.spacing();
    let cell = h * h * h;
    let mut mass = R::zero();
    let mut momentum = Vec3::zero();
    let mut energy = R::zero();
    let mut entropy = R::zero();
    let mut min_value = R::infinity();
    for i in 0..g.n {
        for j in 0..g.n {
            for k in 0..g.n {
                let v = GridField::node_coords(g.l, g.n, [i, j, k]);
                let val = g.value_at([i, j, k]);
                mass = mass + val;
                momentum += v * val;
                energy = energy + val * v.norm_sq();
                entropy = entropy + val * val.max(lit(1e-30)).ln();
                min_value = min_value.min(val);
            }
        }
    }
    mass = mass * cell;
    momentum = momentum * cell;
    energy = energy * cell * lit(0.5);
    entropy = entropy * cell;
    if f.tail_amplitude > R::zero() {
        // isotropic tail: contributes to mass and energy, not momentum
        let amp = f.tail_amplitude;
        let qt = f.tail_exponent;
        let edge = g.upper_face();
        let four_pi = lit::<R>(4.0) * R::PI();
        mass = mass
            + tail_integral(32, edge, |r: R| {
                four_pi * r * r * amp * (R::one() + r * r).powf(-qt * lit(0.5))
            });
        energy = energy
            + tail_integral(32, edge, |r: R| {
                four_pi * r * r * r * r * lit::<R>(0.5) * amp
                    * (R::one() + r * r).powf(-qt * lit(0.5))
            });
    }
    let mut weighted_norms = Vec::new();
    let mut barrier_margins = Vec::new();
    for &q in &config.monitor_qs {
        let norm = weighted_sup_norm(f, q, &SampleSpec::default())?;
        weighted_norms.push((as_f64(q), as_f64(norm)));
        if let Some(ledger) = ledger {
            let env = ledger.envelope(as_f64(q), as_f64(t))?;
            barrier_margins.push((as_f64(q), env - as_f64(norm)));
        }
    }
    Ok(DiagnosticsRecord {
        t: as_f64(t),
        mass: as_f64(mass),
        momentum: momentum.map_f64(as_f64),
        energy: as_f64(energy),
        entropy: as_f64(entropy),
        min_value: as_f64(min_value),
        weighted_norms,
        barrier_margins,
    })
}

/// March to t_end recording every frame; the first barrier-margin crossing
/// (if any) terminates with an interpolated event time.
pub fn run<R: Real>(
    initial: &DensityFunction<R>,
    config: &SolverConfig<R>,
    params: &ModelParams<R>,
    ledger: Option<&DecayLedger>,
) -> Result<Trajectory<R>> {
    config.validate(initial)?;
    if let Some(ledger) = ledger {
        if as_f64(config.t_end) > ledger.t_f {
            return Err(Error::Config(format!(
                "t_end {} exceeds the ledger horizon T_f = {}",
                as_f64(config.t_end),
                ledger.t_f
            )));
        }
    }
    let initial = match &initial.kind {
        DensityKind::Grid(_) => initial.clone(),
        DensityKind::Analytic(_) => DensityFunction::grid_from_fn(
            config.grid_l,
            config.grid_n,
            initial.tail_amplitude,
            initial.tail_exponent,
            |v| initial.eval(v),
        )?,
    };
    let dt = match config.dt {
        Some(dt) => dt,
        None => {
            let nu = collision_frequency_bound(&initial, config, params)?;
            (lit::<R>(0.5) / nu.max(lit(1e-12))).min(config.t_end * lit(0.25))
        }
    };

    let mut times = vec![R::zero()];
    let mut frames = vec![initial];
    let mut diags = vec![diagnostics(R::zero(), &frames[0], config, ledger)?];
    let mut termination = Termination::Completed;

    let mut t = R::zero();
    let mut step_idx = 0usize;
    while t < config.t_end {
        let dt_step = dt.min(config.t_end - t);
        let prev = frames.last().unwrap();
        let next = match step(prev, dt_step, config, params) {
            Ok(f) => f,
            Err(Error::Stability { min_value, tolerance, .. }) => {
                termination = Termination::Stability {
                    step: step_idx,
                    min_value,
                };
                let _ = tolerance;
                break;
            }
            Err(e) => return Err(e),
        };
        t = t + dt_step;
        step_idx += 1;
        let rec = diagnostics(t, &next, config, ledger)?;
        // first-crossing detection on the barrier margins
        let mut crossing: Option<(f64, f64)> = None;
        for &(q, margin) in &rec.barrier_margins {
            if margin <= 0.0 {
                let prev_margin = diags
                    .last()
                    .and_then(|d| {
                        d.barrier_margins
                            .iter()
                            .find(|(pq, _)| (pq - q).abs() < 1e-12)
                            .map(|(_, m)| *m)
                    })
                    .unwrap_or(margin);
                let t_prev = diags.last().map(|d| d.t).unwrap_or(as_f64(t));
                let t_cross = if prev_margin > 0.0 {
                    t_prev + (as_f64(t) - t_prev) * prev_margin / (prev_margin - margin)
                } else {
                    as_f64(t)
                };
                crossing = Some((q, t_cross));
                break;
            }
        }
        times.push(t);
        frames.push(next);
        diags.push(rec);
        if let Some((q, time)) = crossing {
            termination = Termination::BarrierCrossing { q, time };
            break;
        }
    }
    Ok(Trajectory {
        times,
        frames,
        diagnostics: diags,
        termination,
    })
}

/// diagnostics.csv line format shared with the CLI.
pub fn diagnostics_csv_header(monitor_qs: &[f64], with_margins: bool) -> String {
    let mut cols = vec![
        "t".to_string(),
        "mass".into(),
        "px".into(),
        "py".into(),
        "pz".into(),
        "energy".into(),
        "entropy".into(),
        "minf".into(),
    ];
    for q in monitor_qs {
        cols.push(format!("norm_q{q}"));
    }
    if with_margins {
        for q in monitor_qs {
            cols.push(format!("margin_q{q}"));
        }
    }
    cols.join(",")
}

pub fn diagnostics_csv_row(rec: &DiagnosticsRecord) -> String {
    let mut cols = vec![
        format!("{}", rec.t),
        format!("{}", rec.mass),
        format!("{}", rec.momentum[0]),
        format!("{}", rec.momentum[1]),
        format!("{}", rec.momentum[2]),
        format!("{}", rec.energy),
        format!("{}", rec.entropy),
        format!("{}", rec.min_value),
    ];
    for (_, n) in &rec.weighted_norms {
        cols.push(format!("{n}"));
    }
    for (_, m) in &rec.barrier_margins {
        cols.push(format!("{m}"));
    }
    cols.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams<f64> {
        ModelParams::new(-1.0, 0.6, 1.0, 1e-2).unwrap()
    }

    fn tiny_config() -> SolverConfig<f64> {
        let mut c = SolverConfig::desk_preset();
        c.grid_n = 8;
        c.grid_l = 4.0;
        c.quad.n_theta = 6;
        c.quad.n_phi = 6;
        c.quad.n_vstar_radial = 6;
        c.quad.n_vstar_angular = 6;
        c.quad.r_max = 8.0;
        c.t_end = 0.02;
        c.monitor_qs = vec![5.0];
        c
    }

    #[test]
    fn zero_datum_stays_zero() {
        let c = tiny_config();
        let p = params();
        let zero = DensityFunction::grid_from_fn(c.grid_l, c.grid_n, 0.0, 40.0, |_| 0.0).unwrap();
        let next = step(&zero, 0.01, &c, &p).unwrap();
        if let DensityKind::Grid(g) = &next.kind {
            assert!(g.values.iter().all(|&v| v == 0.0));
        } else {
            unreachable!()
        }
    }

    #[test]
    fn maxwellian_nearly_stationary_per_step() {
        let mut c = tiny_config();
        c.grid_n = 20;
        c.grid_l = 5.0;
        let p = params();
        let m = DensityFunction::<f64>::maxwellian();
        let m_grid =
            DensityFunction::grid_from_fn(c.grid_l, c.grid_n, 0.0, 40.0, |v| m.eval(v)).unwrap();
        let dt = 0.01;
        let next = step(&m_grid, dt, &c, &p).unwrap();
        let g0 = grid_of(&m_grid).unwrap();
        let g1 = grid_of(&next).unwrap();
        // the gain magnitude at the origin sets the quadrature scale
        let gain_scale = q_sigma(&m_grid, &m_grid, Vec3::zero(), &p, &c.quad)
            .unwrap()
            .gain;
        let max_delta = g0
            .values
            .iter()
            .zip(&g1.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(
            max_delta <= 1e-2 * dt * gain_scale,
            "Maxwellian moved too much: {max_delta} vs gain {gain_scale}"
        );
    }

    #[test]
    fn diagnostics_maxwellian_moments() {
        let mut c = tiny_config();
        c.grid_n = 24;
        c.grid_l = 6.0;
        let m = DensityFunction::<f64>::maxwellian();
        let m_grid =
            DensityFunction::grid_from_fn(c.grid_l, c.grid_n, 0.0, 40.0, |v| m.eval(v)).unwrap();
        let rec = diagnostics(0.0, &m_grid, &c, None).unwrap();
        assert!((rec.mass - 1.0).abs() < 5e-3, "mass {}", rec.mass);
        assert!(rec.momentum.iter().all(|p| p.abs() < 1e-6));
        assert!((rec.energy - 1.5).abs() < 2e-2, "energy {}", rec.energy);
        assert!(rec.min_value >= 0.0);
    }

    #[test]
    fn diagnostics_zero_field() {
        let c = tiny_config();
        let zero = DensityFunction::grid_from_fn(c.grid_l, c.grid_n, 0.0, 40.0, |_| 0.0).unwrap();
        let rec = diagnostics(0.0, &zero, &c, None).unwrap();
        assert_eq!(rec.mass, 0.0);
        assert_eq!(rec.energy, 0.0);
        assert_eq!(rec.entropy, 0.0);
    }

    #[test]
    fn diagnostics_scale_linearly() {
        let c = tiny_config();
        let m = DensityFunction::<f64>::maxwellian();
        let g1 =
            DensityFunction::grid_from_fn(c.grid_l, c.grid_n, 0.0, 40.0, |v| m.eval(v)).unwrap();
        let g2 = g1.scaled(2.0);
        let r1 = diagnostics(0.0, &g1, &c, None).unwrap();
        let r2 = diagnostics(0.0, &g2, &c, None).unwrap();
        assert!((r2.mass - 2.0 * r1.mass).abs() < 1e-12);
        assert!((r2.energy - 2.0 * r1.energy).abs() < 1e-12);
        for i in 0..3 {
            assert!((r2.momentum[i] - 2.0 * r1.momentum[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn run_records_and_is_deterministic() {
        let c = tiny_config();
        let p = params();
        let datum = DensityFunction::grid_from_fn(c.grid_l, c.grid_n, 0.0, 40.0, |v| {
            (-v.norm_sq()).exp() * 0.05
        })
        .unwrap();
        let t1 = run(&datum, &c, &p, None).unwrap();
        let t2 = run(&datum, &c, &p, None).unwrap();
        assert!(matches!(t1.termination, Termination::Completed));
        assert_eq!(t1.times.len(), t1.frames.len());
        assert_eq!(t1.times.len(), t1.diagnostics.len());
        assert!(t1.times.windows(2).all(|w| w[1] > w[0]));
        // bit-identical across runs
        let last1 = grid_of(t1.frames.last().unwrap()).unwrap();
        let last2 = grid_of(t2.frames.last().unwrap()).unwrap();
        for (a, b) in last1.values.iter().zip(&last2.values) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn oversized_dt_triggers_stability_error() {
        let mut c = tiny_config();
        let p = params();
        // steep compact datum with a hard edge + huge dt
        let datum = DensityFunction::grid_from_fn(c.grid_l, c.grid_n, 0.0, 40.0, |v| {
            if v.norm() < 1.0 {
                5.0
            } else {
                0.0
            }
        })
        .unwrap();
        c.dt = Some(50.0);
        c.t_end = 100.0;
        c.negativity_tol = 1e-6;
        let out = run(&datum, &c, &p, None).unwrap();
        assert!(
            matches!(out.termination, Termination::Stability { .. }),
            "expected stability abort, got {:?}",
            out.termination
        );
    }

    #[test]
    fn t_end_guarded_by_ledger_horizon() {
        let c = tiny_config();
        let p = params();
        let m = DensityFunction::<f64>::maxwellian();
        let ledger =
            crate::barrier::build_ledger(&m, 5.0, &[5.0], &p, 1e6, "test").unwrap();
        // T_f is tiny with a huge C0; t_end = 0.02 exceeds it.
        assert!(ledger.t_f < 0.02);
        let err = run(&m, &c, &p, Some(&ledger));
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn csv_layout_is_consistent() {
        let c = tiny_config();
        let zero = DensityFunction::grid_from_fn(c.grid_l, c.grid_n, 0.0, 40.0, |_| 0.0).unwrap();
        let rec = diagnostics(0.0, &zero, &c, None).unwrap();
        let header = diagnostics_csv_header(&[5.0], false);
        let row = diagnostics_csv_row(&rec);
        assert_eq!(header.split(',').count(), row.split(',').count());
        assert!(header.starts_with("t,mass,px,py,pz,energy,entropy,minf"));
    }
}
