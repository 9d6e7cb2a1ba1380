//! Shared parameter and field types: collision-kernel parameters, velocity
//! densities with polynomial tail models, and lower-bound specifications.

use crate::error::{Error, Result};
use crate::scalar::{as_f64, lit, Real};
use crate::vec3::Vec3;

/// Physical triple (γ, s, c_b) plus the grazing-angle regularization cutoff
/// and velocity dimension. Immutable after construction; every kernel
/// evaluation in a run shares one instance.
#[derive(Debug, Clone, Copy)]
pub struct ModelParams<R> {
    pub gamma: R,
    pub s: R,
    pub c_b: R,
    pub theta_min: R,
    pub dim: u32,
}

impl<R: Real> ModelParams<R> {
    pub fn new(gamma: R, s: R, c_b: R, theta_min: R) -> Result<Self> {
        Self::with_dim(gamma, s, c_b, theta_min, 3, false)
    }

    /// `dim = 2` is accepted only with `reduced_dim = true` and exists for
    /// smoke tests; all exponents keep their d = 3 values.
    pub fn with_dim(
        gamma: R,
        s: R,
        c_b: R,
        theta_min: R,
        dim: u32,
        reduced_dim: bool,
    ) -> Result<Self> {
        if !(gamma > lit(-3.0) && gamma <= R::one()) {
            return Err(Error::Parameter(format!(
                "gamma must lie in (-3, 1], got {}",
                as_f64(gamma)
            )));
        }
        if !(s > R::zero() && s < R::one()) {
            return Err(Error::Parameter(format!(
                "s must lie in (0, 1), got {}",
                as_f64(s)
            )));
        }
        if !(c_b > R::zero()) {
            return Err(Error::Parameter("c_b must be positive".into()));
        }
        if !(theta_min > R::zero() && theta_min < R::FRAC_PI_8()) {
            return Err(Error::Parameter(
                "theta_min must lie in (0, pi/8)".into(),
            ));
        }
        match (dim, reduced_dim) {
            (3, _) => {}
            (2, true) => {}
            _ => {
                return Err(Error::Parameter(format!(
                    "dim {dim} not supported (3, or 2 behind the reduced-dimension flag)"
                )))
            }
        }
        Ok(ModelParams {
            gamma,
            s,
            c_b,
            theta_min,
            dim,
        })
    }

    /// True in the very soft regime γ + 2s < 0.
    pub fn soft_regime(&self) -> bool {
        self.gamma + lit::<R>(2.0) * self.s < R::zero()
    }

    pub fn gamma_plus_2s(&self) -> R {
        self.gamma + lit::<R>(2.0) * self.s
    }
}

/// Closed-form velocity fields.
#[derive(Debug, Clone)]
pub enum AnalyticField<R> {
    /// amplitude · (2π)^{-3/2} exp(-|v - center|²/2)
    Maxwellian { amplitude: R, center: Vec3<R> },
    /// amplitude · ⟨v⟩^{-exponent}
    InversePower { exponent: R, amplitude: R },
    /// height · 1_{B_radius(center)}
    BallIndicator {
        center: Vec3<R>,
        radius: R,
        height: R,
    },
    /// C² bump: height on B_{radius/2}(center), 0 outside B_radius(center).
    MollifiedBall {
        center: Vec3<R>,
        radius: R,
        height: R,
    },
    Sum(Vec<AnalyticField<R>>),
}

impl<R: Real> AnalyticField<R> {
    pub fn eval(&self, v: Vec3<R>) -> R {
        match self {
            AnalyticField::Maxwellian { amplitude, center } => {
                let d2 = (v - *center).norm_sq();
                *amplitude * maxwellian_norm::<R>() * (-d2 * lit(0.5)).exp()
            }
            AnalyticField::InversePower {
                exponent,
                amplitude,
            } => *amplitude * v.bracket().powf(-*exponent),
            AnalyticField::BallIndicator {
                center,
                radius,
                height,
            } => {
                if (v - *center).norm() < *radius {
                    *height
                } else {
                    R::zero()
                }
            }
            AnalyticField::MollifiedBall {
                center,
                radius,
                height,
            } => {
                let rho = (v - *center).norm() / *radius;
                *height * bump_profile(rho)
            }
            AnalyticField::Sum(parts) => parts
                .iter()
                .fold(R::zero(), |acc, p| acc + p.eval(v)),
        }
    }
}

/// (2π)^{-3/2}
pub fn maxwellian_norm<R: Real>() -> R {
    (lit::<R>(2.0) * R::PI()).powf(lit(-1.5))
}

/// C² profile: 1 on [0, 1/2], 0 on [1, ∞), quintic smoothstep between.
pub fn bump_profile<R: Real>(rho: R) -> R {
    let x = (R::one() - rho) * lit(2.0);
    let x = x.max(R::zero()).min(R::one());
    x * x * x * (lit::<R>(10.0) - lit::<R>(15.0) * x + lit::<R>(6.0) * x * x)
}

/// Values on a uniform velocity lattice, index-major
/// (i, j, k) ↦ (i·n + j)·n + k, node coordinate -l + i·h with h = 2l/n and
/// i = 0..n. The origin is a node for even n; the covered box is
/// [-l, l - h]³ per axis.
#[derive(Debug, Clone)]
pub struct GridField<R> {
    pub l: R,
    pub n: usize,
    pub values: Vec<R>,
}

impl<R: Real> GridField<R> {
    pub fn from_fn(l: R, n: usize, f: impl Fn(Vec3<R>) -> R) -> Self {
        assert!(n >= 2, "grid needs at least 2 points per axis");
        let mut values = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    values.push(f(Self::node_coords(l, n, [i, j, k])));
                }
            }
        }
        GridField { l, n, values }
    }

    pub fn node_coords(l: R, n: usize, idx: [usize; 3]) -> Vec3<R> {
        let h = Self::spacing_for(l, n);
        Vec3::new(
            -l + h * lit(idx[0] as f64),
            -l + h * lit(idx[1] as f64),
            -l + h * lit(idx[2] as f64),
        )
    }

    pub fn spacing_for(l: R, n: usize) -> R {
        l * lit(2.0) / lit(n as f64)
    }

    pub fn spacing(&self) -> R {
        Self::spacing_for(self.l, self.n)
    }

    /// Largest coordinate covered by the lattice hull: l - h.
    pub fn upper_face(&self) -> R {
        self.l - self.spacing()
    }

    pub fn value_at(&self, idx: [usize; 3]) -> R {
        self.values[(idx[0] * self.n + idx[1]) * self.n + idx[2]]
    }

    /// Trilinear interpolation; `None` outside the lattice hull.
    pub fn interpolate(&self, v: Vec3<R>) -> Option<R> {
        let h = self.spacing();
        let hi = self.upper_face();
        let mut base = [0usize; 3];
        let mut frac = [R::zero(); 3];
        for a in 0..3 {
            if v[a] < -self.l || v[a] > hi {
                return None;
            }
            let u = (v[a] + self.l) / h;
            // Snap to the lattice when the coordinate reproduces a node
            // bit-exactly, so stored values are returned unchanged.
            let j = as_f64(u.round()) as usize;
            let mut i = if j < self.n && v[a] == -self.l + h * lit(j as f64) {
                lit(j as f64)
            } else {
                u.floor()
            };
            if i > lit((self.n - 2) as f64) {
                i = lit((self.n - 2) as f64);
            }
            if i < R::zero() {
                i = R::zero();
            }
            base[a] = as_f64(i) as usize;
            frac[a] = if v[a] == -self.l + h * lit(base[a] as f64) {
                R::zero()
            } else if base[a] + 1 < self.n && v[a] == -self.l + h * lit((base[a] + 1) as f64) {
                R::one()
            } else {
                u - i
            };
        }
        let mut acc = R::zero();
        for di in 0..2usize {
            for dj in 0..2usize {
                for dk in 0..2usize {
                    let w = tri_w(frac[0], di) * tri_w(frac[1], dj) * tri_w(frac[2], dk);
                    acc = acc + w * self.value_at([base[0] + di, base[1] + dj, base[2] + dk]);
                }
            }
        }
        Some(acc)
    }
}

#[inline]
fn tri_w<R: Real>(f: R, d: usize) -> R {
    if d == 0 {
        R::one() - f
    } else {
        f
    }
}

#[derive(Debug, Clone)]
pub enum DensityKind<R> {
    Analytic(AnalyticField<R>),
    Grid(GridField<R>),
}

/// Nonnegative velocity density with an explicit power-law tail model
/// amplitude · ⟨v⟩^{-q_tail}; the tail model is what every closed-form tail
/// correction and norm bound consumes.
#[derive(Debug, Clone)]
pub struct DensityFunction<R> {
    pub kind: DensityKind<R>,
    pub tail_amplitude: R,
    pub tail_exponent: R,
}

impl<R: Real> DensityFunction<R> {
    pub fn new(kind: DensityKind<R>, tail_amplitude: R, tail_exponent: R) -> Result<Self> {
        if tail_amplitude < R::zero() {
            return Err(Error::Parameter("tail_amplitude must be >= 0".into()));
        }
        if !(tail_exponent > lit(3.0)) {
            return Err(Error::Parameter("tail_exponent must exceed 3".into()));
        }
        Ok(DensityFunction {
            kind,
            tail_amplitude,
            tail_exponent,
        })
    }

    /// Standard Maxwellian equilibrium (rapid decay: infinite tail exponent).
    pub fn maxwellian() -> Self {
        DensityFunction {
            kind: DensityKind::Analytic(AnalyticField::Maxwellian {
                amplitude: R::one(),
                center: Vec3::zero(),
            }),
            tail_amplitude: R::zero(),
            tail_exponent: R::infinity(),
        }
    }

    /// Two unit-mass Maxwellians centered at ±offset.
    pub fn bimodal_maxwellian(offset: Vec3<R>) -> Self {
        let half: R = lit(0.5);
        DensityFunction {
            kind: DensityKind::Analytic(AnalyticField::Sum(vec![
                AnalyticField::Maxwellian {
                    amplitude: half,
                    center: offset,
                },
                AnalyticField::Maxwellian {
                    amplitude: half,
                    center: -offset,
                },
            ])),
            tail_amplitude: R::zero(),
            tail_exponent: R::infinity(),
        }
    }

    /// ⟨v⟩^{-q}; its own tail model is exact.
    pub fn inverse_power(q: R) -> Self {
        DensityFunction {
            kind: DensityKind::Analytic(AnalyticField::InversePower {
                exponent: q,
                amplitude: R::one(),
            }),
            tail_amplitude: R::one(),
            tail_exponent: q,
        }
    }

    pub fn ball_indicator(center: Vec3<R>, radius: R, height: R) -> Self {
        DensityFunction {
            kind: DensityKind::Analytic(AnalyticField::BallIndicator {
                center,
                radius,
                height,
            }),
            tail_amplitude: R::zero(),
            tail_exponent: R::infinity(),
        }
    }

    /// C² bump equal to `height` on B_{radius/2}(center); satisfies the
    /// lower-bound spec (height, radius/2, center).
    pub fn mollified_ball(center: Vec3<R>, radius: R, height: R) -> Self {
        DensityFunction {
            kind: DensityKind::Analytic(AnalyticField::MollifiedBall {
                center,
                radius,
                height,
            }),
            tail_amplitude: R::zero(),
            tail_exponent: R::infinity(),
        }
    }

    pub fn zero() -> Self {
        Self::ball_indicator(Vec3::zero(), R::one(), R::zero())
    }

    pub fn grid_from_fn(
        l: R,
        n: usize,
        tail_amplitude: R,
        tail_exponent: R,
        f: impl Fn(Vec3<R>) -> R,
    ) -> Result<Self> {
        Self::new(
            DensityKind::Grid(GridField::from_fn(l, n, f)),
            tail_amplitude,
            tail_exponent,
        )
    }

    /// Total evaluation: grid interpolation inside the box, tail model
    /// outside; analytic formulas everywhere.
    pub fn eval(&self, v: Vec3<R>) -> R {
        match &self.kind {
            DensityKind::Analytic(a) => a.eval(v),
            DensityKind::Grid(g) => match g.interpolate(v) {
                Some(val) => val,
                None => self.tail_value(v.bracket()),
            },
        }
    }

    /// Tail model amplitude·⟨v⟩^{-q_tail} at given ⟨v⟩.
    pub fn tail_value(&self, bracket: R) -> R {
        if self.tail_amplitude == R::zero() {
            R::zero()
        } else {
            self.tail_amplitude * bracket.powf(-self.tail_exponent)
        }
    }

    /// Scale all values (including the tail amplitude) by `c` ≥ 0.
    pub fn scaled(&self, c: R) -> Self {
        let kind = match &self.kind {
            DensityKind::Analytic(a) => DensityKind::Analytic(scale_analytic(a, c)),
            DensityKind::Grid(g) => DensityKind::Grid(GridField {
                l: g.l,
                n: g.n,
                values: g.values.iter().map(|&x| x * c).collect(),
            }),
        };
        DensityFunction {
            kind,
            tail_amplitude: self.tail_amplitude * c,
            tail_exponent: self.tail_exponent,
        }
    }

    /// Decay exponent governing integrability preconditions.
    pub fn q_tail(&self) -> R {
        self.tail_exponent
    }

    /// Magnitude of the jump between interpolant and tail model at the box
    /// face centers (grid kind only); continuity is not required, only
    /// reported.
    pub fn face_discontinuity(&self) -> Option<R> {
        let g = match &self.kind {
            DensityKind::Grid(g) => g,
            _ => return None,
        };
        let mut worst = R::zero();
        let m = g.n / 2;
        for axis in 0..3 {
            for sign in [R::one(), -R::one()] {
                let mut idx = [m, m, m];
                idx[axis] = if sign > R::zero() { g.n - 1 } else { 0 };
                let face_val = g.value_at(idx);
                let v = GridField::node_coords(g.l, g.n, idx);
                let jump = (face_val - self.tail_value(v.bracket())).abs();
                worst = worst.max(jump);
            }
        }
        Some(worst)
    }
}

fn scale_analytic<R: Real>(a: &AnalyticField<R>, c: R) -> AnalyticField<R> {
    match a {
        AnalyticField::Maxwellian { amplitude, center } => AnalyticField::Maxwellian {
            amplitude: *amplitude * c,
            center: *center,
        },
        AnalyticField::InversePower {
            exponent,
            amplitude,
        } => AnalyticField::InversePower {
            exponent: *exponent,
            amplitude: *amplitude * c,
        },
        AnalyticField::BallIndicator {
            center,
            radius,
            height,
        } => AnalyticField::BallIndicator {
            center: *center,
            radius: *radius,
            height: *height * c,
        },
        AnalyticField::MollifiedBall {
            center,
            radius,
            height,
        } => AnalyticField::MollifiedBall {
            center: *center,
            radius: *radius,
            height: *height * c,
        },
        AnalyticField::Sum(parts) => {
            AnalyticField::Sum(parts.iter().map(|p| scale_analytic(p, c)).collect())
        }
    }
}

/// Uniform sampling lattice used by norm estimation.
#[derive(Debug, Clone, Copy)]
pub struct SampleSpec<R> {
    pub half_width: R,
    pub per_axis: usize,
}

impl<R: Real> SampleSpec<R> {
    pub fn new(half_width: R, per_axis: usize) -> Self {
        SampleSpec {
            half_width,
            per_axis: per_axis.max(3),
        }
    }
}

impl<R: Real> Default for SampleSpec<R> {
    fn default() -> Self {
        SampleSpec::new(lit(8.0), 33)
    }
}

/// Interior (sampled) and tail (closed-form) parts of the weighted sup norm.
pub fn weighted_sup_norm_parts<R: Real>(
    f: &DensityFunction<R>,
    q: R,
    sample: &SampleSpec<R>,
) -> Result<(R, R)> {
    if q > f.q_tail() {
        return Err(Error::InfiniteNorm {
            q: as_f64(q),
            q_tail: as_f64(f.q_tail()),
        });
    }
    let interior = match &f.kind {
        DensityKind::Grid(g) => {
            let mut best = R::zero();
            for i in 0..g.n {
                for j in 0..g.n {
                    for k in 0..g.n {
                        let v = GridField::node_coords(g.l, g.n, [i, j, k]);
                        best = best.max(v.bracket().powf(q) * g.value_at([i, j, k]));
                    }
                }
            }
            best
        }
        DensityKind::Analytic(a) => {
            let n = sample.per_axis;
            let l = sample.half_width;
            let h = l * lit(2.0) / lit((n - 1) as f64);
            let mut best = R::zero();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let v = Vec3::new(
                            -l + h * lit(i as f64),
                            -l + h * lit(j as f64),
                            -l + h * lit(k as f64),
                        );
                        best = best.max(v.bracket().powf(q) * a.eval(v));
                    }
                }
            }
            best
        }
    };
    // Tail region starts at the box face; ⟨v⟩^{q - q_tail} is nonincreasing
    // in |v| for q ≤ q_tail, so the closed-form sup sits on the face.
    let edge = match &f.kind {
        DensityKind::Grid(g) => g.upper_face(),
        DensityKind::Analytic(_) => sample.half_width,
    };
    let tail = if f.tail_amplitude == R::zero() {
        R::zero()
    } else {
        f.tail_amplitude * (R::one() + edge * edge).powf((q - f.tail_exponent) * lit(0.5))
    };
    Ok((interior, tail))
}

/// ‖f‖_{L∞_q} estimated over the sample lattice, plus the closed-form tail
/// contribution. Errors when q exceeds the tail exponent.
pub fn weighted_sup_norm<R: Real>(
    f: &DensityFunction<R>,
    q: R,
    sample: &SampleSpec<R>,
) -> Result<R> {
    let (interior, tail) = weighted_sup_norm_parts(f, q, sample)?;
    Ok(interior.max(tail))
}

/// Mass-core specification: f ≥ delta on B_r(v_m).
#[derive(Debug, Clone, Copy)]
pub struct LowerBoundSpec<R> {
    pub delta: R,
    pub r: R,
    pub v_m: Vec3<R>,
}

impl<R: Real> LowerBoundSpec<R> {
    pub fn new(delta: R, r: R, v_m: Vec3<R>) -> Result<Self> {
        if !(delta > R::zero() && r > R::zero()) {
            return Err(Error::Parameter("delta and r must be positive".into()));
        }
        Ok(LowerBoundSpec { delta, r, v_m })
    }

    /// Sample the ball and check the bound; deterministic sample set.
    pub fn check(&self, f: &DensityFunction<R>) -> Result<()> {
        let fr = lit::<R>(0.999);
        for &scale in &[R::zero(), lit(0.35), lit(0.7), fr] {
            for dir in [
                Vec3::axis(0),
                -Vec3::axis(0),
                Vec3::axis(1),
                -Vec3::axis(1),
                Vec3::axis(2),
                -Vec3::axis(2),
                Vec3::new(R::one(), R::one(), R::one()).scale(lit(0.577_350_269)),
            ] {
                let v = self.v_m + dir * (self.r * scale);
                let val = f.eval(v);
                if val < self.delta * lit(0.999_999) {
                    return Err(Error::LowerBound(format!(
                        "f({:?}) = {} < delta = {}",
                        v.map_f64(as_f64),
                        as_f64(val),
                        as_f64(self.delta)
                    )));
                }
                if scale == R::zero() {
                    break;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const M0: f64 = 0.063_493_635_934_240_97; // (2π)^{-3/2}

    #[test]
    fn maxwellian_at_origin() {
        let m = DensityFunction::<f64>::maxwellian();
        assert!((m.eval(Vec3::zero()) - M0).abs() < 1e-15);
    }

    #[test]
    fn eval_is_deterministic() {
        let m = DensityFunction::<f64>::maxwellian();
        let v = Vec3::new(0.3, -1.2, 2.2);
        assert_eq!(m.eval(v).to_bits(), m.eval(v).to_bits());
    }

    #[test]
    fn grid_outside_box_uses_tail_model() {
        let g = DensityFunction::grid_from_fn(2.0f64, 8, 0.0, 5.0, |_| 1.0).unwrap();
        assert_eq!(g.eval(Vec3::new(3.0, 0.0, 0.0)), 0.0);
        assert_eq!(g.eval(Vec3::new(0.5, 0.5, 0.5)), 1.0);
        let with_tail = DensityFunction::grid_from_fn(2.0f64, 8, 2.0, 5.0, |_| 1.0).unwrap();
        let v = Vec3::new(3.0f64, 0.0, 0.0);
        let expected = 2.0 * v.bracket().powf(-5.0);
        assert!((with_tail.eval(v) - expected).abs() < 1e-15);
    }

    #[test]
    fn grid_matches_stored_values_at_nodes() {
        let f = |v: Vec3<f64>| (v[0] + 2.0 * v[1] - v[2]).sin() + 2.0;
        let g = DensityFunction::grid_from_fn(3.0f64, 9, 0.0, 5.0, f).unwrap();
        if let DensityKind::Grid(grid) = &g.kind {
            for idx in [[0, 0, 0], [4, 4, 4], [8, 3, 1], [2, 7, 5]] {
                let v = GridField::node_coords(3.0, 9, idx);
                assert_eq!(g.eval(v), grid.value_at(idx));
            }
        } else {
            unreachable!();
        }
    }

    #[test]
    fn grid_sampled_maxwellian_interpolates_well() {
        // Oracle: the analytic Maxwellian itself.
        let m = DensityFunction::<f64>::maxwellian();
        let g =
            DensityFunction::grid_from_fn(6.0f64, 32, 0.0, 40.0, |v| m.eval(v)).unwrap();
        let v = Vec3::new(1.0, 0.0, 0.0);
        assert!((g.eval(v) - m.eval(v)).abs() < 1e-3);
    }

    #[test]
    fn weighted_norm_weight_cancels_field() {
        let f = DensityFunction::<f64>::inverse_power(5.0);
        let norm = weighted_sup_norm(&f, 5.0, &SampleSpec::default()).unwrap();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_norm_maxwellian_q0() {
        let m = DensityFunction::<f64>::maxwellian();
        let norm = weighted_sup_norm(&m, 0.0, &SampleSpec::default()).unwrap();
        assert!((norm - M0).abs() < 1e-12);
    }

    #[test]
    fn weighted_norm_maxwellian_q4_matches_radial_oracle() {
        // Oracle: 1D golden-section maximization of (1+r²)² M0 e^{-r²/2}.
        let weighted = |r: f64| (1.0 + r * r).powi(2) * M0 * (-r * r / 2.0).exp();
        let (mut a, mut b) = (0.0f64, 8.0);
        let phi = (5.0f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            if weighted(c) < weighted(d) {
                a = c;
            } else {
                b = d;
            }
        }
        let oracle = weighted((a + b) / 2.0);
        assert!((oracle - 16.0 * (-1.5f64).exp() * M0).abs() < 1e-12);

        let m = DensityFunction::<f64>::maxwellian();
        let norm = weighted_sup_norm(&m, 4.0, &SampleSpec::new(6.0, 49)).unwrap();
        assert!(
            (norm - oracle).abs() / oracle < 5e-3,
            "norm {norm} oracle {oracle}"
        );
    }

    #[test]
    fn weighted_norm_is_max_of_parts() {
        let f = DensityFunction::grid_from_fn(2.0f64, 8, 3.0, 6.0, |v| {
            (-v.norm_sq()).exp()
        })
        .unwrap();
        let (interior, tail) = weighted_sup_norm_parts(&f, 4.0, &SampleSpec::default()).unwrap();
        let norm = weighted_sup_norm(&f, 4.0, &SampleSpec::default()).unwrap();
        assert_eq!(norm, interior.max(tail));
        assert!(tail > 0.0);
    }

    #[test]
    fn weighted_norm_rejects_q_beyond_tail() {
        let f = DensityFunction::<f64>::inverse_power(5.0);
        let err = weighted_sup_norm(&f, 6.0, &SampleSpec::default());
        assert!(matches!(err, Err(Error::InfiniteNorm { .. })));
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(-1.0f64, 0.6, 1.0, 1e-2).is_ok());
        assert!(ModelParams::new(-3.2f64, 0.6, 1.0, 1e-2).is_err());
        assert!(ModelParams::new(-1.0f64, 1.2, 1.0, 1e-2).is_err());
        assert!(ModelParams::new(-1.0f64, 0.6, 0.0, 1e-2).is_err());
        assert!(ModelParams::new(-1.0f64, 0.6, 1.0, 1.0).is_err());
        assert!(ModelParams::with_dim(-1.0f64, 0.6, 1.0, 1e-2, 2, false).is_err());
        assert!(ModelParams::with_dim(-1.0f64, 0.6, 1.0, 1e-2, 2, true).is_ok());
        let p = ModelParams::new(-2.0f64, 0.5, 1.0, 1e-2).unwrap();
        assert!(p.soft_regime());
        let p = ModelParams::new(-1.0f64, 0.7, 1.0, 1e-2).unwrap();
        assert!(!p.soft_regime());
    }

    #[test]
    fn mollified_ball_satisfies_lower_bound_spec() {
        let f = DensityFunction::<f64>::mollified_ball(Vec3::zero(), 2.0, 1.0);
        let spec = LowerBoundSpec::new(1.0, 1.0, Vec3::zero()).unwrap();
        spec.check(&f).unwrap();
        let tiny = DensityFunction::<f64>::maxwellian().scaled(1e-12);
        assert!(spec.check(&tiny).is_err());
    }

    #[test]
    fn face_discontinuity_reported() {
        let g = DensityFunction::grid_from_fn(2.0f64, 9, 0.0, 5.0, |_| 1.0).unwrap();
        let jump = g.face_discontinuity().unwrap();
        assert!((jump - 1.0).abs() < 1e-14);
        let m = DensityFunction::<f64>::maxwellian();
        assert!(m.face_discontinuity().is_none());
    }
}
