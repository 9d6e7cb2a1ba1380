//! Quadrature building blocks: Gauss–Legendre rules, product sphere grids
//! with exact antipodal pairing, and power-weighted radial rules that absorb
//! kinetic-factor singularities into the measure.

use crate::scalar::{as_f64, lit, Real};
use crate::vec3::Vec3;

/// Gauss–Legendre nodes and weights on [-1, 1], computed in `f64` by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        // Initial guess (Chebyshev-like).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gl_interval<R: Real>(n: usize, a: R, b: R) -> Vec<(R, R)> {
    let mid = (a + b) * lit(0.5);
    let hw = (b - a) * lit(0.5);
    gauss_legendre(n)
        .into_iter()
        .map(|(x, w)| (mid + hw * lit(x), hw * lit(w)))
        .collect()
}

/// Gauss–Legendre rule in log space on [a, b] with 0 < a < b: returns nodes
/// `r` and weights that already include the Jacobian `r`.
pub fn gl_log<R: Real>(n: usize, a: R, b: R) -> Vec<(R, R)> {
    assert!(a > R::zero() && b > a);
    gl_interval(n, a.ln(), b.ln())
        .into_iter()
        .map(|(l, w)| {
            let r = l.exp();
            (r, w * r)
        })
        .collect()
}

/// Nodes and weights for ∫₀^{r_max} r^p h(r) dr (p > -1) with the power
/// absorbed into the weights: Σ wᵢ h(rᵢ). Substituting r = r_max ξ^{1/(p+1)}
/// makes the weighted measure uniform in ξ, so the rule is exact for h ≡ 1
/// and well conditioned near the singular endpoint.
pub fn radial_power_rule<R: Real>(n: usize, r_max: R, p: R) -> Vec<(R, R)> {
    assert!(p > -R::one() && r_max > R::zero());
    let pp1 = p + R::one();
    let total = r_max.powf(pp1) / pp1;
    gl_interval(n, R::zero(), R::one())
        .into_iter()
        .map(|(xi, w)| (r_max * xi.powf(R::one() / pp1), w * total))
        .collect()
}

/// Composite radial rule for ∫ r^p h(r) dr with the weight absorbed into
/// the node weights: dyadic Gauss–Legendre panels from r_max down to r_lo,
/// optionally closed by a power-law panel on [0, r_lo]. Dyadic panels keep
/// O(1) relative resolution at every scale, which plain global rules lack
/// for integrands with localized structure (grid fields, indicator bumps).
pub fn radial_composite<R: Real>(
    per_panel: usize,
    r_lo: R,
    r_max: R,
    p: R,
    close_at_zero: bool,
) -> Vec<(R, R)> {
    assert!(r_max > r_lo && r_lo >= R::zero());
    let per_panel = per_panel.max(3);
    let mut out = Vec::new();
    let mut hi = r_max;
    // At most 40 dyadic panels guards degenerate r_lo.
    for _ in 0..40 {
        let lo = (hi * lit(0.5)).max(r_lo);
        for (r, w) in gl_interval(per_panel, lo, hi) {
            out.push((r, w * r.powf(p)));
        }
        hi = lo;
        if hi <= r_lo || hi <= r_max * lit(2e-13) {
            break;
        }
    }
    if close_at_zero && hi > R::zero() {
        out.extend(radial_power_rule(per_panel, hi, p));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Product quadrature grid on the unit sphere: Gauss–Legendre in cos(polar)
/// × uniform azimuth. Closed under the antipodal map when both counts are
/// even, which the constructor enforces by rounding up.
#[derive(Debug, Clone)]
pub struct SphereGrid<R> {
    pub dirs: Vec<Vec3<R>>,
    pub weights: Vec<R>,
    n_polar: usize,
    n_azimuth: usize,
}

impl<R: Real> SphereGrid<R> {
    pub fn new(n_polar: usize, n_azimuth: usize) -> Self {
        Self::oriented(n_polar, n_azimuth, Vec3::axis(2))
    }

    /// Grid with the polar axis along `axis`; aligning the axis with an
    /// approximate symmetry axis of the integrand improves convergence
    /// markedly for radial fields.
    pub fn oriented(n_polar: usize, n_azimuth: usize, axis: Vec3<R>) -> Self {
        let n_polar = n_polar.max(2) + n_polar % 2;
        let n_azimuth = n_azimuth.max(2) + n_azimuth % 2;
        let axis = axis.normalized().unwrap_or(Vec3::axis(2));
        let (u1, u2) = axis.orthonormal_complement();
        let polar = gauss_legendre(n_polar);
        let dphi = 2.0 * std::f64::consts::PI / n_azimuth as f64;
        let mut dirs = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        for &(c, wc) in &polar {
            let s = (1.0 - c * c).max(0.0).sqrt();
            for j in 0..n_azimuth {
                let phi = dphi * j as f64;
                let dir = axis * lit(c)
                    + (u1 * lit(s * phi.cos()) + u2 * lit(s * phi.sin()));
                dirs.push(dir);
                weights.push(lit(wc * dphi));
            }
        }
        SphereGrid {
            dirs,
            weights,
            n_polar,
            n_azimuth,
        }
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    /// Index of the antipodal node. Exact by grid symmetry.
    pub fn antipode(&self, idx: usize) -> usize {
        let k = idx / self.n_azimuth;
        let j = idx % self.n_azimuth;
        let k2 = self.n_polar - 1 - k;
        let j2 = (j + self.n_azimuth / 2) % self.n_azimuth;
        k2 * self.n_azimuth + j2
    }

    /// Each antipodal pair listed once: (index, antipode index).
    pub fn antipodal_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::with_capacity(self.len() / 2);
        for k in 0..self.n_polar / 2 {
            for j in 0..self.n_azimuth {
                let idx = k * self.n_azimuth + j;
                pairs.push((idx, self.antipode(idx)));
            }
        }
        pairs
    }
}

/// ∫_{r_max}^∞ g(r) dr through the substitution u = r_max / r.
/// `g` must decay strictly faster than r⁻¹.
pub fn tail_integral<R: Real>(n: usize, r_max: R, g: impl Fn(R) -> R) -> R {
    let mut acc = R::zero();
    for (u, w) in gl_interval(n, R::zero(), R::one()) {
        if u <= R::zero() {
            continue;
        }
        let r = r_max / u;
        acc = acc + w * g(r) * r_max / (u * u);
    }
    acc
}

/// Exact average over the unit sphere of ω ↦ ⟨v + rω⟩^{-q}, q > 2, as a
/// function of |v| only.
pub fn sphere_avg_bracket_pow<R: Real>(v_norm: R, r: R, q: R) -> R {
    let a = R::one() + v_norm * v_norm + r * r;
    let b = v_norm * r * lit(2.0);
    let e = R::one() - q * lit(0.5);
    if b < a * lit(1e-12) {
        return a.powf(-q * lit(0.5));
    }
    // (1/2)∫_{-1}^{1} (a + b u)^{-q/2} du
    ((a + b).powf(e) - (a - b).powf(e)) / (b * e * lit(2.0))
}

/// Max |f| over the sphere average helper, exposed for norm bookkeeping: the
/// supremum over |w| ≥ r of ⟨w⟩^{-q} (q ≥ 0 decreasing in |w|).
pub fn bracket_pow_sup_outside<R: Real>(r: R, q: R) -> R {
    (R::one() + r * r).powf(-q * lit(0.5))
}

pub fn debug_total_weight<R: Real>(grid: &SphereGrid<R>) -> f64 {
    grid.weights.iter().fold(0.0, |acc, w| acc + as_f64(*w))
}
