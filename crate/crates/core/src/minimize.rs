//! Deterministic Nelder–Mead simplex minimization on ℝ³.
//!
//! The kinetic distance has no closed form in general; its minimization
//! objective is a max of norms, so derivative-free search is appropriate.
//! Everything here is deterministic given the start point.

use crate::scalar::{lit, Real};
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOpts<R> {
    pub max_iters: usize,
    /// Convergence threshold on the simplex value spread, relative to
    /// 1 + |best value|.
    pub tol: R,
    /// Initial simplex edge length.
    pub scale: R,
}

impl<R: Real> Default for NelderMeadOpts<R> {
    fn default() -> Self {
        NelderMeadOpts {
            max_iters: 400,
            tol: lit(1e-9),
            scale: lit(0.5),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MinResult<R> {
    pub arg: Vec3<R>,
    pub value: R,
    pub converged: bool,
}

pub fn nelder_mead<R: Real>(
    f: impl Fn(Vec3<R>) -> R,
    start: Vec3<R>,
    opts: &NelderMeadOpts<R>,
) -> MinResult<R> {
    let alpha: R = R::one();
    let gamma: R = lit(2.0);
    let rho: R = lit(0.5);
    let sigma: R = lit(0.5);

    let mut simplex: Vec<(Vec3<R>, R)> = Vec::with_capacity(4);
    simplex.push((start, f(start)));
    for i in 0..3 {
        let p = start + Vec3::axis(i) * opts.scale;
        simplex.push((p, f(p)));
    }

    let mut converged = false;
    for _ in 0..opts.max_iters {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let spread = simplex[3].1 - simplex[0].1;
        if spread <= opts.tol * (R::one() + simplex[0].1.abs()) {
            converged = true;
            break;
        }
        let centroid = (simplex[0].0 + simplex[1].0 + simplex[2].0) * lit(1.0 / 3.0);
        let worst = simplex[3];

        let refl = centroid + (centroid - worst.0) * alpha;
        let f_refl = f(refl);
        if f_refl < simplex[0].1 {
            let exp = centroid + (refl - centroid) * gamma;
            let f_exp = f(exp);
            simplex[3] = if f_exp < f_refl {
                (exp, f_exp)
            } else {
                (refl, f_refl)
            };
            continue;
        }
        if f_refl < simplex[2].1 {
            simplex[3] = (refl, f_refl);
            continue;
        }
        let contr = if f_refl < worst.1 {
            centroid + (refl - centroid) * rho
        } else {
            centroid + (worst.0 - centroid) * rho
        };
        let f_contr = f(contr);
        if f_contr < worst.1.min(f_refl) {
            simplex[3] = (contr, f_contr);
            continue;
        }
        // Shrink toward the best vertex.
        let best = simplex[0].0;
        for v in simplex.iter_mut().skip(1) {
            let p = best + (v.0 - best) * sigma;
            *v = (p, f(p));
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    MinResult {
        arg: simplex[0].0,
        value: simplex[0].1,
        converged,
    }
}

/// Nelder–Mead with polish restarts at shrinking scale. Plain NM stalls on
/// non-smooth max-of-norms objectives; restarting the simplex from the
/// incumbent recovers convergence. Converged means a restart stopped
/// improving beyond the tolerance.
pub fn nelder_mead_polished<R: Real>(
    f: impl Fn(Vec3<R>) -> R + Copy,
    start: Vec3<R>,
    opts: &NelderMeadOpts<R>,
) -> MinResult<R> {
    let mut cur = nelder_mead(f, start, opts);
    let mut scale = opts.scale;
    let mut converged = false;
    for _ in 0..6 {
        scale = scale * lit(0.2);
        let mut o = *opts;
        o.scale = scale;
        let next = nelder_mead(f, cur.arg, &o);
        let improvement = cur.value - next.value;
        if next.value < cur.value {
            cur = next;
        }
        if improvement.abs() <= opts.tol * (R::one() + cur.value.abs()) {
            converged = true;
            break;
        }
    }
    cur.converged = converged;
    cur
}

/// Best result over a deterministic list of starts.
pub fn multi_start<R: Real>(
    f: impl Fn(Vec3<R>) -> R + Copy,
    starts: &[Vec3<R>],
    opts: &NelderMeadOpts<R>,
) -> MinResult<R> {
    let mut best: Option<MinResult<R>> = None;
    for &s in starts {
        let r = nelder_mead_polished(f, s, opts);
        best = match best {
            None => Some(r),
            Some(b) if r.value < b.value => Some(r),
            Some(b) => Some(b),
        };
    }
    best.expect("at least one start required")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let f = |v: Vec3<f64>| (v - Vec3::new(1.0, -2.0, 0.5)).norm_sq() + 3.0;
        let r = nelder_mead(f, Vec3::zero(), &NelderMeadOpts::default());
        assert!(r.converged);
        assert!((r.value - 3.0).abs() < 1e-8);
        assert!((r.arg - Vec3::new(1.0, -2.0, 0.5)).norm() < 1e-4);
    }

    #[test]
    fn handles_nonsmooth_max_objective() {
        let a = Vec3::new(0.0f64, 0.0, 0.0);
        let b = Vec3::new(2.0, 0.0, 0.0);
        let f = |w: Vec3<f64>| (w - a).norm().max((w - b).norm());
        let r = multi_start(f, &[a, b, (a + b) * 0.5], &NelderMeadOpts::default());
        assert!((r.value - 1.0).abs() < 1e-6);
    }
}
