//! C² test functions with analytic derivatives and sup norms, used by the
//! weak form and by the estimate verifier.

use crate::scalar::{lit, Real};
use crate::vec3::{Mat3, Vec3};

pub trait TestFunction<R: Real>: Sync {
    fn value(&self, v: Vec3<R>) -> R;
    fn gradient(&self, v: Vec3<R>) -> Vec3<R>;
    fn hessian(&self, v: Vec3<R>) -> Mat3<R>;
    /// sup |φ|
    fn sup_value(&self) -> R;
    /// sup |∇φ|
    fn sup_gradient(&self) -> R;
    /// sup of the Hessian operator norm
    fn sup_hessian(&self) -> R;
    /// ‖φ‖_{C²} = sup|φ| + sup|∇φ| + sup|D²φ|
    fn c2_norm(&self) -> R {
        self.sup_value() + self.sup_gradient() + self.sup_hessian()
    }
}

/// φ ≡ c (collision invariant for c = 1).
pub struct Constant<R>(pub R);

impl<R: Real> TestFunction<R> for Constant<R> {
    fn value(&self, _v: Vec3<R>) -> R {
        self.0
    }
    fn gradient(&self, _v: Vec3<R>) -> Vec3<R> {
        Vec3::zero()
    }
    fn hessian(&self, _v: Vec3<R>) -> Mat3<R> {
        Mat3::axial(Vec3::axis(0), R::zero(), R::zero())
    }
    fn sup_value(&self) -> R {
        self.0.abs()
    }
    fn sup_gradient(&self) -> R {
        R::zero()
    }
    fn sup_hessian(&self) -> R {
        R::zero()
    }
}

/// φ(v) = v_i (momentum component; unbounded, sup norms are infinite).
pub struct Coordinate(pub usize);

impl<R: Real> TestFunction<R> for Coordinate {
    fn value(&self, v: Vec3<R>) -> R {
        v[self.0]
    }
    fn gradient(&self, _v: Vec3<R>) -> Vec3<R> {
        Vec3::axis(self.0)
    }
    fn hessian(&self, _v: Vec3<R>) -> Mat3<R> {
        Mat3::axial(Vec3::axis(0), R::zero(), R::zero())
    }
    fn sup_value(&self) -> R {
        R::infinity()
    }
    fn sup_gradient(&self) -> R {
        R::one()
    }
    fn sup_hessian(&self) -> R {
        R::zero()
    }
}

/// φ(v) = |v|² (energy; unbounded).
pub struct SquaredNorm;

impl<R: Real> TestFunction<R> for SquaredNorm {
    fn value(&self, v: Vec3<R>) -> R {
        v.norm_sq()
    }
    fn gradient(&self, v: Vec3<R>) -> Vec3<R> {
        v * lit(2.0)
    }
    fn hessian(&self, _v: Vec3<R>) -> Mat3<R> {
        Mat3::axial(Vec3::axis(0), lit(2.0), lit(2.0))
    }
    fn sup_value(&self) -> R {
        R::infinity()
    }
    fn sup_gradient(&self) -> R {
        R::infinity()
    }
    fn sup_hessian(&self) -> R {
        lit(2.0)
    }
}

/// φ(v) = exp(-α|v|²).
pub struct Gaussian<R> {
    pub alpha: R,
}

impl<R: Real> Gaussian<R> {
    pub fn unit() -> Self {
        Gaussian { alpha: R::one() }
    }
}

impl<R: Real> TestFunction<R> for Gaussian<R> {
    fn value(&self, v: Vec3<R>) -> R {
        (-self.alpha * v.norm_sq()).exp()
    }
    fn gradient(&self, v: Vec3<R>) -> Vec3<R> {
        v * (-self.alpha * lit::<R>(2.0) * self.value(v))
    }
    fn hessian(&self, v: Vec3<R>) -> Mat3<R> {
        // (-2αI + 4α²vvᵀ) e^{-α|v|²}
        let e = self.value(v);
        let a = self.alpha;
        let r2 = v.norm_sq();
        if r2 == R::zero() {
            return Mat3::axial(Vec3::axis(0), -lit::<R>(2.0) * a * e, -lit::<R>(2.0) * a * e);
        }
        let dir = v.normalized().unwrap();
        let par = (lit::<R>(4.0) * a * a * r2 - lit::<R>(2.0) * a) * e;
        let perp = -lit::<R>(2.0) * a * e;
        Mat3::axial(dir, par, perp)
    }
    fn sup_value(&self) -> R {
        R::one()
    }
    fn sup_gradient(&self) -> R {
        // max of 2αr e^{-αr²} at r = 1/√(2α)
        (lit::<R>(2.0) * self.alpha).sqrt() * lit::<R>(-0.5).exp()
    }
    fn sup_hessian(&self) -> R {
        // operator norm maximized at the origin: 2α
        lit::<R>(2.0) * self.alpha
    }
}

/// φ(v) = ⟨v⟩^{-q}, the barrier profile.
pub struct BracketPower<R> {
    pub q: R,
    sup_grad: R,
    sup_hess: R,
}

impl<R: Real> BracketPower<R> {
    pub fn new(q: R) -> Self {
        // Radial scan for the derivative sups; the profiles are unimodal in r.
        let mut sup_grad = R::zero();
        let mut sup_hess = R::zero();
        let n = 4000;
        for i in 0..=n {
            let r: R = lit(20.0 * i as f64 / n as f64);
            let b2 = R::one() + r * r;
            let grad = q * b2.powf(-(q + lit(2.0)) * lit(0.5)) * r;
            // eigenvalues: parallel q⟨⟩^{-q-4}((q+1)r² - 1), perp -q⟨⟩^{-q-2}
            let par = q * b2.powf(-(q + lit(4.0)) * lit(0.5)) * ((q + R::one()) * r * r - R::one());
            let perp = q * b2.powf(-(q + lit(2.0)) * lit(0.5));
            sup_grad = sup_grad.max(grad.abs());
            sup_hess = sup_hess.max(par.abs().max(perp.abs()));
        }
        BracketPower {
            q,
            sup_grad,
            sup_hess,
        }
    }
}

impl<R: Real> TestFunction<R> for BracketPower<R> {
    fn value(&self, v: Vec3<R>) -> R {
        v.bracket().powf(-self.q)
    }
    fn gradient(&self, v: Vec3<R>) -> Vec3<R> {
        let b2 = R::one() + v.norm_sq();
        v * (-self.q * b2.powf(-(self.q + lit(2.0)) * lit(0.5)))
    }
    fn hessian(&self, v: Vec3<R>) -> Mat3<R> {
        let q = self.q;
        let r2 = v.norm_sq();
        let b2 = R::one() + r2;
        let perp = -q * b2.powf(-(q + lit(2.0)) * lit(0.5));
        if r2 == R::zero() {
            return Mat3::axial(Vec3::axis(0), perp, perp);
        }
        let dir = v.normalized().unwrap();
        let par = q * b2.powf(-(q + lit(4.0)) * lit(0.5)) * ((q + R::one()) * r2 - R::one());
        Mat3::axial(dir, par, perp)
    }
    fn sup_value(&self) -> R {
        R::one()
    }
    fn sup_gradient(&self) -> R {
        self.sup_grad
    }
    fn sup_hessian(&self) -> R {
        self.sup_hess
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite_diff_check<F: TestFunction<f64>>(f: &F, v: Vec3<f64>) {
        let h = 1e-5;
        for i in 0..3 {
            let e = Vec3::axis(i);
            let g_num = (f.value(v + e * h) - f.value(v - e * h)) / (2.0 * h);
            let g = f.gradient(v)[i];
            assert!((g - g_num).abs() < 1e-7 * (1.0 + g.abs()), "grad[{i}]");
            for j in 0..3 {
                let ej = Vec3::axis(j);
                let h_num = (f.gradient(v + ej * h)[i] - f.gradient(v - ej * h)[i]) / (2.0 * h);
                let hij = f.hessian(v).0[i][j];
                assert!(
                    (hij - h_num).abs() < 1e-6 * (1.0 + hij.abs()),
                    "hess[{i}][{j}]: {hij} vs {h_num}"
                );
            }
        }
    }

    #[test]
    fn gaussian_derivatives_match_finite_differences() {
        let g = Gaussian { alpha: 0.7 };
        finite_diff_check(&g, Vec3::new(0.3, -1.1, 0.5));
        finite_diff_check(&g, Vec3::new(0.0, 0.0, 0.0));
    }

    #[test]
    fn bracket_power_derivatives_match_finite_differences() {
        let b = BracketPower::new(5.0);
        finite_diff_check(&b, Vec3::new(1.2, 0.4, -0.8));
    }

    #[test]
    fn gaussian_sup_norms_dominate_samples() {
        let g = Gaussian { alpha: 1.3 };
        for i in 0..100 {
            let r = 0.05 * i as f64;
            let v = Vec3::new(r, 0.0, 0.0);
            assert!(g.value(v) <= g.sup_value() + 1e-12);
            assert!(g.gradient(v).norm() <= g.sup_gradient() + 1e-12);
            let h = g.hessian(v);
            assert!(h.0[0][0].abs().max(h.0[1][1].abs()) <= g.sup_hessian() + 1e-12);
        }
    }
}
