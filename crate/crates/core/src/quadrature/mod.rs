//! Adaptive quadrature on intervals and on the whole line, and `L^p` norms.

mod adaptive;
mod gk;
mod line;
mod norms;
mod tanh_sinh;

pub use adaptive::integrate_panels;
pub use gk::{gk15, PanelEstimate};
pub use line::integrate_line_fn;
pub use norms::{lp_norm, lp_norm_result, sup_norm};
pub use tanh_sinh::tanh_sinh;

use crate::error::QuadError;
use crate::funcrepr::{FunctionExpr, Support};
use crate::scalar::Real;

/// Tolerances and limits shared by every quadrature call.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadConfig<T: Real> {
    pub abs_tol: T,
    pub rel_tol: T,
    /// Maximum number of bisections of an initial panel.
    pub max_depth: usize,
    /// Outer limit for truncated improper integrals and tail checks.
    pub truncation_radius: T,
    /// When set, panels are no wider than half of it.
    pub osc_wavelength: Option<T>,
    /// Total panel budget per call.
    pub max_panels: usize,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        QuadConfig {
            abs_tol: T::lit(1e-10),
            rel_tol: T::lit(1e-8),
            max_depth: 48,
            truncation_radius: T::lit(1e6),
            osc_wavelength: None,
            max_panels: 400_000,
        }
    }
}

impl<T: Real> QuadConfig<T> {
    pub fn with_tolerances(abs_tol: T, rel_tol: T) -> Self {
        QuadConfig {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    /// Same tolerances, with an oscillation wavelength.
    pub fn oscillatory(&self, wavelength: Option<T>) -> Self {
        QuadConfig {
            osc_wavelength: wavelength,
            ..self.clone()
        }
    }

    /// Applies `LPRIM_ABS_TOL` / `LPRIM_REL_TOL` when set.
    pub fn with_env_overrides(mut self) -> Result<Self, QuadError> {
        for (var, slot) in [("LPRIM_ABS_TOL", &mut self.abs_tol), ("LPRIM_REL_TOL", &mut self.rel_tol)] {
            if let Ok(s) = std::env::var(var) {
                let v: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| QuadError::Invalid(format!("{var}={s} is not a number")))?;
                *slot = T::lit(v);
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.abs_tol > T::zero() && self.rel_tol > T::zero()) {
            return Err(QuadError::Invalid("tolerances must be positive".into()));
        }
        if self.max_depth < 1 {
            return Err(QuadError::Invalid("max_depth must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult<T: Real> {
    pub value: T,
    pub err_est: T,
    /// `err_est <= max(abs_tol, rel_tol |value|)`.
    pub converged: bool,
    /// Panels in the final partition.
    pub panels: usize,
}

impl<T: Real> QuadResult<T> {
    pub fn exact(value: T) -> Self {
        QuadResult {
            value,
            err_est: T::zero(),
            converged: true,
            panels: 0,
        }
    }

    pub fn negate(self) -> Self {
        QuadResult {
            value: -self.value,
            ..self
        }
    }

    /// Sum of independent pieces.
    pub fn combine(self, o: Self, cfg: &QuadConfig<T>) -> Self {
        let value = self.value + o.value;
        let err_est = self.err_est + o.err_est;
        QuadResult {
            value,
            err_est,
            converged: err_est <= cfg.abs_tol.max(cfg.rel_tol * value.abs()),
            panels: self.panels + o.panels,
        }
    }

    /// Value if converged, otherwise a non-convergence error.
    pub fn certified(self) -> Result<T, crate::error::Error> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(crate::error::Error::NonConvergence(format!(
                "estimate {:e} with error {:e}",
                self.value.as_f64(),
                self.err_est.as_f64()
            )))
        }
    }
}

/// `∫_a^b e`, splitting at the expression's singular points and kinks.
pub fn integrate<T: Real>(e: &FunctionExpr<T>, a: T, b: T, cfg: &QuadConfig<T>) -> Result<QuadResult<T>, QuadError> {
    if b < a {
        return integrate(e, b, a, cfg).map(|r| r.negate());
    }
    let (lo, hi) = match e.support().intersect(Support::Interval(a, b)) {
        Support::Empty => return Ok(QuadResult::exact(T::zero())),
        Support::Interval(lo, hi) => (lo, hi),
    };
    let prof = e.profile();
    integrate_panels(&|x| e.eval_raw(x), lo, hi, &prof.split_points(), &prof.singularities, cfg)
}

/// `∫_ℝ e`, certified by the expression's support or tail decay.
pub fn integrate_line<T: Real>(e: &FunctionExpr<T>, cfg: &QuadConfig<T>) -> Result<QuadResult<T>, QuadError> {
    integrate_line_fn(&|x| e.eval_raw(x), e.profile(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = FunctionExpr<f64>;

    fn cfg() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    #[test]
    fn finite_interval_examples() {
        let r = integrate(&E::parse("x^(-0.5)").unwrap(), 0.0, 1.0, &cfg()).unwrap();
        assert!((r.value - 2.0).abs() <= 1e-8);
        assert!(r.err_est <= 1e-8);
        let r = integrate(&E::parse("1").unwrap(), 0.0, 1.0, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        for m in [1, 2, 7, 25] {
            let e = E::parse(&format!("abs(sin({m}*x))")).unwrap();
            let r = integrate(&e, 0.0, 2.0 * std::f64::consts::PI, &cfg()).unwrap();
            assert!(r.converged && (r.value - 4.0).abs() < 4e-8, "m={m} {r:?}");
            let tight = QuadConfig::with_tolerances(1e-13, 1e-13);
            let r = integrate(&e, 0.0, 2.0 * std::f64::consts::PI, &tight).unwrap();
            assert!((r.value - 4.0).abs() < 1e-11, "m={m} {r:?}");
        }
    }

    #[test]
    fn line_examples() {
        let r = integrate_line(&E::parse("exp(-x^2)").unwrap(), &cfg()).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-9, "{r:?}");
        let r = integrate_line(&E::parse("indicator(0,1)").unwrap(), &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        let r = integrate_line(&E::parse("indicator(1,2)*abs(exp(-x^2))").unwrap(), &cfg()).unwrap();
        // (sqrt(pi)/2)(erf 2 - erf 1)
        assert!((r.value - 0.13525725794999465).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn refuses_uncertified_tails() {
        let r = integrate_line(&E::parse("sin(x)/abs(x)").unwrap(), &cfg());
        assert!(matches!(r, Err(QuadError::CannotCertify(_))), "{r:?}");
        let r = integrate_line(&E::parse("piecewise(x > 0 -> 1, 0)").unwrap(), &cfg());
        assert!(matches!(r, Err(QuadError::CannotCertify(_))));
    }

    #[test]
    fn power_tail_line() {
        // ∫ 1/(1+x^2) = π
        let r = integrate_line(&E::parse("1/(1+x^2)").unwrap(), &cfg()).unwrap();
        assert!((r.value - std::f64::consts::PI).abs() < 1e-9, "{r:?}");
    }
}
