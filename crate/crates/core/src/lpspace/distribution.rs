use std::fmt;

use crate::error::{Error, QuadError, Result};
use crate::funcrepr::FunctionExpr;
use crate::lpspace::{check_conjugate, check_p, same_p, Multiplier};
use crate::quadrature::{integrate_line, lp_norm_result, QuadConfig, QuadResult};
use crate::scalar::Real;

/// `f = F'` with `F ∈ L^p`, normed by `‖f‖'_p = ‖F‖_p`.
///
/// The primitive is the unique `L^p` representative, so two distributions
/// are equal exactly when their primitives agree almost everywhere.
#[derive(Clone, Debug)]
pub struct PrimitiveDistribution<T: Real> {
    primitive: FunctionExpr<T>,
    p: T,
    norm: T,
    norm_err: T,
}

pub(crate) fn not_in_lp<T: Real>(p: T, err: QuadError) -> Error {
    match err {
        QuadError::NotIntegrable { .. } | QuadError::CannotCertify(_) => Error::NotInLp {
            p: p.as_f64(),
            reason: err.to_string(),
        },
        other => Error::Quad(other),
    }
}

impl<T: Real> PrimitiveDistribution<T> {
    /// Checks `F ∈ L^p` by computing its norm, which is then cached.
    pub fn new(primitive: FunctionExpr<T>, p: T, cfg: &QuadConfig<T>) -> Result<Self> {
        check_p(p)?;
        let r = lp_norm_result(&primitive, p, cfg).map_err(|e| not_in_lp(p, e))?;
        if !r.converged {
            return Err(Error::NonConvergence(format!(
                "norm of the primitive {} stalled at {:e} ± {:e}",
                primitive,
                r.value.as_f64(),
                r.err_est.as_f64()
            )));
        }
        Ok(PrimitiveDistribution {
            primitive,
            p,
            norm: r.value,
            norm_err: r.err_est,
        })
    }

    pub fn zero(p: T) -> Result<Self> {
        check_p(p)?;
        Ok(PrimitiveDistribution {
            primitive: FunctionExpr::zero(),
            p,
            norm: T::zero(),
            norm_err: T::zero(),
        })
    }

    pub fn primitive(&self) -> &FunctionExpr<T> {
        &self.primitive
    }

    pub fn p(&self) -> T {
        self.p
    }

    /// `‖f‖'_p`.
    pub fn norm(&self) -> T {
        self.norm
    }

    /// Quadrature error estimate of [`norm`](Self::norm).
    pub fn norm_err(&self) -> T {
        self.norm_err
    }

    pub fn is_zero(&self) -> bool {
        self.primitive.is_zero()
    }

    /// Same primitive over another exponent.
    pub fn with_p(&self, p: T, cfg: &QuadConfig<T>) -> Result<Self> {
        PrimitiveDistribution::new(self.primitive.clone(), p, cfg)
    }

    /// `τ_t f`, with primitive `x ↦ F(x - t)`.
    pub fn translate(&self, t: T, cfg: &QuadConfig<T>) -> Result<Self> {
        if t == T::zero() {
            return Ok(self.clone());
        }
        PrimitiveDistribution::new(self.primitive.shift(t), self.p, cfg)
    }

    pub fn add(&self, o: &Self, cfg: &QuadConfig<T>) -> Result<Self> {
        same_p(self.p, o.p)?;
        PrimitiveDistribution::new(self.primitive.add(&o.primitive), self.p, cfg)
    }

    pub fn sub(&self, o: &Self, cfg: &QuadConfig<T>) -> Result<Self> {
        same_p(self.p, o.p)?;
        PrimitiveDistribution::new(self.primitive.sub(&o.primitive), self.p, cfg)
    }

    pub fn scale(&self, c: T, cfg: &QuadConfig<T>) -> Result<Self> {
        if c == T::zero() {
            return PrimitiveDistribution::zero(self.p);
        }
        PrimitiveDistribution::new(self.primitive.scale(c), self.p, cfg)
    }

    /// `a f + b g`.
    pub fn combine(&self, a: T, o: &Self, b: T, cfg: &QuadConfig<T>) -> Result<Self> {
        same_p(self.p, o.p)?;
        let prim = self.primitive.scale(a).add(&o.primitive.scale(b));
        PrimitiveDistribution::new(prim, self.p, cfg)
    }

    /// `‖f - g‖'_p`.
    pub fn distance(&self, o: &Self, cfg: &QuadConfig<T>) -> Result<T> {
        Ok(self.sub(o, cfg)?.norm)
    }

    /// Equality in `L'^p`: `‖F_1 - F_2‖_p <= tol`.
    pub fn approx_eq(&self, o: &Self, tol: T, cfg: &QuadConfig<T>) -> Result<bool> {
        Ok(self.distance(o, cfg)? <= tol)
    }

    /// `‖f‖''_p = ∫ F g` for the explicit norming function
    /// `g = sgn(F) |F|^(p-1) ‖F‖_p^(1-p)` (`g = sgn F` when `p = 1`).
    pub fn dual_norm(&self, cfg: &QuadConfig<T>) -> Result<T> {
        if self.is_zero() || self.norm == T::zero() {
            return Ok(T::zero());
        }
        let f = &self.primitive;
        let witness = if self.p == T::one() {
            f.call(crate::funcrepr::ast::Func::Sgn)
        } else {
            let k = self.norm.powf(T::one() - self.p);
            f.call(crate::funcrepr::ast::Func::Sgn)
                .mul(&f.abs().powf(self.p - T::one()))
                .scale(k)
        };
        integrate_line(&f.mul(&witness), cfg)
            .map_err(Error::from)?
            .certified()
    }
}

impl<T: Real> fmt::Display for PrimitiveDistribution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D[{}] in L'^{}", self.primitive, self.p)
    }
}

/// `∫ f G = -∫ F g` with its quadrature diagnostics.
pub fn pair_result<T: Real>(
    f: &PrimitiveDistribution<T>,
    g: &Multiplier<T>,
    cfg: &QuadConfig<T>,
) -> Result<QuadResult<T>> {
    check_conjugate(f.p(), g.q())?;
    if f.is_zero() || g.density().is_zero() {
        return Ok(QuadResult::exact(T::zero()));
    }
    let r = integrate_line(&f.primitive().mul(g.density()), cfg)?.negate();
    // Hölder: a larger value means the quadrature went wrong.
    if let Some(gn) = g.norm() {
        let bound = f.norm() * gn;
        let slack = r.err_est + f.norm_err() * gn + cfg.abs_tol.max(cfg.rel_tol * bound) * T::lit(10.0);
        if r.value.abs() > bound + slack {
            return Err(Error::NonConvergence(format!(
                "pairing {:e} exceeds the Hölder bound {:e}",
                r.value.as_f64(),
                bound.as_f64()
            )));
        }
    }
    Ok(r)
}

/// `∫ f G = -∫ F g`. The integral does not see the constant in `G`, so
/// `∫ f a = 0` for constants `a`.
pub fn pair<T: Real>(f: &PrimitiveDistribution<T>, g: &Multiplier<T>, cfg: &QuadConfig<T>) -> Result<T> {
    pair_result(f, g, cfg)?.certified()
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = FunctionExpr<f64>;

    fn cfg() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    fn dist(s: &str, p: f64) -> PrimitiveDistribution<f64> {
        PrimitiveDistribution::new(E::parse(s).unwrap(), p, &cfg()).unwrap()
    }

    #[test]
    fn construction() {
        assert!((dist("indicator(0,1)", 2.0).norm() - 1.0).abs() < 1e-14);
        assert!(PrimitiveDistribution::new(E::parse("abs(x)^(-0.25)*exp(-abs(x))").unwrap(), 2.0, &cfg()).is_ok());
        let h = PrimitiveDistribution::new(E::parse("piecewise(x > 0 -> 1, 0)").unwrap(), 2.0, &cfg());
        assert!(matches!(h, Err(Error::NotInLp { .. })), "{h:?}");
        let h = PrimitiveDistribution::new(E::parse("abs(x)^(-0.5)*exp(-abs(x))").unwrap(), 2.0, &cfg());
        assert!(matches!(h, Err(Error::NotInLp { .. })), "{h:?}");
    }

    #[test]
    fn pairing_examples() {
        let f = dist("indicator(0,1)", 2.0);
        let g = Multiplier::local(E::parse("exp(-x)").unwrap(), 2.0).unwrap();
        let v = pair(&f, &g, &cfg()).unwrap();
        assert!((v - ((-1.0f64).exp() - 1.0)).abs() < 1e-12);

        let c = Multiplier::new(E::zero(), 2.0, &cfg()).unwrap();
        assert_eq!(pair(&f, &c, &cfg()).unwrap(), 0.0);

        let f = dist("exp(-x^2)", 2.0);
        let g = Multiplier::new(E::parse("indicator(0,1)").unwrap(), 2.0, &cfg()).unwrap();
        // -(sqrt(pi)/2) erf(1)
        assert!((pair(&f, &g, &cfg()).unwrap() + 0.746824132812427).abs() < 1e-10);

        let g3 = Multiplier::new(E::parse("indicator(0,1)").unwrap(), 3.0, &cfg()).unwrap();
        assert!(matches!(pair(&f, &g3, &cfg()), Err(Error::ExponentMismatch(_))));
    }

    #[test]
    fn dual_norm_examples() {
        let f = dist("indicator(0,1)", 2.0);
        assert!((f.dual_norm(&cfg()).unwrap() - 1.0).abs() < 1e-12);
        let g = dist("exp(-x^2)", 2.0);
        let want = (std::f64::consts::PI / 2.0).powf(0.25);
        assert!((g.dual_norm(&cfg()).unwrap() - want).abs() < 1e-8);
        assert_eq!(PrimitiveDistribution::<f64>::zero(2.0).unwrap().dual_norm(&cfg()).unwrap(), 0.0);
        let g1 = dist("x*exp(-x^2)", 1.0);
        assert!((g1.dual_norm(&cfg()).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn translation() {
        let f = dist("exp(-x^2)", 2.0);
        let t = f.translate(2.0, &cfg()).unwrap();
        assert!((t.norm() - f.norm()).abs() < 1e-10);
        let mut prev = f64::INFINITY;
        for h in [0.1, 0.01, 0.001] {
            let d = f.translate(h, &cfg()).unwrap().distance(&f, &cfg()).unwrap();
            assert!(d < prev);
            prev = d;
        }
    }
}
