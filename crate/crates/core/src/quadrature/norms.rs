//! `L^p` and supremum norms.

use crate::error::{Error, QuadError};
use crate::funcrepr::{FunctionExpr, Support};
use crate::quadrature::{integrate_line, QuadConfig, QuadResult};
use crate::scalar::Real;

/// `(∫|e|^p)^(1/p)` with its quadrature diagnostics; the error estimate is
/// propagated to the root.
pub fn lp_norm_result<T: Real>(e: &FunctionExpr<T>, p: T, cfg: &QuadConfig<T>) -> Result<QuadResult<T>, QuadError> {
    if !(p >= T::one()) || !p.is_finite() {
        return Err(QuadError::Invalid(format!("exponent p = {} must lie in [1, ∞)", p)));
    }
    if e.is_zero() {
        return Ok(QuadResult::exact(T::zero()));
    }
    let integrand = if p == T::one() { e.abs() } else { e.abs().powf(p) };
    let r = integrate_line(&integrand, cfg)?;
    let inv = T::one() / p;
    let value = r.value.max(T::zero()).powf(inv);
    // d(v^(1/p)) = (1/p) v^(1/p - 1) dv
    let err_est = if r.value > T::zero() {
        inv * value / r.value * r.err_est
    } else {
        r.err_est.powf(inv)
    };
    Ok(QuadResult {
        value,
        err_est,
        converged: r.converged,
        panels: r.panels,
    })
}

/// `‖e‖_p`; non-integrability or lack of convergence is an error.
pub fn lp_norm<T: Real>(e: &FunctionExpr<T>, p: T, cfg: &QuadConfig<T>) -> Result<T, Error> {
    let r = lp_norm_result(e, p, cfg).map_err(|err| match err {
        QuadError::NotIntegrable { .. } | QuadError::CannotCertify(_) => Error::NotInLp {
            p: p.as_f64(),
            reason: err.to_string(),
        },
        other => Error::Quad(other),
    })?;
    r.certified()
}

fn golden_max<T: Real, F: Fn(T) -> T>(f: &F, mut a: T, mut b: T, tol: T) -> T {
    let g = T::lit(0.618_033_988_749_894_8);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.max(fd);
    for _ in 0..200 {
        if (b - a).abs() <= tol * (T::one() + a.abs().max(b.abs())) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        best = best.max(fc).max(fd);
    }
    best
}

/// Estimate of `sup |e|` by a grid scan refined with golden-section search
/// around the largest samples. It is a lower bound for the true supremum;
/// the grid is doubled until two passes agree to `rel_tol`.
pub fn sup_norm<T: Real>(e: &FunctionExpr<T>, cfg: &QuadConfig<T>) -> Result<T, Error> {
    let prof = e.profile();
    if !prof.bounded() {
        return Err(Error::InvalidParameter(format!(
            "sup norm requested for a function whose metadata allows unbounded values ({})",
            e.decay_class()
        )));
    }
    let (lo, hi) = match prof.support {
        Support::Empty => return Ok(T::zero()),
        Support::Interval(lo, hi) => {
            let pts = prof.landmarks();
            let first = pts.first().copied().unwrap_or(T::zero()).min(T::zero());
            let last = pts.last().copied().unwrap_or(T::zero()).max(T::zero());
            let lo = if lo.is_finite() { lo } else { first - T::lit(16.0) };
            let hi = if hi.is_finite() { hi } else { last + T::lit(16.0) };
            (lo, hi)
        }
    };
    let abs = |x: T| {
        let v = e.eval_raw(x).abs();
        if v.is_finite() {
            v
        } else {
            T::zero()
        }
    };
    let mut n = 4096usize;
    let mut prev = T::neg_infinity();
    for _ in 0..6 {
        let h = (hi - lo) / T::from_usize_lossy(n);
        let mut samples: Vec<(T, T)> = (0..=n)
            .map(|i| {
                let x = lo + h * T::from_usize_lossy(i);
                (abs(x), x)
            })
            .collect();
        // Both sides of every kink, where one-sided maxima often sit.
        for p in prof.landmarks() {
            let d = T::epsilon().sqrt() * (T::one() + p.abs());
            for x in [p - d, p, p + d] {
                samples.push((abs(x), x));
            }
        }
        samples.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut best = samples[0].0;
        for &(_, x) in samples.iter().take(8) {
            let a = (x - h).max(lo);
            let b = (x + h).min(hi);
            best = best.max(golden_max(&abs, a, b, T::epsilon().sqrt()));
        }
        if (best - prev).abs() <= cfg.rel_tol * best {
            return Ok(best);
        }
        prev = best;
        n *= 2;
    }
    Ok(prev)
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = FunctionExpr<f64>;

    fn cfg() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    #[test]
    fn lp_examples() {
        let g = E::parse("exp(-x^2)").unwrap();
        let v = lp_norm(&g, 2.0, &cfg()).unwrap();
        assert!((v - (std::f64::consts::PI / 2.0).powf(0.25)).abs() < 1e-9);
        let i = E::parse("indicator(0,1)").unwrap();
        for p in [1.0, 1.5, 2.0, 7.0] {
            assert!((lp_norm(&i, p, &cfg()).unwrap() - 1.0).abs() < 1e-14);
        }
        let h = E::parse("piecewise(x > 0 -> 1, 0)").unwrap();
        assert!(matches!(lp_norm(&h, 2.0, &cfg()), Err(Error::NotInLp { .. })));
    }

    #[test]
    fn sup_examples() {
        assert!((sup_norm(&E::parse("exp(-x^2)").unwrap(), &cfg()).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(sup_norm(&E::parse("indicator(0,1)").unwrap(), &cfg()).unwrap(), 1.0);
        assert!((sup_norm(&E::parse("sin(x)").unwrap(), &cfg()).unwrap() - 1.0).abs() < 1e-12);
        assert!(sup_norm(&E::parse("abs(x)^(-0.5)").unwrap(), &cfg()).is_err());
        // Maximum of x e^{-x^2} at 1/sqrt(2).
        let v = sup_norm(&E::parse("x*exp(-x^2)").unwrap(), &cfg()).unwrap();
        assert!((v - (0.5f64).sqrt() * (-0.5f64).exp()).abs() < 1e-12);
    }
}
