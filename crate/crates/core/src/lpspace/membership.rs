//! Sufficient condition for membership in `L'^p` of a pointwise function:
//! `∫ f = 0` and `∫ |t|^α f(t) dt` exists for some `α > 1/p`.

use crate::error::{Error, QuadError, Result};
use crate::funcrepr::FunctionExpr;
use crate::quadrature::{integrate, integrate_line, QuadConfig};
use crate::scalar::Real;

/// Pieces each dyadic window is cut into when tracking partial integrals.
const PIECES: usize = 256;
/// Windows needed before the shrink ratio is trusted.
const MIN_WINDOWS: usize = 6;
/// Consecutive window ratios that must all stay below [`MAX_RATIO`].
const RATIO_RUN: usize = 4;
const MAX_RATIO: f64 = 0.95;
/// Largest accepted uncertainty on `∫ f` when declaring it zero.
pub const ZERO_TOL: f64 = 1e-4;

/// Estimate of `∫_0^{±∞} h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfLineLimit<T: Real> {
    pub value: T,
    /// Bound on `|value - limit|`.
    pub bound: T,
    /// Truncation point reached.
    pub radius: T,
    /// Convergence certified by decay metadata rather than by the
    /// truncation limit.
    pub absolute: bool,
}

/// Outcome of [`membership_check`].
#[derive(Clone, Debug, PartialEq)]
pub enum Membership<T: Real> {
    /// Both conditions verified: `f ∈ L'^p`.
    Certified {
        integral: T,
        integral_bound: T,
        moment: T,
        moment_bound: T,
    },
    /// A condition demonstrably fails (the test is only sufficient, so `f`
    /// may still lie in `L'^p`).
    NotCertified { reason: String },
    /// Conditional convergence that the truncation limits could not settle.
    Inconclusive { reason: String },
}

impl<T: Real> Membership<T> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Membership::Certified { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Membership::Certified { .. } => "certified",
            Membership::NotCertified { .. } => "not certified",
            Membership::Inconclusive { .. } => "inconclusive",
        }
    }
}

fn ordered<T: Real>(a: T, b: T) -> (T, T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `∫ h` over `[0, ∞)` (`dir = 1`) or `(-∞, 0]` (`dir = -1`) as a limit of
/// truncations. Partial integrals are tracked over dyadic windows
/// `[R, 2R]`; once the oscillation within successive windows shrinks
/// geometrically, the remaining tail is bounded by the geometric series.
/// With `target`, windows continue until the bound drops below it.
pub fn half_line_limit<T: Real>(
    h: &FunctionExpr<T>,
    dir: T,
    target: Option<T>,
    cfg: &QuadConfig<T>,
) -> std::result::Result<HalfLineLimit<T>, String> {
    let pts = h.profile().split_points();
    let reach = pts.iter().fold(T::one(), |m, p| m.max(p.abs()));
    let mut r = reach + reach;
    let (a, b) = ordered(T::zero(), dir * r);
    let mut acc = integrate(h, a, b, cfg).map_err(|e| e.to_string())?.value;
    let mut amps: Vec<T> = vec![];
    let small = cfg.abs_tol * T::lit(0.1);
    let pieces = T::from_usize_lossy(PIECES);
    while r <= cfg.truncation_radius {
        let (mut hi, mut lo) = (acc, acc);
        for i in 0..PIECES {
            let x0 = r + r * T::from_usize_lossy(i) / pieces;
            let x1 = r + r * T::from_usize_lossy(i + 1) / pieces;
            let (a, b) = ordered(dir * x0, dir * x1);
            acc = acc + integrate(h, a, b, cfg).map_err(|e| e.to_string())?.value;
            hi = hi.max(acc);
            lo = lo.min(acc);
        }
        let amp = hi - lo;
        amps.push(amp);
        r = r + r;
        if amp <= small {
            return Ok(HalfLineLimit {
                value: acc,
                bound: amp + small,
                radius: r,
                absolute: false,
            });
        }
        if amps.len() >= MIN_WINDOWS {
            let k = amps.len();
            let worst = (k - RATIO_RUN..k)
                .map(|i| if amps[i - 1] > T::zero() { amps[i] / amps[i - 1] } else { T::infinity() })
                .fold(T::zero(), |m, v| m.max(v));
            if worst <= T::lit(MAX_RATIO) {
                let bound = amp * T::lit(0.5) + amp * worst / (T::one() - worst);
                if target.map_or(true, |t| bound <= t) {
                    return Ok(HalfLineLimit {
                        value: (hi + lo) * T::lit(0.5),
                        bound,
                        radius: r,
                        absolute: false,
                    });
                }
            }
        }
    }
    let last: Vec<String> = amps.iter().rev().take(3).map(|a| format!("{:.3e}", a.as_f64())).collect();
    Err(format!(
        "partial integrals still oscillate by [{}] near |x| = {:e}",
        last.join(", "),
        r.as_f64()
    ))
}

/// `∫_ℝ h`: absolutely when the metadata allows it, otherwise as the sum of
/// two truncation limits.
fn line_limit<T: Real>(
    h: &FunctionExpr<T>,
    target: Option<T>,
    cfg: &QuadConfig<T>,
) -> std::result::Result<(T, T), String> {
    match integrate_line(h, cfg) {
        Ok(r) if r.converged => return Ok((r.value, r.err_est)),
        Ok(_) | Err(QuadError::CannotCertify(_)) => {}
        Err(e) => return Err(e.to_string()),
    }
    let left = half_line_limit(h, -T::one(), target.map(|t| t * T::lit(0.5)), cfg)?;
    let right = half_line_limit(h, T::one(), target.map(|t| t * T::lit(0.5)), cfg)?;
    Ok((left.value + right.value, left.bound + right.bound))
}

/// Checks the two conditions for `f` given pointwise. Condition (a) is
/// accepted when `|∫ f|` is within its error bound and that bound is below
/// [`ZERO_TOL`].
pub fn membership_check<T: Real>(f: &FunctionExpr<T>, p: T, alpha: T, cfg: &QuadConfig<T>) -> Result<Membership<T>> {
    crate::lpspace::check_p(p)?;
    if !(alpha > T::one() / p) {
        return Err(Error::InvalidParameter(format!("need α > 1/p, got α = {alpha}, p = {p}")));
    }
    let weighted = f.mul(&FunctionExpr::x().abs().powf(alpha));
    let (moment, moment_bound) = match line_limit(&weighted, None, cfg) {
        Ok(v) => v,
        Err(reason) => {
            return Ok(Membership::Inconclusive {
                reason: format!("moment ∫|t|^α f(t) dt: {reason}"),
            })
        }
    };
    let zero_tol = T::lit(ZERO_TOL);
    let (integral, integral_bound) = match line_limit(f, Some(zero_tol), cfg) {
        Ok(v) => v,
        Err(reason) => {
            return Ok(Membership::Inconclusive {
                reason: format!("∫ f: {reason}"),
            })
        }
    };
    if integral.abs() > integral_bound + cfg.abs_tol * T::lit(10.0) {
        return Ok(Membership::NotCertified {
            reason: format!(
                "∫ f = {:e} ± {:e} is not zero",
                integral.as_f64(),
                integral_bound.as_f64()
            ),
        });
    }
    if integral_bound > zero_tol {
        return Ok(Membership::Inconclusive {
            reason: format!("∫ f is only known to ±{:e}", integral_bound.as_f64()),
        });
    }
    Ok(Membership::Certified {
        integral,
        integral_bound,
        moment,
        moment_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = FunctionExpr<f64>;

    #[test]
    fn reference_examples() {
        let cfg = QuadConfig::default();
        let s = membership_check(&E::parse("sin(x)/abs(x)").unwrap(), 2.0, 0.75, &cfg).unwrap();
        assert!(s.is_certified(), "{s:?}");
        let g = membership_check(&E::parse("x*(abs(x)+1)^(-3)").unwrap(), 2.0, 0.75, &cfg).unwrap();
        assert!(g.is_certified(), "{g:?}");
        let n = membership_check(&E::parse("exp(-x^2)").unwrap(), 2.0, 0.75, &cfg).unwrap();
        assert!(matches!(n, Membership::NotCertified { .. }), "{n:?}");
        assert!(membership_check(&E::parse("exp(-x^2)").unwrap(), 2.0, 0.4, &cfg).is_err());
    }

    #[test]
    fn divergent_moment_is_not_certified() {
        let cfg = QuadConfig::default();
        // |t|^α f(t) ~ sgn(t) |t|^(α-1) with α = 1 does not settle.
        let v = membership_check(&E::parse("x*(abs(x)+1)^(-2)").unwrap(), 2.0, 1.0, &cfg).unwrap();
        assert!(matches!(v, Membership::Inconclusive { .. }), "{v:?}");
    }

    #[test]
    fn half_line_of_sinc() {
        let cfg = QuadConfig::default();
        let h = E::parse("sin(x)/abs(x)").unwrap();
        let r = half_line_limit(&h, 1.0, Some(1e-4), &cfg).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() <= r.bound);
        assert!(r.bound <= 1e-4);
    }
}
