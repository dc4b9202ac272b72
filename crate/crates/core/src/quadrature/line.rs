//! Improper integrals over the real line.

use crate::error::QuadError;
use crate::funcrepr::{Profile, Support, Tail};
use crate::quadrature::adaptive::integrate_panels;
use crate::quadrature::{QuadConfig, QuadResult};
use crate::scalar::Real;

/// Samples per shell when estimating an envelope.
const ENVELOPE_SAMPLES: usize = 64;

fn envelope<T: Real, F: Fn(T) -> T + ?Sized>(f: &F, lo: T, hi: T) -> T {
    let mut m = T::zero();
    for i in 0..=ENVELOPE_SAMPLES {
        let x = lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(ENVELOPE_SAMPLES);
        let v = f(x).abs();
        if v.is_finite() {
            m = m.max(v);
        } else {
            return T::infinity();
        }
    }
    m
}

/// Rough bound for `∫_X^∞ |f|` from the envelope `m` on `[X, 2X]`.
fn tail_bound<T: Real>(tail: Tail<T>, m: T, x: T, width: T) -> T {
    match tail {
        Tail::Power(b) if b > T::one() => m * x.abs().max(width) / (b - T::one()),
        _ => m * width * T::lit(2.0),
    }
}

/// Checks that `f` actually decays as the metadata claims by comparing
/// envelopes at the truncation radius and sixteen times closer in. The
/// radius is pushed out past `extent`, the outermost split point.
fn cross_check<T: Real, F: Fn(T) -> T + ?Sized>(
    f: &F,
    tail: Tail<T>,
    sign: T,
    extent: T,
    cfg: &QuadConfig<T>,
) -> Result<(), QuadError> {
    let r = cfg.truncation_radius.max(extent * T::lit(64.0));
    let far = envelope(f, sign * r, sign * r * T::lit(1.1));
    let near = envelope(f, sign * r / T::lit(16.0), sign * r / T::lit(16.0) * T::lit(1.1));
    let ok = match tail {
        Tail::Power(b) => {
            if far == T::zero() {
                return Ok(());
            }
            let scaled_far = far * r.powf(b);
            let scaled_near = near * (r / T::lit(16.0)).powf(b);
            scaled_far.is_finite() && scaled_far <= T::lit(1e3) * scaled_near.max(cfg.abs_tol)
        }
        Tail::Gaussian | Tail::Exponential => far.is_finite() && far * r <= cfg.abs_tol.max(near * r),
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(QuadError::CannotCertify(format!(
            "samples near |x| = {:e} do not decay as the {:?} tail claims",
            r.as_f64(),
            tail
        )))
    }
}

/// Adds `0` and, inside every gap of `[lo, hi]` between split points wider
/// than a few units, points at distance `2^k` from both of its ends. Mass
/// concentrated near a split point (or near the origin) far from the next
/// one is then not stepped over by a wide initial panel.
fn graded<T: Real>(mut splits: Vec<T>, lo: T, hi: T) -> Vec<T> {
    splits.push(T::zero());
    splits.push(lo);
    splits.push(hi);
    splits.retain(|p| *p >= lo && *p <= hi);
    splits.sort_by(|a, b| a.partial_cmp(b).unwrap());
    splits.dedup();
    let mut out = splits.clone();
    for w in splits.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half = (b - a) * T::lit(0.5);
        let mut r = T::one();
        while r * T::lit(2.0) < half {
            out.push(a + r);
            out.push(b - r);
            r = r * T::lit(2.0);
        }
    }
    out.retain(|p| *p > lo && *p < hi);
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    out
}

/// Integrates `f` over the line using `profile` for split points, support
/// and tail decay. Tails are mapped onto `(0, 1]` by `x = c ± (1 - u)/u`,
/// except in oscillatory mode where they are truncated once an envelope
/// bound drops below `abs_tol`.
pub fn integrate_line_fn<T: Real, F: Fn(T) -> T + ?Sized>(
    f: &F,
    profile: &Profile<T>,
    cfg: &QuadConfig<T>,
) -> Result<QuadResult<T>, QuadError> {
    cfg.validate()?;
    let (lo, hi) = match profile.support {
        Support::Empty => return Ok(QuadResult::exact(T::zero())),
        Support::Interval(lo, hi) => (lo, hi),
    };
    let splits: Vec<T> = profile
        .landmarks()
        .into_iter()
        .filter(|p| *p >= lo && *p <= hi)
        .collect();
    let sing = &profile.singularities;
    if lo.is_finite() && hi.is_finite() {
        return integrate_panels(f, lo, hi, &splits, sing, cfg);
    }
    let infinite = [!lo.is_finite(), !hi.is_finite()];
    for side in 0..2 {
        if infinite[side] && !profile.tails[side].integrable() {
            return Err(QuadError::CannotCertify(format!(
                "{} tail has decay {:?}, which does not guarantee convergence",
                if side == 0 { "left" } else { "right" },
                profile.tails[side]
            )));
        }
    }
    let first = splits.first().copied().unwrap_or(T::zero()).min(T::zero());
    let last = splits.last().copied().unwrap_or(T::zero()).max(T::zero());
    let c_lo = if infinite[0] { first - T::one() } else { lo };
    let c_hi = if infinite[1] { last + T::one() } else { hi };
    for side in 0..2 {
        if infinite[side] {
            let sign = if side == 0 { -T::one() } else { T::one() };
            cross_check(f, profile.tails[side], sign, first.abs().max(last.abs()), cfg)?;
        }
    }

    let splits = graded(splits, c_lo, c_hi);

    if cfg.osc_wavelength.is_some() {
        return truncated(f, profile, c_lo, c_hi, infinite, &splits, cfg);
    }

    let mut result = integrate_panels(f, c_lo, c_hi, &splits, sing, cfg)?;
    let zero = [T::zero()];
    for side in 0..2 {
        if !infinite[side] {
            continue;
        }
        let (c, sign) = if side == 0 { (c_lo, -T::one()) } else { (c_hi, T::one()) };
        let g = |u: T| {
            let x = c + sign * (T::one() - u) / u;
            let v = f(x);
            if v == T::zero() {
                T::zero()
            } else {
                v / u / u
            }
        };
        let r = integrate_panels(&g, T::zero(), T::one(), &[], &zero, cfg)?;
        result = result.combine(r, cfg);
    }
    Ok(result)
}

fn truncated<T: Real, F: Fn(T) -> T + ?Sized>(
    f: &F,
    profile: &Profile<T>,
    c_lo: T,
    c_hi: T,
    infinite: [bool; 2],
    splits: &[T],
    cfg: &QuadConfig<T>,
) -> Result<QuadResult<T>, QuadError> {
    let span = (c_hi - c_lo).max(T::one());
    let target = cfg.abs_tol * T::lit(0.1);
    let mut bounds = [c_lo, c_hi];
    let mut leftover = T::zero();
    for side in 0..2 {
        if !infinite[side] {
            continue;
        }
        let sign = if side == 0 { -T::one() } else { T::one() };
        let start = bounds[side];
        let mut l = span;
        loop {
            let (x0, x1) = (start + sign * l, start + sign * l * T::lit(2.0));
            let m = envelope(f, x0, x1);
            let bound = tail_bound(profile.tails[side], m, x0, l);
            if bound <= target {
                bounds[side] = x0;
                break;
            }
            if x1.abs() >= cfg.truncation_radius {
                bounds[side] = sign * cfg.truncation_radius;
                leftover = leftover + bound;
                break;
            }
            l = l * T::lit(2.0);
        }
    }
    let mut r = integrate_panels(f, bounds[0], bounds[1], splits, &profile.singularities, cfg)?;
    if leftover > T::zero() {
        r.err_est = r.err_est + leftover;
        r.converged = r.err_est <= cfg.abs_tol.max(cfg.rel_tol * r.value.abs());
    }
    Ok(r)
}
