//! Globally adaptive subdivision over a finite interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::QuadError;
use crate::quadrature::gk::{gk15, PanelEstimate};
use crate::quadrature::tanh_sinh::tanh_sinh;
use crate::quadrature::{QuadConfig, QuadResult};
use crate::scalar::Real;

/// Dyadic shells examined on each side of a singular point.
const SHELLS: usize = 60;
/// Trailing shells that must all fail to shrink before giving up.
const STALLED: usize = 8;
const STALL_RATIO: f64 = 0.999;

#[derive(Clone, Copy, Debug)]
struct Panel<T: Real> {
    a: T,
    b: T,
    /// Singular endpoints, handled by the tanh-sinh rule.
    sa: bool,
    sb: bool,
    depth: usize,
    est: PanelEstimate<T>,
    /// Refining cannot help: rounding floor or depth limit reached.
    done: bool,
    /// Creation order, used to break ties deterministically.
    id: usize,
}

impl<T: Real> Panel<T> {
    fn key(&self) -> T {
        if self.done {
            T::zero()
        } else {
            self.est.err
        }
    }
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key()
            .partial_cmp(&o.key())
            .unwrap_or(Ordering::Equal)
            .then_with(|| o.id.cmp(&self.id))
    }
}

struct Engine<'a, T: Real, F: Fn(T) -> T + ?Sized> {
    f: &'a F,
    cfg: &'a QuadConfig<T>,
    next_id: usize,
}

impl<'a, T: Real, F: Fn(T) -> T + ?Sized> Engine<'a, T, F> {
    fn panel(&mut self, a: T, b: T, sa: bool, sb: bool, depth: usize) -> Result<Panel<T>, QuadError> {
        let est = if sa || sb {
            tanh_sinh(self.f, a, b, self.cfg.abs_tol * T::lit(0.1))
        } else {
            gk15(self.f, a, b)
        };
        if let Some(x) = est.bad {
            return Err(QuadError::NonFinite(x.as_f64()));
        }
        let mid = (a + b) * T::lit(0.5);
        let tiny = !(mid > a && mid < b);
        let done = tiny
            || depth >= self.cfg.max_depth
            || (est.err <= est.floor * T::lit(1.01) && est.err > T::zero());
        self.next_id += 1;
        Ok(Panel {
            a,
            b,
            sa,
            sb,
            depth,
            est,
            done,
            id: self.next_id,
        })
    }

    /// Detects a non-integrable singularity at `s` by integrating `|f|`
    /// over dyadic shells approaching it from the side of `toward`.
    fn probe(&self, s: T, toward: T) -> Result<(), QuadError> {
        let h = (toward - s) * T::lit(0.5);
        let mut prev: Option<T> = None;
        let mut stalled = 0usize;
        let mut last_ratio = T::zero();
        let abs_f = |x: T| (self.f)(x).abs();
        let mut scale = T::one();
        for _ in 0..SHELLS {
            let outer = s + h * scale;
            let inner = s + h * scale * T::lit(0.5);
            if !(inner != s && inner != outer) {
                break;
            }
            let est = gk15(&abs_f, inner, outer);
            if est.bad.is_some() {
                break;
            }
            let v = est.value.abs();
            if let Some(p) = prev {
                if p > T::zero() {
                    last_ratio = v / p;
                    if last_ratio >= T::lit(STALL_RATIO) {
                        stalled += 1;
                    } else {
                        stalled = 0;
                    }
                }
            }
            prev = Some(v);
            scale = scale * T::lit(0.5);
        }
        if stalled >= STALLED {
            return Err(QuadError::NotIntegrable {
                at: s.as_f64(),
                ratio: last_ratio.as_f64(),
            });
        }
        Ok(())
    }
}

fn tolerance<T: Real>(cfg: &QuadConfig<T>, value: T) -> T {
    cfg.abs_tol.max(cfg.rel_tol * value.abs())
}

/// Integrates `f` over the finite interval `[a, b]`, splitting at every
/// point of `splits` inside it and treating points of `singular` with the
/// tanh-sinh rule after an integrability probe.
pub fn integrate_panels<T: Real, F: Fn(T) -> T + ?Sized>(
    f: &F,
    a: T,
    b: T,
    splits: &[T],
    singular: &[T],
    cfg: &QuadConfig<T>,
) -> Result<QuadResult<T>, QuadError> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(QuadError::Invalid("finite bounds required".into()));
    }
    if a == b {
        return Ok(QuadResult::exact(T::zero()));
    }
    if b < a {
        return integrate_panels(f, b, a, splits, singular, cfg).map(|r| r.negate());
    }
    let mut pts = vec![a];
    pts.extend(splits.iter().copied().filter(|p| *p > a && *p < b));
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let is_sing = |p: T| singular.iter().any(|s| *s == p);

    let mut eng = Engine { f, cfg, next_id: 0 };
    for (i, p) in pts.iter().enumerate() {
        if is_sing(*p) {
            if i > 0 {
                eng.probe(*p, pts[i - 1])?;
            }
            if i + 1 < pts.len() {
                eng.probe(*p, pts[i + 1])?;
            }
        }
    }

    // Initial panels, capped at half a wavelength when oscillatory.
    let cap = cfg.osc_wavelength.map(|w| w * T::lit(0.5));
    let mut heap = BinaryHeap::new();
    let mut finished: Vec<Panel<T>> = vec![];
    let mut count = 0usize;
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let pieces = match cap {
            Some(c) if c > T::zero() => ((hi - lo) / c).ceil().to_usize().unwrap_or(1).max(1),
            _ => 1,
        };
        if count + pieces > cfg.max_panels {
            return Err(QuadError::Invalid(format!(
                "oscillatory panel cap needs more than {} panels",
                cfg.max_panels
            )));
        }
        for k in 0..pieces {
            let pa = if k == 0 { lo } else { lo + (hi - lo) * T::from_usize_lossy(k) / T::from_usize_lossy(pieces) };
            let pb = if k + 1 == pieces {
                hi
            } else {
                lo + (hi - lo) * T::from_usize_lossy(k + 1) / T::from_usize_lossy(pieces)
            };
            let sa = k == 0 && is_sing(lo);
            let sb = k + 1 == pieces && is_sing(hi);
            let p = eng.panel(pa, pb, sa, sb, 0)?;
            count += 1;
            heap.push(p);
        }
    }

    let totals = |heap: &BinaryHeap<Panel<T>>, finished: &[Panel<T>]| {
        let mut v = T::zero();
        let mut e = T::zero();
        for p in heap.iter().chain(finished.iter()) {
            v = v + p.est.value;
            e = e + p.est.err;
        }
        (v, e)
    };
    let (mut value, mut err) = totals(&heap, &finished);
    let mut iterations = 0usize;
    while err > tolerance(cfg, value) && count < cfg.max_panels {
        let Some(top) = heap.pop() else { break };
        if top.done {
            finished.push(top);
            // Every remaining panel is also done (heap order).
            while let Some(p) = heap.pop() {
                finished.push(p);
            }
            break;
        }
        let mid = (top.a + top.b) * T::lit(0.5);
        let left = eng.panel(top.a, mid, top.sa, false, top.depth + 1)?;
        let right = eng.panel(mid, top.b, false, top.sb, top.depth + 1)?;
        value = value - top.est.value + left.est.value + right.est.value;
        err = err - top.est.err + left.est.err + right.est.err;
        heap.push(left);
        heap.push(right);
        count += 1;
        iterations += 1;
        // Refresh the running sums periodically to shed accumulated rounding.
        if iterations % 256 == 0 {
            let t = totals(&heap, &finished);
            value = t.0;
            err = t.1;
        }
    }
    // Deterministic final reduction in left-to-right order.
    let mut all: Vec<Panel<T>> = heap.into_vec();
    all.extend(finished);
    all.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap().then(x.id.cmp(&y.id)));
    let mut value = T::zero();
    let mut err = T::zero();
    for p in &all {
        value = value + p.est.value;
        err = err + p.est.err;
    }
    Ok(QuadResult {
        value,
        err_est: err,
        converged: err <= tolerance(cfg, value),
        panels: all.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    #[test]
    fn inverse_sqrt_on_unit_interval() {
        let r = integrate_panels(&|x: f64| x.powf(-0.5), 0.0, 1.0, &[], &[0.0], &cfg()).unwrap();
        assert!((r.value - 2.0).abs() <= 1e-8, "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn detects_non_integrable() {
        let r = integrate_panels(&|x: f64| 1.0 / x.abs(), -1.0, 1.0, &[0.0], &[0.0], &cfg());
        assert!(matches!(r, Err(QuadError::NotIntegrable { .. })), "{r:?}");
    }

    #[test]
    fn abs_sin_periods() {
        for m in [1.0, 3.0, 10.0, 100.0] {
            let splits: Vec<f64> = (1..(2.0 * m) as usize)
                .map(|k| k as f64 * std::f64::consts::PI / m)
                .collect();
            let r = integrate_panels(
                &|x: f64| (m * x).sin().abs(),
                0.0,
                2.0 * std::f64::consts::PI,
                &splits,
                &[],
                &cfg(),
            )
            .unwrap();
            assert!((r.value - 4.0).abs() < 1e-9, "m={m}: {r:?}");
        }
    }

    #[test]
    fn reversed_bounds() {
        let r = integrate_panels(&|x: f64| x, 1.0, 0.0, &[], &[], &cfg()).unwrap();
        assert!((r.value + 0.5).abs() < 1e-15);
    }
}
