//! Order structure: `f ⪯ g` when `F <= G` almost everywhere.

use crate::error::Result;
use crate::funcrepr::{FunctionExpr, Support};
use crate::lpspace::{same_p, PrimitiveDistribution};
use crate::quadrature::QuadConfig;
use crate::scalar::Real;

/// `f ∨ g`, with primitive `max(F, G)`.
pub fn join<T: Real>(
    f: &PrimitiveDistribution<T>,
    g: &PrimitiveDistribution<T>,
    cfg: &QuadConfig<T>,
) -> Result<PrimitiveDistribution<T>> {
    same_p(f.p(), g.p())?;
    PrimitiveDistribution::new(f.primitive().max(g.primitive()), f.p(), cfg)
}

/// `f ∧ g`, with primitive `min(F, G)`.
pub fn meet<T: Real>(
    f: &PrimitiveDistribution<T>,
    g: &PrimitiveDistribution<T>,
    cfg: &QuadConfig<T>,
) -> Result<PrimitiveDistribution<T>> {
    same_p(f.p(), g.p())?;
    PrimitiveDistribution::new(f.primitive().min(g.primitive()), f.p(), cfg)
}

/// `|f| = D|F|`.
pub fn abs<T: Real>(f: &PrimitiveDistribution<T>, cfg: &QuadConfig<T>) -> Result<PrimitiveDistribution<T>> {
    PrimitiveDistribution::new(f.primitive().abs(), f.p(), cfg)
}

const SAMPLES: usize = 10_000;

fn window<T: Real>(e: &FunctionExpr<T>) -> (T, T) {
    let pts = e.profile().split_points();
    let lo = pts.first().copied().unwrap_or(T::zero()).min(T::zero());
    let hi = pts.last().copied().unwrap_or(T::zero()).max(T::zero());
    match e.support() {
        Support::Interval(a, b) => (
            if a.is_finite() { a } else { lo - T::lit(20.0) },
            if b.is_finite() { b } else { hi + T::lit(20.0) },
        ),
        Support::Empty => (T::zero(), T::zero()),
    }
}

/// Decides `f ⪯ g` by sampling `D = G - F` on a dense grid plus both sides
/// of every split point. A negative sample counts only when a neighbour at
/// a quarter grid step is also negative, so isolated points (measure zero)
/// are ignored. This is a numerical test, not a proof.
pub fn leq<T: Real>(f: &PrimitiveDistribution<T>, g: &PrimitiveDistribution<T>) -> Result<bool> {
    same_p(f.p(), g.p())?;
    let d = g.primitive().sub(f.primitive());
    if d.is_zero() {
        return Ok(true);
    }
    let (a, b) = window(&d);
    let (a, b) = (a.min(b), a.max(b));
    let tol = |x: T| {
        let scale = T::one() + f.primitive().eval_raw(x).abs() + g.primitive().eval_raw(x).abs();
        T::lit(64.0) * T::epsilon() * scale
    };
    let negative = |x: T| {
        let v = d.eval_raw(x);
        v.is_finite() && v < -tol(x)
    };
    let h = if b > a {
        (b - a) / T::from_usize_lossy(SAMPLES)
    } else {
        T::one()
    };
    let mut xs: Vec<T> = (0..=SAMPLES)
        .map(|i| a + h * T::from_usize_lossy(i))
        .collect();
    for p in d.profile().split_points() {
        let e = h * T::lit(1e-3);
        xs.push(p - e);
        xs.push(p + e);
    }
    // Far out in the tails.
    for k in 0..8 {
        let r = T::lit(2f64.powi(k)) * (T::lit(10.0) + b.abs().max(a.abs()));
        xs.push(r);
        xs.push(-r);
    }
    for x in xs {
        if negative(x) {
            let q = h * T::lit(0.25);
            if negative(x - q) || negative(x + q) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = FunctionExpr<f64>;

    fn dist(s: &str, p: f64) -> PrimitiveDistribution<f64> {
        PrimitiveDistribution::new(E::parse(s).unwrap(), p, &QuadConfig::default()).unwrap()
    }

    #[test]
    fn lattice_examples() {
        let cfg = QuadConfig::default();
        for p in [1.0, 2.0, 3.5] {
            let f = dist("x*exp(-x^2)", p);
            let a = abs(&f, &cfg).unwrap();
            assert!((a.norm() - f.norm()).abs() < 1e-10);
            let j = join(&f, &f, &cfg).unwrap();
            assert!(j.approx_eq(&f, 1e-12, &cfg).unwrap());
        }
        let one = dist("indicator(0,1)", 2.0);
        let two = dist("2*indicator(0,1)", 2.0);
        assert!(leq(&one, &two).unwrap());
        assert!(!leq(&two, &one).unwrap());
        let g = dist("exp(-x^2)", 2.0);
        let h = dist("exp(-x^2/4)", 2.0);
        assert!(leq(&g, &h).unwrap());
        assert!(!leq(&h, &g).unwrap());
        // Differ only at a point.
        let c1 = dist("indicator(0,1)", 2.0);
        let c2 = dist("piecewise(x >= 0 && x <= 1 -> 1, 0)", 2.0);
        assert!(leq(&c2, &c1).unwrap());
    }

    #[test]
    fn absorption() {
        let cfg = QuadConfig::default();
        let f = dist("x*exp(-x^2)", 2.0);
        let g = dist("indicator(-1,2)*(1-x)/3", 2.0);
        let fg = join(&f, &g, &cfg).unwrap();
        let gf = join(&g, &f, &cfg).unwrap();
        assert!(fg.approx_eq(&gf, 1e-8, &cfg).unwrap());
        let back = meet(&f, &fg, &cfg).unwrap();
        assert!(back.approx_eq(&f, 1e-8, &cfg).unwrap());
        assert!(leq(&meet(&f, &g, &cfg).unwrap(), &fg).unwrap());
    }
}
