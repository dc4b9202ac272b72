use crate::error::{Error, Result};
use crate::lpspace::{same_p, Multiplier, PrimitiveDistribution};
use crate::quadrature::{lp_norm, QuadConfig};
use crate::scalar::Real;

/// Cells used to locate `{|F G| > ε}`.
const CELLS: usize = 2048;

/// Relative measure of `E = {x ∈ (M, N) : |F(x) G(x)| > ε}` against the
/// Chebyshev-type upper bound for it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakVanishing<T: Real> {
    /// `λ(E) / (N - M)` as measured.
    pub ratio: T,
    /// Upper bound from `‖F χ_(M,N)‖_p`, `‖G'‖_q`, `M`, `N` and `ε`.
    pub bound: T,
    /// Relative width of one cell: components of `E` narrower than this
    /// may be missed.
    pub grid_tol: T,
}

impl<T: Real> WeakVanishing<T> {
    pub fn holds(&self) -> bool {
        self.ratio <= self.bound + self.grid_tol
    }
}

/// Measures `E` on a uniform grid, bisecting every cell where `|FG| - ε`
/// changes sign, and evaluates
/// `‖Fχ‖_p ‖G'‖_q (N^q - M^q)^(1/q) / (ε q^(1/q) (N - M))` for `p > 1`, or
/// `‖Fχ‖_1 ‖G'‖_∞ N / (ε (N - M))` for `p = 1`.
pub fn weak_vanishing_bound<T: Real>(
    f: &PrimitiveDistribution<T>,
    g: &Multiplier<T>,
    m: T,
    n: T,
    eps: T,
    cfg: &QuadConfig<T>,
) -> Result<WeakVanishing<T>> {
    if !(T::zero() < m && m < n && n.is_finite()) {
        return Err(Error::InvalidParameter(format!("need 0 < M < N, got M = {m}, N = {n}")));
    }
    if !(eps > T::zero()) {
        return Err(Error::InvalidParameter("need ε > 0".into()));
    }
    crate::lpspace::check_conjugate(f.p(), g.q())?;
    let big = f.primitive();
    let excess = |x: T| -> Result<T> { Ok((big.eval_raw(x) * g.eval(x)?).abs() - eps) };

    let cells = T::from_usize_lossy(CELLS);
    let h = (n - m) / cells;
    let xs: Vec<T> = (0..=CELLS)
        .map(|i| if i == CELLS { n } else { m + h * T::from_usize_lossy(i) })
        .collect();
    let vals = xs.iter().map(|x| excess(*x)).collect::<Result<Vec<T>>>()?;
    let mut measure = T::zero();
    for i in 0..CELLS {
        let (a, b) = (xs[i], xs[i + 1]);
        let (va, vb) = (vals[i], vals[i + 1]);
        match (va > T::zero(), vb > T::zero()) {
            (true, true) => measure = measure + (b - a),
            (false, false) => {}
            (left_in, _) => {
                let (mut lo, mut hi) = (a, b);
                for _ in 0..60 {
                    let mid = (lo + hi) * T::lit(0.5);
                    if !(mid > lo && mid < hi) {
                        break;
                    }
                    if (excess(mid)? > T::zero()) == left_in {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let c = (lo + hi) * T::lit(0.5);
                measure = measure + if left_in { c - a } else { b - c };
            }
        }
    }
    let ratio = measure / (n - m);

    let bound = match g.norm() {
        None => T::infinity(),
        Some(gq) => {
            let fp = lp_norm(&big.truncate(m, n), f.p(), cfg)?;
            if f.p() == T::one() {
                fp * gq * n / (eps * (n - m))
            } else {
                let q = g.q();
                fp * gq * (n.powf(q) - m.powf(q)).powf(T::one() / q) / (eps * q.powf(T::one() / q) * (n - m))
            }
        }
    };
    Ok(WeakVanishing {
        ratio,
        bound,
        grid_tol: T::one() / cells,
    })
}

/// Samples of `M(t) = ‖f + t g‖'_p` with the slopes between neighbours.
#[derive(Clone, Debug, PartialEq)]
pub struct GateauxProfile<T: Real> {
    pub samples: Vec<(T, T)>,
    pub slopes: Vec<T>,
    /// `‖g‖'_p`, which bounds `|M'(t)|`.
    pub bound: T,
}

impl<T: Real> GateauxProfile<T> {
    pub fn max_slope(&self) -> T {
        self.slopes.iter().fold(T::zero(), |m, s| m.max(s.abs()))
    }
}

/// Evaluates `M(t)` on `ts` (sorted ascending) for `1 < p < ∞`.
pub fn gateaux_profile<T: Real>(
    f: &PrimitiveDistribution<T>,
    g: &PrimitiveDistribution<T>,
    ts: &[T],
    cfg: &QuadConfig<T>,
) -> Result<GateauxProfile<T>> {
    same_p(f.p(), g.p())?;
    if f.p() == T::one() {
        return Err(Error::InvalidParameter("the Gateaux profile needs p > 1".into()));
    }
    if ts.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("t grid must be strictly increasing".into()));
    }
    let mut samples = Vec::with_capacity(ts.len());
    for &t in ts {
        let m = if t == T::zero() {
            f.norm()
        } else {
            lp_norm(&f.primitive().add(&g.primitive().scale(t)), f.p(), cfg)?
        };
        samples.push((t, m));
    }
    let slopes = samples
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();
    Ok(GateauxProfile {
        samples,
        slopes,
        bound: g.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrepr::FunctionExpr;

    type E = FunctionExpr<f64>;

    fn dist(s: &str, p: f64) -> PrimitiveDistribution<f64> {
        PrimitiveDistribution::new(E::parse(s).unwrap(), p, &QuadConfig::default()).unwrap()
    }

    #[test]
    fn vanishing_examples() {
        let cfg = QuadConfig::default();
        let f = dist("exp(-x^2)", 1.0);
        let h = Multiplier::new(E::parse("piecewise(x > 0 -> 1, 0)").unwrap(), f64::INFINITY, &cfg).unwrap();
        let w = weak_vanishing_bound(&f, &h, 2.0, 4.0, 0.1, &cfg).unwrap();
        assert_eq!(w.ratio, 0.0);
        assert!(w.bound > 0.0 && w.holds());

        let w = weak_vanishing_bound(&f, &h, 0.5, 1.0, 10.0, &cfg).unwrap();
        assert_eq!(w.ratio, 0.0);

        // F = 5 χ_(2,4), G = x: |FG| >= 10 > 1 throughout.
        let c = dist("5*indicator(2,4)", 1.0);
        let w = weak_vanishing_bound(&c, &h, 2.0, 4.0, 1.0, &cfg).unwrap();
        assert!((w.ratio - 1.0).abs() < 1e-12);
        assert!(w.bound >= 1.0 && w.holds());

        // p = 2 with a crossing inside (M, N).
        let f2 = dist("exp(-x^2/8)", 2.0);
        let g2 = Multiplier::new(E::parse("exp(-x^2)").unwrap(), 2.0, &cfg).unwrap();
        let w = weak_vanishing_bound(&f2, &g2, 0.5, 6.0, 0.3, &cfg).unwrap();
        assert!(w.ratio > 0.0 && w.ratio < 1.0 && w.holds(), "{w:?}");
    }

    #[test]
    fn gateaux_examples() {
        let cfg = QuadConfig::default();
        let ts: Vec<f64> = (0..9).map(|i| -0.5 + 0.25 * i as f64).collect();
        let f = dist("exp(-x^2)", 2.0);
        let z = PrimitiveDistribution::zero(2.0).unwrap();
        let m = gateaux_profile(&f, &z, &ts, &cfg).unwrap();
        assert!(m.samples.iter().all(|(_, v)| (v - f.norm()).abs() < 1e-12));

        let m = gateaux_profile(&f, &f, &ts, &cfg).unwrap();
        for (t, v) in &m.samples {
            assert!((v - (1.0 + t).abs() * f.norm()).abs() < 1e-9);
        }
        assert!((m.max_slope() - f.norm()).abs() < 1e-8);

        let a = dist("indicator(0,1)", 2.0);
        let b = dist("indicator(1,2)", 2.0);
        let m = gateaux_profile(&a, &b, &ts, &cfg).unwrap();
        for (t, v) in &m.samples {
            assert!((v - (1.0 + t * t).sqrt()).abs() < 1e-12);
        }
        assert!(m.max_slope() <= m.bound + 1e-4);
    }
}
