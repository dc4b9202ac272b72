//! Recovering `F` from `f`, and step-function approximation.

use crate::error::{Error, Result};
use crate::funcrepr::{FunctionExpr, Support};
use crate::lpspace::{check_p, Atom, DeltaTrain, PrimitiveDistribution};
use crate::quadrature::{integrate, lp_norm, QuadConfig};
use crate::scalar::Real;

/// Density of the tent multiplier `G_{n,x}`: it rises from 0 at `-2n` to 1
/// at `-n`, stays at 1 up to `x` and falls back to 0 at `x + 1/n`.
pub fn tent_density<T: Real>(x: T, n: T) -> FunctionExpr<T> {
    let inv = T::one() / n;
    FunctionExpr::indicator(-(n + n), -n)
        .scale(inv)
        .sub(&FunctionExpr::indicator(x, x + inv).scale(n))
}

/// `F_n(x) = A_n + B_n(x)` with `A_n = -(1/n) ∫_{-2n}^{-n} F` and
/// `B_n(x) = n ∫_x^{x+1/n} F`; this is `∫ f G_{n,x}` and tends to `F(x)`
/// at points of continuity.
pub fn reconstruct<T: Real>(f: &PrimitiveDistribution<T>, x: T, n: T, cfg: &QuadConfig<T>) -> Result<T> {
    if !(n >= T::one()) || n.fract() != T::zero() {
        return Err(Error::InvalidParameter(format!("n = {n} must be a positive integer")));
    }
    if !(n > -x) {
        return Err(Error::InvalidParameter(format!("tent needs n > -x (n = {n}, x = {x})")));
    }
    let big = f.primitive();
    let a = -integrate(big, -(n + n), -n, cfg)?.certified()? / n;
    let b = integrate(big, x, x + T::one() / n, cfg)?.certified()? * n;
    Ok(a + b)
}

/// Result of [`step_approximate`].
#[derive(Clone, Debug)]
pub struct StepApproximation<T: Real> {
    pub train: DeltaTrain<T>,
    /// `‖f - s_n‖'_p`.
    pub error: T,
}

fn mass_window<T: Real>(f: &FunctionExpr<T>, p: T, total: T, eps: T, cfg: &QuadConfig<T>) -> Result<(T, T)> {
    let pts = f.profile().split_points();
    let (lo0, hi0) = match f.support() {
        Support::Interval(a, b) => (a, b),
        Support::Empty => return Ok((T::zero(), T::zero())),
    };
    if lo0.is_finite() && hi0.is_finite() {
        return Ok((lo0, hi0));
    }
    let mass = f.abs().powf(p);
    let centre_lo = pts.first().copied().unwrap_or(T::zero()).min(T::zero());
    let centre_hi = pts.last().copied().unwrap_or(T::zero()).max(T::zero());
    let mut r = T::one();
    loop {
        let lo = if lo0.is_finite() { lo0 } else { centre_lo - r };
        let hi = if hi0.is_finite() { hi0 } else { centre_hi + r };
        let inside = integrate(&mass, lo, hi, cfg)?.value;
        if total - inside <= eps * total || r > cfg.truncation_radius {
            return Ok((lo, hi));
        }
        r = r * T::lit(2.0);
    }
}

/// Piecewise constant approximation `σ_n` of `F` on `n` cells, returned as
/// the delta train `s_n = σ_n'` with its error.
///
/// The cells are quantiles of the mass of `|F|^p` over an effective support
/// that leaves out a fraction `1/(4 n^2)` of it; each cell carries the mean
/// of `F`.
pub fn step_approximate<T: Real>(
    f: &PrimitiveDistribution<T>,
    n: usize,
    cfg: &QuadConfig<T>,
) -> Result<StepApproximation<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("step_approximate needs n >= 1".into()));
    }
    let p = f.p();
    check_p(p)?;
    let big = f.primitive();
    if f.norm() == T::zero() {
        return Ok(StepApproximation {
            train: DeltaTrain::new(vec![])?,
            error: T::zero(),
        });
    }
    let total = f.norm().powf(p);
    let nn = T::from_usize_lossy(n);
    let eps = T::one() / (T::lit(4.0) * nn * nn);
    let (lo, hi) = mass_window(big, p, total, eps, cfg)?;
    let mass = big.abs().powf(p);

    // Cumulative mass on a fine grid, then quantiles by linear interpolation.
    let fine = 64 * n.max(16);
    let h = (hi - lo) / T::from_usize_lossy(fine);
    let grid: Vec<T> = (0..=fine).map(|i| if i == fine { hi } else { lo + h * T::from_usize_lossy(i) }).collect();
    let mut cum = vec![T::zero(); fine + 1];
    for i in 0..fine {
        cum[i + 1] = cum[i] + integrate(&mass, grid[i], grid[i + 1], cfg)?.value;
    }
    let m = cum[fine];
    let mut edges = vec![lo];
    let mut j = 0usize;
    for k in 1..n {
        let target = m * T::from_usize_lossy(k) / nn;
        while j < fine && cum[j + 1] < target {
            j += 1;
        }
        let span = cum[j + 1] - cum[j];
        let t = if span > T::zero() { (target - cum[j]) / span } else { T::zero() };
        edges.push(grid[j] + h * t.max(T::zero()).min(T::one()));
    }
    edges.push(hi);
    edges.dedup();

    let mut atoms = vec![];
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let mean = integrate(big, a, b, cfg)?.value / (b - a);
        if mean != T::zero() {
            atoms.push(Atom { weight: mean, left: a, right: b });
        }
    }
    let train = DeltaTrain::new(atoms)?;
    let error = lp_norm(&big.sub(&train.step_function()), p, cfg)?;
    Ok(StepApproximation { train, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpspace::{pair, Multiplier};

    type E = FunctionExpr<f64>;

    fn dist(s: &str, p: f64) -> PrimitiveDistribution<f64> {
        PrimitiveDistribution::new(E::parse(s).unwrap(), p, &QuadConfig::default()).unwrap()
    }

    #[test]
    fn reconstruction() {
        let cfg = QuadConfig::default();
        let f = dist("indicator(0,1)", 2.0);
        for n in [2.0, 3.0, 10.0] {
            assert!((reconstruct(&f, 0.5, n, &cfg).unwrap() - 1.0).abs() <= 2.0 * f64::EPSILON);
        }
        let g = dist("exp(-x^2)", 2.0);
        let mut prev = f64::INFINITY;
        for n in [4.0, 16.0, 64.0] {
            let e = (reconstruct(&g, 0.0, n, &cfg).unwrap() - 1.0).abs();
            assert!(e < prev, "n={n}: {e}");
            prev = e;
        }
        assert!(reconstruct(&g, -5.0, 2.0, &cfg).is_err());
        let z = PrimitiveDistribution::zero(2.0).unwrap();
        assert_eq!(reconstruct(&z, 0.3, 100.0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn tent_pairing_matches() {
        let cfg = QuadConfig::default();
        let g = dist("exp(-x^2)*(1+x)", 2.0);
        for (x, n) in [(0.25, 3.0), (-0.5, 2.0)] {
            let m = Multiplier::new(tent_density(x, n), 2.0, &cfg).unwrap();
            let by_pair = pair(&g, &m, &cfg).unwrap();
            assert!((by_pair - reconstruct(&g, x, n, &cfg).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn steps() {
        let cfg = QuadConfig::default();
        let f = dist("indicator(0,1)", 2.0);
        let s = step_approximate(&f, 1, &cfg).unwrap();
        assert_eq!(s.train.atoms().len(), 1);
        let a = s.train.atoms()[0];
        assert_eq!((a.left, a.right), (0.0, 1.0));
        assert!((a.weight - 1.0).abs() < 1e-15);
        assert!(s.error < 1e-14);

        let g = dist("exp(-x^2)", 2.0);
        let m = Multiplier::new(E::parse("indicator(-0.3,1.2)*(2-x)").unwrap(), 2.0, &cfg).unwrap();
        let exact = pair(&g, &m, &cfg).unwrap();
        let mut prev = f64::INFINITY;
        for n in [8, 32, 128] {
            let s = step_approximate(&g, n, &cfg).unwrap();
            assert!(s.error < prev, "n={n}: {} vs {prev}", s.error);
            prev = s.error;
            let gap = (s.train.pair(&m).unwrap() - exact).abs();
            assert!(gap <= s.error * m.norm().unwrap() + 1e-9);
        }
    }
}
