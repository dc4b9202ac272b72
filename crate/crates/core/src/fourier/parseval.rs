//! `L'^2` inner product and the discrete Parseval check.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::funcrepr::FunctionExpr;
use crate::lpspace::PrimitiveDistribution;
use crate::quadrature::{integrate_line, QuadConfig};
use crate::scalar::Real;

fn require_l2<T: Real>(f: &PrimitiveDistribution<T>) -> Result<()> {
    if f.p() != T::lit(2.0) {
        return Err(Error::ExponentMismatch(format!("inner product needs p = 2, got {}", f.p())));
    }
    Ok(())
}

/// `(f, g) = ∫ F G`.
pub fn inner_product<T: Real>(f: &PrimitiveDistribution<T>, g: &PrimitiveDistribution<T>, cfg: &QuadConfig<T>) -> Result<T> {
    require_l2(f)?;
    require_l2(g)?;
    if f.is_zero() || g.is_zero() {
        return Ok(T::zero());
    }
    integrate_line(&f.primitive().mul(g.primitive()), cfg)?.certified()
}

/// `(‖f+g‖'^2 - ‖f-g‖'^2) / 4`.
pub fn polarization<T: Real>(f: &PrimitiveDistribution<T>, g: &PrimitiveDistribution<T>, cfg: &QuadConfig<T>) -> Result<T> {
    require_l2(f)?;
    require_l2(g)?;
    let a = f.add(g, cfg)?.norm();
    let b = f.sub(g, cfg)?.norm();
    Ok((a * a - b * b) / T::lit(4.0))
}

/// Samples `F` at `x_j = -L + j h`, `h = 2L/N`, taking the midpoint of the
/// one-sided limits at listed jumps.
fn samples<T: Real>(big_f: &FunctionExpr<T>, half_width: T, n: usize) -> Vec<Complex<T>> {
    let h = T::lit(2.0) * half_width / T::from_usize_lossy(n);
    let jumps = big_f.profile().split_points();
    (0..n)
        .map(|j| {
            let x = -half_width + h * T::from_usize_lossy(j);
            let near = jumps.iter().any(|p| (*p - x).abs() <= h * T::lit(1e-9));
            let v = if near {
                let d = h * T::lit(1e-7);
                (big_f.eval_raw(x - d) + big_f.eval_raw(x + d)) * T::lit(0.5)
            } else {
                big_f.eval_raw(x)
            };
            Complex::new(if v.is_finite() { v } else { T::zero() }, T::zero())
        })
        .collect()
}

/// `F̂(s_k) ≈ h Σ_j F(x_j) e^(-i s_k x_j)` at `s_k = 2πk/(Nh)` (negative
/// frequencies for `k >= N/2`), from `F χ_(-L,L)` on an `N`-point grid.
pub fn windowed_transform<T: Real>(big_f: &FunctionExpr<T>, half_width: T, n: usize) -> Result<Vec<(T, Complex<T>)>> {
    if n < 2 || !(half_width > T::zero()) {
        return Err(Error::InvalidParameter("window and grid must be positive".into()));
    }
    let mut buf: Vec<Complex<f64>> = samples(big_f, half_width, n)
        .into_iter()
        .map(|c| Complex::new(c.re.as_f64(), c.im.as_f64()))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let h = T::lit(2.0) * half_width / T::from_usize_lossy(n);
    let ds = T::lit(2.0) * T::PI() / (T::from_usize_lossy(n) * h);
    Ok(buf
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let kk = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
            let s = ds * T::lit(kk);
            // Grid starts at -L: e^(-i s x_j) = e^(i s L) e^(-2πi jk/N).
            let phase = Complex::new(T::zero(), s * half_width).exp();
            (s, phase * Complex::new(T::lit(c.re), T::lit(c.im)) * h)
        })
        .collect())
}

/// Parseval's identity `(f, g) = (1/2π) ∫ F̂ conj(Ĝ)` on one grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParsevalCheck<T: Real> {
    /// `∫ F G` by adaptive quadrature.
    pub lhs: T,
    /// `(1/2π) Σ F̂(s_k) conj(Ĝ(s_k)) Δs` from the windowed transform.
    pub rhs: T,
    pub gap: T,
    pub grid: usize,
    pub half_width: T,
}

impl<T: Real> ParsevalCheck<T> {
    /// Error when the gap exceeds `tol`: the grid is too coarse or the
    /// window too narrow.
    pub fn certify(self, tol: T) -> Result<Self> {
        if self.gap <= tol {
            Ok(self)
        } else {
            Err(Error::NonConvergence(format!(
                "Parseval gap {:e} exceeds {:e} at grid {} (window ±{}); the grid is too coarse",
                self.gap.as_f64(),
                tol.as_f64(),
                self.grid,
                self.half_width
            )))
        }
    }
}

/// Default window half-width for [`parseval_check`].
pub const PARSEVAL_WINDOW: f64 = 8.0;

pub fn parseval_check<T: Real>(
    f: &PrimitiveDistribution<T>,
    g: &PrimitiveDistribution<T>,
    grid: usize,
    half_width: T,
    cfg: &QuadConfig<T>,
) -> Result<ParsevalCheck<T>> {
    let lhs = inner_product(f, g, cfg)?;
    let a = windowed_transform(f.primitive(), half_width, grid)?;
    let b = windowed_transform(g.primitive(), half_width, grid)?;
    let ds = if grid > 1 { a[1].0 - a[0].0 } else { T::zero() };
    let mut sum = T::zero();
    for ((_, x), (_, y)) in a.iter().zip(b.iter()) {
        sum = sum + (x * y.conj()).re;
    }
    let rhs = sum * ds / (T::lit(2.0) * T::PI());
    Ok(ParsevalCheck {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
        grid,
        half_width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = FunctionExpr<f64>;

    fn cfg() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    fn d2(s: &str) -> PrimitiveDistribution<f64> {
        PrimitiveDistribution::new(E::parse(s).unwrap(), 2.0, &cfg()).unwrap()
    }

    #[test]
    fn inner_products() {
        let f = d2("indicator(-1,1)");
        let g = d2("exp(-x^2)");
        let v = inner_product(&f, &g, &cfg()).unwrap();
        assert!((v - 1.493_648_265_624_854).abs() < 1e-9, "{v}");
        assert!((polarization(&f, &g, &cfg()).unwrap() - v).abs() < 1e-6);
        assert!((inner_product(&f, &f, &cfg()).unwrap() - f.norm().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn transform_of_gaussian() {
        let t = windowed_transform(&E::parse("exp(-x^2)").unwrap(), 8.0, 1024).unwrap();
        for (s, v) in t.iter().take(20) {
            let want = std::f64::consts::PI.sqrt() * (-s * s / 4.0).exp();
            assert!((v.re - want).abs() < 1e-10 && v.im.abs() < 1e-10, "{s} {v}");
        }
    }

    #[test]
    fn parseval_gap_shrinks() {
        let f = d2("indicator(-1,1)");
        let g = d2("exp(-x^2)");
        let mut gaps = vec![];
        for n in [1 << 10, 1 << 12, 1 << 14] {
            gaps.push(parseval_check(&f, &g, n, PARSEVAL_WINDOW, &cfg()).unwrap().gap);
        }
        assert!(gaps[2] <= 1e-4 && gaps[2] < gaps[1] && gaps[1] < gaps[0], "{gaps:?}");
        let coarse = parseval_check(&g, &d2("indicator(0.1,0.35)"), 16, 8.0, &cfg()).unwrap();
        assert!(coarse.certify(1e-12).is_err());
    }
}
