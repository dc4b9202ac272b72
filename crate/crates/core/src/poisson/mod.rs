//! Poisson extension of `L^p` boundary data to the upper half-plane, and
//! of `n`-th derivative distributions through the kernel's derivatives.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::convolution::tail_envelope;
use crate::funcrepr::ast::OpaqueFn;
use crate::funcrepr::jet::MAX_ORDER;
use crate::funcrepr::{FunctionExpr, Profile, Support, Tail};
use crate::higher::NthDistribution;
use crate::quadrature::{integrate_line, integrate_line_fn, lp_norm, QuadConfig, QuadResult};
use crate::scalar::Real;

/// A point `(x, y)` with `y > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlanePoint<T: Real> {
    pub x: T,
    pub y: T,
}

impl<T: Real> HalfPlanePoint<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        if !(y > T::zero()) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidParameter(format!("({x}, {y}) is not in the upper half-plane")));
        }
        Ok(HalfPlanePoint { x, y })
    }
}

/// `Φ_y(x) = (y/π)/(x^2 + y^2)` as an expression in `x`.
pub fn kernel_expr<T: Real>(y: T) -> FunctionExpr<T> {
    FunctionExpr::x()
        .mul(&FunctionExpr::x())
        .add(&FunctionExpr::constant(y * y))
        .powf(-T::one())
        .scale(y / T::PI())
}

pub fn poisson_kernel<T: Real>(pt: HalfPlanePoint<T>) -> T {
    pt.y / T::PI() / (pt.x * pt.x + pt.y * pt.y)
}

fn check_n(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::InvalidParameter(format!("derivative order {n} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

/// `∂^n Φ_y / ∂x^n` at `pt`, from jets of the closed form.
pub fn kernel_dx<T: Real>(pt: HalfPlanePoint<T>, n: usize) -> Result<T> {
    check_n(n)?;
    Ok(kernel_expr(pt.y).eval_jet(pt.x, n)?.derivatives()[n])
}

/// `x ↦ ∂^n Φ_y(x)/∂x^n`.
#[derive(Debug)]
struct KernelDx<T: Real> {
    y: T,
    n: usize,
    k: FunctionExpr<T>,
}

impl<T: Real> OpaqueFn<T> for KernelDx<T> {
    fn name(&self) -> String {
        format!("poisson_dx[{}, {}]", self.y, self.n)
    }

    fn eval(&self, u: T) -> T {
        match self.k.eval_jet(u, self.n) {
            Ok(j) => j.derivatives()[self.n],
            Err(_) => T::nan(),
        }
    }

    fn profile(&self) -> Profile<T> {
        Profile::smooth_everywhere([Tail::Power(T::lit(2.0) + T::from_usize_lossy(self.n)); 2])
    }
}

fn kernel_dx_expr<T: Real>(y: T, n: usize) -> FunctionExpr<T> {
    let k = kernel_expr(y);
    if n == 0 {
        return k;
    }
    FunctionExpr::opaque(Arc::new(KernelDx { y, n, k }))
}

/// `∫ F(x - s) ∂^n Φ_y(s) ds`, splitting at the kernel's scale so that
/// narrow kernels are resolved.
fn extend<T: Real>(big_f: &FunctionExpr<T>, n: usize, pt: HalfPlanePoint<T>, cfg: &QuadConfig<T>) -> Result<T> {
    extend_result(big_f, n, pt, cfg)?.certified()
}

fn extend_result<T: Real>(
    big_f: &FunctionExpr<T>,
    n: usize,
    pt: HalfPlanePoint<T>,
    cfg: &QuadConfig<T>,
) -> Result<QuadResult<T>> {
    if big_f.is_zero() {
        return Ok(QuadResult::exact(T::zero()));
    }
    // In the variable s = x - ξ the kernel sits at the origin, where it is
    // resolved however far out x lies.
    let integrand = big_f.compose_affine(-T::one(), pt.x).mul(&kernel_dx_expr(pt.y, n));
    let mut prof = integrand.profile().clone();
    for k in [-4.0, -1.0, 0.0, 1.0, 4.0] {
        prof.breakpoints.push(pt.y * T::lit(k));
    }
    // Where the origin of F lands.
    prof.breakpoints.push(pt.x);
    prof.breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    prof.breakpoints.dedup();
    Ok(integrate_line_fn(&|u| integrand.eval_raw(u), &prof, cfg)?)
}

/// `U_y(x) = (Φ_y * F)(x)`.
pub fn harmonic_extension<T: Real>(big_f: &FunctionExpr<T>, pt: HalfPlanePoint<T>, cfg: &QuadConfig<T>) -> Result<T> {
    extend(big_f, 0, pt, cfg)
}

/// `u_y(x) = ∂^n U_y(x)/∂x^n = ∫ F(ξ) ∂^n_x Φ_y(x - ξ) dξ` for `f = D^n F`.
pub fn extension_n<T: Real>(f: &NthDistribution<T>, pt: HalfPlanePoint<T>, cfg: &QuadConfig<T>) -> Result<T> {
    check_n(f.order())?;
    extend(f.primitive(), f.order(), pt, cfg)
}

/// Extension of `D^n F`; `n = 0` is the plain harmonic extension.
pub fn extension_of<T: Real>(big_f: &FunctionExpr<T>, n: usize, pt: HalfPlanePoint<T>, cfg: &QuadConfig<T>) -> Result<T> {
    check_n(n)?;
    extend(big_f, n, pt, cfg)
}

/// Five-point Laplacian of the extension of `D^n F` at `pt` with step `h`.
pub fn harmonicity_residual<T: Real>(
    big_f: &FunctionExpr<T>,
    n: usize,
    pt: HalfPlanePoint<T>,
    h: T,
    cfg: &QuadConfig<T>,
) -> Result<T> {
    if !(h > T::zero()) || !(pt.y > h + h) {
        return Err(Error::InvalidParameter(format!("need 0 < 2h < y, got h = {h}, y = {}", pt.y)));
    }
    let u = |x: T, y: T| extension_of(big_f, n, HalfPlanePoint { x, y }, cfg);
    let c = u(pt.x, pt.y)?;
    let s = u(pt.x + h, pt.y)? + u(pt.x - h, pt.y)? + u(pt.x, pt.y + h)? + u(pt.x, pt.y - h)?;
    Ok((s - T::lit(4.0) * c) / (h * h))
}

/// `∫ |F| / (x^2 + 1)`, finite under the weakened hypothesis for `p = 1`.
pub fn weak_hypothesis<T: Real>(big_f: &FunctionExpr<T>, cfg: &QuadConfig<T>) -> Result<T> {
    let w = kernel_expr(T::one()).scale(T::PI());
    integrate_line(&big_f.abs().mul(&w), cfg)?.certified()
}

/// `U_y` as a quadrature-backed function, memoized by `x`.
struct Extension<T: Real> {
    f: FunctionExpr<T>,
    y: T,
    /// Tightened configuration for each value; results are accepted when
    /// their error meets the outer tolerance.
    cfg: QuadConfig<T>,
    outer: QuadConfig<T>,
    memo: Mutex<HashMap<u64, T>>,
}

impl<T: Real> fmt::Debug for Extension<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Extension({}, y = {})", self.f, self.y)
    }
}

impl<T: Real> OpaqueFn<T> for Extension<T> {
    fn name(&self) -> String {
        format!("poisson[{}, {}]", self.f, self.y)
    }

    fn eval(&self, u: T) -> T {
        let key = u.memo_key();
        if let Some(v) = self.memo.lock().expect("memo lock").get(&key) {
            return *v;
        }
        let env = tail_envelope(&self.profile().tails, u);
        let mut cfg = self.cfg.clone();
        cfg.abs_tol = cfg.abs_tol * env;
        let v = match extend_result(&self.f, 0, HalfPlanePoint { x: u, y: self.y }, &cfg) {
            Ok(r) if r.err_est <= (self.outer.abs_tol * env).max(self.outer.rel_tol * r.value.abs()) => r.value,
            _ => T::nan(),
        };
        self.memo.lock().expect("memo lock").insert(key, v);
        v
    }

    fn profile(&self) -> Profile<T> {
        let fp = self.f.profile();
        let tail = |t: Tail<T>| t.worse(Tail::Power(T::lit(2.0)));
        Profile {
            singularities: vec![],
            // The extension varies on the scale y around the data's jumps.
            breakpoints: fp.split_points(),
            centres: fp.centres.clone(),
            support: if fp.support == Support::Empty {
                Support::Empty
            } else {
                Support::all()
            },
            tails: [tail(fp.tails[0]), tail(fp.tails[1])],
            smooth: true,
        }
    }
}

/// `U_y = Φ_y * F` as a function of `x`.
pub fn extension_function<T: Real>(big_f: &FunctionExpr<T>, y: T, cfg: &QuadConfig<T>) -> Result<FunctionExpr<T>> {
    HalfPlanePoint::new(T::zero(), y)?;
    if big_f.is_zero() {
        return Ok(FunctionExpr::zero());
    }
    Ok(FunctionExpr::opaque(Arc::new(Extension {
        f: big_f.clone(),
        y,
        cfg: crate::convolution::inner_cfg(cfg),
        outer: cfg.clone(),
        memo: Mutex::new(HashMap::new()),
    })))
}

/// One row of [`boundary_convergence`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryRow<T: Real> {
    pub y: T,
    /// `‖u_y - f‖^(n)_p = ‖U_y - F‖_p`.
    pub distance: T,
    /// `‖u_y‖^(n)_p = ‖U_y‖_p`.
    pub norm: T,
    /// `‖U_y‖_p <= ‖F‖_p + 1e-6`.
    pub contraction: bool,
}

/// Slack of the contraction check.
pub const CONTRACTION_SLACK: f64 = 1e-6;

/// `‖U_y - F‖_p` for each `y` of a descending grid.
pub fn boundary_convergence<T: Real>(f: &NthDistribution<T>, ys: &[T], cfg: &QuadConfig<T>) -> Result<Vec<BoundaryRow<T>>> {
    if ys.iter().any(|y| !(*y > T::zero())) || ys.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter("y values must be positive and strictly descending".into()));
    }
    use rayon::prelude::*;
    ys.par_iter()
        .map(|&y| {
            if f.as_distribution().is_zero() {
                return Ok(BoundaryRow {
                    y,
                    distance: T::zero(),
                    norm: T::zero(),
                    contraction: true,
                });
            }
            let u = extension_function(f.primitive(), y, cfg)?;
            let distance = lp_norm(&u.sub(f.primitive()), f.p(), cfg)?;
            let norm = lp_norm(&u, f.p(), cfg)?;
            Ok(BoundaryRow {
                y,
                distance,
                norm,
                contraction: norm <= f.norm() + T::lit(CONTRACTION_SLACK),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type E = FunctionExpr<f64>;

    fn cfg() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    fn pt(x: f64, y: f64) -> HalfPlanePoint<f64> {
        HalfPlanePoint::new(x, y).unwrap()
    }

    #[test]
    fn kernel() {
        assert!((poisson_kernel(pt(0.0, 1.0)) - 1.0 / PI).abs() < 1e-16);
        assert!(HalfPlanePoint::new(0.0, 0.0).is_err());
        let j = kernel_dx(pt(0.0, 1.0), 1).unwrap();
        assert_eq!(j, 0.0);
        assert!((kernel_dx(pt(1.0, 1.0), 0).unwrap() - 0.5 / PI).abs() < 1e-16);
        // d/dx (1/π)(x^2+1)^-1 = -(2x/π)(x^2+1)^-2
        assert!((kernel_dx(pt(1.0, 1.0), 1).unwrap() + 0.5 / PI).abs() < 1e-15);
        assert!(kernel_dx(pt(1.0, 1.0), 5).is_err());
        for y in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let m = integrate_line(&kernel_expr(y), &cfg()).unwrap().value;
            assert!((m - 1.0).abs() < 1e-8, "y={y}: {m}");
        }
    }

    fn arctan_u(x: f64, y: f64) -> f64 {
        (((x + 1.0) / y).atan() - ((x - 1.0) / y).atan()) / PI
    }

    #[test]
    fn indicator_extension() {
        let f = E::parse("indicator(-1,1)").unwrap();
        assert!((harmonic_extension(&f, pt(0.0, 1.0), &cfg()).unwrap() - 0.5).abs() < 1e-8);
        for (x, y) in [(0.3, 0.05), (2.0, 0.5), (-1.2, 3.0)] {
            let v = harmonic_extension(&f, pt(x, y), &cfg()).unwrap();
            assert!((v - arctan_u(x, y)).abs() < 1e-9, "{x} {y}");
        }
        assert_eq!(harmonic_extension(&E::zero(), pt(0.0, 1.0), &cfg()).unwrap(), 0.0);
        let wide = E::parse("indicator(-1e4,1e4)").unwrap();
        let v = harmonic_extension(&wide, pt(0.0, 0.5), &cfg()).unwrap();
        assert!((v - 1.0).abs() < 1e-4, "{v}");
    }

    #[test]
    fn derivative_extension() {
        let f = NthDistribution::new(E::parse("indicator(-1,1)").unwrap(), 1.0, 1, &cfg()).unwrap();
        assert!(extension_n(&f, pt(0.0, 1.0), &cfg()).unwrap().abs() < 1e-12);
        let v = extension_n(&f, pt(1.0, 1.0), &cfg()).unwrap();
        assert!((v + 4.0 / (5.0 * PI)).abs() < 1e-9, "{v}");
        // Against a finite difference of U_y in x.
        let (x, y, h) = (0.4, 0.7, 1e-4);
        let fd = (arctan_u(x + h, y) - arctan_u(x - h, y)) / (2.0 * h);
        let v = extension_n(&f, pt(x, y), &cfg()).unwrap();
        assert!((v - fd).abs() < 1e-5f64.max(1e-3 * v.abs()));
    }

    #[test]
    fn harmonic() {
        let f = E::parse("indicator(-1,1)").unwrap();
        for n in [0, 1] {
            let a = harmonicity_residual(&f, n, pt(0.3, 1.0), 0.1, &cfg()).unwrap();
            let b = harmonicity_residual(&f, n, pt(0.3, 1.0), 0.05, &cfg()).unwrap();
            let r = a / b;
            assert!((r - 4.0).abs() < 0.4, "n={n}: {a} {b}");
        }
        assert_eq!(harmonicity_residual(&E::zero(), 0, pt(0.3, 1.0), 0.1, &cfg()).unwrap(), 0.0);
        assert!(harmonicity_residual(&f, 0, pt(0.3, 0.1), 0.1, &cfg()).is_err());
    }

    #[test]
    fn gaussian_boundary_limit() {
        let f = NthDistribution::new(E::parse("exp(-x^2)").unwrap(), 2.0, 1, &cfg()).unwrap();
        let rows = boundary_convergence(&f, &[1.0, 0.3, 0.1, 0.03], &cfg()).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].distance < w[0].distance, "{rows:?}");
        }
        assert!(rows[3].distance < 0.05);
        assert!(rows.iter().all(|r| r.contraction));
    }

    #[test]
    fn indicator_boundary_limit() {
        let f = NthDistribution::new(E::parse("indicator(-1,1)").unwrap(), 1.0, 1, &cfg()).unwrap();
        let rows = boundary_convergence(&f, &[1.0, 0.3, 0.1], &cfg()).unwrap();
        assert!(rows[0].distance > rows[1].distance && rows[1].distance > rows[2].distance, "{rows:?}");
        let z = NthDistribution::from_distribution(crate::lpspace::PrimitiveDistribution::zero(2.0).unwrap(), 1).unwrap();
        assert!(boundary_convergence(&z, &[1.0, 0.1], &cfg()).unwrap().iter().all(|r| r.distance == 0.0));
        assert!(boundary_convergence(&f, &[0.1, 1.0], &cfg()).is_err());
    }

    #[test]
    fn weakened_hypothesis() {
        let v = weak_hypothesis(&E::parse("indicator(0,1)").unwrap(), &cfg()).unwrap();
        assert!((v - PI / 4.0).abs() < 1e-10);
        assert!(weak_hypothesis(&E::parse("1").unwrap(), &cfg()).is_ok());
        assert!(weak_hypothesis(&E::parse("abs(x)").unwrap(), &cfg()).is_err());
    }
}
