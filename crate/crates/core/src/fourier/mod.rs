//! Fourier transforms of `L'^1` distributions through their primitives,
//! `f̂(s) = is F̂(s)`, and the `L'^2` inner product with Parseval's identity.

mod parseval;

pub use parseval::{inner_product, parseval_check, polarization, windowed_transform, ParsevalCheck, PARSEVAL_WINDOW};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::funcrepr::{FunctionExpr, Profile, Support, Tail};
use crate::higher::NthDistribution;
use crate::lpspace::PrimitiveDistribution;
use crate::quadrature::{integrate_line, integrate_line_fn, lp_norm, QuadConfig};
use crate::scalar::Real;

/// A complex number carried as a pair of real quadratures.
pub type ComplexValue<T> = Complex<T>;

fn oscillatory_cfg<T: Real>(s: T, cfg: &QuadConfig<T>) -> QuadConfig<T> {
    let w = if s == T::zero() {
        None
    } else {
        Some(T::lit(2.0) * T::PI() / s.abs())
    };
    cfg.oscillatory(w)
}

fn require_l1<T: Real>(p: T) -> Result<()> {
    if p != T::one() {
        return Err(Error::ExponentMismatch(format!("the transform is defined on L'^1, got p = {p}")));
    }
    Ok(())
}

/// `F̂(s) = ∫ e^(-isx) F(x) dx` for `F ∈ L^1`.
pub fn fourier_primitive<T: Real>(big_f: &FunctionExpr<T>, s: T, cfg: &QuadConfig<T>) -> Result<ComplexValue<T>> {
    if big_f.is_zero() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let c = oscillatory_cfg(s, cfg);
    let arg = FunctionExpr::x().scale(s);
    let re = integrate_line(&big_f.mul(&arg.call(crate::funcrepr::ast::Func::Cos)), &c)?.certified()?;
    let im = if s == T::zero() {
        T::zero()
    } else {
        -integrate_line(&big_f.mul(&arg.call(crate::funcrepr::ast::Func::Sin)), &c)?.certified()?
    };
    Ok(Complex::new(re, im))
}

/// `f̂(s) = is F̂(s)`.
pub fn fourier<T: Real>(f: &PrimitiveDistribution<T>, s: T, cfg: &QuadConfig<T>) -> Result<ComplexValue<T>> {
    require_l1(f.p())?;
    if s == T::zero() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    Ok(Complex::new(T::zero(), s) * fourier_primitive(f.primitive(), s, cfg)?)
}

/// `f̂(s) = (is)^n F̂(s)` for `f = D^n F`.
pub fn fourier_n<T: Real>(f: &NthDistribution<T>, s: T, cfg: &QuadConfig<T>) -> Result<ComplexValue<T>> {
    require_l1(f.p())?;
    if s == T::zero() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let is = Complex::new(T::zero(), s);
    let mut factor = Complex::new(T::one(), T::zero());
    for _ in 0..f.order() {
        factor = factor * is;
    }
    Ok(factor * fourier_primitive(f.primitive(), s, cfg)?)
}

/// `|f̂(s)| / |s|` at each `s`, which tends to zero.
pub fn riemann_lebesgue_ratios<T: Real>(f: &PrimitiveDistribution<T>, ss: &[T], cfg: &QuadConfig<T>) -> Result<Vec<T>> {
    ss.iter()
        .map(|&s| {
            if s == T::zero() {
                return Err(Error::InvalidParameter("ratio undefined at s = 0".into()));
            }
            Ok(fourier(f, s, cfg)?.norm() / s.abs())
        })
        .collect()
}

/// Both sides of `(τ_y f)^(s) = e^(-isy) f̂(s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulationCheck<T: Real> {
    pub translated: ComplexValue<T>,
    pub modulated: ComplexValue<T>,
    pub gap: T,
}

pub fn translation_modulation<T: Real>(
    f: &PrimitiveDistribution<T>,
    y: T,
    s: T,
    cfg: &QuadConfig<T>,
) -> Result<ModulationCheck<T>> {
    require_l1(f.p())?;
    let translated = fourier(&f.translate(y, cfg)?, s, cfg)?;
    let modulated = Complex::new(T::zero(), -s * y).exp() * fourier(f, s, cfg)?;
    Ok(ModulationCheck {
        translated,
        modulated,
        gap: (translated - modulated).norm(),
    })
}

/// Decay metadata for a function bounded by `C (1 + |x|)`.
fn linear_growth<T: Real>() -> Profile<T> {
    Profile {
        singularities: vec![],
        breakpoints: vec![],
        centres: vec![],
        support: Support::all(),
        tails: [Tail::Power(-T::one()); 2],
        smooth: true,
    }
}

fn line_product<T: Real, H: Fn(T) -> T + Sync>(h: H, with: &FunctionExpr<T>, cfg: &QuadConfig<T>) -> Result<T> {
    let wp = with.profile();
    let mut prof = linear_growth::<T>();
    prof.support = wp.support;
    prof.breakpoints = wp.split_points();
    prof.tails = [
        combine_tail(wp.tails[0], Tail::Power(-T::one())),
        combine_tail(wp.tails[1], Tail::Power(-T::one())),
    ];
    prof.smooth = wp.smooth;
    let f = |x: T| {
        let w = with.eval_raw(x);
        if w == T::zero() {
            T::zero()
        } else {
            w * h(x)
        }
    };
    Ok(integrate_line_fn(&f, &prof, cfg)?.certified()?)
}

/// Decay of a product where one factor grows like `|x|`.
fn combine_tail<T: Real>(t: Tail<T>, growth: Tail<T>) -> Tail<T> {
    match (t, growth) {
        (Tail::Power(a), Tail::Power(b)) => Tail::Power(a + b),
        (Tail::Unknown, _) => Tail::Unknown,
        (t, _) => t,
    }
}

/// Both sides of `∫ f̂(s) g(s) ds = ∫ f ĝ`, as complex numbers. The left
/// side integrates `is F̂(s) g(s)` over `s`; the right side pairs `f` with
/// `ĝ`, that is `-∫ F (ĝ)'` where `(ĝ)'(x) = ∫ -is g(s) e^(-isx) ds`.
pub fn exchange_identity<T: Real>(
    f: &PrimitiveDistribution<T>,
    g: &FunctionExpr<T>,
    cfg: &QuadConfig<T>,
) -> Result<(ComplexValue<T>, ComplexValue<T>)> {
    require_l1(f.p())?;
    let zero = Complex::new(T::zero(), T::zero());
    if f.is_zero() || g.is_zero() {
        return Ok((zero, zero));
    }
    let sg = FunctionExpr::x().mul(g);
    lp_norm(&sg, T::one(), cfg).map_err(|e| Error::InvalidParameter(format!("s g(s) is not integrable: {e}")))?;
    lp_norm(g, T::one(), cfg).map_err(|e| Error::InvalidParameter(format!("g is not integrable: {e}")))?;
    let inner = crate::convolution::inner_cfg(cfg);
    let big_f = f.primitive();

    let lhs_at = |s: T| fourier(f, s, &inner);
    let lhs = Complex::new(
        line_product(|s| lhs_at(s).map(|v| v.re).unwrap_or(T::nan()), g, cfg)?,
        line_product(|s| lhs_at(s).map(|v| v.im).unwrap_or(T::nan()), g, cfg)?,
    );

    // -(ĝ)'(x) is the transform of i s g(s), evaluated at x.
    let dg_at = |x: T| fourier_primitive(&sg, x, &inner).map(|v| Complex::new(T::zero(), T::one()) * v);
    let rhs = Complex::new(
        line_product(|x| dg_at(x).map(|v| v.re).unwrap_or(T::nan()), big_f, cfg)?,
        line_product(|x| dg_at(x).map(|v| v.im).unwrap_or(T::nan()), big_f, cfg)?,
    );
    Ok((lhs, rhs))
}

/// Values of `D F̂` (pointwise derivative of the transform of the
/// primitive) and of `(DF)^` at one frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExhibitRow<T: Real> {
    pub s: T,
    pub d_fhat: T,
    pub hat_df: ComplexValue<T>,
}

/// For `F = χ_(-1,1)`: `F̂(s) = 2 sin(s)/s`, so
/// `D F̂(s) = -2 sin(s)/s^2 + 2 cos(s)/s` while `(DF)^(s) = 2i sin(s)`.
/// The first is differentiated with jets of the closed form; the second
/// comes from quadrature.
pub fn dfhat_vs_hatdf_exhibit<T: Real>(ss: &[T], cfg: &QuadConfig<T>) -> Result<Vec<ExhibitRow<T>>> {
    let closed = FunctionExpr::parse("2*sin(x)/x")?;
    let f = PrimitiveDistribution::new(FunctionExpr::indicator(-T::one(), T::one()), T::one(), cfg)?;
    ss.iter()
        .map(|&s| {
            if s == T::zero() {
                return Err(Error::InvalidParameter("the exhibit samples s != 0".into()));
            }
            Ok(ExhibitRow {
                s,
                d_fhat: closed.dual(s)?.derivative,
                hat_df: fourier(&f, s, cfg)?,
            })
        })
        .collect()
}

/// Finite difference of `f̂` against `D f̂(s) = i F̂(s) + s K̂(s)` with
/// `K(x) = x F(x)`. `None` when `K` is not certified to be integrable.
pub fn derivative_identity<T: Real>(
    f: &PrimitiveDistribution<T>,
    s: T,
    h: T,
    cfg: &QuadConfig<T>,
) -> Result<Option<(ComplexValue<T>, ComplexValue<T>)>> {
    require_l1(f.p())?;
    let k = FunctionExpr::x().mul(f.primitive());
    if lp_norm(&k, T::one(), cfg).is_err() {
        return Ok(None);
    }
    let fd = (fourier(f, s + h, cfg)? - fourier(f, s - h, cfg)?) / (h + h);
    let formula = Complex::new(T::zero(), T::one()) * fourier_primitive(f.primitive(), s, cfg)?
        + fourier_primitive(&k, s, cfg)? * s;
    Ok(Some((fd, formula)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type E = FunctionExpr<f64>;

    fn cfg() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    fn dist(s: &str) -> PrimitiveDistribution<f64> {
        PrimitiveDistribution::new(E::parse(s).unwrap(), 1.0, &cfg()).unwrap()
    }

    #[test]
    fn primitive_transforms() {
        let v = fourier_primitive(&E::parse("exp(-x^2)").unwrap(), 2.0, &cfg()).unwrap();
        assert!((v.re - 0.652_049_332_173_292_2).abs() < 1e-9 && v.im.abs() < 1e-12, "{v}");
        let ind = E::parse("indicator(-1,1)").unwrap();
        let v = fourier_primitive(&ind, 0.0, &cfg()).unwrap();
        assert!((v.re - 2.0).abs() < 1e-14);
        let v = fourier_primitive(&ind, 3.0, &cfg()).unwrap();
        assert!((v.re - 2.0 * 3f64.sin() / 3.0).abs() < 1e-12);
        assert_eq!(fourier_primitive(&E::zero(), 3.0, &cfg()).unwrap(), Complex::new(0.0, 0.0));
    }

    #[test]
    fn delta_pair_transform() {
        let f = dist("indicator(-1,1)");
        let v = fourier(&f, PI / 2.0, &cfg()).unwrap();
        assert!((v - Complex::new(0.0, 2.0)).norm() < 1e-6, "{v}");
        assert_eq!(fourier(&f, 0.0, &cfg()).unwrap(), Complex::new(0.0, 0.0));
        for s in [0.3, 2.0, 17.0] {
            assert!(fourier(&f, s, &cfg()).unwrap().norm() <= s * f.norm() + 1e-9);
        }
        let two = NthDistribution::from_distribution(f.clone(), 2).unwrap();
        let v = fourier_n(&two, PI / 2.0, &cfg()).unwrap();
        assert!((v.re + PI).abs() < 1e-9 && v.im.abs() < 1e-9, "{v}");
        let one = NthDistribution::from_distribution(f.clone(), 1).unwrap();
        assert_eq!(fourier_n(&one, 1.7, &cfg()).unwrap(), fourier(&f, 1.7, &cfg()).unwrap());
        assert!(fourier(&f.with_p(2.0, &cfg()).unwrap(), 1.0, &cfg()).is_err());
    }

    #[test]
    fn riemann_lebesgue() {
        let f = PrimitiveDistribution::new(crate::funcrepr::corpus::corpus("gaussian", &[2e-4]).unwrap(), 1.0, &cfg()).unwrap();
        let r = riemann_lebesgue_ratios(&f, &[1e2, 1e3, 1e4], &cfg()).unwrap();
        assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
    }

    #[test]
    fn modulation() {
        let f = dist("indicator(0,1)");
        let c = translation_modulation(&f, 1.0, 1.0, &cfg()).unwrap();
        assert!(c.gap < 1e-8, "{c:?}");
        assert!((c.translated.norm() - c.modulated.norm()).abs() < 1e-8);
        let c = translation_modulation(&f, 0.0, 2.5, &cfg()).unwrap();
        assert_eq!(c.gap, 0.0);
    }

    #[test]
    fn exchange() {
        let f = dist("indicator(0,1)");
        let g = E::parse("exp(-x^2)").unwrap();
        let (l, r) = exchange_identity(&f, &g, &cfg()).unwrap();
        assert!((l - r).norm() <= 1e-6 * (1.0 + l.norm()), "{l} vs {r}");
        let even = dist("indicator(-1,1)");
        let odd = E::parse("x*exp(-x^2)").unwrap();
        let (l, r) = exchange_identity(&even, &odd, &cfg()).unwrap();
        assert!(l.re.abs() < 1e-8 && r.re.abs() < 1e-8, "{l} {r}");
        let (l, r) = exchange_identity(&PrimitiveDistribution::zero(1.0).unwrap(), &g, &cfg()).unwrap();
        assert_eq!((l.norm(), r.norm()), (0.0, 0.0));
    }

    #[test]
    fn exhibit() {
        let rows = dfhat_vs_hatdf_exhibit(&[PI, PI / 2.0], &cfg()).unwrap();
        assert!((rows[0].d_fhat + 2.0 / PI).abs() < 1e-12);
        assert!(rows[0].hat_df.norm() < 1e-6);
        assert!((rows[1].d_fhat + 8.0 / (PI * PI)).abs() < 1e-12);
        assert!((rows[1].hat_df - Complex::new(0.0, 2.0)).norm() < 1e-6);
        let gap = rows
            .iter()
            .map(|r| (Complex::new(r.d_fhat, 0.0) - r.hat_df).norm())
            .fold(0.0, f64::max);
        assert!(gap > 0.5);
    }

    #[test]
    fn differentiability() {
        let f = dist("exp(-x^2)");
        let (fd, formula) = derivative_identity(&f, 1.3, 1e-4, &cfg()).unwrap().unwrap();
        assert!((fd - formula).norm() < 1e-6, "{fd} {formula}");
        let heavy = dist("(1+x^2)^(-0.8)");
        assert!(derivative_identity(&heavy, 1.0, 1e-4, &cfg()).unwrap().is_none());
    }
}
