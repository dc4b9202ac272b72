//! Convolutions: `f * G` with an `I^q` multiplier (a bounded function),
//! `f * g` with `g ∈ L^q` (an element of `L'^r`), and the product
//! `f ⋆ g = (F * G)'` that makes `L'^1` a Banach algebra.

mod kernel;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::funcrepr::ast::OpaqueFn;
use crate::funcrepr::{FunctionExpr, Profile};
use crate::lpspace::{check_conjugate, check_p, Multiplier, PrimitiveDistribution};
use crate::quadrature::{integrate_line, lp_norm, QuadConfig};
use crate::scalar::Real;
pub(crate) use kernel::{conv_expr, convolve_at, inner_cfg, tail_envelope};

/// Which of the three products produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvolutionKind {
    /// `f * G`, a bounded continuous function.
    Multiplier,
    /// `f * g` with `g ∈ L^q`, an element of `L'^r`.
    Lq,
    /// `f ⋆ g`, an element of `L'^1`.
    Star,
}

impl ConvolutionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConvolutionKind::Multiplier => "multiplier",
            ConvolutionKind::Lq => "lq",
            ConvolutionKind::Star => "star",
        }
    }
}

impl std::str::FromStr for ConvolutionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multiplier" => Ok(ConvolutionKind::Multiplier),
            "lq" => Ok(ConvolutionKind::Lq),
            "star" => Ok(ConvolutionKind::Star),
            _ => Err(Error::InvalidParameter(format!("unknown convolution kind `{s}`"))),
        }
    }
}

/// One step of the Cauchy record for `f * g_n`: the bound
/// `‖f * g_n - f * g_m‖'_r <= ‖f‖'_p ‖g_n - g_m‖_q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CauchyStep<T: Real> {
    pub n: usize,
    pub m: usize,
    pub bound: T,
}

/// A distribution obtained by convolution.
#[derive(Clone, Debug)]
pub struct ConvolutionResult<T: Real> {
    pub kind: ConvolutionKind,
    pub distribution: PrimitiveDistribution<T>,
    /// Factors whose convolution is the primitive: `(F, g)` or `(F, G)`.
    factors: (FunctionExpr<T>, FunctionExpr<T>),
    pub diagnostics: Vec<CauchyStep<T>>,
}

impl<T: Real> ConvolutionResult<T> {
    pub fn primitive(&self) -> &FunctionExpr<T> {
        self.distribution.primitive()
    }

    /// Pointwise value of the distribution, `(a * b)'(x)`, where it is a
    /// function. Uses `a * b'` when `b` is differentiable by jets, else
    /// `a' * b`, else a central difference of the primitive.
    pub fn density_at(&self, x: T, cfg: &QuadConfig<T>) -> Result<T> {
        let (a, b) = &self.factors;
        let icfg = inner_cfg(cfg);
        for (u, v) in [(a, b), (b, a)] {
            if v.is_smooth() {
                return convolve_at(u, &v.derivative(), x, &icfg);
            }
        }
        let h = T::epsilon().powf(T::lit(0.25)) * (T::one() + x.abs());
        let p = |t: T| convolve_at(a, b, t, &icfg);
        // Fourth-order central difference.
        let d = (p(x - h - h)? - T::lit(8.0) * p(x - h)? + T::lit(8.0) * p(x + h)? - p(x + h + h)?) / (T::lit(12.0) * h);
        Ok(d)
    }
}

/// `(f * G)(x) = ∫ F(x - y) g(y) dy`.
pub fn conv_multiplier<T: Real>(
    f: &PrimitiveDistribution<T>,
    g: &Multiplier<T>,
    x: T,
    cfg: &QuadConfig<T>,
) -> Result<T> {
    check_conjugate(f.p(), g.q())?;
    if f.is_zero() || g.density().is_zero() {
        return Ok(T::zero());
    }
    let integrand = f.primitive().compose_affine(-T::one(), x).mul(g.density());
    integrate_line(&integrand, cfg)?.certified()
}

/// `f * G` as a function, `sup |f * G| <= ‖f‖'_p ‖G‖_{I,q}`.
pub fn conv_multiplier_function<T: Real>(
    f: &PrimitiveDistribution<T>,
    g: &Multiplier<T>,
    cfg: &QuadConfig<T>,
) -> Result<FunctionExpr<T>> {
    check_conjugate(f.p(), g.q())?;
    Ok(conv_expr(f.primitive(), g.density(), cfg))
}

fn check_young<T: Real>(p: T, q: T, r: T) -> Result<()> {
    check_p(p)?;
    check_p(q)?;
    check_p(r)?;
    let gap = T::one() / p + T::one() / q - T::one() - T::one() / r;
    if gap.abs() > T::lit(1e3) * T::epsilon() {
        return Err(Error::ExponentMismatch(format!(
            "1/p + 1/q = 1 + 1/r fails for p = {p}, q = {q}, r = {r}"
        )));
    }
    Ok(())
}

/// `C ψ(C x) / C` with `ψ` the normalized bump `exp(-1/(1 - x^2))` on
/// `(-1, 1)`: a mollifier of width `1/n`.
fn bump<T: Real>(n: T) -> FunctionExpr<T> {
    // ∫_{-1}^{1} exp(-1/(1-x^2)) dx
    let mass = T::lit(0.443_993_816_168_079_4);
    FunctionExpr::parse("piecewise(abs(x) < 1 -> exp(-1/(1-x^2)), 0)")
        .expect("bump parses")
        .compose_affine(n, T::zero())
        .scale(n / mass)
}

/// `g_n = (g χ_(-n,n)) * φ_(1/n)`, the smooth compactly supported sequence
/// used to approximate `g ∈ L^q`.
pub fn mollified<T: Real>(g: &FunctionExpr<T>, n: usize, cfg: &QuadConfig<T>) -> FunctionExpr<T> {
    let nn = T::from_usize_lossy(n);
    conv_expr(&g.truncate(-nn, nn), &bump(nn), cfg)
}

/// `n` values used for the Cauchy record.
const CAUCHY_STEPS: [usize; 4] = [1, 2, 4, 8];

/// `f * g ∈ L'^r` for `g ∈ L^q`, `1/p + 1/q = 1 + 1/r`, with primitive
/// `F * g`. The result carries the Cauchy record of the approximating
/// sequence when `diagnostics` is set.
pub fn conv_lq<T: Real>(
    f: &PrimitiveDistribution<T>,
    g: &FunctionExpr<T>,
    q: T,
    r: T,
    diagnostics: bool,
    cfg: &QuadConfig<T>,
) -> Result<ConvolutionResult<T>> {
    check_young(f.p(), q, r)?;
    let prim = conv_expr(f.primitive(), g, cfg);
    let distribution = if prim.is_zero() {
        PrimitiveDistribution::zero(r)?
    } else {
        PrimitiveDistribution::new(prim, r, cfg)?
    };
    let mut steps = vec![];
    if diagnostics && !g.is_zero() {
        let seq: Vec<FunctionExpr<T>> = CAUCHY_STEPS.iter().map(|n| mollified(g, *n, cfg)).collect();
        for (i, w) in CAUCHY_STEPS.windows(2).enumerate() {
            let d = lp_norm(&seq[i + 1].sub(&seq[i]), q, cfg)?;
            steps.push(CauchyStep {
                n: w[0],
                m: w[1],
                bound: f.norm() * d,
            });
        }
    }
    Ok(ConvolutionResult {
        kind: ConvolutionKind::Lq,
        distribution,
        factors: (f.primitive().clone(), g.clone()),
        diagnostics: steps,
    })
}

/// `f ⋆ g = (F * G)'` for `f, g ∈ L'^1`.
pub fn star<T: Real>(
    f: &PrimitiveDistribution<T>,
    g: &PrimitiveDistribution<T>,
    cfg: &QuadConfig<T>,
) -> Result<ConvolutionResult<T>> {
    if f.p() != T::one() || g.p() != T::one() {
        return Err(Error::ExponentMismatch("the ⋆ product needs p = 1 for both factors".into()));
    }
    let prim = conv_expr(f.primitive(), g.primitive(), cfg);
    let distribution = if prim.is_zero() {
        PrimitiveDistribution::zero(T::one())?
    } else {
        PrimitiveDistribution::new(prim, T::one(), cfg)?
    };
    Ok(ConvolutionResult {
        kind: ConvolutionKind::Star,
        distribution,
        factors: (f.primitive().clone(), g.primitive().clone()),
        diagnostics: vec![],
    })
}

#[derive(Debug)]
struct Dilated<T: Real> {
    f: FunctionExpr<T>,
    t: T,
}

impl<T: Real> OpaqueFn<T> for Dilated<T> {
    fn name(&self) -> String {
        format!("dilate[{}, {}]", self.f, self.t)
    }

    fn eval(&self, u: T) -> T {
        self.f.eval_raw(u / self.t) / self.t
    }

    fn profile(&self) -> Profile<T> {
        self.f.profile().compose_affine(T::one() / self.t, T::zero())
    }
}

/// `F_t(x) = F(x/t)/t`.
pub fn dilate<T: Real>(f: &FunctionExpr<T>, t: T) -> FunctionExpr<T> {
    if t == T::one() {
        return f.clone();
    }
    FunctionExpr::opaque(Arc::new(Dilated { f: f.clone(), t }))
}

/// `‖F_t * g' - a g'‖'_p = ‖F_t * g - a g‖_p` for each `t`, where
/// `a = ∫ F`.
pub fn approx_identity<T: Real>(
    big_f: &FunctionExpr<T>,
    g: &FunctionExpr<T>,
    p: T,
    ts: &[T],
    cfg: &QuadConfig<T>,
) -> Result<Vec<(T, T)>> {
    check_p(p)?;
    if ts.iter().any(|t| !(*t > T::zero())) {
        return Err(Error::InvalidParameter("dilation parameters must be positive".into()));
    }
    let a = integrate_line(big_f, cfg)?.certified()?;
    let mut out = vec![];
    for &t in ts {
        if g.is_zero() {
            out.push((t, T::zero()));
            continue;
        }
        let ft = dilate(big_f, t);
        let diff = conv_expr(&ft, g, cfg).sub(&g.scale(a));
        out.push((t, lp_norm(&diff, p, cfg)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = FunctionExpr<f64>;

    fn cfg() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    fn dist(s: &str, p: f64) -> PrimitiveDistribution<f64> {
        PrimitiveDistribution::new(E::parse(s).unwrap(), p, &cfg()).unwrap()
    }

    #[test]
    fn multiplier_kind() {
        let f = dist("indicator(0,1)", 2.0);
        let g = Multiplier::new(E::parse("-2*x*exp(-x^2)").unwrap(), 2.0, &cfg()).unwrap();
        let v = conv_multiplier(&f, &g, 0.0, &cfg()).unwrap();
        assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-10, "{v}");
        let zero = Multiplier::new(E::zero(), 2.0, &cfg()).unwrap();
        assert_eq!(conv_multiplier(&f, &zero, 0.3, &cfg()).unwrap(), 0.0);
        let shifted = f.translate(0.7, &cfg()).unwrap();
        let a = conv_multiplier(&shifted, &g, 0.2, &cfg()).unwrap();
        let b = conv_multiplier(&f, &g, 0.2 - 0.7, &cfg()).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn exhibit_pair() {
        let f1 = dist("indicator(0,1)", 1.0);
        let g = E::parse("-2*x*exp(-x^2)").unwrap();
        let c = conv_lq(&f1, &g, 1.0, 1.0, false, &cfg()).unwrap();
        let v = c.density_at(0.0, &cfg()).unwrap();
        assert!((v + 2.0 * (-1.0f64).exp()).abs() < 1e-8, "{v}");
        // Primitive is e^(-x^2) - e^(-(x-1)^2).
        let want = 1.0 - (-1.0f64).exp();
        assert!((c.primitive().eval(0.0).unwrap() - want).abs() < 1e-10);

        let gp = dist("exp(-x^2)", 1.0);
        let s = star(&f1, &gp, &cfg()).unwrap();
        let v = s.density_at(0.0, &cfg()).unwrap();
        assert!((v - want).abs() < 1e-8, "{v}");
        let gap = c.distribution.distance(&s.distribution.clone(), &cfg()).unwrap();
        assert!(gap > 0.1, "{gap}");
    }

    #[test]
    fn exponent_rules() {
        let f = dist("exp(-x^2)", 2.0);
        let g = E::parse("exp(-x^2)").unwrap();
        assert!(matches!(conv_lq(&f, &g, 2.0, 2.0, false, &cfg()), Err(Error::ExponentMismatch(_))));
        let c = conv_lq(&f, &g, 1.0, 2.0, false, &cfg()).unwrap();
        assert!(c.distribution.norm() <= f.norm() * std::f64::consts::PI.sqrt() + 1e-6);
        let z = conv_lq(&f, &E::zero(), 1.0, 2.0, true, &cfg()).unwrap();
        assert!(z.distribution.is_zero());
        assert!(matches!(star(&f, &f, &cfg()), Err(Error::ExponentMismatch(_))));
    }

    #[test]
    fn cauchy_record_shrinks() {
        let f = dist("indicator(0,1)", 1.0);
        let g = E::parse("exp(-x^2)").unwrap();
        let c = conv_lq(&f, &g, 1.0, 1.0, true, &cfg()).unwrap();
        assert_eq!(c.diagnostics.len(), 3);
        let b: Vec<f64> = c.diagnostics.iter().map(|s| s.bound).collect();
        assert!(b[0] > b[1] && b[1] > b[2], "{b:?}");
    }

    #[test]
    fn approximate_identity() {
        let f = E::parse("exp(-x^2)/sqrt(3.141592653589793)").unwrap();
        let g = E::parse("exp(-x^2)").unwrap();
        let v = approx_identity(&f, &g, 1.0, &[1.0, 0.3, 0.1], &cfg()).unwrap();
        assert!(v[0].1 > v[1].1 && v[1].1 > v[2].1, "{v:?}");
        let odd = E::parse("x*exp(-x^2)").unwrap();
        let v = approx_identity(&odd, &g, 1.0, &[1.0, 0.1, 0.01], &cfg()).unwrap();
        // Zero mass: F_t * g ≈ -t (∫ x F) g', so the norm is about √π t.
        assert!(v[2].1 < v[1].1 && v[1].1 < v[0].1, "{v:?}");
        assert!((v[2].1 - 0.01 * std::f64::consts::PI.sqrt()).abs() < 1e-5, "{v:?}");
        let v = approx_identity(&f, &E::zero(), 1.0, &[0.5], &cfg()).unwrap();
        assert_eq!(v[0].1, 0.0);
    }
}
