//! Higher order spaces `L^(n),p`: distributions `f = D^n F` with
//! `F ∈ L^p`, paired with `n`-fold integrals of `L^q` densities.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::funcrepr::jet::MAX_ORDER;
use crate::funcrepr::{DecayClass, FunctionExpr, Profile, Support};
use crate::lpspace::{check_conjugate, check_q, Multiplier, PrimitiveDistribution};
use crate::quadrature::{integrate, integrate_line, integrate_line_fn, lp_norm, QuadConfig};
use crate::scalar::Real;

/// `f = D^n F` normed by `‖f‖^(n)_p = ‖F‖_p`.
#[derive(Clone, Debug)]
pub struct NthDistribution<T: Real> {
    base: PrimitiveDistribution<T>,
    order: usize,
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("order must be at least 1".into()));
    }
    Ok(())
}

impl<T: Real> NthDistribution<T> {
    pub fn new(primitive: FunctionExpr<T>, p: T, order: usize, cfg: &QuadConfig<T>) -> Result<Self> {
        check_order(order)?;
        Ok(NthDistribution {
            base: PrimitiveDistribution::new(primitive, p, cfg)?,
            order,
        })
    }

    pub fn from_distribution(base: PrimitiveDistribution<T>, order: usize) -> Result<Self> {
        check_order(order)?;
        Ok(NthDistribution { base, order })
    }

    pub fn primitive(&self) -> &FunctionExpr<T> {
        self.base.primitive()
    }

    pub fn p(&self) -> T {
        self.base.p()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn norm(&self) -> T {
        self.base.norm()
    }

    /// The same primitive viewed as an element of `L'^p`.
    pub fn as_distribution(&self) -> &PrimitiveDistribution<T> {
        &self.base
    }
}

struct IterInner<T: Real> {
    density: FunctionExpr<T>,
    q: T,
    order: usize,
    norm: Option<T>,
    /// Coefficients of a polynomial added to `G`, lowest degree first.
    poly: Vec<T>,
    cfg: QuadConfig<T>,
    memo: Mutex<HashMap<(usize, u64), T>>,
}

/// `G` with `G^(n) = g ∈ L^q` and `G^(k)(0) = 0` for `k < n`, up to an
/// added polynomial of degree below `n`.
#[derive(Clone)]
pub struct IteratedMultiplier<T: Real> {
    inner: Arc<IterInner<T>>,
}

impl<T: Real> fmt::Debug for IteratedMultiplier<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IteratedMultiplier")
            .field("density", &self.inner.density.to_string())
            .field("q", &self.inner.q)
            .field("order", &self.inner.order)
            .field("poly", &self.inner.poly)
            .finish()
    }
}

fn factorial<T: Real>(k: usize) -> T {
    (1..=k).fold(T::one(), |a, i| a * T::from_usize_lossy(i))
}

/// `k`-th derivative of the polynomial `Σ c_i x^i` at `x`.
fn poly_derivative<T: Real>(c: &[T], k: usize, x: T) -> T {
    let mut acc = T::zero();
    for (i, ci) in c.iter().enumerate().skip(k).rev() {
        let falling = factorial::<T>(i) / factorial::<T>(i - k);
        acc = acc * x + *ci * falling;
    }
    acc
}

impl<T: Real> IteratedMultiplier<T> {
    fn build(density: FunctionExpr<T>, q: T, order: usize, norm: Option<T>, cfg: &QuadConfig<T>) -> Self {
        // The iterates are nested integrals; split the budget across them.
        let mut c = cfg.clone();
        c.abs_tol = cfg.abs_tol / T::from_usize_lossy(order);
        IteratedMultiplier {
            inner: Arc::new(IterInner {
                density,
                q,
                order,
                norm,
                poly: vec![],
                cfg: c,
                memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// Checks `g ∈ L^q` and records `‖G‖_{nI,q} = ‖g‖_q`.
    pub fn new(density: FunctionExpr<T>, q: T, order: usize, cfg: &QuadConfig<T>) -> Result<Self> {
        check_order(order)?;
        let norm = Multiplier::new(density.clone(), q, cfg)?.norm();
        Ok(IteratedMultiplier::build(density, q, order, norm, cfg))
    }

    /// Density only locally in `L^q`; no norm.
    pub fn local(density: FunctionExpr<T>, q: T, order: usize, cfg: &QuadConfig<T>) -> Result<Self> {
        check_order(order)?;
        check_q(q)?;
        Ok(IteratedMultiplier::build(density, q, order, None, cfg))
    }

    /// The same multiplier plus `Σ c_i x^i`; the degree must be below the
    /// order so that `G^(n)` is unchanged.
    pub fn with_polynomial(&self, coeffs: &[T]) -> Result<Self> {
        let mut c = coeffs.to_vec();
        while c.last() == Some(&T::zero()) {
            c.pop();
        }
        if c.len() > self.inner.order {
            return Err(Error::InvalidParameter(format!(
                "polynomial of degree {} is not annihilated at order {}",
                c.len() - 1,
                self.inner.order
            )));
        }
        let i = &self.inner;
        Ok(IteratedMultiplier {
            inner: Arc::new(IterInner {
                density: i.density.clone(),
                q: i.q,
                order: i.order,
                norm: i.norm,
                poly: c,
                cfg: i.cfg.clone(),
                memo: Mutex::new(HashMap::new()),
            }),
        })
    }

    pub fn density(&self) -> &FunctionExpr<T> {
        &self.inner.density
    }

    pub fn q(&self) -> T {
        self.inner.q
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn norm(&self) -> Option<T> {
        self.inner.norm
    }

    /// `G^(k)(x)` for `0 <= k <= n`, by the repeated-integration formula
    /// `G^(k)(x) = ∫_0^x (x-t)^(m-1)/(m-1)! g(t) dt` with `m = n - k`.
    pub fn eval_level(&self, k: usize, x: T) -> Result<T> {
        let i = &self.inner;
        if k > i.order {
            return Err(Error::InvalidParameter(format!("level {k} exceeds order {}", i.order)));
        }
        let p = poly_derivative(&i.poly, k, x);
        if k == i.order {
            return Ok(i.density.eval(x)? + p);
        }
        if x == T::zero() {
            return Ok(p);
        }
        let key = (k, x.memo_key());
        if let Some(v) = i.memo.lock().expect("memo lock").get(&key) {
            return Ok(*v + p);
        }
        let m = i.order - k;
        let integrand = if m == 1 {
            i.density.clone()
        } else {
            let w = FunctionExpr::constant(x)
                .sub(&FunctionExpr::x())
                .powf(T::from_usize_lossy(m - 1))
                .scale(T::one() / factorial::<T>(m - 1));
            i.density.mul(&w)
        };
        let v = integrate(&integrand, T::zero(), x, &i.cfg)?.certified()?;
        i.memo.lock().expect("memo lock").insert(key, v);
        Ok(v + p)
    }

    /// `G = G^(0)`.
    pub fn eval(&self, x: T) -> Result<T> {
        self.eval_level(0, x)
    }

    /// `G^(n)` as an expression: the density plus the `n`-th derivative of
    /// the added polynomial, which vanishes.
    fn top(&self) -> FunctionExpr<T> {
        let i = &self.inner;
        let mut e = i.density.clone();
        for (deg, c) in i.poly.iter().enumerate().skip(i.order) {
            let coeff = *c * factorial::<T>(deg) / factorial::<T>(deg - i.order);
            e = e.add(&FunctionExpr::x().powf(T::from_usize_lossy(deg - i.order)).scale(coeff));
        }
        e
    }
}

/// `∫ f G = (-1)^n ∫ F G^(n)`.
pub fn pair_n<T: Real>(f: &NthDistribution<T>, g: &IteratedMultiplier<T>, cfg: &QuadConfig<T>) -> Result<T> {
    if f.order() != g.order() {
        return Err(Error::ExponentMismatch(format!(
            "orders differ: distribution {} and multiplier {}",
            f.order(),
            g.order()
        )));
    }
    check_conjugate(f.p(), g.q())?;
    let top = g.top();
    if f.as_distribution().is_zero() || top.is_zero() {
        return Ok(T::zero());
    }
    let v = integrate_line(&f.primitive().mul(&top), cfg)?.certified()?;
    Ok(if f.order() % 2 == 1 { -v } else { v })
}

/// Both sides of `∫ F^(n) G = (-1)^m ∫ F^(n-m) G^(m)` for smooth,
/// rapidly decaying `F`, with `G^(n) = g`.
pub fn intermediate_identity_check<T: Real>(
    big_f: &FunctionExpr<T>,
    g: &FunctionExpr<T>,
    n: usize,
    m: usize,
    cfg: &QuadConfig<T>,
) -> Result<(T, T)> {
    check_order(n)?;
    if n > MAX_ORDER || m > n {
        return Err(Error::InvalidParameter(format!("need m <= n <= {MAX_ORDER}, got n = {n}, m = {m}")));
    }
    let fast = matches!(
        big_f.decay_class(),
        DecayClass::Gaussian | DecayClass::Exponential | DecayClass::Compact
    );
    if !big_f.is_smooth() || !fast {
        return Err(Error::InvalidParameter(
            "the identity needs an infinitely differentiable F with gaussian or exponential decay".into(),
        ));
    }
    let gm = IteratedMultiplier::local(g.clone(), T::lit(2.0), n, cfg)?;
    let prof = big_f.profile();
    let side = |k: usize| -> Result<T> {
        let d = n - k;
        let h = |x: T| {
            let fd = match big_f.eval_jet(x, d) {
                Ok(j) => j.derivatives()[d],
                Err(_) => return T::nan(),
            };
            if fd == T::zero() {
                return T::zero();
            }
            gm.eval_level(k, x).map(|v| fd * v).unwrap_or(T::nan())
        };
        let profile = Profile {
            singularities: vec![],
            breakpoints: vec![],
            centres: prof.landmarks(),
            support: prof.support,
            tails: prof.tails,
            smooth: true,
        };
        let v = integrate_line_fn(&h, &profile, cfg)?.certified()?;
        Ok(if k % 2 == 1 { -v } else { v })
    };
    Ok((side(0)?, side(m)?))
}

/// `sup_x |∫_{-∞}^x F|` for compactly supported `F`, attained at an end of
/// the support or at a sign change of `F`.
pub fn alexiewicz_norm<T: Real>(big_f: &FunctionExpr<T>, cfg: &QuadConfig<T>) -> Result<T> {
    let (a, b) = match big_f.support() {
        Support::Empty => return Ok(T::zero()),
        Support::Interval(a, b) if a.is_finite() && b.is_finite() => (a, b),
        _ => return Err(Error::InvalidParameter("the Alexiewicz norm here needs compact support".into())),
    };
    const GRID: usize = 8192;
    let at = |i: usize| a + (b - a) * T::from_usize_lossy(i) / T::from_usize_lossy(GRID);
    let mut cands = big_f.profile().split_points();
    cands.retain(|p| *p > a && *p < b);
    let mut prev = big_f.eval_raw(at(0));
    for i in 1..=GRID {
        let (x0, x1) = (at(i - 1), at(i));
        let cur = big_f.eval_raw(x1);
        if cur == T::zero() {
            cands.push(x1);
        } else if prev * cur < T::zero() {
            let (mut lo, mut hi, mut flo) = (x0, x1, prev);
            for _ in 0..80 {
                let mid = (lo + hi) * T::lit(0.5);
                if !(mid > lo && mid < hi) {
                    break;
                }
                let fm = big_f.eval_raw(mid);
                if fm * flo > T::zero() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            cands.push((lo + hi) * T::lit(0.5));
        }
        prev = cur;
    }
    cands.push(b);
    cands.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cands.dedup();
    let mut h = T::zero();
    let mut best = T::zero();
    let mut left = a;
    for c in cands {
        h = h + integrate(big_f, left, c, cfg)?.certified()?;
        best = best.max(h.abs());
        left = c;
    }
    Ok(best)
}

/// `F_m = sin(m x) χ_(0,2π)`: returns `(‖f_m‖^(n)_1, sup |∫_0^x F_m|)`,
/// which are `4` and `2/m`.
pub fn norm_comparison_example<T: Real>(m: usize, n: usize, cfg: &QuadConfig<T>) -> Result<(T, T)> {
    check_order(n)?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let f = FunctionExpr::parse("sin(x)")?
        .compose_affine(T::from_usize_lossy(m), T::zero())
        .truncate(T::zero(), T::lit(2.0) * T::PI());
    let d = NthDistribution::new(f.clone(), T::one(), n, cfg)?;
    let l1 = lp_norm(d.primitive(), T::one(), cfg)?;
    debug_assert!((l1 - d.norm()).abs() <= T::lit(1e-6));
    Ok((d.norm(), alexiewicz_norm(&f, cfg)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpspace::pair;

    type E = FunctionExpr<f64>;

    fn cfg() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    #[test]
    fn polynomial_derivatives() {
        let c = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(poly_derivative(&c, 0, 2.0), 1.0 + 4.0 + 12.0 + 32.0);
        assert_eq!(poly_derivative(&c, 1, 2.0), 2.0 + 12.0 + 48.0);
        assert_eq!(poly_derivative(&c, 3, 5.0), 24.0);
        assert_eq!(poly_derivative(&c, 4, 5.0), 0.0);
    }

    #[test]
    fn iterated_levels() {
        let g = IteratedMultiplier::new(E::parse("exp(-x^2)").unwrap(), 2.0, 2, &cfg()).unwrap();
        // G(x) = x ∫_0^x e^{-t^2} + (e^{-x^2} - 1)/2
        let x = 1.3f64;
        let want = x * std::f64::consts::PI.sqrt() / 2.0 * libm_erf(x) + ((-x * x).exp() - 1.0) / 2.0;
        assert!((g.eval(x).unwrap() - want).abs() < 1e-10);
        assert!((g.eval_level(1, x).unwrap() - std::f64::consts::PI.sqrt() / 2.0 * libm_erf(x)).abs() < 1e-10);
        assert_eq!(g.eval_level(2, 0.0).unwrap(), 1.0);
        assert_eq!(g.eval(0.0).unwrap(), 0.0);
        assert!(g.eval_level(3, 0.0).is_err());
        assert!(g.with_polynomial(&[1.0, 1.0, 1.0]).is_err());
    }

    fn libm_erf(x: f64) -> f64 {
        crate::special::erf(x)
    }

    #[test]
    fn order_one_matches_pair() {
        let f = NthDistribution::new(E::parse("indicator(0,1)").unwrap(), 2.0, 1, &cfg()).unwrap();
        let g = E::parse("exp(-x^2)").unwrap();
        let gi = IteratedMultiplier::new(g.clone(), 2.0, 1, &cfg()).unwrap();
        let m = Multiplier::new(g, 2.0, &cfg()).unwrap();
        let a = pair_n(&f, &gi, &cfg()).unwrap();
        let b = pair(f.as_distribution(), &m, &cfg()).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn second_order_sign() {
        let f = NthDistribution::new(E::parse("indicator(0,1)").unwrap(), 2.0, 2, &cfg()).unwrap();
        let g = IteratedMultiplier::new(E::parse("indicator(-2,2)").unwrap(), 2.0, 2, &cfg()).unwrap();
        assert!((pair_n(&f, &g, &cfg()).unwrap() - 1.0).abs() < 1e-12);
        let shifted = g.with_polynomial(&[3.0, -2.0]).unwrap();
        assert!((pair_n(&f, &shifted, &cfg()).unwrap() - 1.0).abs() < 1e-12);
        let g1 = IteratedMultiplier::new(E::parse("indicator(-2,2)").unwrap(), 2.0, 1, &cfg()).unwrap();
        assert!(matches!(pair_n(&f, &g1, &cfg()), Err(Error::ExponentMismatch(_))));
    }

    #[test]
    fn polynomial_annihilation() {
        let f = NthDistribution::new(E::parse("exp(-x^2)").unwrap(), 1.5, 3, &cfg()).unwrap();
        let zero = IteratedMultiplier::new(E::zero(), 3.0, 3, &cfg()).unwrap();
        let p = zero.with_polynomial(&[1.0, -4.0, 2.5]).unwrap();
        assert_eq!(pair_n(&f, &p, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn intermediate_identity() {
        let f = E::parse("exp(-x^2)").unwrap();
        let g = E::parse("exp(-x^2)").unwrap();
        for m in 0..=2 {
            let (l, r) = intermediate_identity_check(&f, &g, 2, m, &cfg()).unwrap();
            assert!((l - r).abs() < 1e-6, "m={m}: {l} vs {r}");
        }
        let (l, _) = intermediate_identity_check(&f, &g, 2, 2, &cfg()).unwrap();
        let fd = NthDistribution::new(f.clone(), 2.0, 2, &cfg()).unwrap();
        let gm = IteratedMultiplier::new(g, 2.0, 2, &cfg()).unwrap();
        assert!((l - pair_n(&fd, &gm, &cfg()).unwrap()).abs() < 1e-8);
        let kink = E::parse("exp(-abs(x))").unwrap();
        assert!(intermediate_identity_check(&kink, &f, 2, 1, &cfg()).is_err());
    }

    #[test]
    fn norm_comparison() {
        for m in [1usize, 10, 100] {
            let (a, b) = norm_comparison_example::<f64>(m, 1, &cfg()).unwrap();
            assert!((a - 4.0).abs() < 1e-8, "{a}");
            assert!((b - 2.0 / m as f64).abs() < 1e-8, "{b}");
        }
    }
}
