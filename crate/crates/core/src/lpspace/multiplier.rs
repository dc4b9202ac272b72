use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::funcrepr::ast::OpaqueFn;
use crate::funcrepr::{FunctionExpr, Profile, Support, Tail};
use crate::lpspace::check_q;
use crate::lpspace::distribution::not_in_lp;
use crate::quadrature::{integrate, lp_norm_result, sup_norm, QuadConfig};
use crate::scalar::Real;

struct Inner<T: Real> {
    density: FunctionExpr<T>,
    q: T,
    norm: Option<T>,
    cfg: QuadConfig<T>,
    memo: Mutex<HashMap<u64, T>>,
}

/// `G(x) = ∫_0^x g` with `g ∈ L^q`, normed by `‖G‖_{I,q} = ‖g‖_q`.
///
/// Values of `G` are computed by quadrature from 0 and memoized, so the
/// handle is cheap to clone and safe to share between threads.
#[derive(Clone)]
pub struct Multiplier<T: Real> {
    inner: Arc<Inner<T>>,
}

impl<T: Real> fmt::Debug for Multiplier<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier")
            .field("density", &self.inner.density.to_string())
            .field("q", &self.inner.q)
            .field("norm", &self.inner.norm)
            .finish()
    }
}

impl<T: Real> fmt::Display for Multiplier<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I[{}] in I^{}", self.inner.density, self.inner.q)
    }
}

impl<T: Real> Multiplier<T> {
    fn build(density: FunctionExpr<T>, q: T, norm: Option<T>, cfg: QuadConfig<T>) -> Self {
        Multiplier {
            inner: Arc::new(Inner {
                density,
                q,
                norm,
                cfg,
                memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// Checks `g ∈ L^q` (boundedness when `q = ∞`) and caches `‖g‖_q`.
    pub fn new(density: FunctionExpr<T>, q: T, cfg: &QuadConfig<T>) -> Result<Self> {
        check_q(q)?;
        let norm = if q.is_infinite() {
            sup_norm(&density, cfg).map_err(|e| Error::NotInLp {
                p: f64::INFINITY,
                reason: e.to_string(),
            })?
        } else {
            let r = lp_norm_result(&density, q, cfg).map_err(|e| not_in_lp(q, e))?;
            r.certified()?
        };
        Ok(Multiplier::build(density, q, Some(norm), cfg.clone()))
    }

    /// A multiplier whose density is only locally in `L^q`, such as
    /// `e^(-x)`. Pairings still make sense against compactly supported
    /// primitives; the norm is unavailable.
    pub fn local(density: FunctionExpr<T>, q: T) -> Result<Self> {
        check_q(q)?;
        Ok(Multiplier::build(density, q, None, QuadConfig::default()))
    }

    /// Same as [`local`](Self::local) with a given quadrature configuration
    /// for evaluating `G`.
    pub fn local_with(density: FunctionExpr<T>, q: T, cfg: &QuadConfig<T>) -> Result<Self> {
        check_q(q)?;
        Ok(Multiplier::build(density, q, None, cfg.clone()))
    }

    pub fn density(&self) -> &FunctionExpr<T> {
        &self.inner.density
    }

    pub fn q(&self) -> T {
        self.inner.q
    }

    /// `‖G‖_{I,q} = ‖g‖_q`; `None` for local multipliers.
    pub fn norm(&self) -> Option<T> {
        self.inner.norm
    }

    /// `G(x) = ∫_0^x g`.
    pub fn eval(&self, x: T) -> Result<T> {
        if x == T::zero() {
            return Ok(T::zero());
        }
        let key = x.memo_key();
        if let Some(v) = self.inner.memo.lock().expect("memo lock").get(&key) {
            return Ok(*v);
        }
        let v = integrate(&self.inner.density, T::zero(), x, &self.inner.cfg)?.certified()?;
        self.inner.memo.lock().expect("memo lock").insert(key, v);
        Ok(v)
    }

    /// Number of memoized values of `G`.
    pub fn memo_len(&self) -> usize {
        self.inner.memo.lock().expect("memo lock").len()
    }

    /// `G` as a function expression backed by the memoized quadrature.
    pub fn antiderivative(&self) -> FunctionExpr<T> {
        FunctionExpr::opaque(Arc::new(Antiderivative { m: self.clone() }))
    }

    /// Metadata for `G` derived from that of `g`.
    fn antiderivative_profile(&self) -> Profile<T> {
        let gp = self.inner.density.profile();
        let mut breakpoints = gp.split_points();
        breakpoints.retain(|p| p.is_finite());
        let bounded_tail = |t: Tail<T>| t.integrable();
        let grow = if self.inner.q.is_infinite() {
            -T::one()
        } else {
            T::one() / self.inner.q - T::one()
        };
        let tail = |side: usize| match gp.support {
            Support::Empty => Tail::Zero,
            _ if bounded_tail(gp.tails[side]) => Tail::Power(T::zero()),
            _ => Tail::Power(grow),
        };
        let support = if gp.support == Support::Empty {
            Support::Empty
        } else {
            Support::all()
        };
        Profile {
            singularities: vec![],
            breakpoints,
            centres: gp.centres.clone(),
            support,
            tails: [tail(0), tail(1)],
            smooth: gp.smooth,
        }
    }
}

#[derive(Debug)]
struct Antiderivative<T: Real> {
    m: Multiplier<T>,
}

impl<T: Real> OpaqueFn<T> for Antiderivative<T> {
    fn name(&self) -> String {
        format!("antiderivative[{}]", self.m.density())
    }

    fn eval(&self, u: T) -> T {
        self.m.eval(u).unwrap_or(T::nan())
    }

    fn profile(&self) -> Profile<T> {
        self.m.antiderivative_profile()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = FunctionExpr<f64>;

    #[test]
    fn norms_and_values() {
        let cfg = QuadConfig::default();
        let m = Multiplier::new(E::parse("indicator(0,1)").unwrap(), 3.0, &cfg).unwrap();
        assert!((m.norm().unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(m.eval(0.0).unwrap(), 0.0);
        assert!((m.eval(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((m.eval(7.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(m.eval(-3.0).unwrap(), 0.0);
        assert_eq!(m.memo_len(), 3);
        m.eval(0.5).unwrap();
        assert_eq!(m.memo_len(), 3);

        let h = Multiplier::new(E::parse("piecewise(x > 0 -> 1, 0)").unwrap(), f64::INFINITY, &cfg).unwrap();
        assert_eq!(h.norm(), Some(1.0));
        assert!((h.eval(3.0).unwrap() - 3.0).abs() < 1e-14);

        assert!(matches!(
            Multiplier::new(E::parse("exp(-x)").unwrap(), 2.0, &cfg),
            Err(Error::NotInLp { .. })
        ));
        let loc = Multiplier::local(E::parse("exp(-x)").unwrap(), 2.0).unwrap();
        assert!((loc.eval(1.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-14);
        assert!(loc.norm().is_none());
    }

    #[test]
    fn antiderivative_expression() {
        let cfg = QuadConfig::default();
        let m = Multiplier::new(E::parse("exp(-x^2)").unwrap(), 2.0, &cfg).unwrap();
        let g = m.antiderivative();
        let want = std::f64::consts::PI.sqrt() / 2.0 * crate::special::erf(1.5);
        assert!((g.eval(1.5).unwrap() - want).abs() < 1e-12);
        assert!(g.profile().bounded());
    }
}
