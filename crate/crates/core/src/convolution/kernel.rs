//! Convolution of two expressions as a quadrature-backed function.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::funcrepr::ast::OpaqueFn;
use crate::funcrepr::profile::sort_dedup;
use crate::funcrepr::{FunctionExpr, Profile, Support, Tail};
use crate::quadrature::{integrate_line, QuadConfig};
use crate::scalar::Real;

/// Split points of a convolution are sums of those of the factors; beyond
/// this many the list is dropped and adaptivity has to find them.
const MAX_SPLITS: usize = 256;

/// Tolerance factor of the inner integral relative to the outer one.
pub(crate) const INNER_TIGHTEN: f64 = 1e-2;
/// Panel budget of one inner integral. Results that stop short of the
/// tightened tolerance are still judged against the outer one.
pub(crate) const INNER_PANELS: usize = 4096;

pub(crate) fn inner_cfg<T: Real>(cfg: &QuadConfig<T>) -> QuadConfig<T> {
    let mut c = cfg.clone();
    c.abs_tol = cfg.abs_tol * T::lit(INNER_TIGHTEN);
    c.rel_tol = cfg.rel_tol * T::lit(INNER_TIGHTEN);
    c.max_panels = cfg.max_panels.min(INNER_PANELS);
    c
}

/// `min(1, (1 + |x|)^(-β))` for a claimed `Power(β)` tail on the side of
/// `x`, else `1`. Inner absolute tolerances are scaled by it so that
/// quadrature noise far out decays at least as fast as the claim.
/// Still integrable, so pointwise errors below `tol * envelope` sum to a
/// bounded multiple of `tol`.
const ENVELOPE_POWER: f64 = 1.25;

pub(crate) fn tail_envelope<T: Real>(tails: &[Tail<T>; 2], x: T) -> T {
    match tails[if x < T::zero() { 0 } else { 1 }] {
        Tail::Power(b) if b > T::zero() => (T::one() + x.abs())
            .powf(-b.min(T::lit(ENVELOPE_POWER)))
            .max(T::epsilon() * T::min_positive_value().sqrt()),
        _ => T::one(),
    }
}

/// `x ↦ ∫ a(y) b(x - y) dy`, memoized by `x`.
pub(crate) struct Conv<T: Real> {
    pub a: FunctionExpr<T>,
    pub b: FunctionExpr<T>,
    pub cfg: QuadConfig<T>,
    tails: [Tail<T>; 2],
    memo: Mutex<HashMap<u64, T>>,
}

impl<T: Real> fmt::Debug for Conv<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Conv({} * {})", self.a, self.b)
    }
}

impl<T: Real> Conv<T> {
    pub fn new(a: &FunctionExpr<T>, b: &FunctionExpr<T>, cfg: &QuadConfig<T>) -> Self {
        Conv {
            a: a.clone(),
            b: b.clone(),
            cfg: inner_cfg(cfg),
            tails: conv_profile(a.profile(), b.profile()).tails,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn value(&self, x: T) -> crate::error::Result<T> {
        let mut cfg = self.cfg.clone();
        cfg.abs_tol = cfg.abs_tol * tail_envelope(&self.tails, x);
        convolve_at(&self.a, &self.b, x, &cfg)
    }
}

/// `∫ a(y) b(x - y) dy`, with its error estimate.
pub(crate) fn convolve_at<T: Real>(
    a: &FunctionExpr<T>,
    b: &FunctionExpr<T>,
    x: T,
    cfg: &QuadConfig<T>,
) -> crate::error::Result<T> {
    if a.is_zero() || b.is_zero() {
        return Ok(T::zero());
    }
    let integrand = a.mul(&b.compose_affine(-T::one(), x));
    Ok(integrate_line(&integrand, cfg)?.value)
}

/// Metadata of `a * b` from that of the factors.
pub(crate) fn conv_profile<T: Real>(a: &Profile<T>, b: &Profile<T>) -> Profile<T> {
    let support = match (a.support, b.support) {
        (Support::Interval(a0, a1), Support::Interval(b0, b1)) => Support::Interval(a0 + b0, a1 + b1),
        _ => Support::Empty,
    };
    let (pa, pb) = (a.split_points(), b.split_points());
    let mut breakpoints = vec![];
    if pa.len() * pb.len() <= MAX_SPLITS {
        for u in &pa {
            for v in &pb {
                breakpoints.push(*u + *v);
            }
        }
    }
    // A jump of one factor against a kink-free other factor leaves the
    // convolution continuous; its ends are still worth splitting at.
    if let Support::Interval(lo, hi) = support {
        breakpoints.push(lo);
        breakpoints.push(hi);
    }
    sort_dedup(&mut breakpoints);
    let mut centres = vec![];
    for u in a.centres.iter().chain([&T::zero()]) {
        for v in b.centres.iter().chain([&T::zero()]) {
            centres.push(*u + *v);
        }
    }
    sort_dedup(&mut centres);
    centres.retain(|p| !breakpoints.contains(p));
    let tail = |side: usize| -> Tail<T> {
        match (a.tails[side], b.tails[side]) {
            (Tail::Zero, t) | (t, Tail::Zero) => {
                if support.is_compact() {
                    Tail::Zero
                } else {
                    t
                }
            }
            (ta, tb) => ta.worse(tb),
        }
    };
    Profile {
        singularities: vec![],
        breakpoints,
        centres,
        support,
        tails: [tail(0), tail(1)],
        smooth: a.smooth || b.smooth,
    }
}

impl<T: Real> OpaqueFn<T> for Conv<T> {
    fn name(&self) -> String {
        format!("conv[{}, {}]", self.a, self.b)
    }

    fn eval(&self, x: T) -> T {
        let key = x.memo_key();
        if let Some(v) = self.memo.lock().expect("memo lock").get(&key) {
            return *v;
        }
        let v = self.value(x).unwrap_or(T::nan());
        self.memo.lock().expect("memo lock").insert(key, v);
        v
    }

    fn profile(&self) -> Profile<T> {
        conv_profile(self.a.profile(), self.b.profile())
    }
}

/// `a * b` as an expression.
pub(crate) fn conv_expr<T: Real>(a: &FunctionExpr<T>, b: &FunctionExpr<T>, cfg: &QuadConfig<T>) -> FunctionExpr<T> {
    if a.is_zero() || b.is_zero() {
        return FunctionExpr::zero();
    }
    FunctionExpr::opaque(Arc::new(Conv::new(a, b, cfg)))
}
