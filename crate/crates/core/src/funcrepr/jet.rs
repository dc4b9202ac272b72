//! Truncated Taylor arithmetic (forward mode, order ≤ 4).

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::JetError;
use crate::funcrepr::ast::{BinOp, Func, Node};
use crate::funcrepr::eval::{cantor, cond_holds, eval_node, integer_exponent};
use crate::scalar::Real;

pub const MAX_ORDER: usize = 4;
const N: usize = MAX_ORDER + 1;

/// Normalized Taylor coefficients `c[k] = f^(k)(x) / k!` up to `order`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T: Real> {
    pub order: usize,
    pub c: [T; N],
}

/// First-order jet in value/derivative form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualValue<T: Real> {
    pub value: T,
    pub derivative: T,
}

impl<T: Real> From<Jet<T>> for DualValue<T> {
    fn from(j: Jet<T>) -> Self {
        DualValue {
            value: j.c[0],
            derivative: if j.order >= 1 { j.c[1] } else { T::zero() },
        }
    }
}

impl<T: Real> Jet<T> {
    pub fn constant(v: T, order: usize) -> Self {
        let mut c = [T::zero(); N];
        c[0] = v;
        Jet { order, c }
    }

    /// The identity jet at `x`.
    pub fn variable(x: T, order: usize) -> Self {
        let mut j = Jet::constant(x, order);
        if order >= 1 {
            j.c[1] = T::one();
        }
        j
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    /// `(f, f', ..., f^(order))`.
    pub fn derivatives(&self) -> Vec<T> {
        let mut fact = T::one();
        (0..=self.order)
            .map(|k| {
                if k > 0 {
                    fact = fact * T::from_usize_lossy(k);
                }
                self.c[k] * fact
            })
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.c[..=self.order].iter().all(|v| v.is_finite())
    }

    fn scale(mut self, s: T) -> Self {
        for k in 0..=self.order {
            self.c[k] = self.c[k] * s;
        }
        self
    }

    /// Formal derivative, one order lower.
    fn derivative(&self) -> Self {
        let mut out = Jet::constant(T::zero(), self.order.saturating_sub(1));
        for k in 0..self.order {
            out.c[k] = self.c[k + 1] * T::from_usize_lossy(k + 1);
        }
        out
    }

    /// Antiderivative of `self` (one order lower) with constant term `c0`.
    fn integrate(d: &Self, c0: T, order: usize) -> Self {
        let mut out = Jet::constant(c0, order);
        for k in 1..=order {
            out.c[k] = d.c[k - 1] / T::from_usize_lossy(k);
        }
        out
    }

    fn with_order(mut self, order: usize) -> Self {
        for k in order + 1..N {
            self.c[k] = T::zero();
        }
        self.order = order;
        self
    }

    pub fn recip(&self) -> Self {
        Jet::constant(T::one(), self.order) / *self
    }

    pub fn exp(&self) -> Self {
        let mut e = Jet::constant(self.c[0].exp(), self.order);
        for k in 1..=self.order {
            let mut s = T::zero();
            for j in 1..=k {
                s = s + T::from_usize_lossy(j) * self.c[j] * e.c[k - j];
            }
            e.c[k] = s / T::from_usize_lossy(k);
        }
        e
    }

    pub fn ln(&self) -> Self {
        let a0 = self.c[0];
        let mut l = Jet::constant(a0.ln(), self.order);
        for k in 1..=self.order {
            let mut s = T::zero();
            for j in 1..k {
                s = s + T::from_usize_lossy(j) * l.c[j] * self.c[k - j];
            }
            l.c[k] = (self.c[k] - s / T::from_usize_lossy(k)) / a0;
        }
        l
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let mut s = Jet::constant(self.c[0].sin(), self.order);
        let mut c = Jet::constant(self.c[0].cos(), self.order);
        for k in 1..=self.order {
            let mut ss = T::zero();
            let mut cc = T::zero();
            for j in 1..=k {
                let w = T::from_usize_lossy(j) * self.c[j];
                ss = ss + w * c.c[k - j];
                cc = cc + w * s.c[k - j];
            }
            s.c[k] = ss / T::from_usize_lossy(k);
            c.c[k] = -cc / T::from_usize_lossy(k);
        }
        (s, c)
    }

    pub fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut result = Jet::constant(T::one(), self.order);
        let mut base = *self;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            e >>= 1;
        }
        result
    }

    /// `self^r` for a real constant `r`; requires a nonzero value.
    pub fn powf(&self, r: T) -> Self {
        let a0 = self.c[0];
        let mut p = Jet::constant(a0.powf(r), self.order);
        for k in 1..=self.order {
            let mut s = T::zero();
            for j in 1..=k {
                let w = r * T::from_usize_lossy(j) - T::from_usize_lossy(k - j);
                s = s + w * self.c[j] * p.c[k - j];
            }
            p.c[k] = s / (T::from_usize_lossy(k) * a0);
        }
        p
    }

    pub fn atan(&self) -> Self {
        if self.order == 0 {
            return Jet::constant(self.c[0].atan(), 0);
        }
        let inner = self.with_order(self.order - 1);
        let d = self.derivative() / (Jet::constant(T::one(), self.order - 1) + inner * inner);
        Jet::integrate(&d, self.c[0].atan(), self.order)
    }

    pub fn erf(&self) -> Self {
        if self.order == 0 {
            return Jet::constant(self.c[0].erf(), 0);
        }
        let inner = self.with_order(self.order - 1);
        let w = T::lit(2.0) / T::PI().sqrt();
        let d = self.derivative() * (-(inner * inner)).exp().scale(w);
        Jet::integrate(&d, self.c[0].erf(), self.order)
    }

    /// Composes an outer function given by its Taylor coefficients at
    /// `self.value()` with this jet.
    fn compose(&self, outer: [T; N]) -> Self {
        let mut h = *self;
        h.c[0] = T::zero();
        let mut out = Jet::constant(outer[0], self.order);
        let mut pw = Jet::constant(T::one(), self.order);
        for k in 1..=self.order {
            pw = pw * h;
            out = out + pw.scale(outer[k]);
        }
        out
    }
}

impl<T: Real> Add for Jet<T> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for k in 0..N {
            self.c[k] = self.c[k] + o.c[k];
        }
        self.order = self.order.min(o.order);
        self.with_order(self.order)
    }
}

impl<T: Real> Sub for Jet<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let order = self.order.min(o.order);
        let mut out = Jet::constant(T::zero(), order);
        for k in 0..=order {
            let mut s = T::zero();
            for i in 0..=k {
                s = s + self.c[i] * o.c[k - i];
            }
            out.c[k] = s;
        }
        out
    }
}

impl<T: Real> Div for Jet<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let order = self.order.min(o.order);
        let mut out = Jet::constant(T::zero(), order);
        for k in 0..=order {
            let mut s = self.c[k];
            for i in 1..=k {
                s = s - o.c[i] * out.c[k - i];
            }
            out.c[k] = s / o.c[0];
        }
        out
    }
}

fn kink<T: Real>(x: T) -> JetError {
    JetError::Kink(x.as_f64())
}

/// Propagates a jet through the tree. `x` is the base point, used only
/// for error reporting.
pub fn jet_node<T: Real>(node: &Node<T>, x: Jet<T>) -> Result<Jet<T>, JetError> {
    let order = x.order;
    let at = x.value();
    Ok(match node {
        Node::Const(c) => Jet::constant(*c, order),
        Node::X => x,
        Node::Neg(a) => -jet_node(a, x)?,
        Node::Bin(op, a, b) => {
            let l = jet_node(a, x)?;
            match op {
                BinOp::Add => l + jet_node(b, x)?,
                BinOp::Sub => l - jet_node(b, x)?,
                BinOp::Mul => l * jet_node(b, x)?,
                BinOp::Div => {
                    let r = jet_node(b, x)?;
                    if r.value() == T::zero() {
                        return Err(JetError::Singular(at.as_f64()));
                    }
                    l / r
                }
                BinOp::Pow => {
                    if let Some(k) = integer_exponent(b) {
                        if k < 0 && l.value() == T::zero() {
                            return Err(JetError::Singular(at.as_f64()));
                        }
                        l.powi(k)
                    } else if b.is_constant() {
                        let r = eval_node(b, at);
                        if l.value() == T::zero() {
                            if order == 0 && r > T::zero() {
                                Jet::constant(T::zero(), 0)
                            } else {
                                return Err(JetError::Singular(at.as_f64()));
                            }
                        } else {
                            l.powf(r)
                        }
                    } else {
                        if l.value() <= T::zero() {
                            return Err(JetError::Singular(at.as_f64()));
                        }
                        (jet_node(b, x)? * l.ln()).exp()
                    }
                }
            }
        }
        Node::Call(f, a) => {
            let v = jet_node(a, x)?;
            let v0 = v.value();
            match f {
                Func::Exp => v.exp(),
                Func::Log => {
                    if v0 <= T::zero() {
                        return Err(JetError::Singular(at.as_f64()));
                    }
                    v.ln()
                }
                Func::Sqrt => {
                    if v0 < T::zero() || (v0 == T::zero() && order > 0) {
                        return Err(JetError::Singular(at.as_f64()));
                    }
                    if v0 == T::zero() {
                        Jet::constant(T::zero(), 0)
                    } else {
                        v.powf(T::lit(0.5))
                    }
                }
                Func::Sin => v.sin_cos().0,
                Func::Cos => v.sin_cos().1,
                Func::Tan => {
                    let (s, c) = v.sin_cos();
                    s / c
                }
                Func::Atan => v.atan(),
                Func::Erf => v.erf(),
                Func::Abs => {
                    if v0 > T::zero() {
                        v
                    } else if v0 < T::zero() {
                        -v
                    } else if order == 0 {
                        Jet::constant(T::zero(), 0)
                    } else {
                        return Err(kink(at));
                    }
                }
                Func::Sgn => {
                    if v0 == T::zero() && order > 0 {
                        return Err(kink(at));
                    }
                    Jet::constant(crate::funcrepr::eval::sgn(v0), order)
                }
            }
        }
        Node::Indicator { lo, hi, arg } => {
            let v0 = jet_node(arg, x)?.value();
            if order > 0 && (v0 == *lo || v0 == *hi) {
                return Err(kink(at));
            }
            Jet::constant(crate::funcrepr::eval::indicator(*lo, *hi, v0), order)
        }
        Node::Piecewise { arms, otherwise } => {
            if order > 0 {
                for (cond, _) in arms {
                    for cl in &cond.clauses {
                        if eval_node(&cl.lhs, at) == eval_node(&cl.rhs, at) {
                            return Err(kink(at));
                        }
                    }
                }
            }
            for (cond, e) in arms {
                if cond_holds(cond, at) {
                    return jet_node(e, x);
                }
            }
            jet_node(otherwise, x)?
        }
        Node::Cantor { level, arg } => {
            let v = jet_node(arg, x)?;
            let u = v.value();
            let (val, slope) = cantor(*level, u);
            if order > 0 {
                let eps = T::epsilon().sqrt() * (T::one() + u.abs());
                let left = cantor(*level, u - eps).1;
                let right = cantor(*level, u + eps).1;
                if left != right {
                    return Err(kink(at));
                }
            }
            let mut outer = [T::zero(); N];
            outer[0] = val;
            outer[1] = slope;
            v.compose(outer)
        }
        Node::Opaque { func, arg } => {
            if order > 0 {
                return Err(JetError::Opaque(func.name()));
            }
            let v = jet_node(arg, x)?;
            Jet::constant(func.eval(v.value()), 0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn polynomial_exact() {
        // (x^2 + 3x - 1)^2 at 0.5
        let x = Jet::variable(0.5f64, 4);
        let p = x * x + x.scale(3.0) - Jet::constant(1.0, 4);
        let d = (p * p).derivatives();
        // f = x^4 + 6x^3 + 7x^2 - 6x + 1
        let f = |x: f64| x.powi(4) + 6.0 * x.powi(3) + 7.0 * x * x - 6.0 * x + 1.0;
        assert!(close(d[0], f(0.5), 1e-15));
        assert!(close(d[1], 4.0 * 0.125 + 18.0 * 0.25 + 7.0 - 6.0, 1e-15));
        assert!(close(d[2], 12.0 * 0.25 + 36.0 * 0.5 + 14.0, 1e-15));
        assert!(close(d[3], 24.0 * 0.5 + 36.0, 1e-15));
        assert!(close(d[4], 24.0, 1e-15));
    }

    #[test]
    fn elementary_derivatives() {
        let x = Jet::variable(0.3f64, 4);
        let e = x.exp().derivatives();
        for v in &e {
            assert!(close(*v, 0.3f64.exp(), 1e-14));
        }
        let l = x.ln().derivatives();
        assert!(close(l[1], 1.0 / 0.3, 1e-14));
        assert!(close(l[4], -6.0 / 0.3f64.powi(4), 1e-12));
        let (s, c) = x.sin_cos();
        let (s, c) = (s.derivatives(), c.derivatives());
        assert!(close(s[3], -0.3f64.cos(), 1e-14));
        assert!(close(c[4], 0.3f64.cos(), 1e-14));
        let a = x.atan().derivatives();
        assert!(close(a[1], 1.0 / 1.09, 1e-14));
        assert!(close(a[2], -2.0 * 0.3 / (1.09f64 * 1.09), 1e-14));
        let r = x.powf(0.5).derivatives();
        assert!(close(r[2], -0.25 * 0.3f64.powf(-1.5), 1e-14));
        let er = x.erf().derivatives();
        let w = 2.0 / std::f64::consts::PI.sqrt();
        assert!(close(er[1], w * (-0.09f64).exp(), 1e-14));
        assert!(close(er[2], -2.0 * 0.3 * w * (-0.09f64).exp(), 1e-14));
    }
}
