//! Pointwise evaluation of expression trees.

use crate::funcrepr::ast::{BinOp, Cond, Func, Node};
use crate::scalar::Real;

/// Integer exponent if `e` is a constant whole number of moderate size.
pub(crate) fn integer_exponent<T: Real>(e: &Node<T>) -> Option<i32> {
    let c = e.as_const()?;
    if c.fract() == T::zero() && c.abs() <= T::lit(64.0) {
        c.to_i32()
    } else {
        None
    }
}

pub(crate) fn sgn<T: Real>(v: T) -> T {
    if v > T::zero() {
        T::one()
    } else if v < T::zero() {
        -T::one()
    } else {
        v
    }
}

pub(crate) fn indicator<T: Real>(lo: T, hi: T, v: T) -> T {
    if v.is_nan() {
        v
    } else if lo < v && v < hi {
        T::one()
    } else {
        T::zero()
    }
}

/// Level-`level` Cantor approximant, returning `(value, slope)`.
pub(crate) fn cantor<T: Real>(level: u32, u: T) -> (T, T) {
    if u.is_nan() {
        return (u, u);
    }
    if u <= T::zero() {
        return (T::zero(), T::zero());
    }
    if u >= T::one() {
        return (T::one(), T::zero());
    }
    let third = T::one() / T::lit(3.0);
    let three = T::lit(3.0);
    let half = T::lit(0.5);
    let mut u = u;
    let mut value = T::zero();
    let mut weight = T::one();
    let mut stretch = T::one();
    for _ in 0..level {
        if u < third {
            u = three * u;
        } else if u > T::one() - third {
            value = value + weight * half;
            u = three * u - T::lit(2.0);
        } else {
            return (value + weight * half, T::zero());
        }
        weight = weight * half;
        stretch = stretch * three;
    }
    (value + weight * u, weight * stretch)
}

/// Kink points of the level-`level` Cantor approximant on `[0, 1]`.
pub(crate) fn cantor_kinks(level: u32) -> Vec<f64> {
    let mut pts = vec![0.0, 1.0];
    for _ in 0..level {
        let mut next = Vec::with_capacity(pts.len() * 2);
        next.extend(pts.iter().map(|p| p / 3.0));
        next.extend(pts.iter().map(|p| 2.0 / 3.0 + p / 3.0));
        pts = next;
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

pub(crate) fn apply_func<T: Real>(f: Func, v: T) -> T {
    match f {
        Func::Exp => v.exp(),
        Func::Log => v.ln(),
        Func::Sqrt => v.sqrt(),
        Func::Sin => v.sin(),
        Func::Cos => v.cos(),
        Func::Tan => v.tan(),
        Func::Atan => v.atan(),
        Func::Erf => v.erf(),
        Func::Abs => v.abs(),
        Func::Sgn => sgn(v),
    }
}

pub(crate) fn cond_holds<T: Real>(c: &Cond<T>, x: T) -> bool {
    c.clauses
        .iter()
        .all(|cl| cl.rel.holds(eval_node(&cl.lhs, x), eval_node(&cl.rhs, x)))
}

/// Raw evaluation; non-finite results are returned as-is.
pub fn eval_node<T: Real>(node: &Node<T>, x: T) -> T {
    match node {
        Node::Const(c) => *c,
        Node::X => x,
        Node::Neg(a) => -eval_node(a, x),
        Node::Bin(op, a, b) => {
            let l = eval_node(a, x);
            match op {
                BinOp::Add => l + eval_node(b, x),
                BinOp::Sub => l - eval_node(b, x),
                BinOp::Mul => {
                    // Short-circuit exact zeros so compact factors kill
                    // unbounded partners outside their support.
                    if l == T::zero() {
                        let r = eval_node(b, x);
                        if r.is_finite() {
                            l * r
                        } else {
                            T::zero()
                        }
                    } else {
                        l * eval_node(b, x)
                    }
                }
                BinOp::Div => l / eval_node(b, x),
                BinOp::Pow => match integer_exponent(b) {
                    Some(k) => l.powi(k),
                    None => l.powf(eval_node(b, x)),
                },
            }
        }
        Node::Call(f, a) => apply_func(*f, eval_node(a, x)),
        Node::Indicator { lo, hi, arg } => indicator(*lo, *hi, eval_node(arg, x)),
        Node::Piecewise { arms, otherwise } => {
            for (cond, e) in arms {
                if cond_holds(cond, x) {
                    return eval_node(e, x);
                }
            }
            eval_node(otherwise, x)
        }
        Node::Cantor { level, arg } => cantor(*level, eval_node(arg, x)).0,
        Node::Opaque { func, arg } => func.eval(eval_node(arg, x)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_levels() {
        assert_eq!(cantor::<f64>(0, 0.25).0, 0.25);
        assert_eq!(cantor::<f64>(3, 0.5).0, 0.5);
        assert_eq!(cantor::<f64>(3, -1.0).0, 0.0);
        assert_eq!(cantor::<f64>(3, 2.0).0, 1.0);
        // C(1/4) = 1/3 in the limit; level 8 approximant is within 2^-8.
        assert!((cantor::<f64>(8, 0.25).0 - 1.0 / 3.0).abs() < 4e-3);
        // Monotone on a fine grid.
        let mut prev = 0.0;
        for i in 0..=1000 {
            let v = cantor::<f64>(5, i as f64 / 1000.0).0;
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn cantor_kink_count() {
        assert_eq!(cantor_kinks(0), vec![0.0, 1.0]);
        assert_eq!(cantor_kinks(1).len(), 4);
        assert_eq!(cantor_kinks(4).len(), 32);
    }

    #[test]
    fn sign_convention() {
        assert_eq!(sgn(0.0f64), 0.0);
        assert_eq!(sgn(-2.0f64), -1.0);
    }
}
