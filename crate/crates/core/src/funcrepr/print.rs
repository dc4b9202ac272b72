//! Fully parenthesized printer; output re-parses to an equivalent tree
//! unless it contains opaque nodes.

use std::fmt::Write;

use crate::funcrepr::ast::{Cond, Node};
use crate::scalar::Real;

fn number<T: Real>(v: T, out: &mut String) {
    if v.is_infinite() {
        out.push_str(if v > T::zero() { "inf" } else { "(-inf)" });
    } else if v < T::zero() {
        let _ = write!(out, "({:?})", v);
    } else {
        let _ = write!(out, "{:?}", v);
    }
}

fn cond<T: Real>(c: &Cond<T>, out: &mut String) {
    for (i, cl) in c.clauses.iter().enumerate() {
        if i > 0 {
            out.push_str(" && ");
        }
        node(&cl.lhs, out);
        let _ = write!(out, " {} ", cl.rel.symbol());
        node(&cl.rhs, out);
    }
}

pub fn node<T: Real>(n: &Node<T>, out: &mut String) {
    match n {
        Node::Const(c) => number(*c, out),
        Node::X => out.push('x'),
        Node::Neg(a) => {
            out.push_str("(-");
            node(a, out);
            out.push(')');
        }
        Node::Bin(op, a, b) => {
            out.push('(');
            node(a, out);
            let _ = write!(out, " {} ", op.symbol());
            node(b, out);
            out.push(')');
        }
        Node::Call(f, a) => {
            out.push_str(f.name());
            out.push('(');
            node(a, out);
            out.push(')');
        }
        Node::Indicator { lo, hi, arg } => {
            out.push_str("indicator(");
            number(*lo, out);
            out.push_str(", ");
            number(*hi, out);
            out.push_str(", ");
            node(arg, out);
            out.push(')');
        }
        Node::Piecewise { arms, otherwise } => {
            out.push_str("piecewise(");
            for (c, e) in arms {
                cond(c, out);
                out.push_str(" -> ");
                node(e, out);
                out.push_str(", ");
            }
            node(otherwise, out);
            out.push(')');
        }
        Node::Cantor { level, arg } => {
            let _ = write!(out, "cantor({level}, ");
            node(arg, out);
            out.push(')');
        }
        Node::Opaque { func, arg } => {
            let _ = write!(out, "@{}(", func.name());
            node(arg, out);
            out.push(')');
        }
    }
}

pub fn to_string<T: Real>(n: &Node<T>) -> String {
    let mut s = String::new();
    node(n, &mut s);
    s
}
