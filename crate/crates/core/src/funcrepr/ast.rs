//! Expression tree for real functions of one variable.

use std::fmt::Debug;
use std::sync::Arc;

use crate::funcrepr::profile::Profile;
use crate::scalar::Real;

pub type NodeRef<T> = Arc<Node<T>>;

/// Elementary unary functions understood by the DSL.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Tan,
    Atan,
    Erf,
    Abs,
    Sgn,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Atan => "atan",
            Func::Erf => "erf",
            Func::Abs => "abs",
            Func::Sgn => "sgn",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "atan" | "arctan" => Func::Atan,
            "erf" => Func::Erf,
            "abs" => Func::Abs,
            "sgn" | "sign" => Func::Sgn,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

/// Comparison used in `piecewise` guards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
            Rel::Eq => "==",
            Rel::Ne => "!=",
        }
    }

    pub fn holds<T: Real>(self, lhs: T, rhs: T) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Gt => lhs > rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ne => lhs != rhs,
        }
    }
}

/// One comparison `lhs rel rhs`.
#[derive(Clone, Debug)]
pub struct Clause<T: Real> {
    pub lhs: NodeRef<T>,
    pub rel: Rel,
    pub rhs: NodeRef<T>,
}

/// Conjunction of clauses.
#[derive(Clone, Debug)]
pub struct Cond<T: Real> {
    pub clauses: Vec<Clause<T>>,
}

/// A black-box function of one variable, typically backed by quadrature
/// (convolutions, antiderivatives, harmonic extensions).
pub trait OpaqueFn<T: Real>: Send + Sync + Debug {
    /// Short label used by the printer.
    fn name(&self) -> String;

    /// Value at `u`; `NaN` signals a domain failure.
    fn eval(&self, u: T) -> T;

    /// Metadata in the function's own variable.
    fn profile(&self) -> Profile<T>;
}

#[derive(Clone, Debug)]
pub enum Node<T: Real> {
    Const(T),
    X,
    Neg(NodeRef<T>),
    Bin(BinOp, NodeRef<T>, NodeRef<T>),
    Call(Func, NodeRef<T>),
    /// Characteristic function of the open interval `(lo, hi)` applied to `arg`.
    Indicator {
        lo: T,
        hi: T,
        arg: NodeRef<T>,
    },
    /// First arm whose guard holds wins; `otherwise` applies when none does.
    Piecewise {
        arms: Vec<(Cond<T>, NodeRef<T>)>,
        otherwise: NodeRef<T>,
    },
    /// Finite-level piecewise linear approximant of the Cantor function,
    /// extended by 0 on the left and 1 on the right.
    Cantor {
        level: u32,
        arg: NodeRef<T>,
    },
    Opaque {
        func: Arc<dyn OpaqueFn<T>>,
        arg: NodeRef<T>,
    },
}

impl<T: Real> Node<T> {
    pub fn constant(c: T) -> NodeRef<T> {
        Arc::new(Node::Const(c))
    }

    pub fn x() -> NodeRef<T> {
        Arc::new(Node::X)
    }

    pub fn bin(op: BinOp, a: NodeRef<T>, b: NodeRef<T>) -> NodeRef<T> {
        Arc::new(Node::Bin(op, a, b))
    }

    pub fn call(f: Func, a: NodeRef<T>) -> NodeRef<T> {
        Arc::new(Node::Call(f, a))
    }

    pub fn as_const(&self) -> Option<T> {
        match self {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// True when the tree does not reference the variable.
    pub fn is_constant(&self) -> bool {
        match self {
            Node::Const(_) => true,
            Node::X => false,
            Node::Neg(a) | Node::Call(_, a) => a.is_constant(),
            Node::Bin(_, a, b) => a.is_constant() && b.is_constant(),
            Node::Indicator { arg, .. } | Node::Cantor { arg, .. } | Node::Opaque { arg, .. } => {
                arg.is_constant()
            }
            Node::Piecewise { arms, otherwise } => {
                otherwise.is_constant()
                    && arms.iter().all(|(c, e)| {
                        e.is_constant()
                            && c.clauses.iter().all(|cl| cl.lhs.is_constant() && cl.rhs.is_constant())
                    })
            }
        }
    }

    /// Replaces the variable by `a*x + b` throughout the tree.
    pub fn substitute_affine(node: &NodeRef<T>, a: T, b: T) -> NodeRef<T> {
        let rec = |n: &NodeRef<T>| Node::substitute_affine(n, a, b);
        Arc::new(match &**node {
            Node::Const(c) => Node::Const(*c),
            Node::X => {
                let ax = if a == T::one() {
                    Node::x()
                } else {
                    Node::bin(BinOp::Mul, Node::constant(a), Node::x())
                };
                if b == T::zero() {
                    return ax;
                }
                Node::Bin(BinOp::Add, ax, Node::constant(b))
            }
            Node::Neg(x) => Node::Neg(rec(x)),
            Node::Bin(op, l, r) => Node::Bin(*op, rec(l), rec(r)),
            Node::Call(f, x) => Node::Call(*f, rec(x)),
            Node::Indicator { lo, hi, arg } => Node::Indicator {
                lo: *lo,
                hi: *hi,
                arg: rec(arg),
            },
            Node::Piecewise { arms, otherwise } => Node::Piecewise {
                arms: arms
                    .iter()
                    .map(|(c, e)| {
                        (
                            Cond {
                                clauses: c
                                    .clauses
                                    .iter()
                                    .map(|cl| Clause {
                                        lhs: rec(&cl.lhs),
                                        rel: cl.rel,
                                        rhs: rec(&cl.rhs),
                                    })
                                    .collect(),
                            },
                            rec(e),
                        )
                    })
                    .collect(),
                otherwise: rec(otherwise),
            },
            Node::Cantor { level, arg } => Node::Cantor {
                level: *level,
                arg: rec(arg),
            },
            Node::Opaque { func, arg } => Node::Opaque {
                func: func.clone(),
                arg: rec(arg),
            },
        })
    }
}
