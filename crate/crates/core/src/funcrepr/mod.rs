//! Real functions of one variable: expression trees with metadata.

pub mod ast;
pub mod corpus;
pub mod descriptor;
pub mod eval;
pub mod jet;
pub mod parse;
pub mod print;
pub mod profile;

use std::fmt;
use std::sync::Arc;

use crate::error::{EvalError, JetError, ParseError};
use crate::scalar::Real;
use ast::{BinOp, Clause, Cond, Func, Node, NodeRef, OpaqueFn, Rel};
pub use jet::{DualValue, Jet};
pub use profile::{DecayClass, Profile, Support, Tail};

/// An immutable real function on the line.
#[derive(Clone, Debug)]
pub struct FunctionExpr<T: Real> {
    root: NodeRef<T>,
    /// Singular points declared by the user on top of the analysis.
    declared: Vec<T>,
    profile: Arc<Profile<T>>,
    label: Option<String>,
}

fn near<T: Real>(x: T, p: T) -> bool {
    (x - p).abs() <= T::lit(4.0) * T::epsilon() * (T::one() + p.abs())
}

impl<T: Real> FunctionExpr<T> {
    pub fn from_node(root: NodeRef<T>) -> Self {
        let profile = profile::analyze_tree(&root);
        FunctionExpr {
            root,
            declared: vec![],
            profile: Arc::new(profile),
            label: None,
        }
    }

    fn rebuild(&self, root: NodeRef<T>, declared: Vec<T>) -> Self {
        let mut e = FunctionExpr::from_node(root);
        e.add_declared(declared);
        e
    }

    fn add_declared(&mut self, mut declared: Vec<T>) {
        profile::sort_dedup(&mut declared);
        declared.retain(|p| self.profile.support.contains(*p));
        if declared.is_empty() {
            return;
        }
        let mut prof = (*self.profile).clone();
        prof.singularities.extend(declared.iter().copied());
        profile::sort_dedup(&mut prof.singularities);
        prof.breakpoints.retain(|p| !declared.contains(p));
        prof.smooth = false;
        self.profile = Arc::new(prof);
        self.declared = declared;
    }

    /// Parses DSL text (see [`parse`]).
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let parsed = parse::parse::<T>(text)?;
        let mut e = FunctionExpr::from_node(parsed.root);
        if let Some((a, b)) = parsed.support {
            e = e.with_support(a, b);
        }
        e.add_declared(parsed.singularities);
        Ok(e)
    }

    pub fn constant(c: T) -> Self {
        FunctionExpr::from_node(Node::constant(c))
    }

    pub fn zero() -> Self {
        FunctionExpr::constant(T::zero())
    }

    pub fn x() -> Self {
        FunctionExpr::from_node(Node::x())
    }

    /// Wraps a black-box function.
    pub fn opaque(func: Arc<dyn OpaqueFn<T>>) -> Self {
        FunctionExpr::from_node(Arc::new(Node::Opaque { func, arg: Node::x() }))
    }

    pub fn indicator(lo: T, hi: T) -> Self {
        FunctionExpr::from_node(Arc::new(Node::Indicator { lo, hi, arg: Node::x() }))
    }

    /// Declares that the function vanishes outside `[a, b]`, enforcing it.
    pub fn with_support(&self, a: T, b: T) -> Self {
        let guard = Cond {
            clauses: vec![
                Clause {
                    lhs: Node::x(),
                    rel: Rel::Gt,
                    rhs: Node::constant(a),
                },
                Clause {
                    lhs: Node::x(),
                    rel: Rel::Lt,
                    rhs: Node::constant(b),
                },
            ],
        };
        let root = Arc::new(Node::Piecewise {
            arms: vec![(guard, self.root.clone())],
            otherwise: Node::constant(T::zero()),
        });
        let mut e = self.rebuild(root, self.declared.clone());
        e.label = self.label.clone();
        e
    }

    pub fn with_singularities(&self, points: &[T]) -> Self {
        let mut e = self.clone();
        let mut all = self.declared.clone();
        all.extend_from_slice(points);
        e.profile = Arc::new(profile::analyze_tree(&e.root));
        e.add_declared(all);
        e
    }

    /// Attaches a human-readable label (used for corpus entries).
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn node(&self) -> &NodeRef<T> {
        &self.root
    }

    pub fn profile(&self) -> &Profile<T> {
        &self.profile
    }

    pub fn singularities(&self) -> &[T] {
        &self.profile.singularities
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.profile.breakpoints
    }

    pub fn support(&self) -> Support<T> {
        self.profile.support
    }

    /// Finite interval outside which the function is identically zero.
    pub fn support_hint(&self) -> Option<(T, T)> {
        self.profile.support.bounds()
    }

    pub fn decay_class(&self) -> DecayClass<T> {
        self.profile.decay_class()
    }

    pub fn is_smooth(&self) -> bool {
        self.profile.smooth
    }

    pub fn is_zero(&self) -> bool {
        self.profile.support == Support::Empty
    }

    /// Value at `x`; fails at listed singular points and on non-finite
    /// results.
    pub fn eval(&self, x: T) -> Result<T, EvalError> {
        if self.profile.singularities.iter().any(|p| *p == x) {
            return Err(EvalError::Singular(x.as_f64()));
        }
        let v = self.eval_raw(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite(x.as_f64()))
        }
    }

    /// Value at `x` without checks.
    #[inline]
    pub fn eval_raw(&self, x: T) -> T {
        eval::eval_node(&self.root, x)
    }

    /// Derivatives `(f, f', ..., f^(k))` at `x` as a Taylor jet.
    pub fn eval_jet(&self, x: T, k: usize) -> Result<Jet<T>, JetError> {
        if k > jet::MAX_ORDER {
            return Err(JetError::Order(k));
        }
        if self.profile.singularities.iter().any(|p| near(x, *p)) {
            return Err(JetError::Singular(x.as_f64()));
        }
        if k > 0 && self.profile.breakpoints.iter().any(|p| near(x, *p)) {
            return Err(JetError::Kink(x.as_f64()));
        }
        let j = jet::jet_node(&self.root, Jet::variable(x, k))?;
        if j.is_finite() {
            Ok(j)
        } else {
            Err(JetError::NonFinite(x.as_f64()))
        }
    }

    pub fn dual(&self, x: T) -> Result<DualValue<T>, JetError> {
        self.eval_jet(x, 1).map(DualValue::from)
    }

    fn binary(&self, op: BinOp, o: &Self) -> Self {
        let mut decl = self.declared.clone();
        decl.extend_from_slice(&o.declared);
        self.rebuild(Node::bin(op, self.root.clone(), o.root.clone()), decl)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.binary(BinOp::Add, o)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.binary(BinOp::Sub, o)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.binary(BinOp::Mul, o)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.binary(BinOp::Div, o)
    }

    pub fn neg(&self) -> Self {
        self.rebuild(Arc::new(Node::Neg(self.root.clone())), self.declared.clone())
    }

    pub fn scale(&self, c: T) -> Self {
        if c == T::one() {
            return self.clone();
        }
        self.rebuild(
            Node::bin(BinOp::Mul, Node::constant(c), self.root.clone()),
            self.declared.clone(),
        )
    }

    pub fn call(&self, f: Func) -> Self {
        self.rebuild(Node::call(f, self.root.clone()), self.declared.clone())
    }

    pub fn abs(&self) -> Self {
        self.call(Func::Abs)
    }

    pub fn powf(&self, r: T) -> Self {
        self.rebuild(
            Node::bin(BinOp::Pow, self.root.clone(), Node::constant(r)),
            self.declared.clone(),
        )
    }

    /// `x -> f(a x + b)`.
    pub fn compose_affine(&self, a: T, b: T) -> Self {
        let decl = self.declared.iter().map(|p| (*p - b) / a).collect();
        let mut e = self.rebuild(Node::substitute_affine(&self.root, a, b), decl);
        e.label = self.label.clone();
        e
    }

    /// Translation `x -> f(x - t)`.
    pub fn shift(&self, t: T) -> Self {
        if t == T::zero() {
            return self.clone();
        }
        self.compose_affine(T::one(), -t)
    }

    /// Reflection `x -> f(-x)`.
    pub fn reflect(&self) -> Self {
        self.compose_affine(-T::one(), T::zero())
    }

    /// Product with the indicator of `(a, b)`.
    pub fn truncate(&self, a: T, b: T) -> Self {
        self.mul(&FunctionExpr::indicator(a, b))
    }

    pub fn max(&self, o: &Self) -> Self {
        // (f + g + |f - g|) / 2
        self.add(o).add(&self.sub(o).abs()).scale(T::lit(0.5))
    }

    pub fn min(&self, o: &Self) -> Self {
        self.add(o).sub(&self.sub(o).abs()).scale(T::lit(0.5))
    }

    /// Pointwise derivative `f'` evaluated by jets. Kinks of `f` become
    /// jumps of `f'`; decay is assumed to carry over from `f`, which holds
    /// for the non-oscillatory corpus but not in general.
    pub fn derivative(&self) -> Self {
        FunctionExpr::opaque(Arc::new(Derivative { f: self.clone() }))
    }

    /// Text form that re-parses to an equivalent function when the tree
    /// has no opaque nodes.
    pub fn to_dsl(&self) -> String {
        let mut s = print::to_string(&self.root);
        if !self.declared.is_empty() {
            s.push_str("; sing(");
            let pts: Vec<String> = self.declared.iter().map(|p| format!("{:?}", p)).collect();
            s.push_str(&pts.join(", "));
            s.push(')');
        }
        s
    }
}

#[derive(Debug)]
struct Derivative<T: Real> {
    f: FunctionExpr<T>,
}

impl<T: Real> OpaqueFn<T> for Derivative<T> {
    fn name(&self) -> String {
        format!("d[{}]", self.f.to_dsl())
    }

    fn eval(&self, u: T) -> T {
        self.f.dual(u).map(|d| d.derivative).unwrap_or(T::nan())
    }

    fn profile(&self) -> Profile<T> {
        let p = self.f.profile();
        Profile {
            singularities: p.singularities.clone(),
            breakpoints: p.breakpoints.clone(),
            centres: p.centres.clone(),
            support: p.support,
            tails: p.tails,
            smooth: p.smooth,
        }
    }
}

impl<T: Real> fmt::Display for FunctionExpr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l}"),
            None => write!(f, "{}", self.to_dsl()),
        }
    }
}

impl<T: Real> std::str::FromStr for FunctionExpr<T> {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FunctionExpr::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = FunctionExpr<f64>;

    #[test]
    fn parse_metadata() {
        let g = E::parse("exp(-x^2)").unwrap();
        assert_eq!(g.decay_class(), DecayClass::Gaussian);
        assert!(g.is_smooth());
        let i = E::parse("indicator(0,1)").unwrap();
        assert_eq!(i.support_hint(), Some((0.0, 1.0)));
        let c = E::parse("abs(x)^(-0.25)*exp(-abs(x))").unwrap();
        assert_eq!(c.singularities(), &[0.0]);
        assert_eq!(c.decay_class(), DecayClass::Exponential);
        assert!(c.eval(0.0).is_err());
        let t = E::parse("x*(abs(x)+1)^(-3)").unwrap();
        assert_eq!(t.decay_class(), DecayClass::Power(2.0));
        assert!(t.singularities().is_empty());
        let h = E::parse("piecewise(x > 0 -> 1, 0)").unwrap();
        assert_eq!(h.profile().tails, [Tail::Zero, Tail::Power(0.0)]);
        let k = E::parse("(1/pi)/(x^2+1)").unwrap();
        assert_eq!(k.decay_class(), DecayClass::Power(2.0));
        assert!(k.is_smooth());
    }

    #[test]
    fn shifted_bump_has_a_centre() {
        let g = E::parse("exp(-x^2)").unwrap().shift(18.5);
        assert_eq!(g.profile().centres, vec![18.5]);
        assert!(g.is_smooth() && g.breakpoints().is_empty());
        assert!(g.eval_jet(18.5, 2).is_ok());
        let r = crate::quadrature::integrate_line(&g, &Default::default()).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-9, "{r:?}");
        let h = E::parse("1/(1+(2*x-6)^2)").unwrap();
        assert_eq!(h.profile().centres, vec![3.0]);
    }

    #[test]
    fn evaluation_examples() {
        let g = E::parse("exp(-x^2)").unwrap();
        assert_eq!(g.eval(0.0).unwrap(), 1.0);
        let i = E::parse("indicator(0,1)").unwrap();
        assert_eq!(i.eval(0.5).unwrap(), 1.0);
        assert_eq!(i.eval(2.0).unwrap(), 0.0);
        let w = E::parse("piecewise(x == 0 -> 0, x^2*sin(x^(-4)))").unwrap();
        assert_eq!(w.eval(0.0).unwrap(), 0.0);
        assert!(w.singularities().is_empty());
        assert!(w.eval(1e-3).unwrap().abs() <= 1e-6);
    }

    #[test]
    fn jet_examples() {
        let g = E::parse("exp(-x^2)").unwrap();
        let d = g.eval_jet(0.0, 2).unwrap().derivatives();
        assert_eq!(d, vec![1.0, 0.0, -2.0]);
        let s = E::parse("sin(x)").unwrap();
        let d = s.eval_jet(std::f64::consts::FRAC_PI_2, 1).unwrap().derivatives();
        assert_eq!(d[0], 1.0);
        assert!(d[1].abs() < 1e-16);
        let k = E::parse("(1/pi)/(x^2+1)").unwrap();
        let d = k.dual(0.0).unwrap();
        assert!((d.value - std::f64::consts::FRAC_1_PI).abs() < 1e-16);
        assert_eq!(d.derivative, 0.0);
    }

    #[test]
    fn jet_kinks() {
        for s in ["abs(x)", "sgn(x)", "indicator(0,1)"] {
            let e = E::parse(s).unwrap();
            assert!(matches!(e.eval_jet(0.0, 1), Err(JetError::Kink(_))), "{s}");
            assert!(e.eval_jet(0.0, 0).is_ok());
        }
        let e = E::parse("indicator(0,1)").unwrap();
        assert!(matches!(e.eval_jet(1.0, 2), Err(JetError::Kink(_))));
        assert_eq!(e.eval_jet(0.5, 2).unwrap().derivatives(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn declared_support_is_enforced() {
        let e = E::parse("exp(x); support(-1, 2)").unwrap();
        assert_eq!(e.support_hint(), Some((-1.0, 2.0)));
        assert_eq!(e.eval(5.0).unwrap(), 0.0);
        assert_eq!(e.eval(-1.0).unwrap(), 0.0);
        assert!((e.eval(1.0).unwrap() - 1f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn affine_maps_metadata() {
        let e = E::parse("abs(x)^(-0.5)*indicator(-1,1)").unwrap();
        let s = e.shift(2.0);
        assert_eq!(s.singularities(), &[2.0]);
        assert_eq!(s.support_hint(), Some((1.0, 3.0)));
        let r = E::parse("x*exp(-x); support(0, inf)").unwrap().reflect();
        assert_eq!(r.profile().tails[1], Tail::Zero);
    }

    #[test]
    fn generic_over_f32() {
        let g = FunctionExpr::<f32>::parse("exp(-x^2)").unwrap();
        assert_eq!(g.eval(0.0).unwrap(), 1.0f32);
        let d = g.eval_jet(1.0, 1).unwrap().derivatives();
        assert!((d[1] + 2.0 * (-1.0f32).exp()).abs() < 1e-6);
    }
}
