//! Syntactic metadata: singular points, kinks, support and tail decay.

use crate::funcrepr::ast::{BinOp, Cond, Func, Node, Rel};
use crate::funcrepr::eval::{cantor_kinks, cond_holds, eval_node, integer_exponent};
use crate::scalar::Real;

/// Decay of `|f(x)|` as `x` tends to one end of the line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tail<T: Real> {
    /// Identically zero beyond some point.
    Zero,
    /// Bounded by `C exp(-c x^2)`.
    Gaussian,
    /// Bounded by `C exp(-c |x|)`.
    Exponential,
    /// Bounded by `C |x|^(-beta)`; negative `beta` allows growth.
    Power(T),
    Unknown,
}

impl<T: Real> Tail<T> {
    fn rank(&self) -> (u8, T) {
        match self {
            Tail::Zero => (4, T::zero()),
            Tail::Gaussian => (3, T::zero()),
            Tail::Exponential => (2, T::zero()),
            Tail::Power(b) => (1, *b),
            Tail::Unknown => (0, T::zero()),
        }
    }

    /// The slower of two decays.
    pub fn worse(self, other: Self) -> Self {
        let (a, b) = (self.rank(), other.rank());
        if a.0 < b.0 || (a.0 == b.0 && a.1 <= b.1) {
            self
        } else {
            other
        }
    }

    /// Decay of `|f|^p`.
    pub fn pow(self, p: T) -> Self {
        match self {
            Tail::Power(b) => Tail::Power(b * p),
            t => t,
        }
    }

    /// Whether `∫|f|` over a half-line converges by this bound alone.
    pub fn integrable(&self) -> bool {
        match self {
            Tail::Zero | Tail::Gaussian | Tail::Exponential => true,
            Tail::Power(b) => *b > T::one(),
            Tail::Unknown => false,
        }
    }

    pub fn bounded(&self) -> bool {
        match self {
            Tail::Power(b) => *b >= T::zero(),
            Tail::Unknown => false,
            _ => true,
        }
    }
}

/// Closed interval outside which a function vanishes identically.
/// Endpoints may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Support<T: Real> {
    Empty,
    Interval(T, T),
}

impl<T: Real> Support<T> {
    pub fn all() -> Self {
        Support::Interval(T::neg_infinity(), T::infinity())
    }

    pub fn hull(self, o: Self) -> Self {
        match (self, o) {
            (Support::Empty, s) | (s, Support::Empty) => s,
            (Support::Interval(a, b), Support::Interval(c, d)) => Support::Interval(a.min(c), b.max(d)),
        }
    }

    pub fn intersect(self, o: Self) -> Self {
        match (self, o) {
            (Support::Interval(a, b), Support::Interval(c, d)) => {
                let (lo, hi) = (a.max(c), b.min(d));
                if lo <= hi {
                    Support::Interval(lo, hi)
                } else {
                    Support::Empty
                }
            }
            _ => Support::Empty,
        }
    }

    pub fn contains(&self, x: T) -> bool {
        match self {
            Support::Empty => false,
            Support::Interval(a, b) => *a <= x && x <= *b,
        }
    }

    pub fn is_compact(&self) -> bool {
        match self {
            Support::Empty => true,
            Support::Interval(a, b) => a.is_finite() && b.is_finite(),
        }
    }

    /// Finite bounds, if both exist.
    pub fn bounds(&self) -> Option<(T, T)> {
        match self {
            Support::Interval(a, b) if a.is_finite() && b.is_finite() => Some((*a, *b)),
            _ => None,
        }
    }

    /// Image under `u = a x + b` mapped back to `x`, i.e. the preimage of
    /// `self` (given in the variable `u`).
    pub fn preimage(self, a: T, b: T) -> Self {
        match self {
            Support::Empty => Support::Empty,
            Support::Interval(lo, hi) => {
                if a == T::zero() {
                    return if self.contains(b) { Support::all() } else { Support::Empty };
                }
                let (p, q) = ((lo - b) / a, (hi - b) / a);
                let (p, q) = if p.is_nan() || q.is_nan() {
                    (T::neg_infinity(), T::infinity())
                } else {
                    (p, q)
                };
                Support::Interval(p.min(q), p.max(q))
            }
        }
    }
}

/// Decay tag reported alongside functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecayClass<T: Real> {
    Compact,
    Gaussian,
    Exponential,
    Power(T),
    None,
}

impl<T: Real> std::fmt::Display for DecayClass<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecayClass::Compact => write!(f, "compact"),
            DecayClass::Gaussian => write!(f, "gaussian"),
            DecayClass::Exponential => write!(f, "exponential"),
            DecayClass::Power(b) => write!(f, "power({})", b),
            DecayClass::None => write!(f, "none"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Profile<T: Real> {
    /// Points where evaluation fails or the function is unbounded.
    pub singularities: Vec<T>,
    /// Kinks and jumps: evaluation is fine, derivatives are not.
    pub breakpoints: Vec<T>,
    /// Points the function varies around on unit scale, such as the
    /// centre of a shifted bump. Quadrature splits there; derivatives are
    /// unaffected.
    pub centres: Vec<T>,
    pub support: Support<T>,
    /// Decay towards `-∞` and `+∞`.
    pub tails: [Tail<T>; 2],
    /// Infinitely differentiable everywhere, as far as the analysis can tell.
    pub smooth: bool,
}

impl<T: Real> Profile<T> {
    pub fn smooth_everywhere(tails: [Tail<T>; 2]) -> Self {
        Profile {
            singularities: vec![],
            breakpoints: vec![],
            centres: vec![],
            support: Support::all(),
            tails,
            smooth: true,
        }
    }

    pub fn decay_class(&self) -> DecayClass<T> {
        if self.support.is_compact() {
            return DecayClass::Compact;
        }
        match self.tails[0].worse(self.tails[1]) {
            Tail::Zero => DecayClass::Compact,
            Tail::Gaussian => DecayClass::Gaussian,
            Tail::Exponential => DecayClass::Exponential,
            Tail::Power(b) => DecayClass::Power(b),
            Tail::Unknown => DecayClass::None,
        }
    }

    /// Bounded on the whole line per metadata.
    pub fn bounded(&self) -> bool {
        self.singularities.is_empty() && self.tails.iter().all(|t| t.bounded())
    }

    /// Points where quadrature should split, sorted.
    pub fn split_points(&self) -> Vec<T> {
        let mut v: Vec<T> = self
            .singularities
            .iter()
            .chain(self.breakpoints.iter())
            .copied()
            .collect();
        sort_dedup(&mut v);
        v
    }

    /// Split points together with centres, sorted.
    pub fn landmarks(&self) -> Vec<T> {
        let mut v = self.split_points();
        v.extend(self.centres.iter().copied());
        sort_dedup(&mut v);
        v
    }

    /// Metadata of `x -> f(a x + b)` given the metadata of `f`.
    pub fn compose_affine(&self, a: T, b: T) -> Self {
        if a == T::zero() {
            return Profile::smooth_everywhere([Tail::Power(T::zero()); 2]);
        }
        let map = |v: &Vec<T>| {
            let mut out: Vec<T> = v.iter().map(|p| (*p - b) / a).collect();
            sort_dedup(&mut out);
            out
        };
        let tails = if a > T::zero() {
            self.tails
        } else {
            [self.tails[1], self.tails[0]]
        };
        Profile {
            singularities: map(&self.singularities),
            breakpoints: map(&self.breakpoints),
            centres: map(&self.centres),
            support: self.support.preimage(a, b),
            tails,
            smooth: self.smooth,
        }
    }
}

pub(crate) fn sort_dedup<T: Real>(v: &mut Vec<T>) {
    v.retain(|p| p.is_finite());
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
}

/// Asymptotic form on one side, finer than [`Tail`] so sums, products and
/// compositions can be tracked.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Asym<T: Real> {
    Zero,
    Gauss,
    Exp,
    /// `f ~ coef |x|^deg` with `coef != 0`.
    Term(T, T),
    /// `|f| <= C |x|^(-beta)`.
    Bounded(T),
    Unknown,
}

impl<T: Real> Asym<T> {
    fn from_tail(t: Tail<T>) -> Self {
        match t {
            Tail::Zero => Asym::Zero,
            Tail::Gaussian => Asym::Gauss,
            Tail::Exponential => Asym::Exp,
            Tail::Power(b) => Asym::Bounded(b),
            Tail::Unknown => Asym::Unknown,
        }
    }

    fn tail(self) -> Tail<T> {
        match self {
            Asym::Zero => Tail::Zero,
            Asym::Gauss => Tail::Gaussian,
            Asym::Exp => Tail::Exponential,
            Asym::Term(_, d) => Tail::Power(-d),
            Asym::Bounded(b) => Tail::Power(b),
            Asym::Unknown => Tail::Unknown,
        }
    }

    fn constant(c: T) -> Self {
        if c == T::zero() {
            Asym::Zero
        } else {
            Asym::Term(c, T::zero())
        }
    }

    fn is_decay(self) -> bool {
        matches!(self, Asym::Gauss | Asym::Exp)
    }

    fn add(self, o: Self) -> Self {
        use Asym::*;
        match (self, o) {
            (Zero, a) | (a, Zero) => a,
            (Unknown, _) | (_, Unknown) => Unknown,
            (Gauss, Gauss) => Gauss,
            (Gauss, Exp) | (Exp, Gauss) | (Exp, Exp) => Exp,
            (a, b) if a.is_decay() => b,
            (a, b) if b.is_decay() => a,
            (Term(c1, d1), Term(c2, d2)) => {
                if d1 > d2 {
                    Term(c1, d1)
                } else if d2 > d1 {
                    Term(c2, d2)
                } else if c1 + c2 != T::zero() {
                    Term(c1 + c2, d1)
                } else {
                    Bounded(-d1)
                }
            }
            (Term(c, d), Bounded(b)) | (Bounded(b), Term(c, d)) => {
                if d > -b {
                    Term(c, d)
                } else {
                    Bounded(b.min(-d))
                }
            }
            (Bounded(a), Bounded(b)) => Bounded(a.min(b)),
            _ => Unknown,
        }
    }

    fn neg(self) -> Self {
        match self {
            Asym::Term(c, d) => Asym::Term(-c, d),
            a => a,
        }
    }

    fn mul(self, o: Self) -> Self {
        use Asym::*;
        match (self, o) {
            (Zero, _) | (_, Zero) => Zero,
            (Unknown, _) | (_, Unknown) => Unknown,
            (Gauss, _) | (_, Gauss) => Gauss,
            (Exp, _) | (_, Exp) => Exp,
            (Term(c1, d1), Term(c2, d2)) => Term(c1 * c2, d1 + d2),
            (Term(_, d), Bounded(b)) | (Bounded(b), Term(_, d)) => Bounded(b - d),
            (Bounded(a), Bounded(b)) => Bounded(a + b),
        }
    }

    fn recip(self) -> Self {
        match self {
            Asym::Term(c, d) => Asym::Term(T::one() / c, -d),
            _ => Asym::Unknown,
        }
    }

    fn powf(self, r: T, integral: bool) -> Self {
        use Asym::*;
        if r == T::zero() {
            return Term(T::one(), T::zero());
        }
        match self {
            Zero if r > T::zero() => Zero,
            Gauss | Exp if r > T::zero() => self,
            Term(c, d) if c > T::zero() => Term(c.powf(r), d * r),
            Term(c, d) if integral => Term(c.powf(r), d * r),
            Term(_, d) => Bounded(-d * r),
            Bounded(b) if r > T::zero() => Bounded(b * r),
            _ => Unknown,
        }
    }

    fn func(self, f: Func) -> Self {
        use Asym::*;
        let zero = T::zero();
        let bounded = Bounded(zero);
        match f {
            Func::Exp => match self {
                Zero | Gauss | Exp => Term(T::one(), zero),
                Term(_, d) if d < zero => Term(T::one(), zero),
                Term(c, d) if d == zero => Term(c.exp().max(T::min_positive_value()), zero),
                Term(c, d) if c < zero => {
                    if d >= T::lit(2.0) {
                        Gauss
                    } else if d >= T::one() {
                        Exp
                    } else {
                        Bounded(T::lit(8.0))
                    }
                }
                Bounded(b) if b >= zero => bounded,
                _ => Unknown,
            },
            Func::Log => match self {
                Term(c, d) if c > zero && d == zero => Asym::constant(c.ln()),
                Term(c, _) if c > zero => Bounded(T::lit(-0.01)),
                _ => Unknown,
            },
            Func::Sqrt => self.powf(T::lit(0.5), false),
            Func::Sin => match self {
                Zero | Gauss | Exp => self,
                Term(_, d) if d < zero => self,
                Bounded(b) if b > zero => self,
                _ => bounded,
            },
            Func::Cos => Term(T::one(), zero).add(match self {
                Zero => Zero,
                _ => bounded,
            }),
            Func::Tan => match self {
                Zero | Gauss | Exp => self,
                Term(_, d) if d < zero => self,
                _ => Unknown,
            },
            Func::Atan | Func::Erf => {
                let limit = if f == Func::Atan { T::FRAC_PI_2() } else { T::one() };
                match self {
                    Zero | Gauss | Exp => self,
                    Term(c, d) if d > zero => Term(c.signum() * limit, zero),
                    Term(c, d) if d == zero => {
                        let v = if f == Func::Atan { c.atan() } else { c.erf() };
                        Asym::constant(v)
                    }
                    Term(_, _) => self,
                    Bounded(b) if b > zero => self,
                    _ => bounded,
                }
            }
            Func::Abs => match self {
                Term(c, d) => Term(c.abs(), d),
                a => a,
            },
            Func::Sgn => match self {
                Term(c, _) => Term(c.signum(), zero),
                Zero => Zero,
                _ => bounded,
            },
        }
    }
}

/// Coefficients of a polynomial of degree at most 8, if `node` is one.
pub(crate) fn polynomial<T: Real>(node: &Node<T>) -> Option<Vec<T>> {
    const MAX_DEG: usize = 8;
    fn trim<T: Real>(mut v: Vec<T>) -> Vec<T> {
        while v.len() > 1 && *v.last().unwrap() == T::zero() {
            v.pop();
        }
        v
    }
    fn mul<T: Real>(a: &[T], b: &[T]) -> Option<Vec<T>> {
        if a.len() + b.len() - 2 > MAX_DEG {
            return None;
        }
        let mut out = vec![T::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j] + *x * *y;
            }
        }
        Some(trim(out))
    }
    fn add<T: Real>(a: &[T], b: &[T], sign: T) -> Vec<T> {
        let n = a.len().max(b.len());
        let mut out = vec![T::zero(); n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(T::zero());
            let y = b.get(i).copied().unwrap_or(T::zero());
            *o = x + sign * y;
        }
        trim(out)
    }
    Some(match node {
        Node::Const(c) => vec![*c],
        Node::X => vec![T::zero(), T::one()],
        Node::Neg(a) => polynomial(a)?.into_iter().map(|c| -c).collect(),
        Node::Bin(op, a, b) => {
            let pa = polynomial(a)?;
            match op {
                BinOp::Add => add(&pa, &polynomial(b)?, T::one()),
                BinOp::Sub => add(&pa, &polynomial(b)?, -T::one()),
                BinOp::Mul => mul(&pa, &polynomial(b)?)?,
                BinOp::Div => {
                    let c = b.as_const()?;
                    if c == T::zero() {
                        return None;
                    }
                    pa.into_iter().map(|v| v / c).collect()
                }
                BinOp::Pow => {
                    let k = integer_exponent(b)?;
                    if k < 0 {
                        return None;
                    }
                    let mut out = vec![T::one()];
                    for _ in 0..k {
                        out = mul(&out, &pa)?;
                    }
                    out
                }
            }
        }
        _ => return None,
    })
}

/// Root of an affine argument away from the origin.
fn centre<T: Real>(node: &Node<T>) -> Option<T> {
    match affine(node) {
        Some((a, b)) if a != T::zero() && b != T::zero() => Some(-b / a),
        _ => None,
    }
}

/// `(slope, intercept)` when `node` is affine in x.
pub(crate) fn affine<T: Real>(node: &Node<T>) -> Option<(T, T)> {
    let p = polynomial(node)?;
    match p.len() {
        1 => Some((T::zero(), p[0])),
        2 => Some((p[1], p[0])),
        _ => None,
    }
}

/// Real roots of a polynomial of degree at most 2; `None` when the
/// polynomial vanishes identically or has higher degree.
fn poly_roots<T: Real>(p: &[T]) -> Option<Vec<T>> {
    match p.len() {
        1 => {
            if p[0] == T::zero() {
                None
            } else {
                Some(vec![])
            }
        }
        2 => Some(vec![-p[0] / p[1]]),
        3 => {
            let (c, b, a) = (p[0], p[1], p[2]);
            let disc = b * b - T::lit(4.0) * a * c;
            if disc < T::zero() {
                Some(vec![])
            } else if disc == T::zero() {
                Some(vec![-b / (a + a)])
            } else {
                // Stable form avoiding cancellation.
                let q = -(b + b.signum() * disc.sqrt()) / T::lit(2.0);
                let mut r = vec![q / a];
                if q != T::zero() {
                    r.push(c / q);
                } else {
                    r.push(T::zero());
                }
                sort_dedup(&mut r);
                Some(r)
            }
        }
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sign {
    Positive,
    NonNegative,
    Unknown,
}

fn sign<T: Real>(node: &Node<T>) -> Sign {
    use Sign::*;
    if let Some(p) = polynomial(node) {
        return match p.len() {
            1 if p[0] > T::zero() => Positive,
            1 if p[0] == T::zero() => NonNegative,
            3 if p[2] > T::zero() => {
                let disc = p[1] * p[1] - T::lit(4.0) * p[2] * p[0];
                if disc < T::zero() {
                    Positive
                } else if disc == T::zero() {
                    NonNegative
                } else {
                    Unknown
                }
            }
            _ => {
                // Sums of even powers with nonnegative coefficients.
                let even_ok = p
                    .iter()
                    .enumerate()
                    .all(|(i, c)| *c == T::zero() || (i % 2 == 0 && *c > T::zero()));
                if even_ok {
                    if p[0] > T::zero() {
                        Positive
                    } else {
                        NonNegative
                    }
                } else {
                    Unknown
                }
            }
        };
    }
    match node {
        Node::Const(c) if *c > T::zero() => Positive,
        Node::Const(c) if *c == T::zero() => NonNegative,
        Node::Bin(op, a, b) => {
            let (sa, sb) = (sign(a), sign(b));
            match op {
                BinOp::Add => match (sa, sb) {
                    (Unknown, _) | (_, Unknown) => Unknown,
                    (Positive, _) | (_, Positive) => Positive,
                    _ => NonNegative,
                },
                BinOp::Mul | BinOp::Div => match (sa, sb) {
                    (Positive, Positive) => Positive,
                    (Unknown, _) | (_, Unknown) => Unknown,
                    _ => NonNegative,
                },
                BinOp::Pow => match integer_exponent(b) {
                    Some(k) if k % 2 == 0 => {
                        if sa == Positive || zeros(a).map(|z| z.is_empty()).unwrap_or(false) {
                            Positive
                        } else {
                            NonNegative
                        }
                    }
                    _ => {
                        if sa == Positive {
                            Positive
                        } else if sa == NonNegative && b.as_const().map(|r| r > T::zero()).unwrap_or(false) {
                            NonNegative
                        } else {
                            Unknown
                        }
                    }
                },
                BinOp::Sub => Unknown,
            }
        }
        Node::Call(Func::Exp, _) => Positive,
        Node::Call(Func::Abs, a) | Node::Call(Func::Sqrt, a) => {
            if zeros(a).map(|z| z.is_empty()).unwrap_or(false) {
                Positive
            } else {
                NonNegative
            }
        }
        Node::Indicator { .. } | Node::Cantor { .. } => NonNegative,
        _ => Unknown,
    }
}

/// Real zeros, when they can be listed exactly.
fn zeros<T: Real>(node: &Node<T>) -> Option<Vec<T>> {
    if let Some(p) = polynomial(node) {
        return poly_roots(&p);
    }
    if sign(node) == Sign::Positive {
        return Some(vec![]);
    }
    match node {
        Node::Neg(a) | Node::Call(Func::Abs, a) | Node::Call(Func::Sqrt, a) | Node::Call(Func::Sgn, a) => {
            zeros(a)
        }
        Node::Call(Func::Exp, _) => Some(vec![]),
        Node::Bin(BinOp::Mul, a, b) => {
            let mut z = zeros(a)?;
            z.extend(zeros(b)?);
            sort_dedup(&mut z);
            Some(z)
        }
        Node::Bin(BinOp::Div, a, _) => zeros(a),
        Node::Bin(BinOp::Pow, a, b) => match b.as_const() {
            Some(r) if r > T::zero() => zeros(a),
            Some(_) => Some(vec![]),
            None => None,
        },
        _ => None,
    }
}

/// Closed hull of the set where a guard holds, for affine clauses.
fn cond_region<T: Real>(c: &Cond<T>) -> Support<T> {
    let mut region = Support::all();
    for cl in &c.clauses {
        let diff = Node::Bin(BinOp::Sub, cl.lhs.clone(), cl.rhs.clone());
        let r = match affine(&diff) {
            Some((a, b)) if a == T::zero() => {
                if cl.rel.holds(b, T::zero()) {
                    Support::all()
                } else {
                    Support::Empty
                }
            }
            Some((a, b)) => {
                let root = -b / a;
                let right = Support::Interval(root, T::infinity());
                let left = Support::Interval(T::neg_infinity(), root);
                match (cl.rel, a > T::zero()) {
                    (Rel::Gt | Rel::Ge, true) | (Rel::Lt | Rel::Le, false) => right,
                    (Rel::Lt | Rel::Le, true) | (Rel::Gt | Rel::Ge, false) => left,
                    (Rel::Eq, _) => Support::Interval(root, root),
                    (Rel::Ne, _) => Support::all(),
                }
            }
            None => Support::all(),
        };
        region = region.intersect(r);
    }
    region
}

/// Boundary points of guards, where branches switch.
fn cond_boundaries<T: Real>(c: &Cond<T>) -> Option<Vec<T>> {
    let mut out = vec![];
    for cl in &c.clauses {
        let diff = Node::Bin(BinOp::Sub, cl.lhs.clone(), cl.rhs.clone());
        match polynomial(&diff) {
            Some(p) => out.extend(poly_roots(&p).unwrap_or_default()),
            None => return None,
        }
    }
    Some(out)
}

/// Index of the active arm at `x` (`arms.len()` for the default).
fn active_arm<T: Real>(arms: &[(Cond<T>, crate::funcrepr::ast::NodeRef<T>)], x: T) -> usize {
    arms.iter().position(|(c, _)| cond_holds(c, x)).unwrap_or(arms.len())
}

fn far<T: Real>(side: usize) -> T {
    let big = T::max_value().sqrt().sqrt();
    if side == 0 {
        -big
    } else {
        big
    }
}

struct Info<T: Real> {
    sing: Vec<T>,
    brk: Vec<T>,
    ctr: Vec<T>,
    support: Support<T>,
    asym: [Asym<T>; 2],
    smooth: bool,
}

impl<T: Real> Info<T> {
    fn leaf(support: Support<T>, asym: [Asym<T>; 2]) -> Self {
        Info {
            sing: vec![],
            brk: vec![],
            ctr: vec![],
            support,
            asym,
            smooth: true,
        }
    }

    fn absorb(&mut self, o: &Info<T>) {
        self.sing.extend(o.sing.iter().copied());
        self.brk.extend(o.brk.iter().copied());
        self.ctr.extend(o.ctr.iter().copied());
        self.smooth &= o.smooth;
    }
}

fn analyze<T: Real>(node: &Node<T>) -> Info<T> {
    match node {
        Node::Const(c) => {
            let s = if *c == T::zero() { Support::Empty } else { Support::all() };
            Info::leaf(s, [Asym::constant(*c); 2])
        }
        Node::X => Info::leaf(
            Support::all(),
            [Asym::Term(-T::one(), T::one()), Asym::Term(T::one(), T::one())],
        ),
        Node::Neg(a) => {
            let mut i = analyze(a);
            i.asym = [i.asym[0].neg(), i.asym[1].neg()];
            i
        }
        Node::Bin(op, a, b) => {
            let ia = analyze(a);
            let ib = analyze(b);
            let mut out = Info::leaf(Support::all(), [Asym::Unknown; 2]);
            out.absorb(&ia);
            out.absorb(&ib);
            match op {
                BinOp::Add | BinOp::Sub => {
                    out.support = ia.support.hull(ib.support);
                    for s in 0..2 {
                        let r = if *op == BinOp::Sub { ib.asym[s].neg() } else { ib.asym[s] };
                        out.asym[s] = ia.asym[s].add(r);
                    }
                }
                BinOp::Mul => {
                    out.support = ia.support.intersect(ib.support);
                    for s in 0..2 {
                        out.asym[s] = ia.asym[s].mul(ib.asym[s]);
                    }
                }
                BinOp::Div => {
                    out.support = ia.support;
                    match zeros(b) {
                        Some(z) => out.sing.extend(z),
                        None => out.smooth = false,
                    }
                    for s in 0..2 {
                        out.asym[s] = ia.asym[s].mul(ib.asym[s].recip());
                    }
                }
                BinOp::Pow => {
                    out.ctr.extend(centre(a));
                    let k = integer_exponent(b);
                    match b.as_const() {
                        Some(r) => {
                            let integral = k.is_some();
                            if r < T::zero() {
                                match zeros(a) {
                                    Some(z) => out.sing.extend(z),
                                    None => out.smooth = false,
                                }
                            } else if !integral {
                                match zeros(a) {
                                    Some(z) => out.brk.extend(z),
                                    None => out.smooth = false,
                                }
                            }
                            out.support = if r > T::zero() { ia.support } else { Support::all() };
                            for s in 0..2 {
                                out.asym[s] = ia.asym[s].powf(r, integral);
                            }
                        }
                        None => {
                            match zeros(a) {
                                Some(z) => out.sing.extend(z),
                                None => out.smooth = false,
                            }
                            out.support = Support::all();
                            for s in 0..2 {
                                let la = ia.asym[s].func(Func::Log);
                                out.asym[s] = la.mul(ib.asym[s]).func(Func::Exp);
                            }
                        }
                    }
                }
            }
            out
        }
        Node::Call(f, a) => {
            let ia = analyze(a);
            let mut out = Info::leaf(ia.support, [ia.asym[0].func(*f), ia.asym[1].func(*f)]);
            out.absorb(&ia);
            out.ctr.extend(centre(a));
            match f {
                Func::Exp | Func::Cos => out.support = Support::all(),
                Func::Log => {
                    out.support = Support::all();
                    match zeros(a) {
                        Some(z) => out.sing.extend(z),
                        None => out.smooth = false,
                    }
                }
                Func::Sqrt | Func::Abs | Func::Sgn => match zeros(a) {
                    Some(z) => {
                        if !z.is_empty() {
                            out.smooth = false;
                        }
                        out.brk.extend(z)
                    }
                    None => out.smooth = false,
                },
                Func::Tan => out.smooth = false,
                _ => {}
            }
            out
        }
        Node::Indicator { lo, hi, arg } => {
            let ia = analyze(arg);
            let mut out = Info::leaf(Support::all(), [Asym::Bounded(T::zero()); 2]);
            out.absorb(&ia);
            out.smooth = false;
            match affine(arg) {
                Some((a, b)) if a != T::zero() => {
                    out.support = Support::Interval(*lo, *hi).preimage(a, b);
                    out.brk.push((*lo - b) / a);
                    out.brk.push((*hi - b) / a);
                }
                _ => {}
            }
            for s in 0..2 {
                if let Asym::Term(_, d) = ia.asym[s] {
                    if d > T::zero() {
                        out.asym[s] = Asym::Zero;
                    }
                }
            }
            out
        }
        Node::Piecewise { arms, otherwise } => {
            let mut out = Info::leaf(Support::Empty, [Asym::Unknown; 2]);
            out.smooth = false;
            let infos: Vec<Info<T>> = arms
                .iter()
                .map(|(_, e)| analyze(e))
                .chain(std::iter::once(analyze(otherwise)))
                .collect();
            for (idx, info) in infos.iter().enumerate() {
                let region = if idx < arms.len() {
                    cond_region(&arms[idx].0)
                } else {
                    Support::all()
                };
                out.support = out.support.hull(region.intersect(info.support));
                for &p in &info.sing {
                    if active_arm(arms, p) == idx {
                        out.sing.push(p);
                    } else {
                        out.brk.push(p);
                    }
                }
                out.brk.extend(info.brk.iter().copied());
            }
            for (c, _) in arms {
                if let Some(b) = cond_boundaries(c) {
                    out.brk.extend(b);
                }
            }
            for s in 0..2 {
                out.asym[s] = infos[active_arm(arms, far(s))].asym[s];
            }
            out
        }
        Node::Cantor { level, arg } => {
            let ia = analyze(arg);
            let mut out = Info::leaf(Support::all(), [Asym::Bounded(T::zero()); 2]);
            out.absorb(&ia);
            out.smooth = false;
            if let Some((a, b)) = affine(arg) {
                if a != T::zero() {
                    out.support = Support::Interval(T::zero(), T::infinity()).preimage(a, b);
                    out.brk.extend(cantor_kinks(*level).into_iter().map(|k| (T::lit(k) - b) / a));
                }
            }
            for s in 0..2 {
                if let Asym::Term(c, d) = ia.asym[s] {
                    if d > T::zero() {
                        out.asym[s] = if c > T::zero() {
                            Asym::Term(T::one(), T::zero())
                        } else {
                            Asym::Zero
                        };
                    }
                }
            }
            out
        }
        Node::Opaque { func, arg } => {
            let ia = analyze(arg);
            let mut out = Info::leaf(Support::all(), [Asym::Unknown; 2]);
            out.absorb(&ia);
            out.smooth = false;
            if let Some((a, b)) = affine(arg) {
                if a != T::zero() {
                    let p = func.profile().compose_affine(a, b);
                    out.sing.extend(p.singularities);
                    out.brk.extend(p.breakpoints);
                    out.ctr.extend(p.centres);
                    out.support = p.support;
                    out.asym = [Asym::from_tail(p.tails[0]), Asym::from_tail(p.tails[1])];
                    out.smooth = p.smooth;
                }
            }
            out
        }
    }
}

/// Computes metadata for a tree.
pub fn analyze_tree<T: Real>(node: &Node<T>) -> Profile<T> {
    let info = analyze(node);
    let mut sing = info.sing;
    sort_dedup(&mut sing);
    let mut brk = info.brk;
    sort_dedup(&mut brk);
    brk.retain(|p| !sing.contains(p));
    let support = info.support;
    let mut tails = [info.asym[0].tail(), info.asym[1].tail()];
    if let Support::Interval(lo, hi) = support {
        if lo.is_finite() {
            tails[0] = Tail::Zero;
        }
        if hi.is_finite() {
            tails[1] = Tail::Zero;
        }
    } else {
        tails = [Tail::Zero; 2];
    }
    // A point whose neighbourhood lies outside the support is harmless.
    sing.retain(|p| support.contains(*p));
    let mut ctr = info.ctr;
    sort_dedup(&mut ctr);
    ctr.retain(|p| support.contains(*p) && !sing.contains(p) && !brk.contains(p));
    Profile {
        smooth: info.smooth && sing.is_empty() && brk.is_empty(),
        singularities: sing,
        breakpoints: brk,
        centres: ctr,
        support,
        tails,
    }
}

/// Evaluates a constant subtree.
pub(crate) fn const_value<T: Real>(node: &Node<T>) -> Option<T> {
    if node.is_constant() {
        Some(eval_node(node, T::zero()))
    } else {
        None
    }
}
