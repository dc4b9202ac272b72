use crate::error::{Error, Result};
use crate::funcrepr::FunctionExpr;
use crate::lpspace::{Multiplier, PrimitiveDistribution};
use crate::quadrature::{lp_norm, QuadConfig};
use crate::scalar::Real;

/// One term `a (τ_x δ - τ_y δ)`, the derivative of `a χ_(x,y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom<T: Real> {
    pub weight: T,
    pub left: T,
    pub right: T,
}

/// `s = σ'` for the step function `σ = Σ a_n χ_(x_n, y_n)` with pairwise
/// disjoint intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaTrain<T: Real> {
    atoms: Vec<Atom<T>>,
}

impl<T: Real> DeltaTrain<T> {
    /// Validates `x_n < y_n` and disjointness; atoms are kept sorted.
    pub fn new(mut atoms: Vec<Atom<T>>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if !(a.weight.is_finite() && a.left.is_finite() && a.right.is_finite()) {
                return Err(Error::InvalidParameter(format!("atom {i} has a non-finite entry")));
            }
            if !(a.left < a.right) {
                return Err(Error::InvalidParameter(format!("atom {i} needs x < y")));
            }
        }
        atoms.sort_by(|a, b| a.left.partial_cmp(&b.left).unwrap());
        for w in atoms.windows(2) {
            if w[1].left < w[0].right {
                return Err(Error::InvalidParameter(format!(
                    "atoms on ({}, {}) and ({}, {}) overlap",
                    w[0].left, w[0].right, w[1].left, w[1].right
                )));
            }
        }
        Ok(DeltaTrain { atoms })
    }

    /// A single atom `a (τ_x δ - τ_y δ)`.
    pub fn single(weight: T, left: T, right: T) -> Result<Self> {
        DeltaTrain::new(vec![Atom { weight, left, right }])
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    /// The primitive `σ`.
    pub fn step_function(&self) -> FunctionExpr<T> {
        let mut terms = self.atoms.iter().filter(|a| a.weight != T::zero());
        let Some(first) = terms.next() else {
            return FunctionExpr::zero();
        };
        let mut acc = FunctionExpr::indicator(first.left, first.right).scale(first.weight);
        for a in terms {
            acc = acc.add(&FunctionExpr::indicator(a.left, a.right).scale(a.weight));
        }
        acc
    }

    /// `‖s‖'_p = ‖σ‖_p`, exact up to rounding since the intervals are
    /// disjoint.
    pub fn norm(&self, p: T) -> Result<T> {
        crate::lpspace::check_p(p)?;
        let mut sum = T::zero();
        for a in &self.atoms {
            sum = sum + a.weight.abs().powf(p) * (a.right - a.left);
        }
        Ok(sum.powf(T::one() / p))
    }

    /// `‖σ‖_p` by quadrature on the step function.
    pub fn norm_by_quadrature(&self, p: T, cfg: &QuadConfig<T>) -> Result<T> {
        lp_norm(&self.step_function(), p, cfg)
    }

    pub fn to_distribution(&self, p: T, cfg: &QuadConfig<T>) -> Result<PrimitiveDistribution<T>> {
        PrimitiveDistribution::new(self.step_function(), p, cfg)
    }

    /// `∫ s G = -Σ a_n [G(y_n) - G(x_n)]`, using only values of `G`.
    pub fn pair(&self, g: &Multiplier<T>) -> Result<T> {
        let mut sum = T::zero();
        for a in &self.atoms {
            if a.weight == T::zero() {
                continue;
            }
            sum = sum + a.weight * (g.eval(a.right)? - g.eval(a.left)?);
        }
        Ok(-sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpspace::pair;

    type E = FunctionExpr<f64>;

    #[test]
    fn validation() {
        assert!(DeltaTrain::single(1.0, 1.0, 0.0).is_err());
        let overlap = vec![
            Atom { weight: 1.0, left: 0.0, right: 2.0 },
            Atom { weight: 1.0, left: 1.0, right: 3.0 },
        ];
        assert!(DeltaTrain::new(overlap).is_err());
        let touching = vec![
            Atom { weight: 1.0, left: 1.0, right: 2.0 },
            Atom { weight: 2.0, left: 0.0, right: 1.0 },
        ];
        let t = DeltaTrain::new(touching).unwrap();
        assert_eq!(t.atoms()[0].left, 0.0);
        assert!((t.norm(2.0).unwrap() - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn pairing_routes_agree() {
        let cfg = QuadConfig::default();
        let g = Multiplier::local(E::parse("exp(-x)").unwrap(), 2.0).unwrap();
        let s = DeltaTrain::single(1.0, 0.0, 1.0).unwrap();
        let want = (-1.0f64).exp() - 1.0;
        assert!((s.pair(&g).unwrap() - want).abs() < 1e-14);
        let f = s.to_distribution(2.0, &cfg).unwrap();
        assert!((pair(&f, &g, &cfg).unwrap() - s.pair(&g).unwrap()).abs() < 1e-12);

        assert_eq!(DeltaTrain::single(0.0, 0.0, 1.0).unwrap().pair(&g).unwrap(), 0.0);

        let a = DeltaTrain::single(2.0, -1.0, 0.5).unwrap();
        let b = DeltaTrain::single(-0.5, 1.0, 3.0).unwrap();
        let ab = DeltaTrain::new([a.atoms(), b.atoms()].concat()).unwrap();
        let sum = a.pair(&g).unwrap() + b.pair(&g).unwrap();
        assert!((ab.pair(&g).unwrap() - sum).abs() < 1e-13);
    }
}
