//! The spaces `L'^p` and `I^q`, the pairing integral between them, and the
//! operations built directly on primitives.

mod delta;
mod descriptor;
mod distribution;
mod lattice;
mod membership;
mod multiplier;
mod reconstruct;
mod vanishing;

pub use delta::{Atom, DeltaTrain};
pub use descriptor::{delta_train_from_json, distribution_from_json, multiplier_from_json};
pub use distribution::{pair, pair_result, PrimitiveDistribution};
pub use lattice::{abs, join, leq, meet};
pub use membership::{membership_check, HalfLineLimit, Membership};
pub use multiplier::Multiplier;
pub use reconstruct::{reconstruct, step_approximate, tent_density, StepApproximation};
pub use vanishing::{gateaux_profile, weak_vanishing_bound, GateauxProfile, WeakVanishing};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Conjugate exponent `q` with `1/p + 1/q = 1`; `∞` for `p = 1`.
pub fn conjugate<T: Real>(p: T) -> T {
    if p == T::one() {
        T::infinity()
    } else {
        p / (p - T::one())
    }
}

/// Rejects exponents outside `[1, ∞)`.
pub fn check_p<T: Real>(p: T) -> Result<()> {
    if p >= T::one() && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("exponent p = {p} must lie in [1, ∞)")))
    }
}

/// Rejects multiplier exponents outside `(1, ∞]`.
pub fn check_q<T: Real>(q: T) -> Result<()> {
    if q > T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("multiplier exponent q = {q} must lie in (1, ∞]")))
    }
}

pub(crate) fn check_conjugate<T: Real>(p: T, q: T) -> Result<()> {
    let gap = T::one() / p + T::one() / q - T::one();
    if gap.abs() <= T::lit(1e3) * T::epsilon() {
        Ok(())
    } else {
        Err(Error::ExponentMismatch(format!("p = {p} and q = {q} are not conjugate")))
    }
}

pub(crate) fn same_p<T: Real>(a: T, b: T) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ExponentMismatch(format!("distributions over p = {a} and p = {b}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates() {
        assert_eq!(conjugate(2.0), 2.0);
        assert_eq!(conjugate(1.0f64), f64::INFINITY);
        assert!((conjugate(3.0) - 1.5f64).abs() < 1e-15);
        assert!(check_conjugate(1.0, f64::INFINITY).is_ok());
        assert!(check_conjugate(3.0, 1.5).is_ok());
        assert!(matches!(check_conjugate(2.0, 3.0), Err(Error::ExponentMismatch(_))));
        assert!(check_p(0.5).is_err());
        assert!(check_q(1.0).is_err());
    }
}
