//! Distributions represented by their `L^p` primitives.
//!
//! An element `f = F'` of `L'^p` is stored as its primitive `F ∈ L^p`, with
//! norm `‖f‖'_p = ‖F‖_p`. It acts on multipliers `G(x) = ∫_0^x g`, `g ∈ L^q`,
//! through `∫ f G = -∫ F g`. The crate builds convolutions, Fourier
//! transforms, higher order spaces and the half-plane Poisson extension on
//! top of that pairing, all evaluated by adaptive quadrature.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases below fix `f64`.

pub mod convolution;
pub mod error;
pub mod fourier;
pub mod funcrepr;
pub mod higher;
pub mod lpspace;
pub mod poisson;
pub mod quadrature;
pub mod scalar;
pub mod special;

pub use error::{Error, EvalError, JetError, ParseError, QuadError, Result};
pub use scalar::Real;

pub type Expr = funcrepr::FunctionExpr<f64>;
pub type Config = quadrature::QuadConfig<f64>;
pub type Distribution = lpspace::PrimitiveDistribution<f64>;
pub type Multiplier = lpspace::Multiplier<f64>;
pub type DeltaTrain = lpspace::DeltaTrain<f64>;
pub type NthDistribution = higher::NthDistribution<f64>;
pub type IteratedMultiplier = higher::IteratedMultiplier<f64>;
pub type HalfPlanePoint = poisson::HalfPlanePoint<f64>;
pub type Complex = fourier::ComplexValue<f64>;

