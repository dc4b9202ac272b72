use thiserror::Error;

/// Failure to turn DSL text into a tree.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at {position}")]
    UnknownIdentifier { name: String, position: usize },
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("evaluation at listed singular point {0}")]
    Singular(f64),
    #[error("non-finite value at x = {0}")]
    NonFinite(f64),
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum JetError {
    #[error("jet requested at non-differentiable point {0}")]
    Kink(f64),
    #[error("jet requested at singular point {0}")]
    Singular(f64),
    #[error("jet order {0} exceeds the supported maximum of 4")]
    Order(usize),
    #[error("opaque function `{0}` carries no derivative information")]
    Opaque(String),
    #[error("non-finite jet coefficient at x = {0}")]
    NonFinite(f64),
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum QuadError {
    #[error("integrand is not integrable near {at} (shell ratio {ratio:.4})")]
    NotIntegrable { at: f64, ratio: f64 },
    #[error("cannot certify convergence of the improper integral: {0}")]
    CannotCertify(String),
    #[error("integrand returned a non-finite value at x = {0}")]
    NonFinite(f64),
    #[error("invalid integration request: {0}")]
    Invalid(String),
}

/// Errors raised by the corpus, the function-space constructors and the
/// operations built on them.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("unknown corpus entry `{0}`")]
    UnknownCorpus(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("exponent mismatch: {0}")]
    ExponentMismatch(String),
    #[error("not in L^{p}: {reason}")]
    NotInLp { p: f64, reason: String },
    #[error("invalid descriptor at {pointer}: {message}")]
    Descriptor { pointer: String, message: String },
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
