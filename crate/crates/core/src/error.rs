use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("grazing incidence: eta = {0} must satisfy 0 <= eta < 1")]
    GrazingIncidence(f64),
    #[error("argument lies on the branch cut of z^(3/2)")]
    BranchCut,
    #[error("Volterra kernel is not a contraction: M_x0 = {m_norm} >= 2 at x0 = {x0}")]
    ContractionViolated { m_norm: f64, x0: f64 },
    #[error("fixed-point iteration did not converge within {0} iterations")]
    MaxIterations(usize),
    #[error("quadrature did not converge: {0}")]
    Quadrature(&'static str),
    #[error("step size underflow at x = {0}")]
    StepSizeUnderflow(f64),
    #[error("boundary state (u, u') vanishes identically")]
    DegenerateState,
    #[error("state is purely incoming at the interface (u'/u = i); R is undefined")]
    PureIncoming,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}
