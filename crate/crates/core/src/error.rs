use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Indices carried by the genericity variants are 1-based, matching the
/// public labeling of polygon vertices and state coordinates; `0` means no
/// single site is to blame.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole encountered during differentiation")]
    PoleEncountered,
    #[error("rational size guard exceeded: {bits} bits > cap {cap}")]
    SizeLimit { bits: u64, cap: u64 },

    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("span k = {k} not allowed for period n = {n} (need 2 <= k <= n)")]
    BadSpan { k: usize, n: usize },
    #[error("operation requires k = {expected}, got k = {got}")]
    WrongSpan { expected: usize, got: usize },
    #[error("operation not supported for k = {0}")]
    UnsupportedSpan(usize),
    #[error("outside stable range n ≥ 2k−1 = {}", 2 * .k - 1)]
    OutsideStableRange { k: usize, n: usize },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("state is not on the level set prod p_i q_i = 1")]
    NotOnCasimirLevel,

    #[error("sigma_{0} = x_{0} + y_{0} vanishes")]
    SigmaVanishes(usize),
    #[error("denominator 1 + p_{0} or p_{0} vanishes")]
    PDenominatorVanishes(usize),
    #[error("corner denominator 1 - X_{0} Y_{0} vanishes")]
    CornerDenominatorVanishes(usize),
    #[error("coefficient I_({0},{1}) is not homogeneous")]
    NonHomogeneous(usize, usize),

    #[error("seed vectors are linearly dependent")]
    DegenerateSeed,
    #[error("genericity lost at vertex {0}")]
    GenericityLost(usize),
    #[error("recurrence coefficients cannot be made n-periodic")]
    NonPeriodicCoefficients,
    #[error("diagonals do not meet in a single point at vertex {0}")]
    DegenerateIntersection(usize),
    #[error("consecutive vertices do not span a hyperplane at vertex {0}")]
    DegenerateHyperplane(usize),

    #[error("degenerate configuration at site {0}")]
    DegenerateConfiguration(usize),
    #[error("degenerate cross-ratio quadruple")]
    DegenerateQuadruple,
    #[error("lattice seed violates the Toda-type equation at ({0}, {1})")]
    InconsistentSeed(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures caused by a non-generic point of an orbit (as
    /// opposed to malformed input). The CLI maps these to exit code 3.
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            Error::DivisionByZero
                | Error::PoleEncountered
                | Error::SigmaVanishes(_)
                | Error::PDenominatorVanishes(_)
                | Error::CornerDenominatorVanishes(_)
                | Error::DegenerateSeed
                | Error::GenericityLost(_)
                | Error::NonPeriodicCoefficients
                | Error::DegenerateIntersection(_)
                | Error::DegenerateHyperplane(_)
                | Error::DegenerateConfiguration(_)
                | Error::DegenerateQuadruple
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
