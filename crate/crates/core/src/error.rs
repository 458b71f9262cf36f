use core::fmt;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A series argument lies outside the convergence region.
    NonConvergent { max_abs_x: f64 },
    /// The truncation budget ran out before the tail fell below tolerance.
    BudgetExceeded { degree: usize, last_term: f64 },
    /// An argument is outside the domain of the function.
    Domain(&'static str),
    /// A correlation matrix failed the positive semidefinite check.
    NotPsd { min_eigenvalue: f64 },
    /// The eigen solver did not converge.
    Solver,
    /// Two vectors that must be the same length are not.
    LengthMismatch { left: usize, right: usize },
    /// A user placement leaves the serving cell.
    OutsideCell { normalized_distance: f64 },
    /// A probability came out of `[0, 1]` beyond the allowed slack.
    NumericalInstability { value: f64 },
    /// An input violates a documented invariant.
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergent { max_abs_x } => {
                write!(f, "series does not converge: max |x| = {max_abs_x} >= 1")
            }
            Error::BudgetExceeded { degree, last_term } => write!(
                f,
                "truncation budget exhausted at total degree {degree} (last term {last_term:e})"
            ),
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::NotPsd { min_eigenvalue } => write!(
                f,
                "correlation matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})"
            ),
            Error::Solver => f.write_str("eigen solver failed to converge"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::OutsideCell {
                normalized_distance,
            } => write!(
                f,
                "normalized distance {normalized_distance} places the user outside the serving cell"
            ),
            Error::NumericalInstability { value } => {
                write!(f, "probability {value} outside [0, 1] beyond slack")
            }
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
        }
    }
}

impl core::error::Error for Error {}
