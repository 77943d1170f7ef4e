//! Error type shared by all modules.

use core::fmt;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input was NaN or infinite.
    NonFinite,
    /// A torus modulus or period matrix had a non-positive imaginary part.
    InvalidModulus,
    /// Period matrix is not symmetric to working tolerance.
    NotSymmetric,
    /// Imaginary part of a period matrix is not positive definite.
    NotPositiveDefinite,
    /// Genus outside the supported range for this operation.
    UnsupportedGenus(u32),
    /// Hurwitz zeta evaluated at its pole s = 1.
    PoleAtOne,
    /// A parameter that must be positive was not.
    NonPositiveParameter(&'static str),
    /// Argument outside the documented domain.
    InvalidArgument(&'static str),
    /// Grid resolution below the supported minimum.
    ResolutionTooSmall(usize),
    /// Field length does not match the grid it is used with.
    GridMismatch,
    /// Green function evaluated on the diagonal.
    CoincidentPoints,
    /// Quasi-subharmonicity violated; carries the minimum of f_V found.
    Admissibility(f64),
    /// Potential family not supported by this operation.
    UnsupportedFamily,
    /// A genus >= 1 operation was called without a period matrix.
    MissingTau,
    /// Series failed its convergence guard.
    SeriesDivergence,
    /// An internal consistency check failed (carries the deviation).
    IdentityCheck(f64),
    /// Dimensions of vectors/matrices disagree.
    DimensionMismatch,
    /// Singular or near-singular matrix in a factorization.
    SingularMatrix,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite => write!(f, "non-finite input"),
            Error::InvalidModulus => write!(f, "modulus must have positive imaginary part"),
            Error::NotSymmetric => write!(f, "period matrix must be symmetric"),
            Error::NotPositiveDefinite => {
                write!(f, "imaginary part of period matrix must be positive definite")
            }
            Error::UnsupportedGenus(g) => write!(f, "unsupported genus {g}"),
            Error::PoleAtOne => write!(f, "hurwitz zeta has a pole at s = 1"),
            Error::NonPositiveParameter(name) => write!(f, "parameter {name} must be positive"),
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::ResolutionTooSmall(r) => write!(f, "grid resolution {r} too small"),
            Error::GridMismatch => write!(f, "field does not match grid"),
            Error::CoincidentPoints => write!(f, "green function singular at coincident points"),
            Error::Admissibility(m) => {
                write!(f, "potential not quasi-subharmonic (min f_V = {m})")
            }
            Error::UnsupportedFamily => write!(f, "potential family not supported here"),
            Error::MissingTau => write!(f, "period matrix required for genus >= 1"),
            Error::SeriesDivergence => write!(f, "series failed convergence guard"),
            Error::IdentityCheck(d) => write!(f, "internal identity check failed by {d}"),
            Error::DimensionMismatch => write!(f, "dimension mismatch"),
            Error::SingularMatrix => write!(f, "matrix is singular to working precision"),
        }
    }
}
