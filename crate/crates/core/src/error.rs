use std::fmt;

/// Errors raised by the numerical kernels and the checkers built on them.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    PoleAtNonpositiveInteger(f64),
    PoleAtOne,
    ZeroBase,
    NonFinite(&'static str),
    ToleranceNotReached { what: &'static str, estimate: f64 },
    TailNotIntegrable,
    SampleFailure(String),
    NotInDualLattice(f64),
    ZeroArgument,
    SupportTouchesZero,
    DerivativeOrderExceeded { needed: usize, available: usize },
    PoleHit(f64),
    PoleProximity { s: (f64, f64), pole: (f64, f64) },
    NormalizerVanishes,
    OutsideConvergence { re_s: f64, needed: f64 },
    GammaPole,
    EnvelopeMissing,
    NotUnimodular(f64),
    NotInGroup(String),
    CompletionFailure { c: i64, d: i64 },
    CompletionAmbiguity { c: i64, d: i64, diff: f64 },
    SpacingMismatch(f64),
    OddIntegerKappa(f64),
    ParameterOutOfRange(String),
    StructuralViolation(String),
    CaseNotCovered(String),
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PoleAtNonpositiveInteger(x) => write!(f, "gamma pole at {x}"),
            Error::PoleAtOne => write!(f, "zeta pole at s = 1"),
            Error::ZeroBase => write!(f, "principal power of zero"),
            Error::NonFinite(w) => write!(f, "non-finite value produced in {w}"),
            Error::ToleranceNotReached { what, estimate } => {
                write!(
                    f,
                    "{what}: tolerance not reached (error estimate {estimate:.3e})"
                )
            }
            Error::TailNotIntegrable => write!(f, "tail bound not integrable below the cap"),
            Error::SampleFailure(m) => write!(f, "contour sample failed: {m}"),
            Error::NotInDualLattice(t) => write!(f, "{t} is not in the dual lattice"),
            Error::ZeroArgument => write!(f, "automorphic factor evaluated at 0"),
            Error::SupportTouchesZero => write!(f, "support of the test function touches 0"),
            Error::DerivativeOrderExceeded { needed, available } => {
                write!(f, "derivative order {needed} exceeds available {available}")
            }
            Error::PoleHit(s) => write!(f, "local zeta pole hit at s = {s}"),
            Error::PoleProximity { s, pole } => write!(
                f,
                "s = {}{:+}i is too close to the pole {}{:+}i",
                s.0, s.1, pole.0, pole.1
            ),
            Error::NormalizerVanishes => write!(f, "normalizing local zeta value vanishes"),
            Error::OutsideConvergence { re_s, needed } => {
                write!(
                    f,
                    "Re s = {re_s} outside absolute convergence (need > {needed})"
                )
            }
            Error::GammaPole => write!(f, "Gamma(s) has a pole at s"),
            Error::EnvelopeMissing => write!(f, "decay envelope missing"),
            Error::NotUnimodular(d) => write!(f, "matrix determinant {d} is not 1"),
            Error::NotInGroup(m) => write!(f, "element not in the group: {m}"),
            Error::CompletionFailure { c, d } => write!(f, "cannot complete bottom row ({c}, {d})"),
            Error::CompletionAmbiguity { c, d, diff } => write!(
                f,
                "character-sum term depends on the completion of ({c}, {d}): diff {diff:.3e}"
            ),
            Error::SpacingMismatch(u2) => write!(f, "lattice spacing {u2} is not 1"),
            Error::OddIntegerKappa(k) => write!(f, "kappa = {k} is an odd integer"),
            Error::ParameterOutOfRange(m) => write!(f, "parameter out of range: {m}"),
            Error::StructuralViolation(m) => write!(f, "structural violation: {m}"),
            Error::CaseNotCovered(m) => write!(f, "case not covered: {m}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
