use core::fmt;

/// Errors raised by the physics and solver layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of a formula.
    Domain {
        quantity: &'static str,
        constraint: &'static str,
        value: f64,
    },
    /// An approximation was requested outside its range of validity.
    Precondition {
        quantity: &'static str,
        constraint: &'static str,
        value: f64,
    },
    /// The run description is inconsistent (grid, channels, step size).
    Config(alloc::string::String),
    /// The integration produced a non-finite value.
    NonFinite {
        tau: f64,
        z: f64,
        what: &'static str,
    },
}

impl Error {
    pub(crate) fn domain(quantity: &'static str, constraint: &'static str, value: f64) -> Self {
        Error::Domain {
            quantity,
            constraint,
            value,
        }
    }

    /// Short machine-readable category.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Precondition { .. } => "precondition",
            Error::Config(_) => "config",
            Error::NonFinite { .. } => "non-finite",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain {
                quantity,
                constraint,
                value,
            } => write!(f, "{quantity} = {value:e} violates {constraint}"),
            Error::Precondition {
                quantity,
                constraint,
                value,
            } => write!(
                f,
                "{quantity} = {value:e} outside approximation validity ({constraint})"
            ),
            Error::Config(msg) => write!(f, "invalid run configuration: {msg}"),
            Error::NonFinite { tau, z, what } => {
                write!(f, "non-finite {what} at tau = {tau:e} s, z = {z:e} m")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

/// Checks `value > 0` (and finite), producing a domain error otherwise.
pub(crate) fn positive(quantity: &'static str, value: f64) -> crate::Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(quantity, "> 0", value))
    }
}
