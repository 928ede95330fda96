use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("quadrature did not converge on [{a}, {b}]: value {value:e}, error estimate {error:e} after {subdivisions} subdivisions")]
    Quadrature {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("ODE integration failed at t = {t}: {reason}")]
    Ode { t: f64, reason: String },

    #[error("decay rate undefined: excited population {p_plus:e} at t = {t} is below the division threshold")]
    DivisionHazard { t: f64, p_plus: f64 },

    #[error("integration window [0, {t_end}] reaches the periodic recurrence time {recurrence}")]
    RecurrenceWindow { t_end: f64, recurrence: f64 },

    #[error("frequency grid holds {covered:.6} of the expected mass {expected:.6}")]
    InsufficientCoverage { covered: f64, expected: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
