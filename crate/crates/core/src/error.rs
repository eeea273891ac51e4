use rust_decimal::Decimal;
use thiserror::Error;

use crate::banking::LoanId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input fell outside the range a model is defined on.
    #[error("{name} = {value} is out of range: expected {expected}")]
    Domain {
        name: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("issuing {requested} would raise credit to {would_be}, above the reserve cap {cap}")]
    ReserveBreach {
        requested: Decimal,
        would_be: Decimal,
        cap: Decimal,
    },

    #[error("unknown loan {0}")]
    UnknownLoan(LoanId),

    #[error("repayment {amount} exceeds the {outstanding} outstanding on loan {id}")]
    Overpayment {
        id: LoanId,
        amount: Decimal,
        outstanding: Decimal,
    },

    #[error("spending {spend} exceeds the {available} available")]
    Infeasible { spend: Decimal, available: Decimal },

    #[error("invalid wealth distribution: {0}")]
    InvalidDistribution(String),

    #[error("incentive is only defined on a sorted distribution")]
    Unsorted,

    #[error("cross-holdings do not resolve: spectral radius {0} >= 1")]
    IrresolvableNetwork(f64),

    #[error("invalid ownership network: {0}")]
    InvalidNetwork(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: impl ToString, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value: value.to_string(),
            expected,
        }
    }
}
