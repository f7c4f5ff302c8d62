use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("{value} is not a unit modulo {modulus}")]
    NonUnit { value: u64, modulus: u64 },
    #[error("residues modulo {0} and {1} cannot be combined")]
    ModulusMismatch(u64, u64),
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("elements belong to different groups")]
    MixedParents,
    #[error("group of order {order} exceeds the enumeration bound {bound}; supply a closed form instead")]
    TooLarge { order: u64, bound: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("degree {degree} is not a multiple of the period {period} of component {component}")]
    Degree {
        degree: u64,
        period: u64,
        component: String,
    },
    #[error("presentation check failed: {0}")]
    Presentation(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
}
