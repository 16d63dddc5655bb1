use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCap { order: u64, cap: u64 },
    #[error("budget exceeded for {what}: need {needed}, cap {cap}")]
    Budget { what: &'static str, needed: u128, cap: u64 },
    #[error("word has arity {expected} but assignment has length {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("word is not freely trivial")]
    NotFreelyTrivial,
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("complex is disconnected")]
    Disconnected,
    #[error("element index {index} is outside a group of order {order}")]
    NotInGroup { index: usize, order: usize },
    #[error("code is not of quantum double shape: {0}")]
    NotQuantumDouble(String),
    #[error("group is not a non-abelian simple group")]
    NotSimple,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("unsupported group shape: {0}")]
    WrongShape(String),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("homomorphism is not in the Hom set")]
    NotInHom,
    #[error("X-check family {family} with element {element} does not commute with Z-check {check} on configuration {config:?}")]
    Commutation { family: usize, check: usize, element: usize, config: Vec<usize> },
    #[error("X-check family {family} with element {element} maps configuration {config:?} out of Z-check {check}")]
    Incompatible { family: usize, check: usize, element: usize, config: Vec<usize> },
}
