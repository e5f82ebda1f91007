use thiserror::Error;

/// Errors raised while building or validating structures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{structure}: axiom `{axiom}` fails at {witness}")]
    Axiom {
        structure: &'static str,
        axiom: &'static str,
        witness: String,
    },

    #[error("invalid spec: {0}")]
    Spec(String),

    #[error("element {element} is outside a carrier of size {size}")]
    OutOfRange { element: usize, size: usize },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("not a normal subgroup: {0}")]
    NotNormal(String),

    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("homomorphism is not surjective: target element {0} has no preimage")]
    NotSurjective(usize),

    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("cap exceeded: {0}")]
    Cap(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn axiom(structure: &'static str, axiom: &'static str, witness: String) -> Error {
    Error::Axiom {
        structure,
        axiom,
        witness,
    }
}
