use alloc::string::String;

use thiserror::Error;

/// Construction and usage errors of the algebra layer.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("monomial order must list every generator exactly once")]
    BadOrder,
    #[error("cannot parse monomial `{0}`")]
    BadMonomial(String),
    #[error("cannot parse element `{0}`")]
    BadElement(String),
    #[error("odd generator squared in `{0}`")]
    OddSquare(String),
    #[error("rewrite rule `{0}` is not degree-homogeneous")]
    NotHomogeneous(String),
    #[error("rewrite rule `{0}` does not decrease in the monomial order")]
    NotDecreasing(String),
    #[error("torsion modulus must be at least 1")]
    ZeroModulus,
    #[error("scalar type does not match coefficient ring {0}")]
    RingMismatch(String),
    #[error("operands belong to different presentations or coefficient rings")]
    MixedAlgebras,
    #[error("element is not homogeneous")]
    NonHomogeneous,
    #[error("generator `{0}` has no exponent bound; enlarge the window")]
    Unbounded(String),
    #[error("n must be at least 1")]
    BadRank,
}
