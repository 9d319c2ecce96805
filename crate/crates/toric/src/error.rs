use crate::lattice::LatticeVector;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the crate. Overflow is a first-class
/// outcome: no operation ever wraps silently.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("vector pair has determinant {det}, expected 1")]
    NotUnimodular { det: i64 },

    #[error("a complete fan needs at least 3 rays, got {0}")]
    TooFewRays(usize),

    #[error("ray {index} not primitive: {ray}")]
    NonPrimitiveRay { index: usize, ray: LatticeVector },

    #[error("consecutive rays at position {index} have determinant {det}, expected 1")]
    NonUnitDeterminant { index: usize, det: i64 },

    #[error("ray cycle winds {0} times around the origin, expected exactly 1")]
    WrongWinding(usize),

    #[error("rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },

    #[error("gamma sequence needs at least 3 entries, got {0}")]
    GammaTooShort(usize),

    #[error("gamma recurrence does not return to the starting ray: reached {endpoint}")]
    NotClosed { endpoint: LatticeVector },

    #[error("gamma at position {index} is inconsistent with the reconstructed rays: sequence has {given}, rays force {forced}")]
    GammaMismatch {
        index: usize,
        given: i64,
        forced: i64,
    },

    #[error("ray index {index} out of range for {rays} rays")]
    IndexOutOfRange { index: usize, rays: usize },

    #[error("divisor has {got} coefficients for a fan with {expected} rays")]
    CoefficientCount { got: usize, expected: usize },

    #[error("operands are defined on different fans")]
    FanMismatch,

    #[error("divisor is not ample: intersection with curve {witness} is {value}")]
    NotAmple { witness: usize, value: i64 },

    #[error("cannot blow down a 3-ray fan")]
    BlowdownMinimal,

    #[error("cannot blow down ray {index}: its gamma is {gamma}, need 1")]
    BlowdownObstructed { index: usize, gamma: i64 },

    #[error("subset classification is limited to 20 rays, got {0}")]
    TooManyRays(usize),

    #[error("{0}")]
    InvalidArgument(String),
}
