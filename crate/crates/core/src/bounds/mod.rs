//! Capacity-error-function bounds and the quantities they are built from.

mod lp;
mod rates;
mod roots;
mod sphere;

pub use lp::{zero_error_capacity, InputDistribution, ZeroErrorSolution};
pub use rates::{
    binary_entropy, c_upper, entropy_q, lower_envelope, r_dl, r_mr, symmetric_capacity,
    zero_error_rate,
};
pub use roots::{run_polynomial, z_r};
pub use sphere::m_upper;
