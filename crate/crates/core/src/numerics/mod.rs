//! Special functions, polynomial roots and quadrature.

mod gamma;
mod moments;
mod poly;
mod quadrature;

pub use gamma::upper_incomplete_gamma_int;
pub use moments::{erfcx, gaussian_linear_moment, half_gaussian_moment};
pub(crate) use moments::integer_moments;
pub use poly::Polynomial;
pub use quadrature::{
    integrate_interval, integrate_semi_infinite, EndpointTransform, Integral, QuadratureSpec,
};
