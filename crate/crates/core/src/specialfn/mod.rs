//! Classical special functions used by the closed forms and identities.

mod bessel;
mod besselpoly;
mod gamma;
mod zeta;

pub use bessel::{
    bessel_j, bessel_j_derivative, bessel_j_normalized, bessel_zero, mcmahon_guess,
    BesselZeroTable,
};
pub use besselpoly::{bessel_poly, bessel_poly_roots, BesselPolynomial, PRINTED_THETA2};
pub use gamma::{digamma, gamma, polygamma};
pub use zeta::{hurwitz_zeta, multiple_t, riemann_zeta, t_value};
