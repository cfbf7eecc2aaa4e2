//! Special functions, quadrature and contour sampling.

pub mod contour;
pub mod fourier_grid;
pub mod gamma;
pub mod jet;
pub mod quadrature;
pub mod zeta;

pub use num_complex::Complex64 as C64;

pub use contour::{contour_laurent, contour_laurent_multi, contour_laurent_vec};
pub use fourier_grid::{lagrange_uniform, FourierTable};
pub use gamma::{
    check, cis, complex_gamma, cos_pi, factorial, is_nonpositive_integer, ln_gamma, principal_arg,
    principal_power, recip_gamma, sin_pi,
};
pub use jet::Jet;
pub use quadrature::{
    gauss_legendre, gl16, gl20, integrate_decaying, integrate_exp_sinh, integrate_panels,
    integrate_smooth, QuadratureSpec,
};
pub use zeta::riemann_zeta_oracle;

/// Shorthand for a real number as a complex value.
#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}
