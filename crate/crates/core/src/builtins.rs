//! Built-in pair data with known answers.

use crate::cover_group::MultiplierSystem;
use crate::error::Result;
use crate::lattice::{
    divisor_coefficients, Coefficients, DeltaVector, Family, PairSpec, ShiftedLattice,
};
use crate::numerics::{riemann_zeta_oracle, C64};
use std::f64::consts::{PI, SQRT_2};

/// Non-holomorphic Eisenstein data: mu = 0, alpha_1 = alpha_2 = sigma_{-2 nu} on Z,
/// alpha(0) = zeta(2 nu), beta_1(0) = beta_2(0) = zeta(1 + 2 nu).
pub fn eisenstein(nu: f64) -> Result<PairSpec> {
    let a = C64::new(-2.0 * nu, 0.0);
    let alpha = divisor_coefficients(a, riemann_zeta_oracle(C64::new(2.0 * nu, 0.0))?);
    let beta = DeltaVector::from_pairs(&[(0, riemann_zeta_oracle(C64::new(1.0 + 2.0 * nu, 0.0))?)]);
    PairSpec::new(
        alpha.clone(),
        alpha,
        beta.clone(),
        beta,
        C64::new(0.0, 0.0),
        C64::new(nu, 0.0),
    )
}

/// theta(z) = sum_n e^{2 pi i n^2 z} on Gamma_0(4): mu = kappa = 1/2, nu = 1/4,
/// L = Z and Lhat = Z / 4, with its multiplier system.
pub fn theta4() -> Result<(PairSpec, MultiplierSystem)> {
    let l1 = ShiftedLattice::integers();
    let l2 = ShiftedLattice::new(0.0, 0.25)?;
    let alpha1 = Coefficients::new(
        l1,
        Family::Squares {
            q: 1.0,
            value: C64::new(SQRT_2 / PI, 0.0),
        },
        0.0,
        C64::new(1.0 / (SQRT_2 * PI), 0.0),
    )?;
    let alpha2 = Coefficients::new(
        l2,
        Family::Squares {
            q: 0.25,
            value: C64::new(1.0 / PI, 0.0),
        },
        0.0,
        C64::new(1.0 / (2.0 * PI), 0.0),
    )?;
    let spec = PairSpec::new(
        alpha1,
        alpha2,
        DeltaVector::new(),
        DeltaVector::new(),
        C64::new(0.5, 0.0),
        C64::new(0.25, 0.0),
    )?;
    Ok((spec, MultiplierSystem::theta4()))
}
