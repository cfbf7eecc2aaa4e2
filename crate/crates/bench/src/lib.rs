//! Shared inputs for the benchmarks.

use pairzeta::builtins::eisenstein;
use pairzeta::lattice::{divisor_coefficients, DeltaVector, PairSpec};
use pairzeta::maass::{expansion_from_pair, MaassExpansion};
use pairzeta::numerics::riemann_zeta_oracle;
use pairzeta::C64;

pub const NU: f64 = 0.3;

pub fn eisenstein_pair() -> PairSpec {
    eisenstein(NU).expect("eisenstein data")
}

pub fn eisenstein_expansion() -> MaassExpansion {
    let c = |x: f64| C64::new(x, 0.0);
    let alpha = divisor_coefficients(c(-2.0 * NU), riemann_zeta_oracle(c(2.0 * NU)).unwrap());
    let beta = DeltaVector::from_pairs(&[(0, riemann_zeta_oracle(c(1.0 + 2.0 * NU)).unwrap())]);
    expansion_from_pair(&alpha, &beta, 0.0, c(NU), 0.0).expect("expansion")
}
