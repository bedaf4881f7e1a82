//! Exact arithmetic around Pascal's triangle mod p.
//!
//! * [`modp`]: prime moduli, residues, base-p digits, and three routes to
//!   binomial coefficients mod p (Pascal recurrence, Lucas, Kummer/Legendre).
//! * [`fpmatrix`]: dense matrices and polynomials over `F_p`, Jordan blocks,
//!   geometric sums, and the superdiagonal decomposition.
//! * [`binom_sums`]: partial column sums `S(p^n, i)` and their congruence.
//! * [`holomorph`]: the groups `Hol(F_p^m, A)`, element orders, and exponents
//!   by closed form and by exhaustive enumeration.
//! * [`cli`]: the `pascal-modp` command-line front end.

pub mod binom_sums;
pub mod cli;
pub mod error;
pub mod fpmatrix;
pub mod holomorph;
pub mod modp;

pub use error::{Error, Result};
