//! Exact symbolic verification of a three-point current algebra and its
//! free-field realization.
//!
//! The crate works over the commutative ring `R = C[t, t^-1, u]` with the
//! single relation `u^2 = t^2 + 4t`, realized with exact rational
//! coefficients. On top of it sit:
//!
//! - [`ring_r`]: arithmetic in `R`, its distinguished derivation
//!   `D = (t+2) d_u + u d_t`, and its finite automorphism group;
//! - [`kahler`]: the two-dimensional space of Kahler differentials modulo
//!   exact forms, the cocycle `(f, g) -> class of f dg`, and the induced
//!   character of the automorphism group;
//! - [`algebra`]: the centrally extended `sl2`-valued current algebra over
//!   `R`, the derivation algebra spanned by `t^n D` and `t^n u D`, and
//!   their semidirect sum with two central generators;
//! - [`formal_dist`]: local commutation relations between generating
//!   fields as finite formal-distribution identities, and exact
//!   mode-by-mode extraction of brackets from them;
//! - [`fock`]: a polynomial Fock module for two oscillator pairs and two
//!   Heisenberg fields, with two normal-ordering conventions;
//! - [`realization`]: normal-ordered free-field images of the current and
//!   derivation generators, and exact application of any field mode to any
//!   Fock vector;
//! - [`verify`]: the check suites that confirm every bracket identity
//!   mode-by-mode on test vectors, with machine-readable reports;
//! - [`parallel`]: order-preserving parallel or sequential execution of
//!   the check suites.
//!
//! All arithmetic is exact (`num::BigRational`); every check compares for
//! equality, never for closeness.

pub mod algebra;
pub mod fock;
pub mod formal_dist;
pub mod kahler;
pub mod parallel;
pub mod realization;
pub mod ring_r;
pub mod scalar;
pub mod verify;
