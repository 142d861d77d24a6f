//! PT-symmetric quartic and sextic potentials with quasi-exactly-solvable
//! blocks, SUSY partner machinery, and independent numerical spectra.
//!
//! The crate is organized around the pipeline:
//!
//! * [`algebra`] — complex polynomials and rational expressions in the
//!   shifted coordinate `x + i*eps`;
//! * [`potentials`] — the quartic/sextic families, reduction to real shifted
//!   form, and PT-symmetry checks;
//! * [`susy`] — superpotentials, partner potentials, ground states, and
//!   intertwining diagnostics;
//! * [`qes`] — sl(2) generator matrices and the finite algebraic blocks;
//! * [`eigen`] — dense complex eigensolver plus a characteristic-polynomial
//!   oracle;
//! * [`shoot`] — complex-contour shooting and finite-difference spectra;
//! * [`cli`] — the `ptqes` command-line front end.

pub mod algebra;
pub mod cli;
pub mod eigen;
mod grid;
pub mod potentials;
pub mod qes;
pub mod shoot;
pub mod susy;

pub use algebra::{AlgebraError, HalfInt, RationalExpression, ShiftedPolynomial};
pub use num_complex::Complex64;
