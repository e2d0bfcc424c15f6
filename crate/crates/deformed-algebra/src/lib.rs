//! Numerical laboratory for deformed Heisenberg algebras.
//!
//! The crate builds matrix and grid representations of the deformed
//! commutation relation `[X,P] = if(P)`, verifies that the deformation
//! families closing into three-generator Lie algebras behave as advertised,
//! and reproduces the spectra that follow: discrete position eigenvalues
//! under periodic/antiperiodic boundary conditions, the minimal length of
//! the Dirichlet case, and the deformed harmonic-oscillator levels with
//! their large-j contraction limit.
//!
//! Entry points by theme:
//!
//! * [`spin`] — spin-j matrices and their Casimir;
//! * [`oscillator`] — the X, P, F triple on a spin representation, the
//!   nonlinear relation check, and the oscillator spectra;
//! * [`deformation`] / [`closure`] — the family f = √(c + βp²) and the
//!   least-squares closure analysis f f′ = α + βp + γf;
//! * [`grid`] — pseudospectral momentum-space grids and position spectra;
//! * [`minimal_length`] — the quadrature and Dirichlet variational routes
//!   to the minimal length;
//! * [`iso`] / [`expansion`] — plane-group generators on the grid and their
//!   expansion into simple three-dimensional algebras.
//!
//! All operations are pure functions of their inputs; values can be moved
//! freely across threads and parameter sweeps parallelize without locking.

// `!(x > 0.0)` deliberately rejects NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closure;
pub mod deformation;
pub mod error;
pub mod expansion;
pub mod grid;
pub mod half;
pub mod iso;
pub mod minimal_length;
pub mod operator;
pub mod oscillator;
pub mod spectrum;
pub mod spin;

pub mod guide;

pub use error::{Error, Result};
pub use half::HalfInt;
pub use operator::{commutator, HermitianOperator, Symmetry, C64};
pub use spectrum::SpectrumReport;
