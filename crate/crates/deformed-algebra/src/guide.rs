//! The guide, embedded chapter by chapter so that every code sample in the
//! book runs under `cargo test --doc`. The rendered version lives in
//! `book/` at the repository root (`mdbook build book`).

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/deformation-functions.md")]
pub mod deformation_functions {}

#[doc = include_str!("../../../book/src/spin-realization.md")]
pub mod spin_realization {}

#[doc = include_str!("../../../book/src/oscillator.md")]
pub mod deformed_oscillator {}

#[doc = include_str!("../../../book/src/position-spectra.md")]
pub mod position_spectra {}

#[doc = include_str!("../../../book/src/minimal-length.md")]
pub mod minimal_length_routes {}

#[doc = include_str!("../../../book/src/iso-expansion.md")]
pub mod iso_expansion {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
