//! Qutrit states as points of a four-dimensional Bloch ball.
//!
//! A qutrit density matrix expands in the nine Heisenberg-Weyl displacement
//! operators. Pairing the eight non-identity coefficients leaves four complex
//! numbers `n_i e^{i theta_i}`: the real weights `n = (n1, n2, n3, n4)` live
//! in the unit ball of `R^4` and the angles complete the state.
//!
//! ```
//! use qutrit_bloch::{BlochParams, positivity};
//!
//! // |0><0| sits on the n2 axis.
//! let zero = BlochParams::new([0.0, 1.0, 0.0, 0.0], [0.0; 4]).unwrap();
//! assert!((zero.purity() - 1.0).abs() < 1e-15);
//! assert!(positivity::is_physical(&zero, 1e-10));
//!
//! // Not every point in the ball is a state.
//! assert!(!positivity::is_point_physical([0.6, 0.6, 0.0, 0.0], 48, true).unwrap());
//! ```
//!
//! Modules:
//!
//! - [`matcore`]: small dense complex matrices, Hermitian eigenvalues.
//! - [`hw_basis`]: displacement operators and commuting classes.
//! - [`bloch_param`]: weights and angles, conversion to and from matrices.
//! - [`positivity`]: characteristic coefficients and the `a3 >= 0` test.
//! - [`sections`]: one-, two- and three-dimensional sections and grid scans.
//! - [`geometry`]: overlaps, distances, basis relations.
//! - [`mub`]: the four mutually unbiased bases.
//! - [`unital`]: diagonal unital channels and their Choi matrices.
//! - [`ensembles`]: Hilbert-Schmidt and Bures samplers and densities.
//! - [`gellmann`]: Gell-Mann coordinates.

pub mod bloch_param;
pub mod ensembles;
pub mod error;
pub mod gellmann;
pub mod geometry;
pub mod hw_basis;
pub mod matcore;
pub mod mub;
pub mod positivity;
pub mod sections;
pub mod unital;

pub use bloch_param::{BlochParams, PolarParams, StateDocument};
pub use error::{Error, Result};
pub use matcore::ComplexMatrix;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/hw-basis.md")]
    mod hw_basis {}
    #[doc = include_str!("../../../book/src/bloch-parametrization.md")]
    mod bloch_parametrization {}
    #[doc = include_str!("../../../book/src/positivity.md")]
    mod positivity {}
    #[doc = include_str!("../../../book/src/sections.md")]
    mod sections {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/mubs.md")]
    mod mubs {}
    #[doc = include_str!("../../../book/src/unital-maps.md")]
    mod unital_maps {}
    #[doc = include_str!("../../../book/src/ensembles.md")]
    mod ensembles {}
    #[doc = include_str!("../../../book/src/gell-mann.md")]
    mod gell_mann {}
}
