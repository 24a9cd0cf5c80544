//! Exact computations with finite dg-categories and strictly unital
//! A∞-functors out of linear categories.
//!
//! The central operation is [`lift::lift_natural_transformation`]: given two
//! A∞-functors `F, G : E → B` from a linear category into a dg-category, a
//! natural transformation `H⁰(F) → H⁰(G)` and vanishing of the negative
//! cohomology of `B(F(E), G(E'))`, it constructs a closed degree-0 A∞-natural
//! transformation inducing it, degree by degree, and packages the result as a
//! checkable certificate.
//!
//! Modules, bottom up:
//!
//! * [`graded`]: exact fields, matrices, graded spaces, complexes, cohomology.
//! * [`dgcat`]: dg-category presentations, axiom validation, H⁰.
//! * [`ainf`]: A∞-functors, pre-natural transformations and their coboundary.
//! * [`dgmor`]: the dg-category of homotopy coherent morphisms.
//! * [`lift`]: the lifting algorithm and certificate verification.
//! * [`frontend`]: text formats and the command-line driver.

pub mod ainf;
pub mod dgcat;
pub mod dgmor;
pub mod error;
pub mod frontend;
pub mod graded;
pub mod lift;

pub use error::{Error, Result};
