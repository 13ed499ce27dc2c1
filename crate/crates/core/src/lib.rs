//! Linear mixed Hodge-Riemann relations for polarizations that are
//! `m`-positive and semipositive but possibly degenerate.
//!
//! The crate provides the constant-coefficient exterior calculus on `C^n`
//! ([`exterior`]), positivity cones of real `(1,1)`-forms ([`positivity`]),
//! hyperplane restriction ([`restriction`]), the Hermitian form `Q` with its
//! primitive subspaces and Lefschetz maps ([`hodge_riemann`]) and a batch
//! verification harness with JSON reports ([`harness`]).

pub mod error;
pub mod exterior;
pub mod harness;
pub mod hodge_riemann;
pub mod linalg;
pub mod positivity;
pub mod restriction;
pub mod tolerance;

pub use error::{Error, Result};
pub use exterior::{basis_of, conjugate, extract, inner_product, wedge, Form, MultiIndex};
pub use hodge_riemann::Instance;
pub use positivity::HermitianOneOneForm;
pub use tolerance::Tolerance;
