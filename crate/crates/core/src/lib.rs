//! Marked groups, Cayley-topology convergence checks, and the finite
//! approximation stages built from wreath products, symmetric/alternating/SL
//! encodings and diagonal products.

pub mod cayley;
pub mod constructions;
pub mod diagonal;
pub mod error;
pub mod groups;
pub mod pipeline;
pub mod spectral;
pub mod suites;

pub use error::{Error, Result};
pub use groups::{BigOrder, Element, Group, MarkedGroup};
