//! Aztec castles for the dP3 quiver: cluster variables from the tau
//! mutations, their contours and castles, and perfect matching formulas.

pub mod castle;
pub mod contour;
pub mod error;
pub mod matchings;
pub mod minmatch;
pub mod poly;
pub mod prism;
pub mod quiver;
pub mod render;
pub mod tiling;

pub use castle::{build_castle, Castle};
pub use contour::{classify_region, tuple_for_point, Contour, SignPattern};
pub use error::{Error, Result};
pub use matchings::Matching;
pub use poly::{LaurentPoly, Monomial, Var};
pub use prism::{cluster_var_at_point, tau_word_to_point, PrismState};
pub use quiver::{dp3_quiver, Quiver, Seed};
pub use tiling::{FaceId, LatticePoint};
