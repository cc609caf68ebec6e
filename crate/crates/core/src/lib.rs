//! Exact computations on the secant variety of the Grassmannian `Gr(k, N)` in
//! its Plücker embedding: orbit classification of skew-symmetric tensors,
//! secant and tangent decompositions, and apolarity bounds for tangent spaces.

pub mod apolarity;
pub mod error;
pub mod grassmann;
pub mod identifiability;
pub mod index_set;
pub mod linalg;
pub mod modular;
pub mod multivector;
pub mod orbits;
pub mod rational;
pub mod sampling;

pub use error::{Error, Result};
pub use grassmann::{GlGenerator, GrassPoint, Subspace};
pub use index_set::IndexSet;
pub use linalg::RationalMatrix;
pub use multivector::{DualForm, Multivector};
pub use rational::Rational;
