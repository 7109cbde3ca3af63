//! Symbolic and spectral diagnostics for linearly repetitive structures.
//!
//! The crate builds the combinatorial objects (Sturmian words from
//! continued-fraction coefficients, primitive substitution words, subword
//! languages), measures linear repetitivity and uniform pattern frequencies,
//! runs a subadditive-means engine with Fekete-style limit certificates,
//! reproduces a strictly ergodic system on which uniform subadditive
//! convergence fails, and applies the machinery to transfer-matrix Lyapunov
//! exponents, eigenvalue counting, and the integrated density of states of
//! finite-range operators. A small planar-geometry layer covers Delone point
//! sets and Voronoi tilings built by half-plane intersection.
//!
//! Core numerics are generic over the scalar type via `num-traits`
//! ([`scalar::Real`] for f32/f64, [`scalar::MatScalar`] for real or complex
//! matrix entries); exact integer and rational arithmetic is used where
//! counting must be exact. Concrete f64 aliases live at the crate root.

pub mod counterexample;
pub mod ergodic;
pub mod geometry;
pub mod repetitivity;
pub mod scalar;
pub mod spectral;
pub mod words;

pub use scalar::{MatScalar, Real};
pub use words::{ByteBudget, Generator, Letter, SturmianSpec, SubstitutionRule, Word};

/// f64 specializations of the scalar-generic types.
pub type Box64 = ergodic::BoxNd<f64>;
pub type SubadditiveFn64<'a> = ergodic::SubadditiveFn<'a, f64>;
pub type MeansReport64 = ergodic::MeansReport<f64>;
pub type Mat264 = spectral::Mat2<f64>;
pub type TransferState64 = spectral::TransferState<f64>;
pub type PotentialMap64 = spectral::PotentialMap<f64>;
pub type LyapunovReport64 = spectral::LyapunovReport<f64>;
pub type IdsReport64 = spectral::IdsReport<f64>;
pub type Point64 = geometry::Point2<f64>;
pub type PointSet64 = geometry::PointSet2D<f64>;
pub type VoronoiCell64 = geometry::VoronoiCell<f64>;
