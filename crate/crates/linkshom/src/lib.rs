//! Exact computation of rational Betti numbers for spaces of long links
//! modulo immersions, together with the closed-form Euler series and
//! radius-of-convergence bounds that cross-certify the results.
//!
//! The engine evaluates configuration-space cohomology (in the Arnold
//! presentation, [`arnold`]) on a simplicial model of a wedge of spheres
//! ([`simplicial`]), using the functoriality of the cohomology in maps of
//! finite pointed sets ([`gamma`]). For each internal degree this yields a
//! finite chain complex ([`hochschild`]) whose homology dimensions, graded by
//! total degree, are the reported Betti numbers. All linear algebra is exact
//! over the rationals ([`linalg`]); generating-series oracles live in
//! [`series`].

pub mod arnold;
pub mod cache;
pub mod gamma;
pub mod hochschild;
pub mod job;
pub mod linalg;
pub mod poisson;
pub mod series;
pub mod simplicial;
pub mod verify;

pub use arnold::{AlgebraElement, GenParity, OmegaMonomial};
pub use linalg::{RankPolicy, RankResult, SparseRationalMatrix};

/// Engine version stamped into cache keys; bumping the crate version
/// invalidates every cached dimension and rank.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
