//! Exact parabolic bundles on the projective line and Raynaud-type
//! semistability certificates.
//!
//! A parabolic bundle `E` of rank `r` and parabolic degree `d`, with weights
//! in (1/N)Z, is semistable exactly when `Hom_par(R, E) = 0` for a suitable
//! test bundle `R` depending only on `(r, d, N)`. This crate builds `R` on the
//! projective line in two settings (parabolic points `{0, inf}` through the
//! cyclic cover `z -> z^N`, and a single parabolic point), computes `Hom_par`
//! dimensions exactly, and checks the criterion and every identity it rests
//! on against independent oracles.
//!
//! Module map:
//! - [`exactlin`]: rationals and exact elimination.
//! - [`projline`]: splitting types, polynomial bundle maps, fiber evaluation.
//! - [`parabolic`]: flags, parabolic degree, line-sum algebra, gauge twists, oracles.
//! - [`hompar`]: `Hom_par` as a linear system.
//! - [`equivariant`]: linearized bundles on the cover and the correspondence.
//! - [`raynaud`]: the test bundles and the certificate.
//! - [`harness`]: enumeration and verification campaigns.
//! - [`io`]: JSON documents.

pub mod equivariant;
pub mod error;
pub mod exactlin;
pub mod harness;
pub mod hompar;
pub mod io;
pub mod parabolic;
pub mod projline;
pub mod raynaud;

pub use error::{Error, Result};
pub use exactlin::{RatMatrix, Rational};
