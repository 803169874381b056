//! Exact-arithmetic toolkit for quasi-smooth Fano 3-fold weighted hypersurfaces
//! of index 1.
//!
//! The toolkit models the 95 families of such hypersurfaces, classifies the
//! singular points of their members, and computes certified lower bounds (and
//! some exact values) for local alpha invariants. Every number that enters a
//! certificate is an exact rational; there is no floating point anywhere in
//! the verification path.
//!
//! Module map:
//! - [`rational`], [`poly`], [`factor`]: sparse quasi-homogeneous polynomial
//!   algebra over the rationals, with factorization of binary quasi-homogeneous
//!   forms.
//! - [`wspace`]: weighted projective spaces, well-formed models, cyclic quotient
//!   singularity types and Kawamata blowup data.
//! - [`catalog`]: the 95 families, derived numerics and membership flags, plus
//!   a brute-force completion oracle.
//! - [`member`]: concrete members `X = {F = 0}`: quasi-smoothness, singular
//!   points, center classification and normal forms.
//! - [`germ`], [`planar`]: log canonical thresholds of planar germs and of
//!   boundary pairs on weighted planes.
//! - [`lct`]: the bound-producing methods packaged as re-checkable certificates.
//! - [`pipeline`]: the per-member alpha invariant pipeline.
//! - [`report`]: structured reports for the CLI.

pub mod rational;
pub mod poly;
pub mod factor;
pub mod solve;
pub mod wspace;
pub mod catalog;
pub mod member;
pub mod germ;
pub mod planar;
pub mod lct;
pub mod pipeline;
pub mod report;

pub use rational::Rational;
pub use poly::{Monomial, Poly, QhDegree};
pub use wspace::{QuotientType, WeightedSpace};
pub use catalog::{Catalog, FamilyRecord};
pub use member::Member;
pub use lct::AlphaCertificate;
