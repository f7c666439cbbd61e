//! Derived deformation invariants of an affine scheme at a rational point.
//!
//! The pipeline runs bottom-up: exact polynomials ([`poly`]), a Buchberger
//! engine for ideals and free-module submodules ([`groebner`]), semi-free
//! dg-algebra resolutions and their linearization at the point ([`dg`]),
//! higher tangent spaces with classification and bracket ([`tangent`]), and
//! normal-cone / curvilinear-obstruction / cosection checks ([`cone`]).
//! [`job`] and [`report`] turn all of that into a batch tool.

pub mod cone;
pub mod corpus;
pub mod dg;
pub mod error;
pub mod groebner;
pub mod job;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod tangent;

pub use error::{Error, Result};
