//! An executable calculus of pointed and stable derivators at desk scale.
//!
//! The stable model is bounded chain complexes of finite-dimensional F_p
//! vector spaces; diagrams over finite index categories are strict functors,
//! homotopy Kan extensions are computed by finite normalized bar and cobar
//! constructions, and the structural comparison maps (total cofibers, partial
//! cones, Barratt-Puppe windows, canonical mates) are realized as explicit
//! chain maps. The represented model of finite-dimensional vector spaces
//! provides the non-stable contrast.

pub mod error;
pub mod matrix;
pub mod complex;
pub mod fincat;
pub mod shapes;
pub mod diagram;
pub mod bar;
pub mod kan;
pub mod mate;
pub mod derops;
pub mod repmodel;
pub mod jsonio;
pub mod ops;
pub mod report;
pub mod suites;

pub use error::{Error, Result};
