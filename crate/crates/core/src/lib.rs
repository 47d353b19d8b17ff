//! Exact witnesses, certificates and stress harnesses for discrete Helly-type
//! theorems on axis-parallel boxes and H-convex sets.
//!
//! All arithmetic is exact (`BigRational`). Point sets are iterated in
//! lexicographic order, and every tie in the constructive procedures is broken
//! by lowest index so that certificates are reproducible.

pub mod bits;
pub mod combinatorics;
pub mod error;
pub mod fractional;
pub mod gen;
pub mod geometry;
pub mod hconvex;
pub mod helly;
pub mod instance;
pub mod nerve;
pub mod rational;

pub use error::{Error, Result};
pub use geometry::{achiever_subfamily, bbox, box_intersection, lex_compare, AxisBox, Point, PointSet};
pub use rational::Rational;
