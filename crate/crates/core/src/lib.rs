//! Geometric joins of colored point sets and matroids: exact membership,
//! nerve topology, constructive certificates, and a seeded search harness.

pub mod certificates;
pub mod error;
pub mod filtration;
pub mod geometry;
pub mod harness;
pub mod join;
pub mod rational;
pub mod rng;
pub mod topology;

pub use error::{Error, Result};
pub use geometry::{Hyperplane, QPoint};
pub use rational::Rational;
