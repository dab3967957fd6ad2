//! Exact computation in Thompson's group F: tree diagrams, piecewise-linear
//! dynamics, conjugator constructions and co-generation certificates.

pub mod cogen;
pub mod construct;
pub mod dynamics;
pub mod element;
pub mod eqrel;
pub mod error;
pub mod sample;
pub mod words;

pub use element::{parse, AbelianImage, AffinePiece, BranchPair, Element};
pub use error::{Error, Result};
pub use words::{BinaryWord, Dyadic, Interval, Rational};
