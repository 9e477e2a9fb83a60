//! Finite topological spaces and two idempotent monads on them: the
//! ultrafilter spectrum of the clopen algebra, and the completely-prime
//! filter space of the open frame. Both arise as limits over comma diagrams
//! of maps into small generator families (finite discrete spaces, or
//! Sierpinski powers); the `codensity` module computes those limits by brute
//! force and compares them with the monad carriers.
//!
//! Everything is exhaustive and deterministic: subsets are bitmasks, open
//! families are kept in a fixed canonical order, and enumerations state their
//! orders so byte-identical output is reproducible.

pub mod census;
pub mod classify;
pub mod codensity;
pub mod doc;
pub mod laws;
pub mod sober;
pub mod space;
pub mod stone;

pub use classify::{classify, Classification};
pub use space::{ContinuousMap, FiniteSpace, PointSet};
