//! Exact homological invariants of connected graded noncommutative algebras:
//! Gröbner bases, minimal free resolutions, Betti tables, Ext- and
//! Castelnuovo–Mumford regularity, depth and AS-regular/Gorenstein detection.

pub mod algebra;
pub mod cache;
pub mod cli;
pub mod corpus;
pub mod field;
pub mod graded;
pub mod groebner;
pub mod harness;
pub mod linalg;
pub mod module;
pub mod parse;
pub mod poly;
pub mod presentation;
pub mod regularity;
pub mod resolution;
pub mod word;
