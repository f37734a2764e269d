//! Exact tilting theory over bound quiver algebras on prime fields.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod linalg;
pub mod options;
pub mod par;
pub mod rep;
pub mod homology;
pub mod tilting;
pub mod derived;
pub mod tstructures;
pub mod cli;
