//! Exact computations for quantum covering groups and their ıquantum subalgebras.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod covering;
pub mod datum;
pub mod free_half;
pub mod iqsp;
pub mod linalg;
pub mod modules;
pub mod quasi;
pub mod scalar;
