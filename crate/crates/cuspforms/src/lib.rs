//! Level-one holomorphic cusp forms with exact arithmetic: Miller bases,
//! Hecke eigenforms, Petersson norms, eigenbasis decompositions and their
//! l^p statistics, plus the moment and value-distribution experiments built
//! on top of them.

pub mod analytic;
pub mod cache;
pub mod charpoly;
pub mod cli;
pub mod config;
pub mod decomp;
pub mod error;
pub mod hecke;
pub mod moments;
pub mod num_util;
pub mod qseries;
pub mod space;

pub use error::{Error, Result};
