//! Core engine for landscape analysis of Chinese criminal judgment documents.
//!
//! The crate is organised around three structures: a heterogeneous record
//! relation (one [`model::JddRecord`] per judgment document), a per-crime
//! sparse distribution matrix over action × damage × punishment-bucket
//! coordinates ([`kb::DistributionMatrix`]), and the forward/reverse index
//! pair that links the two ([`kb::KnowledgeBase`]). On top of the matrix,
//! [`query`] implements the analytical primitives (marginals, elbow cutoffs,
//! importance scores) and the two canned analysis pipelines.
//!
//! Everything here is pure and deterministic: no IO, no system time, no
//! hash-order dependence. File formats, snapshots and the CLI live in the
//! companion `jdd-kb` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod action;
pub mod config;
pub mod entity;
pub mod extract;
pub mod ingest;
pub mod kb;
pub mod model;
pub mod numeral;
pub mod parse;
pub mod query;
pub mod scale;

mod diag;

pub use diag::Diagnostic;
