//! IO companion for the `jdd-core` engine: corpus and parse-annotation file
//! formats, config files, knowledge-base snapshots, result exports, the
//! synthetic-corpus generator and the ingest/build pipeline behind the CLI.

pub mod brackets;
pub mod config_file;
pub mod conllu;
pub mod corpus;
pub mod export;
pub mod kvconf;
pub mod pipeline;
pub mod snapshot;
pub mod synth;
