//! Command-line front end for building, merging, querying and unfolding haplotype indexes.

pub mod bench;
pub mod commands;
pub mod fixtures;
pub mod graph_file;
pub mod manifest;
