#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
//! Core of the annotext engine: document model, dictionaries, text stages,
//! entity disambiguation and enrichment. Needs only `alloc`; file formats,
//! IO and the service live in the `annotext` crate.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod builder;
pub mod doc;
pub mod edl;
pub mod enrich;
pub mod eval;
pub mod pipeline;
pub mod resources;
pub mod text;
