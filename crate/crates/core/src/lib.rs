#![no_std]
extern crate alloc;

pub mod analysis;
pub mod code_graph;
pub mod coding;
pub mod field;
pub mod fixtures;
pub mod flow;
pub mod labeling;
pub mod network;
