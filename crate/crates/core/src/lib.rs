//! Displacement, critical turns and minset exploration for automorphisms of
//! free splittings, represented as self-maps of metric graphs of groups.

pub mod cli;
pub mod critical;
pub mod displacement;
pub mod error;
pub mod explore;
pub mod fixture;
pub mod graph;
pub mod group;
pub mod legality;
pub mod lp;
pub mod map;
pub mod moves;
pub mod path;
pub mod report;
pub mod surgery;
pub mod util;

pub use error::{Error, Result};
