//! A deterministic, self-contained simulator and evaluation harness for web
//! agents across six era-specific frontend versions of three sites (Wiki,
//! News, Shop), plus the trajectory-collection pipeline and the
//! behavior-cloning dataset builder that consume it.

pub mod assets;
pub mod bc;
pub mod dom;
pub mod env;
pub mod harness;
pub mod judge;
pub mod net;
pub mod render;
pub mod sites;
pub mod taskset;
pub mod traj;
pub mod types;
pub mod urlenc;

pub use types::{PageKind, Site, Version};
