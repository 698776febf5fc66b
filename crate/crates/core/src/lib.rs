//! Mod-2 cohomology of real and complex Milnor manifolds, the Borel
//! spectral sequence of free `Z2` and `S1` actions on them, orbit-space ring
//! presentations, and Borsuk–Ulam type obstruction reports.

pub mod algebra;
pub mod aut;
pub mod cli;
pub mod error;
pub mod f2core;
pub mod milnor;
pub mod orbit;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
