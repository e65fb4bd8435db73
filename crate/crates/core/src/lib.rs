//! Exact arithmetic checks for rational blow-down constructions of
//! surfaces of general type with `p_g = 0`.

pub mod blowdown;
pub mod cli;
pub mod construction;
pub mod exact;
pub mod lattice;
pub mod pencil;
pub mod tchain;
pub mod vankampen;
pub mod verify;
