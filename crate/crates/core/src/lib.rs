#![cfg_attr(not(feature = "std"), no_std)]
extern crate alloc;

pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod perm;
pub mod prym;
pub mod quartics;
pub mod towers;
