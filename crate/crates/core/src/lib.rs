//! Exact combinatorics of strongly solvable spherical subgroups of reductive
//! groups.
//!
//! The crate models a connected reductive group through its Dynkin diagram
//! and a central rank, and provides
//!
//! * root systems and Cartan data ([`rootsys`]),
//! * exact integer lattices and abelian groups ([`lattice`]),
//! * exact linear feasibility ([`linprog`]) and rational polyhedral fans ([`fans`]),
//! * spherical systems and homogeneous spherical data ([`luna`]),
//! * admissible maps and Enriques systems ([`admissible`]),
//! * active root sets ([`ars`]) and weight semigroups ([`ews`]),
//! * bounded enumeration of admissible maps ([`enumerate`]).

pub mod admissible;
pub mod ars;
pub mod enumerate;
pub mod error;
pub mod ews;
pub mod fans;
pub mod lattice;
pub mod linprog;
pub mod luna;
pub mod report;
pub mod rootsys;

pub use error::{Error, Result};
pub use report::{Check, Report};
