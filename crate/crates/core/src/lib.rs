//! Finite modal algebras, neighborhood frames and the Q-filter duality
//! between them, with a formula toolkit and a bounded decision procedure
//! for the eight congruential logic classes.

pub mod algebra;
pub mod duality;
pub mod epsets;
pub mod error;
pub mod frames;
pub mod lab;
pub mod par;
pub mod selftest;
pub mod semantics;
pub mod syntax;

pub use algebra::{FiniteModalAlgebra, Filter, MeetFamilySet, Properties};
pub use epsets::{EPSet, ParametricFamily};
pub use error::{Error, Result};
pub use frames::NeighborhoodFrame;
pub use lab::{decide_valid, LogicClass, Verdict};
pub use par::Exec;
pub use syntax::{parse, Formula};
