//! Exact calculus of nearly convex sets, set-valued maps and extended-real
//! functions on finite unions of relatively open polyhedra.

pub mod conjugate;
pub mod duality;
pub mod exactlp;
pub mod linalg;
pub mod ncset;
pub mod plfunc;
pub mod polyhedron;
pub mod rational;
pub mod svmap;
pub mod variational;

pub use exactlp::{Constraint, Extended, LpOutcome, LpStatus, MixedSystem};
pub use linalg::{RMatrix, RVector};
pub use ncset::{NCSet, ROPoly};
pub use plfunc::PLFunction;
pub use polyhedron::{HPoly, VPoly};
pub use rational::Rational;
pub use svmap::SVMap;
