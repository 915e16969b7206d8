//! Brute-force oracles, a seeded instance generator and theorem suites for
//! `nearconvex`.
//!
//! The oracles evaluate every set straight from its defining formula using
//! vertex enumeration and linear solves, never the simplex solver.

pub mod conj;
pub mod gen;
pub mod grid;
pub mod oset;
pub mod suite;
