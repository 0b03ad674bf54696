//! Exact coeffective and reduced cohomology for finite cochain models of
//! symplectic nilmanifolds, solvmanifolds and their torus-invariant subcomplexes.

pub mod exterior;
pub mod linalg;
pub mod complexes;
pub mod lie_ce;
pub mod torus;
pub mod coeffective;
pub mod model;
pub mod registry;
pub mod fuzz;
pub mod cli;
