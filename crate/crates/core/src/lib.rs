//! Mixed finite elements for three-dimensional linear elasticity with weakly imposed
//! stress symmetry, built on a small exact exterior-calculus kernel.

pub mod assembly;
pub mod cli;
pub mod fespace;
pub mod linalg;
pub mod mesh;
pub mod polyform;
pub mod solver;
pub mod verify;
pub mod sparse;
