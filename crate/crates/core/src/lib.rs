//! Mixed finite elements for Reissner-Mindlin plates with tangentially
//! continuous rotations and normal-normal continuous bending moments.

pub mod assembly;
pub mod fespace;
pub mod material;
pub mod mesh;
pub mod postprocess;
pub mod quadrature;
pub mod solver;
pub mod study;
