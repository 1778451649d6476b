//! Random quadrangulations of the sphere: exact enumeration, uniform
//! sampling, irreducible components and their block structure, pattern
//! fill/remove couplings, face-opening growth, and exact tools for finite
//! metric measure spaces.

pub mod decomposition;
pub mod enumeration;
pub mod exchangeable;
pub mod ghp;
pub mod growth;
pub mod map_kernel;
