//! Face openings, pattern occurrences and the fill/remove coupling.

pub mod opening;
pub mod pattern;

pub use opening::{close_face, open_face, OpenError};

#[cfg(test)]
mod tests;
