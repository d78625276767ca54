#[cfg(test)]
extern crate self as indepfam;

pub mod encoder;
pub mod filters;
pub mod format;
pub mod henkin;
pub mod proplogic;
pub mod setcore;
pub mod sexpr;
