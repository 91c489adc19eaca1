pub mod boundary;
pub mod codes;
pub mod dsl;
pub mod lattice;
mod exhaustive;
pub mod marker;
pub mod symbolic;
