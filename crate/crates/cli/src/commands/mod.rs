pub mod gen;
pub mod laplace;
pub mod stats;
pub mod sums;
pub mod verify;
