//! Coupled-cluster polynomial workbench: second-quantized Fock-space
//! algebra, exponential cluster parametrizations, projected polynomial
//! root systems, Newton-polytope root counting, and numerical solvers.

pub mod ccgen;
pub mod cluster;
pub mod fock;
pub mod poly;
pub mod polytope;
pub mod scalar;
pub mod solve;
