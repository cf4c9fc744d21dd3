//! Exact symbolic engine for prolongation structures of nonlinear PDEs.

pub mod coeff;
pub mod jet;
pub mod forms;
pub mod su2;
pub mod conservation;
pub mod we;
pub mod dsl;
