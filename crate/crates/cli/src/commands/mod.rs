pub mod ed;
pub mod integrals;
pub mod mc;
pub mod model;
pub mod report;
pub mod sweep;
