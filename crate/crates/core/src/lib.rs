pub mod edge;
pub mod error;
pub mod identities;
pub mod kernel;
pub mod measure;
pub mod montecarlo;
pub mod partition;
pub mod rsk;
pub mod scalar;
pub mod series;
pub mod symfunc;
