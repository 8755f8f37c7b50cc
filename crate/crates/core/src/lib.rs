pub mod detour;
pub mod facts;
pub mod graph;
pub mod metrics;
pub mod render;
pub mod session;
pub mod subject;
pub mod tours;
#[cfg(feature = "server")]
pub mod service;
