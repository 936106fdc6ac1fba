pub mod binom;
pub mod error;
pub mod families;
pub mod generate;
pub mod graph;
pub mod params;

pub use binom::{binom, BigCount};
pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub mod bounds;
pub mod clique;
pub mod hiprec;
pub mod search;
pub mod surgery;
pub mod verify;
