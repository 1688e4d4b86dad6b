pub mod bounded;
pub mod chains;
pub mod cli;
pub mod corpus;
pub mod differential;
pub mod engine;
pub mod error;
pub mod graph;
pub mod harmless;
pub mod io;
pub mod knonblocker;
pub mod nonblocker;
pub mod oracle;
pub mod problem;
pub mod solve;

pub use error::{Error, ParseError, Result};
pub use graph::{Graph, GraphBuilder, VertexId, VertexSet};
pub use problem::{Problem, Solution};
