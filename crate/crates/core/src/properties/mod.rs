//! Spatial-structure properties checked against an estimate (static) or a
//! bounded exploration (dynamic), and causality queries over `C`.

mod causal;
mod query;
mod spatial;

pub use causal::{causal_chain, causes_of, CausalChain, ChainReport};
pub use query::{parse_queries, PropertyQuery, QueryParseError};
pub use spatial::{check_dynamic, check_static, Depth, DynamicVerdict, StaticVerdict};
