//! Instances over finite sets with disjoint-union tensor: partial functions,
//! partial injections and relations. Their traces are sums over token paths.

pub mod pfn;
pub mod pinj;
pub mod rel;

pub use pfn::{pfn_compose, pfn_tensor, pfn_trace, Pfn, PfnTable, TokenExit, TokenPath};
pub use pinj::{pinj_trace, pinj_validate, PInj, PInjTable};
pub use rel::{rel_compose, rel_tensor, rel_trace, Rel, RelTable};
