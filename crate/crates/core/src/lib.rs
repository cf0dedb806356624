//! Run-length compressed FM-index over paths in a graph.
//!
//! Paths are sequences of node identifiers. The index stores, for each node, the successors
//! of that node in every path visiting it, ordered by the reverse prefix ending at the visit.
//! This supports counting and locating path fragments, and extracting complete paths.
//!
//! [`DynamicGbwt`] is the construction-time index. [`CompressedGbwt`] is the compact
//! immutable encoding that is written to disk. Both implement [`RecordSource`], and the
//! query algorithms in [`Search`] work with either.
//!
//! ```
//! use gbwt::{DynamicGbwt, Search};
//!
//! let paths = vec![vec![1, 2, 4], vec![1, 3, 4]];
//! let index = DynamicGbwt::from_paths(&paths, 1, false).unwrap();
//! assert_eq!(index.find(&[1, 2]).len(), 1);
//! assert_eq!(index.locate_fast(&index.find(&[4])), vec![0, 1]);
//! ```

pub mod compressed;
pub mod dynamic;
pub mod error;
pub mod model;
pub mod oracle;
pub mod query;
pub mod record;
pub mod succinct;
pub mod unfold;

pub use compressed::CompressedGbwt;
pub use dynamic::{DynamicGbwt, DEFAULT_SAMPLE_RATE};
pub use error::{GbwtError, Result};
pub use model::{Graph, NodeId, Orientation, OrientedNode, Path, ENDMARKER};
pub use query::{BidirectionalState, Direction, Search, SearchState};
pub use record::{Position, RecordSource, RecordView};
pub use unfold::{unfold, DuplicateMap, UnfoldOptions, UnfoldResult};

// The guide's code listings run as doc-tests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/paths.md")]
    mod paths {}
    #[doc = include_str!("../../../book/src/records.md")]
    mod records {}
    #[doc = include_str!("../../../book/src/construction.md")]
    mod construction {}
    #[doc = include_str!("../../../book/src/queries.md")]
    mod queries {}
    #[doc = include_str!("../../../book/src/compressed.md")]
    mod compressed {}
    #[doc = include_str!("../../../book/src/unfolding.md")]
    mod unfolding {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
