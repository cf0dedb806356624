//! Records: the per-node slices of the BWT, and the [`RecordSource`] trait that the query
//! algorithms are written against.
//!
//! A record for node `v` has a header listing the outgoing edges `(w, BWT.rank(v, w))` in
//! increasing order of `w`, and a body that run-length encodes `BWT_v` using ranks in the
//! local alphabet.

use crate::model::{NodeId, ENDMARKER};

use std::borrow::Cow;
use std::ops::Range;

//-----------------------------------------------------------------------------

/// Outgoing edge in a record header: the successor and the number of occurrences of the
/// successor in the records of all smaller nodes.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub node: NodeId,
    pub offset: usize,
}

impl Edge {
    pub fn new(node: NodeId, offset: usize) -> Self {
        Edge { node, offset }
    }
}

/// A run of `len` copies of the `value`th successor in the local alphabet.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub value: usize,
    pub len: usize,
}

impl Run {
    pub fn new(value: usize, len: usize) -> Self {
        Run { value, len }
    }
}

/// A stored document array entry: the text at `offset` of a record has identifier `id`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sample {
    pub offset: usize,
    pub id: usize,
}

impl Sample {
    pub fn new(offset: usize, id: usize) -> Self {
        Sample { offset, id }
    }
}

/// A BWT position: offset within the record of a node.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub node: NodeId,
    pub offset: usize,
}

impl Position {
    pub fn new(node: NodeId, offset: usize) -> Self {
        Position { node, offset }
    }
}

//-----------------------------------------------------------------------------

/// A decoded or borrowed record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordView<'a> {
    pub edges: Cow<'a, [Edge]>,
    pub runs: Cow<'a, [Run]>,
    len: usize,
}

impl<'a> RecordView<'a> {
    pub fn new(edges: Cow<'a, [Edge]>, runs: Cow<'a, [Run]>) -> Self {
        let len = runs.iter().map(|r| r.len).sum();
        RecordView { edges, runs, len }
    }

    pub fn empty() -> Self {
        RecordView {
            edges: Cow::Owned(Vec::new()),
            runs: Cow::Owned(Vec::new()),
            len: 0,
        }
    }

    /// Length of the BWT slice.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn outdegree(&self) -> usize {
        self.edges.len()
    }

    pub fn successor(&self, rank: usize) -> NodeId {
        self.edges[rank].node
    }

    /// Rank of `w` in the local alphabet.
    pub fn edge_to(&self, w: NodeId) -> Option<usize> {
        self.edges.binary_search_by_key(&w, |e| e.node).ok()
    }

    /// Successor at offset `i`, or `None` if the offset is past the end.
    pub fn at(&self, i: usize) -> Option<NodeId> {
        let mut start = 0;
        for run in self.runs.iter() {
            if i < start + run.len {
                return Some(self.successor(run.value));
            }
            start += run.len;
        }
        None
    }

    /// Number of occurrences of the local rank `value` in `[0, i)`.
    fn local_rank(&self, i: usize, value: usize) -> usize {
        let mut start = 0;
        let mut count = 0;
        for run in self.runs.iter() {
            if start >= i {
                break;
            }
            if run.value == value {
                count += run.len.min(i - start);
            }
            start += run.len;
        }
        count
    }

    /// `BWT.rank((v, i), w)`, the offset of `LF((v, i), w)` in the record of `w`.
    pub fn lf(&self, i: usize, w: NodeId) -> Option<usize> {
        if w == ENDMARKER {
            return None;
        }
        let rank = self.edge_to(w)?;
        Some(self.edges[rank].offset + self.local_rank(i, rank))
    }

    /// Maps the offset range `range` to the range in the record of `w` with a single scan.
    /// Returns `None` if the result is empty.
    pub fn lf_range(&self, range: Range<usize>, w: NodeId) -> Option<Range<usize>> {
        if w == ENDMARKER || range.is_empty() {
            return None;
        }
        let rank = self.edge_to(w)?;
        let (mut before_start, mut before_end) = (0, 0);
        let mut start = 0;
        for run in self.runs.iter() {
            if start >= range.end {
                break;
            }
            if run.value == rank {
                before_start += run.len.min(range.start.saturating_sub(start));
                before_end += run.len.min(range.end - start);
            }
            start += run.len;
        }
        let base = self.edges[rank].offset;
        (before_end > before_start).then(|| base + before_start..base + before_end)
    }

    /// `LF((v, i))` following the successor stored at offset `i`. Returns `None` at the
    /// endmarker or past the end.
    pub fn follow(&self, i: usize) -> Option<Position> {
        let mut start = 0;
        let mut counts = vec![0usize; self.edges.len()];
        for run in self.runs.iter() {
            if i < start + run.len {
                let w = self.successor(run.value);
                if w == ENDMARKER {
                    return None;
                }
                let offset = self.edges[run.value].offset + counts[run.value] + (i - start);
                return Some(Position::new(w, offset));
            }
            counts[run.value] += run.len;
            start += run.len;
        }
        None
    }

    /// Follows every offset in the sorted slice with one scan over the runs.
    /// The result is `(successor, offset)` for each input, with `ENDMARKER` for the endmarker.
    pub fn follow_sorted(&self, offsets: &[usize]) -> Vec<Option<Position>> {
        debug_assert!(offsets.windows(2).all(|w| w[0] <= w[1]));
        let mut result = Vec::with_capacity(offsets.len());
        let mut counts = vec![0usize; self.edges.len()];
        let mut runs = self.runs.iter();
        let mut start = 0;
        let mut current: Option<&Run> = runs.next();
        for &i in offsets {
            while let Some(run) = current {
                if i < start + run.len {
                    break;
                }
                counts[run.value] += run.len;
                start += run.len;
                current = runs.next();
            }
            match current {
                Some(run) => {
                    let w = self.successor(run.value);
                    let offset = self.edges[run.value].offset + counts[run.value] + (i - start);
                    result.push(Some(Position::new(w, offset)));
                }
                None => result.push(None),
            }
        }
        result
    }

    /// The BWT slice as a sequence of successor nodes.
    pub fn decompress(&self) -> Vec<NodeId> {
        let mut result = Vec::with_capacity(self.len);
        for run in self.runs.iter() {
            let w = self.successor(run.value);
            result.extend(std::iter::repeat_n(w, run.len));
        }
        result
    }

    /// Number of occurrences of each successor, in header order.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.edges.len()];
        for run in self.runs.iter() {
            counts[run.value] += run.len;
        }
        counts
    }

    pub fn into_owned(self) -> RecordView<'static> {
        RecordView {
            edges: Cow::Owned(self.edges.into_owned()),
            runs: Cow::Owned(self.runs.into_owned()),
            len: self.len,
        }
    }
}

//-----------------------------------------------------------------------------

/// Read access to the records and stored document array samples of an index.
///
/// Implemented by [`crate::DynamicGbwt`] and [`crate::CompressedGbwt`]. The query algorithms
/// in [`crate::query`] work with any implementation.
pub trait RecordSource {
    /// Number of indexed texts.
    fn sequences(&self) -> usize;

    /// Total length of the texts including one endmarker per text.
    fn size(&self) -> usize;

    /// Smallest node with a record, or `None` if the index has no nodes.
    fn first_node(&self) -> Option<NodeId>;

    /// Number of node records (excluding the endmarker record). Records cover the range
    /// `first_node .. first_node + node_count`.
    fn node_count(&self) -> usize;

    /// Record for node `v` or for the endmarker. `None` if `v` is outside the node range.
    fn record(&self, v: NodeId) -> Option<RecordView<'_>>;

    /// Stored text identifier at the position, if any.
    fn sampled_id(&self, v: NodeId, offset: usize) -> Option<usize>;

    /// All stored samples of a record in offset order.
    fn samples(&self, v: NodeId) -> Vec<Sample>;

    /// Returns `true` if the record of `v` has stored samples.
    fn has_samples(&self, v: NodeId) -> bool {
        !self.samples(v).is_empty()
    }

    /// Distance between stored samples along a text.
    fn sample_rate(&self) -> usize;

    /// `true` if every text was indexed together with its reverse path.
    fn is_bidirectional(&self) -> bool;

    /// Returns `true` if `v` is the endmarker or inside the node range.
    fn has_record(&self, v: NodeId) -> bool {
        if v == ENDMARKER {
            return true;
        }
        match self.first_node() {
            Some(first) => v >= first && v < first + self.node_count(),
            None => false,
        }
    }

    /// Inclusive node range, or `None` if there are no node records.
    fn node_range(&self) -> Option<(NodeId, NodeId)> {
        let first = self.first_node()?;
        (self.node_count() > 0).then(|| (first, first + self.node_count() - 1))
    }

    /// Node ids with a non-empty record, in ascending order.
    fn nodes(&self) -> Vec<NodeId> {
        let Some(first) = self.first_node() else {
            return Vec::new();
        };
        (first..first + self.node_count())
            .filter(|&v| self.record(v).is_some_and(|r| !r.is_empty()))
            .collect()
    }
}

//-----------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    // BWT_v = [5, 5, 6, 5, 0] over local alphabet [0, 5, 6].
    fn example() -> RecordView<'static> {
        RecordView::new(
            Cow::Owned(vec![Edge::new(0, 0), Edge::new(5, 10), Edge::new(6, 3)]),
            Cow::Owned(vec![
                Run::new(1, 2),
                Run::new(2, 1),
                Run::new(1, 1),
                Run::new(0, 1),
            ]),
        )
    }

    #[test]
    fn scans() {
        let record = example();
        assert_eq!(record.len(), 5);
        assert_eq!(record.decompress(), vec![5, 5, 6, 5, 0]);
        assert_eq!(record.at(2), Some(6));
        assert_eq!(record.at(5), None);
        assert_eq!(record.lf(0, 5), Some(10));
        assert_eq!(record.lf(3, 5), Some(12));
        assert_eq!(record.lf(5, 5), Some(13));
        assert_eq!(record.lf(3, 6), Some(4));
        assert_eq!(record.lf(3, 7), None);
        assert_eq!(record.lf(3, ENDMARKER), None);
        assert_eq!(record.lf_range(1..4, 5), Some(11..13));
        assert_eq!(record.lf_range(0..2, 6), None);
        assert_eq!(record.lf_range(2..2, 5), None);
        assert_eq!(record.follow(3), Some(Position::new(5, 12)));
        assert_eq!(record.follow(4), None);
        assert_eq!(record.counts(), vec![1, 3, 1]);
    }

    #[test]
    fn sorted_follow_matches_single() {
        let record = example();
        let offsets = [0, 0, 1, 2, 3, 4, 7];
        let batch = record.follow_sorted(&offsets);
        for (&i, result) in offsets.iter().zip(batch) {
            match result {
                Some(pos) if pos.node == ENDMARKER => assert_eq!(record.follow(i), None),
                other => assert_eq!(other, record.follow(i)),
            }
        }
    }
}
