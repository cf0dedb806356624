//! FM-index queries over any [`RecordSource`].
//!
//! Positions are `(node, offset)` pairs. A [`SearchState`] is the range of prefixes ending
//! with the pattern, stored as an offset range in the record of the last pattern node.
//! Queries report text identifiers, never offsets within texts.

use crate::error::{GbwtError, Result};
use crate::model::{flip, reverse_path, NodeId, Path, ENDMARKER};
use crate::record::{Position, RecordSource};

use std::ops::Range;

//-----------------------------------------------------------------------------

/// Range of prefixes ending with a pattern: offsets `range` in the record of `node`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SearchState {
    pub node: NodeId,
    pub range: Range<usize>,
}

impl SearchState {
    pub fn new(node: NodeId, range: Range<usize>) -> Self {
        SearchState { node, range }
    }

    /// The state matching nothing.
    pub fn empty() -> Self {
        SearchState {
            node: ENDMARKER,
            range: 0..0,
        }
    }

    /// Number of occurrences.
    pub fn len(&self) -> usize {
        self.range.len()
    }

    pub fn is_empty(&self) -> bool {
        self.range.is_empty()
    }
}

/// Search states for a pattern and for its reverse path in a bidirectional index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BidirectionalState {
    pub forward: SearchState,
    pub reverse: SearchState,
}

impl BidirectionalState {
    pub fn empty() -> Self {
        BidirectionalState {
            forward: SearchState::empty(),
            reverse: SearchState::empty(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// The state for the reverse pattern.
    pub fn flip(&self) -> Self {
        BidirectionalState {
            forward: self.reverse.clone(),
            reverse: self.forward.clone(),
        }
    }
}

/// Which end of the pattern a bidirectional extension adds to.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Append a node to the end.
    Forward,
    /// Prepend a node to the start.
    Backward,
}

//-----------------------------------------------------------------------------

/// Queries available on every record source.
///
/// ```
/// use gbwt::{DynamicGbwt, Search};
///
/// let paths = vec![vec![1, 2, 4, 6, 7], vec![1, 2, 5, 7], vec![1, 3, 4, 5, 7]];
/// let index = DynamicGbwt::from_paths(&paths, 1, false).unwrap();
/// let state = index.find(&[7]);
/// assert_eq!(state.len(), 3);
/// assert_eq!(index.locate_fast(&state), vec![0, 1, 2]);
/// assert!(index.find(&[4, 7]).is_empty());
/// ```
pub trait Search: RecordSource {
    /// `LF((v, i), w)`. Returns `None` if `w` is not a successor of `v`, if `w` is the
    /// endmarker, or if the position is not valid.
    fn lf(&self, pos: Position, w: NodeId) -> Option<Position> {
        let record = self.record(pos.node)?;
        if pos.offset >= record.len() {
            return None;
        }
        record
            .lf(pos.offset, w)
            .map(|offset| Position::new(w, offset))
    }

    /// `LF((v, i))` for the successor stored at the position. `None` at the endmarker.
    fn follow(&self, pos: Position) -> Option<Position> {
        self.record(pos.node)?.follow(pos.offset)
    }

    /// Extends the pattern of `state` with node `w`.
    fn extend(&self, state: &SearchState, w: NodeId) -> SearchState {
        if state.is_empty() {
            return SearchState::empty();
        }
        self.record(state.node)
            .and_then(|record| record.lf_range(state.range.clone(), w))
            .map_or_else(SearchState::empty, |range| SearchState::new(w, range))
    }

    /// Range of prefixes ending with the pattern. The empty pattern maps to the whole
    /// endmarker record, and extending that state with `v` gives the texts starting with `v`.
    fn find(&self, pattern: &[NodeId]) -> SearchState {
        let Some((&first, rest)) = pattern.split_first() else {
            return SearchState::new(ENDMARKER, 0..self.sequences());
        };
        if first == ENDMARKER {
            return SearchState::empty();
        }
        let mut state = match self.record(first) {
            Some(record) if !record.is_empty() => SearchState::new(first, 0..record.len()),
            _ => return SearchState::empty(),
        };
        for &w in rest {
            state = self.extend(&state, w);
            if state.is_empty() {
                break;
            }
        }
        state
    }

    /// Text identifiers for the state, locating each position separately by following
    /// LF until a stored sample is found. The result is sorted and keeps multiplicities.
    fn locate_direct(&self, state: &SearchState) -> Vec<usize> {
        let mut result = Vec::with_capacity(state.len());
        for offset in state.range.clone() {
            let mut pos = Position::new(state.node, offset);
            loop {
                if let Some(id) = self.sampled_id(pos.node, pos.offset) {
                    result.push(id);
                    break;
                }
                match self.follow(pos) {
                    Some(next) => pos = next,
                    None => break,
                }
            }
        }
        result.sort_unstable();
        result
    }

    /// Same result as [`Search::locate_direct`], but advances all unresolved positions by
    /// one LF step at a time, decoding each record once per step and mapping runs in a
    /// single scan.
    fn locate_fast(&self, state: &SearchState) -> Vec<usize> {
        let mut result = Vec::with_capacity(state.len());
        let mut active: Vec<Position> = state
            .range
            .clone()
            .map(|i| Position::new(state.node, i))
            .collect();
        let mut next_round = Vec::with_capacity(active.len());
        let mut pending = Vec::new();
        while !active.is_empty() {
            active.sort_unstable();
            next_round.clear();
            let mut start = 0;
            while start < active.len() {
                let node = active[start].node;
                let end = start
                    + active[start..]
                        .iter()
                        .take_while(|p| p.node == node)
                        .count();
                let Some(record) = self.record(node) else {
                    start = end;
                    continue;
                };
                pending.clear();
                if self.has_samples(node) {
                    for pos in &active[start..end] {
                        match self.sampled_id(node, pos.offset) {
                            Some(id) => result.push(id),
                            None => pending.push(pos.offset),
                        }
                    }
                } else {
                    pending.extend(active[start..end].iter().map(|p| p.offset));
                }
                for next in record.follow_sorted(&pending).into_iter().flatten() {
                    if next.node != ENDMARKER {
                        next_round.push(next);
                    }
                }
                start = end;
            }
            std::mem::swap(&mut active, &mut next_round);
        }
        result.sort_unstable();
        result
    }

    /// The text with identifier `id`.
    fn extract(&self, id: usize) -> Result<Path> {
        if id >= self.sequences() {
            return Err(GbwtError::SequenceOutOfRange {
                id,
                count: self.sequences(),
            });
        }
        let mut result = Vec::new();
        let mut pos = Position::new(ENDMARKER, id);
        while let Some(next) = self.follow(pos) {
            result.push(next.node);
            pos = next;
        }
        Ok(result)
    }

    //-------------------------------------------------------------------------

    /// Bidirectional search state for the pattern. Requires a bidirectional index.
    fn bd_find(&self, pattern: &[NodeId]) -> Result<BidirectionalState> {
        if !self.is_bidirectional() {
            return Err(GbwtError::Unsupported(
                "bidirectional search needs an index with reverse paths",
            ));
        }
        let forward = self.find(pattern);
        if forward.is_empty() {
            return Ok(BidirectionalState::empty());
        }
        let reverse = self.find(&reverse_path(pattern));
        debug_assert_eq!(forward.len(), reverse.len());
        Ok(BidirectionalState { forward, reverse })
    }

    /// Adds node `v` to the end (`Forward`) or the start (`Backward`) of the pattern.
    ///
    /// Extending the state of the empty pattern gives the state of the single node.
    fn bd_extend(
        &self,
        state: &BidirectionalState,
        v: NodeId,
        direction: Direction,
    ) -> Result<BidirectionalState> {
        if !self.is_bidirectional() {
            return Err(GbwtError::Unsupported(
                "bidirectional search needs an index with reverse paths",
            ));
        }
        if state.is_empty() {
            return Ok(BidirectionalState::empty());
        }
        if state.forward.node == ENDMARKER {
            return self.bd_find(&[v]);
        }
        Ok(match direction {
            Direction::Forward => self.bd_extend_forward(state, v),
            Direction::Backward => self.bd_extend_forward(&state.flip(), flip(v)).flip(),
        })
    }

    #[doc(hidden)]
    fn bd_extend_forward(&self, state: &BidirectionalState, v: NodeId) -> BidirectionalState {
        let Some(record) = self.record(state.forward.node) else {
            return BidirectionalState::empty();
        };
        let Some(forward) = record.lf_range(state.forward.range.clone(), v) else {
            return BidirectionalState::empty();
        };
        // The reverse range is ordered by the node preceding the reverse pattern: the
        // endmarker first, then the flipped successors in increasing order.
        let mut start = state.reverse.range.start;
        let mut counted = 0;
        for edge in record.edges.iter().filter(|e| e.node != ENDMARKER) {
            let count = record
                .lf_range(state.forward.range.clone(), edge.node)
                .map_or(0, |r| r.len());
            counted += count;
            if flip(edge.node) < flip(v) {
                start += count;
            }
        }
        start += state.forward.len() - counted;
        let reverse = SearchState::new(state.reverse.node, start..start + forward.len());
        BidirectionalState {
            forward: SearchState::new(v, forward),
            reverse,
        }
    }
}

impl<T: RecordSource + ?Sized> Search for T {}

//-----------------------------------------------------------------------------
