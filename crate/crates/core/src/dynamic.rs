//! The construction-time index.
//!
//! [`DynamicGbwt`] keeps one mutable [`DynamicRecord`] per node in a dense id range plus a
//! record for the endmarker. Texts are inserted in batches: every step extends each text by one
//! node, rebuilding the records touched in that step from scratch.

use crate::error::{GbwtError, Result};
use crate::model::{reverse_path, NodeId, Path, ENDMARKER};
use crate::record::{Edge, RecordSource, RecordView, Run, Sample};

use std::borrow::Cow;

//-----------------------------------------------------------------------------

/// Default distance between stored document array samples.
pub const DEFAULT_SAMPLE_RATE: usize = 1024;

/// A mutable record.
///
/// `incoming` lists `(predecessor, count)` pairs in predecessor order, where the count is the
/// number of texts crossing from the predecessor to this node. Predecessor `0` stands for
/// texts starting at this node.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DynamicRecord {
    outgoing: Vec<Edge>,
    body: Vec<Run>,
    incoming: Vec<(NodeId, usize)>,
    ids: Vec<Sample>,
    len: usize,
}

impl DynamicRecord {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn outgoing(&self) -> &[Edge] {
        &self.outgoing
    }

    pub fn body(&self) -> &[Run] {
        &self.body
    }

    pub fn incoming(&self) -> &[(NodeId, usize)] {
        &self.incoming
    }

    pub fn samples(&self) -> &[Sample] {
        &self.ids
    }

    pub fn view(&self) -> RecordView<'_> {
        RecordView::new(Cow::Borrowed(&self.outgoing), Cow::Borrowed(&self.body))
    }

    fn edge_to(&self, w: NodeId) -> Option<usize> {
        self.outgoing.binary_search_by_key(&w, |e| e.node).ok()
    }

    fn increment_incoming(&mut self, from: NodeId, count: usize) {
        match self.incoming.binary_search_by_key(&from, |&(u, _)| u) {
            Ok(i) => self.incoming[i].1 += count,
            Err(i) => self.incoming.insert(i, (from, count)),
        }
    }

    fn from_view(view: &RecordView<'_>, samples: Vec<Sample>) -> Self {
        DynamicRecord {
            outgoing: view.edges.to_vec(),
            body: view.runs.to_vec(),
            incoming: Vec::new(),
            ids: samples,
            len: view.len(),
        }
    }
}

/// Appends runs, merging adjacent runs of the same value.
#[derive(Default)]
struct RunBuilder {
    runs: Vec<Run>,
    len: usize,
}

impl RunBuilder {
    fn push(&mut self, value: usize, len: usize) {
        if len == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some(last) if last.value == value => last.len += len,
            _ => self.runs.push(Run::new(value, len)),
        }
        self.len += len;
    }
}

/// Reads a run-length encoded body as a stream of `(node, len)` pieces.
struct OldBody<'a> {
    record: &'a DynamicRecord,
    run: usize,
    used: usize,
}

impl<'a> OldBody<'a> {
    fn new(record: &'a DynamicRecord) -> Self {
        OldBody {
            record,
            run: 0,
            used: 0,
        }
    }

    /// Takes up to `n` characters from the current run.
    fn take(&mut self, n: usize) -> Option<(NodeId, usize)> {
        let run = self.record.body.get(self.run)?;
        let len = (run.len - self.used).min(n);
        self.used += len;
        if self.used == run.len {
            self.run += 1;
            self.used = 0;
        }
        Some((self.record.outgoing[run.value].node, len))
    }
}

//-----------------------------------------------------------------------------

/// Per-text state during batch insertion.
#[derive(Clone, Debug)]
struct Cursor {
    /// Index of the text in the batch.
    text: usize,
    /// Identifier assigned to the text.
    id: usize,
    /// Index of the next node `w` in the text; `v` is the node before it.
    next: usize,
    v: NodeId,
    w: NodeId,
    /// Offset in the record of `v` where the temporary endmarker of the text sits.
    offset: usize,
}

/// Construction-time index over a dense node range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicGbwt {
    endmarker: DynamicRecord,
    records: Vec<DynamicRecord>,
    first_node: NodeId,
    sequences: usize,
    size: usize,
    sample_rate: usize,
    bidirectional: bool,
}

impl Default for DynamicGbwt {
    fn default() -> Self {
        Self::new(DEFAULT_SAMPLE_RATE, false)
    }
}

impl DynamicGbwt {
    /// Creates an empty index.
    ///
    /// With `bidirectional` set, every inserted text is followed by its reverse path, and the
    /// index supports bidirectional search.
    ///
    /// # Panics
    ///
    /// Panics if `sample_rate` is 0.
    pub fn new(sample_rate: usize, bidirectional: bool) -> Self {
        assert!(sample_rate > 0, "sample rate must be positive");
        DynamicGbwt {
            endmarker: DynamicRecord::default(),
            records: Vec::new(),
            first_node: 1,
            sequences: 0,
            size: 0,
            sample_rate,
            bidirectional,
        }
    }

    /// Builds an index from the texts in a single batch.
    pub fn from_paths(paths: &[Path], sample_rate: usize, bidirectional: bool) -> Result<Self> {
        let mut index = Self::new(sample_rate, bidirectional);
        index.insert_batch(paths)?;
        Ok(index)
    }

    pub fn is_empty(&self) -> bool {
        self.sequences == 0
    }

    /// Record for a node or the endmarker.
    pub fn dynamic_record(&self, v: NodeId) -> Option<&DynamicRecord> {
        if v == ENDMARKER {
            return Some(&self.endmarker);
        }
        self.records.get(v.checked_sub(self.first_node)?)
    }

    fn record_mut(&mut self, v: NodeId) -> &mut DynamicRecord {
        if v == ENDMARKER {
            &mut self.endmarker
        } else {
            &mut self.records[v - self.first_node]
        }
    }

    /// Extends the record array to cover `[low, high]`.
    fn ensure_range(&mut self, low: NodeId, high: NodeId) {
        if self.records.is_empty() {
            self.first_node = low;
            self.records
                .resize_with(high - low + 1, DynamicRecord::default);
            return;
        }
        if low < self.first_node {
            let extra = self.first_node - low;
            let mut records = Vec::with_capacity(self.records.len() + extra);
            records.resize_with(extra, DynamicRecord::default);
            records.append(&mut self.records);
            self.records = records;
            self.first_node = low;
        }
        let last = self.first_node + self.records.len() - 1;
        if high > last {
            self.records
                .resize_with(self.records.len() + (high - last), DynamicRecord::default);
        }
    }

    /// Inserts a single text. Same as a batch of one.
    pub fn insert(&mut self, path: &[NodeId]) -> Result<()> {
        self.insert_batch(&[path.to_vec()])
    }

    /// Inserts the texts in one batch. Text identifiers are assigned consecutively in input
    /// order. In a bidirectional index, each text is followed by its reverse path.
    ///
    /// The batch is validated before the index is touched: empty texts and texts containing
    /// the endmarker are rejected.
    pub fn insert_batch(&mut self, paths: &[Path]) -> Result<()> {
        for (index, path) in paths.iter().enumerate() {
            if path.is_empty() {
                return Err(GbwtError::EmptyText { index });
            }
            if path.contains(&ENDMARKER) {
                return Err(GbwtError::ReservedId);
            }
        }
        if paths.is_empty() {
            return Ok(());
        }
        let texts: Vec<Cow<'_, [NodeId]>> = if self.bidirectional {
            paths
                .iter()
                .flat_map(|p| [Cow::Borrowed(p.as_slice()), Cow::Owned(reverse_path(p))])
                .collect()
        } else {
            paths.iter().map(|p| Cow::Borrowed(p.as_slice())).collect()
        };
        let low = texts.iter().flat_map(|t| t.iter()).copied().min().unwrap();
        let high = texts.iter().flat_map(|t| t.iter()).copied().max().unwrap();
        self.ensure_range(low, high);

        let mut cursors: Vec<Cursor> = texts
            .iter()
            .enumerate()
            .map(|(i, text)| Cursor {
                text: i,
                id: self.sequences + i,
                next: 0,
                v: ENDMARKER,
                w: text[0],
                offset: self.sequences + i,
            })
            .collect();
        self.sequences += texts.len();
        self.size += texts.iter().map(|t| t.len() + 1).sum::<usize>();

        while !cursors.is_empty() {
            // Rebuild the records, one group of texts at a time.
            cursors.sort_unstable_by_key(|c| (c.v, c.offset));
            let mut crossings: Vec<(NodeId, NodeId)> = Vec::new();
            let mut start = 0;
            while start < cursors.len() {
                let v = cursors[start].v;
                let end = start + cursors[start..].iter().take_while(|c| c.v == v).count();
                self.rebuild_record(v, &mut cursors[start..end], &texts);
                crossings.extend(
                    cursors[start..end]
                        .iter()
                        .filter(|c| c.w != ENDMARKER)
                        .map(|c| (c.v, c.w)),
                );
                start = end;
            }
            crossings.sort_unstable();
            let mut i = 0;
            while i < crossings.len() {
                let count = crossings[i..]
                    .iter()
                    .take_while(|&&x| x == crossings[i])
                    .count();
                let (from, to) = crossings[i];
                self.record_mut(to).increment_incoming(from, count);
                i += count;
            }

            // Sort by (w, v, i) and drop finished texts.
            cursors.retain(|c| c.w != ENDMARKER);
            cursors.sort_unstable_by_key(|c| (c.w, c.v, c.offset));

            // Rebuild the cumulative ranks for every node that received new characters.
            let mut i = 0;
            while i < cursors.len() {
                let w = cursors[i].w;
                self.rebuild_offsets(w);
                while i < cursors.len() && cursors[i].w == w {
                    let cursor = &mut cursors[i];
                    let record = self.dynamic_record(cursor.v).unwrap();
                    let rank = record.edge_to(w).unwrap();
                    cursor.offset += record.outgoing[rank].offset;
                    let text = &texts[cursor.text];
                    cursor.v = w;
                    cursor.next += 1;
                    cursor.w = text.get(cursor.next).copied().unwrap_or(ENDMARKER);
                    i += 1;
                }
            }
        }
        Ok(())
    }

    /// Inserts one character for each text in `group` (all at the same node, sorted by offset)
    /// and replaces each cursor offset with the local rank of the inserted character.
    fn rebuild_record(&mut self, v: NodeId, group: &mut [Cursor], texts: &[Cow<'_, [NodeId]>]) {
        let sample_rate = self.sample_rate;
        let old = std::mem::take(self.record_mut(v));

        let mut outgoing = old.outgoing.clone();
        for cursor in group.iter() {
            if let Err(pos) = outgoing.binary_search_by_key(&cursor.w, |e| e.node) {
                outgoing.insert(pos, Edge::new(cursor.w, 0));
            }
        }
        let rank_of = |w: NodeId| outgoing.binary_search_by_key(&w, |e| e.node).unwrap();

        let mut builder = RunBuilder::default();
        let mut counts = vec![0usize; outgoing.len()];
        let mut ids = Vec::with_capacity(old.ids.len() + group.len());
        let mut old_body = OldBody::new(&old);
        let mut old_samples = old.ids.iter().peekable();
        let mut consumed = 0;
        let mut inserted = 0;

        let mut copy =
            |builder: &mut RunBuilder, counts: &mut [usize], mut n: usize, consumed: &mut usize| {
                while n > 0 {
                    let (node, len) = old_body
                        .take(n)
                        .expect("insertion offset past the end of the record");
                    let rank = rank_of(node);
                    builder.push(rank, len);
                    counts[rank] += len;
                    *consumed += len;
                    n -= len;
                }
            };

        for cursor in group.iter_mut() {
            debug_assert!(cursor.offset >= builder.len);
            let gap = cursor.offset - builder.len;
            copy(&mut builder, &mut counts, gap, &mut consumed);
            while let Some(sample) = old_samples.next_if(|s| s.offset < consumed) {
                ids.push(Sample::new(sample.offset + inserted, sample.id));
            }
            let text_len = texts[cursor.text].len();
            if (text_len - cursor.next).is_multiple_of(sample_rate) {
                ids.push(Sample::new(cursor.offset, cursor.id));
            }
            let rank = rank_of(cursor.w);
            let local = counts[rank];
            builder.push(rank, 1);
            counts[rank] += 1;
            inserted += 1;
            cursor.offset = local;
        }
        let remaining = old.len - consumed;
        copy(&mut builder, &mut counts, remaining, &mut consumed);
        ids.extend(old_samples.map(|s| Sample::new(s.offset + inserted, s.id)));

        let record = self.record_mut(v);
        record.outgoing = outgoing;
        record.len = builder.len;
        record.body = builder.runs;
        record.ids = ids;
        record.incoming = old.incoming;
    }

    /// Recomputes `BWT.rank(u, w)` for every predecessor `u` of `w` from the incoming counts.
    fn rebuild_offsets(&mut self, w: NodeId) {
        let incoming = std::mem::take(&mut self.record_mut(w).incoming);
        let mut total = 0;
        for &(u, count) in &incoming {
            let record = self.record_mut(u);
            let rank = record
                .edge_to(w)
                .expect("incoming edge without a matching outgoing edge");
            record.outgoing[rank].offset = total;
            total += count;
        }
        self.record_mut(w).incoming = incoming;
    }

    //-------------------------------------------------------------------------

    /// Merges an index over a disjoint node range into this one.
    ///
    /// Records of both indexes are reused as they are. The endmarker record becomes the body
    /// of this index followed by the body of `right`, so the texts of `right` get identifiers
    /// shifted by `self.sequences()`.
    pub fn merge<S: RecordSource + ?Sized>(mut self, right: &S) -> Result<Self> {
        if right.sequences() == 0 {
            return Ok(self);
        }
        if let (Some(left_range), Some(right_range)) = (self.node_range(), right.node_range()) {
            if left_range.0 <= right_range.1 && right_range.0 <= left_range.1 {
                return Err(GbwtError::MergeOverlap {
                    left: left_range,
                    right: right_range,
                });
            }
        }
        let shift = self.sequences;
        self.bidirectional = if self.sequences == 0 {
            right.is_bidirectional()
        } else {
            self.bidirectional && right.is_bidirectional()
        };

        if let Some((low, high)) = right.node_range() {
            self.ensure_range(low, high);
            for v in low..=high {
                let view = right
                    .record(v)
                    .ok_or(GbwtError::NodeOutOfRange { node: v })?;
                let samples = right
                    .samples(v)
                    .into_iter()
                    .map(|s| Sample::new(s.offset, s.id + shift))
                    .collect();
                *self.record_mut(v) = DynamicRecord::from_view(&view, samples);
            }
        }

        // Endmarker: concatenate the bodies over the merged alphabet.
        let right_end = right.record(ENDMARKER).unwrap_or_else(RecordView::empty);
        let old = std::mem::take(&mut self.endmarker);
        let mut outgoing: Vec<Edge> = old.outgoing.clone();
        for edge in right_end.edges.iter() {
            if let Err(pos) = outgoing.binary_search_by_key(&edge.node, |e| e.node) {
                outgoing.insert(pos, Edge::new(edge.node, 0));
            }
        }
        let rank_of = |w: NodeId| outgoing.binary_search_by_key(&w, |e| e.node).unwrap();
        let mut builder = RunBuilder::default();
        for run in old.body.iter() {
            builder.push(rank_of(old.outgoing[run.value].node), run.len);
        }
        for run in right_end.runs.iter() {
            builder.push(rank_of(right_end.edges[run.value].node), run.len);
        }
        let mut ids = old.ids;
        ids.extend(
            right
                .samples(ENDMARKER)
                .into_iter()
                .map(|s| Sample::new(s.offset + shift, s.id + shift)),
        );
        self.endmarker = DynamicRecord {
            outgoing,
            len: builder.len,
            body: builder.runs,
            incoming: Vec::new(),
            ids,
        };

        // Incoming edges of the new records, from the endmarker and from the other new records.
        if let Some((low, high)) = right.node_range() {
            let sources: Vec<NodeId> = std::iter::once(ENDMARKER).chain(low..=high).collect();
            for u in sources {
                let view = right.record(u).unwrap_or_else(RecordView::empty);
                let counts = view.counts();
                for (edge, count) in view.edges.iter().zip(counts) {
                    if edge.node != ENDMARKER && count > 0 {
                        self.record_mut(edge.node).increment_incoming(u, count);
                    }
                }
            }
        }

        self.sequences += right.sequences();
        self.size += right.size();
        Ok(self)
    }

    //-------------------------------------------------------------------------

    /// Checks the structural invariants. Returns a description of the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if self.endmarker.len != self.sequences {
            return Err(format!(
                "endmarker record has length {} for {} texts",
                self.endmarker.len, self.sequences
            ));
        }
        let mut total = self.endmarker.len;
        let mut expected_incoming: std::collections::BTreeMap<NodeId, Vec<(NodeId, usize)>> =
            Default::default();
        let all: Vec<NodeId> = std::iter::once(ENDMARKER)
            .chain(self.first_node..self.first_node + self.records.len())
            .collect();
        for &u in &all {
            let record = self.dynamic_record(u).unwrap();
            if u != ENDMARKER {
                total += record.len;
            }
            if !record.outgoing.windows(2).all(|w| w[0].node < w[1].node) {
                return Err(format!("record {}: successors not increasing", u));
            }
            if record
                .body
                .iter()
                .any(|r| r.value >= record.outgoing.len() || r.len == 0)
            {
                return Err(format!("record {}: invalid run", u));
            }
            if record.body.windows(2).any(|w| w[0].value == w[1].value) {
                return Err(format!("record {}: adjacent runs with the same value", u));
            }
            if record.body.iter().map(|r| r.len).sum::<usize>() != record.len {
                return Err(format!("record {}: length mismatch", u));
            }
            if !record.ids.windows(2).all(|w| w[0].offset < w[1].offset)
                || record.ids.last().is_some_and(|s| s.offset >= record.len)
            {
                return Err(format!("record {}: invalid samples", u));
            }
            let counts = record.view().counts();
            for (edge, count) in record.outgoing.iter().zip(counts) {
                if edge.node != ENDMARKER && count > 0 {
                    expected_incoming
                        .entry(edge.node)
                        .or_default()
                        .push((u, count));
                }
            }
        }
        if total != self.size {
            return Err(format!(
                "total length {} differs from size {}",
                total, self.size
            ));
        }
        for &w in all.iter().skip(1) {
            let record = self.dynamic_record(w).unwrap();
            let expected = expected_incoming.remove(&w).unwrap_or_default();
            if record.incoming != expected {
                return Err(format!(
                    "record {}: incoming edges {:?}, expected {:?}",
                    w, record.incoming, expected
                ));
            }
            let incoming_total: usize = expected.iter().map(|&(_, c)| c).sum();
            if incoming_total != record.len {
                return Err(format!(
                    "record {}: {} incoming texts for length {}",
                    w, incoming_total, record.len
                ));
            }
            let mut cumulative = 0;
            for &(u, count) in &expected {
                let source = self.dynamic_record(u).unwrap();
                let rank = source.edge_to(w).unwrap();
                if source.outgoing[rank].offset != cumulative {
                    return Err(format!(
                        "record {}: rank of {} is {}, expected {}",
                        u, w, source.outgoing[rank].offset, cumulative
                    ));
                }
                cumulative += count;
            }
        }
        Ok(())
    }
}

impl RecordSource for DynamicGbwt {
    fn sequences(&self) -> usize {
        self.sequences
    }

    fn size(&self) -> usize {
        self.size
    }

    fn first_node(&self) -> Option<NodeId> {
        (!self.records.is_empty()).then_some(self.first_node)
    }

    fn node_count(&self) -> usize {
        self.records.len()
    }

    fn record(&self, v: NodeId) -> Option<RecordView<'_>> {
        self.dynamic_record(v).map(DynamicRecord::view)
    }

    fn sampled_id(&self, v: NodeId, offset: usize) -> Option<usize> {
        let ids = &self.dynamic_record(v)?.ids;
        ids.binary_search_by_key(&offset, |s| s.offset)
            .ok()
            .map(|i| ids[i].id)
    }

    fn samples(&self, v: NodeId) -> Vec<Sample> {
        self.dynamic_record(v)
            .map_or_else(Vec::new, |r| r.ids.clone())
    }

    fn has_samples(&self, v: NodeId) -> bool {
        self.dynamic_record(v).is_some_and(|r| !r.ids.is_empty())
    }

    fn sample_rate(&self) -> usize {
        self.sample_rate
    }

    fn is_bidirectional(&self) -> bool {
        self.bidirectional
    }
}

//-----------------------------------------------------------------------------
