//! Brute-force reference implementations.
//!
//! [`NaiveIndex`] sorts every reverse prefix of every text explicitly and derives the BWT and
//! the document array from the sorted order. The query functions scan the texts directly.
//! Everything here is quadratic or worse and meant for checking the real index on small
//! inputs.

use crate::model::{NodeId, Path, ENDMARKER};
use crate::record::{RecordSource, Sample};

use std::cmp::Ordering;
use std::collections::BTreeMap;

//-----------------------------------------------------------------------------

/// One BWT position: the key is the reverse prefix `text[..next]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    /// Text identifier.
    pub id: usize,
    /// Length of the prefix.
    pub next: usize,
    /// Last node of the prefix, or the endmarker for the empty prefix.
    pub record: NodeId,
    /// Node following the prefix, or the endmarker at the end of the text.
    pub successor: NodeId,
}

/// BWT and document array computed by sorting.
#[derive(Clone, Debug, Default)]
pub struct NaiveIndex {
    texts: Vec<Path>,
    /// Entries grouped by record in increasing node order, sorted by key within each record.
    pub records: BTreeMap<NodeId, Vec<Entry>>,
}

impl NaiveIndex {
    /// Builds the reference index. In a bidirectional index, pass the texts already
    /// interleaved with their reverse paths.
    pub fn new(texts: &[Path]) -> Self {
        let mut entries = Vec::new();
        for (id, text) in texts.iter().enumerate() {
            for next in 0..=text.len() {
                let record = if next == 0 { ENDMARKER } else { text[next - 1] };
                let successor = text.get(next).copied().unwrap_or(ENDMARKER);
                entries.push(Entry {
                    id,
                    next,
                    record,
                    successor,
                });
            }
        }
        entries.sort_by(|a, b| compare_keys(texts, a, b));
        let mut records: BTreeMap<NodeId, Vec<Entry>> = BTreeMap::new();
        for entry in entries {
            records.entry(entry.record).or_default().push(entry);
        }
        NaiveIndex {
            texts: texts.to_vec(),
            records,
        }
    }

    pub fn texts(&self) -> &[Path] {
        &self.texts
    }

    /// BWT slice of a record.
    pub fn bwt(&self, v: NodeId) -> Vec<NodeId> {
        self.records
            .get(&v)
            .map_or_else(Vec::new, |e| e.iter().map(|x| x.successor).collect())
    }

    /// Document array slice of a record.
    pub fn document_array(&self, v: NodeId) -> Vec<usize> {
        self.records
            .get(&v)
            .map_or_else(Vec::new, |e| e.iter().map(|x| x.id).collect())
    }

    /// Samples the index should store at sample rate `d`: the prefix ending at text index
    /// `t` is sampled when `(len - 1 - t) % d == 0`, so the last node of every text is
    /// always sampled. The empty prefix in the endmarker record counts as `t = -1`.
    pub fn expected_samples(&self, v: NodeId, d: usize) -> Vec<Sample> {
        let Some(entries) = self.records.get(&v) else {
            return Vec::new();
        };
        entries
            .iter()
            .enumerate()
            .filter(|(_, e)| (self.texts[e.id].len() - e.next).is_multiple_of(d))
            .map(|(offset, e)| Sample::new(offset, e.id))
            .collect()
    }

    /// Outgoing edge offsets: for each successor `w` of `v`, the number of occurrences of
    /// `w` in the BWT slices of all records before `v`.
    pub fn edge_offsets(&self, v: NodeId) -> Vec<(NodeId, usize)> {
        let mut successors: Vec<NodeId> = self.bwt(v);
        successors.sort_unstable();
        successors.dedup();
        successors
            .into_iter()
            .map(|w| {
                if w == ENDMARKER {
                    return (w, 0);
                }
                let before = self
                    .records
                    .range(..v)
                    .flat_map(|(_, e)| e.iter())
                    .filter(|e| e.successor == w)
                    .count();
                (w, before)
            })
            .collect()
    }
}

fn compare_keys(texts: &[Path], a: &Entry, b: &Entry) -> Ordering {
    let (ta, tb) = (&texts[a.id], &texts[b.id]);
    let (mut i, mut j) = (a.next, b.next);
    loop {
        match (i, j) {
            (0, 0) => return a.id.cmp(&b.id),
            (0, _) => return Ordering::Less,
            (_, 0) => return Ordering::Greater,
            _ => {
                let ord = ta[i - 1].cmp(&tb[j - 1]);
                if ord != Ordering::Equal {
                    return ord;
                }
                i -= 1;
                j -= 1;
            }
        }
    }
}

//-----------------------------------------------------------------------------

fn occurrences(text: &[NodeId], pattern: &[NodeId]) -> usize {
    if pattern.is_empty() {
        return 1;
    }
    if pattern.len() > text.len() {
        return 0;
    }
    text.windows(pattern.len())
        .filter(|w| *w == pattern)
        .count()
}

/// Number of occurrences of the pattern in the texts. The empty pattern occurs once per text.
pub fn count(texts: &[Path], pattern: &[NodeId]) -> usize {
    texts.iter().map(|t| occurrences(t, pattern)).sum()
}

/// Identifier of the text for each occurrence, sorted, with multiplicities.
pub fn locate(texts: &[Path], pattern: &[NodeId]) -> Vec<usize> {
    let mut result = Vec::new();
    for (id, text) in texts.iter().enumerate() {
        result.extend(std::iter::repeat_n(id, occurrences(text, pattern)));
    }
    result
}

/// All distinct fragments of length `k` in the texts.
pub fn fragments(texts: &[Path], k: usize) -> Vec<Path> {
    let mut result: Vec<Path> = texts
        .iter()
        .flat_map(|t| t.windows(k).map(|w| w.to_vec()))
        .collect();
    result.sort();
    result.dedup();
    result
}

//-----------------------------------------------------------------------------

/// Compares an index with the reference built from `texts`: record bodies, edge offsets,
/// stored samples, and global statistics. Returns the first mismatch.
pub fn check_index<S: RecordSource + ?Sized>(index: &S, texts: &[Path]) -> Result<(), String> {
    let naive = NaiveIndex::new(texts);
    if index.sequences() != texts.len() {
        return Err(format!(
            "sequences: {} vs {}",
            index.sequences(),
            texts.len()
        ));
    }
    let size: usize = texts.iter().map(|t| t.len() + 1).sum();
    if index.size() != size {
        return Err(format!("size: {} vs {}", index.size(), size));
    }
    let d = index.sample_rate();
    let mut nodes: Vec<NodeId> = index.nodes();
    nodes.insert(0, ENDMARKER);
    let expected_nodes: Vec<NodeId> = naive.records.keys().copied().collect();
    if !texts.is_empty() && nodes != expected_nodes {
        return Err(format!(
            "non-empty records: {:?} vs {:?}",
            nodes, expected_nodes
        ));
    }
    for &v in &expected_nodes {
        let record = index
            .record(v)
            .ok_or_else(|| format!("record {} missing", v))?;
        if record.decompress() != naive.bwt(v) {
            return Err(format!(
                "record {}: body {:?} vs {:?}",
                v,
                record.decompress(),
                naive.bwt(v)
            ));
        }
        let edges: Vec<(NodeId, usize)> = record.edges.iter().map(|e| (e.node, e.offset)).collect();
        if edges != naive.edge_offsets(v) {
            return Err(format!(
                "record {}: edges {:?} vs {:?}",
                v,
                edges,
                naive.edge_offsets(v)
            ));
        }
        let samples = index.samples(v);
        let expected = naive.expected_samples(v, d);
        if samples != expected {
            return Err(format!(
                "record {}: samples {:?} vs {:?}",
                v, samples, expected
            ));
        }
    }
    Ok(())
}

//-----------------------------------------------------------------------------
