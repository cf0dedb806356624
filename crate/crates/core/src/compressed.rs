//! The immutable, compact encoding used for queries and for storing the index on disk.
//!
//! Every record is a byte array: the outdegree, the outgoing edges with differentially
//! encoded successors, and the run-length encoded body. Records are concatenated and their
//! starting offsets marked in a sparse bitvector. Stored document array samples live in a
//! global structure of three bitvectors and an identifier array rather than in the records.
//!
//! # File format
//!
//! All integers are little-endian.
//!
//! | Field | Size |
//! |-------|------|
//! | magic `GBWT` | 4 bytes |
//! | version | 4 bytes |
//! | 7 sections, each as `u64` byte length + payload | |
//!
//! Sections in order: header (6 × `u64`: sequences, size, sample rate, flags, first node,
//! node count), record directory, record bytes, `B_s`, `B_r`, `B_o`, identifiers (`u64`
//! count + `u64` values).

use crate::dynamic::DynamicGbwt;
use crate::error::{GbwtError, Result};
use crate::model::{NodeId, ENDMARKER};
use crate::record::{Edge, RecordSource, RecordView, Run, Sample};
use crate::succinct::{
    read_u64, read_usize, varint_decode, varint_encode, write_u64, BitVec, PlainBitvector,
    SparseBitvector,
};

use std::borrow::Cow;
use std::io::{Read, Write};

//-----------------------------------------------------------------------------

pub const MAGIC: &[u8; 4] = b"GBWT";
pub const VERSION: u32 = 1;

/// Size of the header section payload.
pub const HEADER_SIZE: usize = 48;

const FLAG_BIDIRECTIONAL: u64 = 0x1;
const KNOWN_FLAGS: u64 = FLAG_BIDIRECTIONAL;

/// Local alphabets up to this size pack the run value and part of the length into one byte.
pub const PACKED_ALPHABET_LIMIT: usize = 127;

/// Largest first byte a packed run may use.
const PACKED_BYTE_LIMIT: usize = 254;

//-----------------------------------------------------------------------------

/// Largest length increment `r` a packed first byte can hold for value `value`.
#[inline]
fn packed_cap(sigma: usize, value: usize) -> usize {
    (PACKED_BYTE_LIMIT - value) / sigma
}

/// Appends the encoding of a run in a record with local alphabet size `sigma`.
///
/// With `sigma <= 127` the first byte is `value + sigma * r` with
/// `r = min(len - 1, cap)`. When `r` reaches the cap, the remaining length follows as a
/// varint (possibly 0). Larger alphabets store `value` and `len - 1` as two varints.
pub fn encode_run(sigma: usize, run: Run, out: &mut Vec<u8>) {
    debug_assert!(run.len > 0 && run.value < sigma);
    if sigma <= PACKED_ALPHABET_LIMIT {
        let cap = packed_cap(sigma, run.value);
        let r = (run.len - 1).min(cap);
        out.push((run.value + sigma * r) as u8);
        if r == cap {
            varint_encode(run.len - 1 - cap, out);
        }
    } else {
        varint_encode(run.value, out);
        varint_encode(run.len - 1, out);
    }
}

/// Decodes a run starting at `offset`. Returns the run and the offset of the next byte.
pub fn decode_run(sigma: usize, bytes: &[u8], offset: usize) -> Result<(Run, usize)> {
    if sigma == 0 {
        return Err(GbwtError::MalformedEncoding { offset });
    }
    if sigma <= PACKED_ALPHABET_LIMIT {
        let byte = *bytes
            .get(offset)
            .ok_or(GbwtError::MalformedEncoding { offset })? as usize;
        if byte > PACKED_BYTE_LIMIT {
            return Err(GbwtError::MalformedEncoding { offset });
        }
        let value = byte % sigma;
        let r = byte / sigma;
        if r == packed_cap(sigma, value) {
            let (rest, next) = varint_decode(bytes, offset + 1)?;
            let len = rest
                .checked_add(r + 1)
                .ok_or(GbwtError::MalformedEncoding { offset })?;
            Ok((Run::new(value, len), next))
        } else {
            Ok((Run::new(value, r + 1), offset + 1))
        }
    } else {
        let (value, next) = varint_decode(bytes, offset)?;
        let (len, next) = varint_decode(bytes, next)?;
        if value >= sigma {
            return Err(GbwtError::MalformedEncoding { offset });
        }
        let len = len
            .checked_add(1)
            .ok_or(GbwtError::MalformedEncoding { offset })?;
        Ok((Run::new(value, len), next))
    }
}

/// Appends the byte encoding of a record.
pub fn encode_record(edges: &[Edge], runs: &[Run], out: &mut Vec<u8>) {
    varint_encode(edges.len(), out);
    let mut prev = 0;
    for edge in edges {
        varint_encode(edge.node - prev, out);
        varint_encode(edge.offset, out);
        prev = edge.node;
    }
    for &run in runs {
        encode_run(edges.len(), run, out);
    }
}

/// Decodes a complete record. Fails if the successors are not strictly increasing, a run
/// value is outside the alphabet, or the bytes end in the middle of a value.
pub fn decode_record(bytes: &[u8]) -> Result<RecordView<'static>> {
    let (sigma, mut offset) = varint_decode(bytes, 0)?;
    if sigma > bytes.len() {
        return Err(GbwtError::MalformedEncoding { offset: 0 });
    }
    let mut edges = Vec::with_capacity(sigma);
    let mut prev: usize = 0;
    for i in 0..sigma {
        let (delta, next) = varint_decode(bytes, offset)?;
        let (rank, next) = varint_decode(bytes, next)?;
        if i > 0 && delta == 0 {
            return Err(GbwtError::MalformedEncoding { offset });
        }
        prev = prev
            .checked_add(delta)
            .ok_or(GbwtError::MalformedEncoding { offset })?;
        edges.push(Edge::new(prev, rank));
        offset = next;
    }
    let mut runs = Vec::new();
    while offset < bytes.len() {
        let (run, next) = decode_run(sigma, bytes, offset)?;
        runs.push(run);
        offset = next;
    }
    Ok(RecordView::new(Cow::Owned(edges), Cow::Owned(runs)))
}

//-----------------------------------------------------------------------------

/// Document array samples for all records.
///
/// * `present` (`B_s`) marks the records that have samples.
/// * `ranges` (`B_r`) marks where the offset range of each such record starts in the
///   concatenation of their offset ranges.
/// * `offsets` (`B_o`) marks the sampled offsets in the same concatenation.
/// * `ids` holds the text identifiers in `offsets` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HaplotypeIdStore {
    present: PlainBitvector,
    ranges: SparseBitvector,
    offsets: SparseBitvector,
    ids: Vec<usize>,
}

impl HaplotypeIdStore {
    /// Builds the store from `(record length, samples)` for every record in directory order.
    pub fn new(records: &[(usize, Vec<Sample>)]) -> Result<Self> {
        let present: Vec<bool> = records.iter().map(|(_, s)| !s.is_empty()).collect();
        let mut starts = Vec::new();
        let mut marked = Vec::new();
        let mut ids = Vec::new();
        let mut total = 0;
        for (len, samples) in records.iter().filter(|(_, s)| !s.is_empty()) {
            starts.push(total);
            for sample in samples {
                marked.push(total + sample.offset);
                ids.push(sample.id);
            }
            total += len;
        }
        Ok(HaplotypeIdStore {
            present: PlainBitvector::from_bits(present),
            ranges: SparseBitvector::new(total, &starts)?,
            offsets: SparseBitvector::new(total, &marked)?,
            ids,
        })
    }

    /// Start and end of the offset range for record `r`, if it has samples.
    fn range(&self, r: usize) -> Option<(usize, usize)> {
        if r >= self.present.len() || !self.present.get(r) {
            return None;
        }
        let rank = self.present.rank1(r);
        let start = self.ranges.select1(rank + 1)?;
        let end = self.ranges.select1(rank + 2).unwrap_or(self.ranges.len());
        Some((start, end))
    }

    /// Identifier stored for offset `offset` in record `r`.
    pub fn lookup(&self, r: usize, offset: usize) -> Option<usize> {
        let (start, end) = self.range(r)?;
        let pos = start + offset;
        if pos >= end || !self.offsets.get(pos) {
            return None;
        }
        Some(self.ids[self.offsets.rank1(pos)])
    }

    /// All samples of record `r`.
    pub fn samples(&self, r: usize) -> Vec<Sample> {
        let Some((start, end)) = self.range(r) else {
            return Vec::new();
        };
        (self.offsets.rank1(start)..self.offsets.rank1(end))
            .map(|k| Sample::new(self.offsets.select1(k + 1).unwrap() - start, self.ids[k]))
            .collect()
    }

    /// Returns `true` if record `r` has samples.
    pub fn has_samples(&self, r: usize) -> bool {
        r < self.present.len() && self.present.get(r)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn serialized_size(&self) -> usize {
        self.present.serialized_size()
            + self.ranges.serialized_size()
            + self.offsets.serialized_size()
            + 8 * (1 + self.ids.len())
    }
}

//-----------------------------------------------------------------------------

/// Index statistics stored in the header section.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Header {
    pub sequences: usize,
    pub size: usize,
    pub sample_rate: usize,
    pub bidirectional: bool,
    pub first_node: NodeId,
    pub node_count: usize,
}

impl Header {
    fn write<W: Write>(&self, out: &mut W) -> Result<()> {
        write_u64(out, self.sequences as u64)?;
        write_u64(out, self.size as u64)?;
        write_u64(out, self.sample_rate as u64)?;
        write_u64(
            out,
            if self.bidirectional {
                FLAG_BIDIRECTIONAL
            } else {
                0
            },
        )?;
        write_u64(out, self.first_node as u64)?;
        write_u64(out, self.node_count as u64)?;
        Ok(())
    }

    fn read(payload: &[u8]) -> Result<Self> {
        if payload.len() != HEADER_SIZE {
            return Err(corrupt(
                "header",
                format!(
                    "header has {} bytes, expected {}",
                    payload.len(),
                    HEADER_SIZE
                ),
            ));
        }
        let mut input = payload;
        let sequences = read_usize(&mut input)?;
        let size = read_usize(&mut input)?;
        let sample_rate = read_usize(&mut input)?;
        let flags = read_u64(&mut input)?;
        let first_node = read_usize(&mut input)?;
        let node_count = read_usize(&mut input)?;
        if flags & !KNOWN_FLAGS != 0 {
            return Err(GbwtError::UnsupportedFormat(format!(
                "unknown flags {:#x}",
                flags
            )));
        }
        if sample_rate == 0 {
            return Err(corrupt("header", "sample rate 0".into()));
        }
        if node_count > 0 && first_node == ENDMARKER {
            return Err(corrupt(
                "header",
                "node range starts at the endmarker".into(),
            ));
        }
        Ok(Header {
            sequences,
            size,
            sample_rate,
            bidirectional: flags & FLAG_BIDIRECTIONAL != 0,
            first_node,
            node_count,
        })
    }
}

fn corrupt(section: &'static str, detail: String) -> GbwtError {
    GbwtError::Corrupt { section, detail }
}

/// The compressed index.
///
/// ```
/// use gbwt::{CompressedGbwt, DynamicGbwt, Search};
///
/// let paths = vec![vec![1, 2, 4, 6, 7], vec![1, 2, 5, 7], vec![1, 3, 4, 5, 7]];
/// let index = DynamicGbwt::from_paths(&paths, 1024, false).unwrap().freeze();
/// assert_eq!(index.find(&[2, 4]).len(), 1);
///
/// let mut buffer = Vec::new();
/// index.serialize(&mut buffer).unwrap();
/// let loaded = CompressedGbwt::deserialize(&mut buffer.as_slice()).unwrap();
/// assert_eq!(loaded.extract(1).unwrap(), vec![1, 2, 5, 7]);
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedGbwt {
    header: Header,
    directory: SparseBitvector,
    bytes: Vec<u8>,
    store: HaplotypeIdStore,
}

impl CompressedGbwt {
    /// Encodes any record source.
    pub fn from_source<S: RecordSource + ?Sized>(source: &S) -> Self {
        let first_node = source.first_node().unwrap_or(0);
        let node_count = source.node_count();
        let mut bytes = Vec::new();
        let mut starts = Vec::with_capacity(node_count + 1);
        let mut sampled = Vec::with_capacity(node_count + 1);
        let ids = std::iter::once(ENDMARKER).chain(first_node..first_node + node_count);
        for v in ids {
            let record = source.record(v).unwrap_or_else(RecordView::empty);
            starts.push(bytes.len());
            encode_record(&record.edges, &record.runs, &mut bytes);
            sampled.push((record.len(), source.samples(v)));
        }
        let header = Header {
            sequences: source.sequences(),
            size: source.size(),
            sample_rate: source.sample_rate(),
            bidirectional: source.is_bidirectional(),
            first_node,
            node_count,
        };
        CompressedGbwt {
            header,
            directory: SparseBitvector::new(bytes.len(), &starts)
                .expect("record starts are increasing"),
            bytes,
            store: HaplotypeIdStore::new(&sampled).expect("samples are within records"),
        }
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    /// Directory index of a record: the endmarker is first, node `v` at `v - first + 1`.
    fn record_index(&self, v: NodeId) -> Option<usize> {
        if v == ENDMARKER {
            return Some(0);
        }
        let r = v.checked_sub(self.header.first_node)?;
        (r < self.header.node_count).then_some(r + 1)
    }

    fn record_bytes(&self, r: usize) -> &[u8] {
        let start = self.directory.select1(r + 1).unwrap();
        let end = self.directory.select1(r + 2).unwrap_or(self.bytes.len());
        &self.bytes[start..end]
    }

    /// Decoded record for a node or the endmarker.
    pub fn record_at(&self, v: NodeId) -> Result<RecordView<'static>> {
        let r = self
            .record_index(v)
            .ok_or(GbwtError::NodeOutOfRange { node: v })?;
        decode_record(self.record_bytes(r))
    }

    /// Bytes used by the concatenated records: headers and bodies, without samples.
    pub fn record_bytes_len(&self) -> usize {
        self.bytes.len()
    }

    /// Bytes used by the stored document array samples.
    pub fn id_store_bytes(&self) -> usize {
        self.store.serialized_size()
    }

    pub fn id_store(&self) -> &HaplotypeIdStore {
        &self.store
    }

    /// Record bits per indexed character.
    pub fn bits_per_character(&self) -> f64 {
        if self.header.size == 0 {
            return 0.0;
        }
        (8 * self.bytes.len()) as f64 / self.header.size as f64
    }

    //-------------------------------------------------------------------------

    /// Writes the index in the canonical little-endian format.
    pub fn serialize<W: Write>(&self, out: &mut W) -> Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&VERSION.to_le_bytes())?;

        let mut section = Vec::with_capacity(HEADER_SIZE);
        self.header.write(&mut section)?;
        write_section(out, &section)?;

        section.clear();
        self.directory.serialize(&mut section)?;
        write_section(out, &section)?;

        write_section(out, &self.bytes)?;

        section.clear();
        self.store.present.serialize(&mut section)?;
        write_section(out, &section)?;
        section.clear();
        self.store.ranges.serialize(&mut section)?;
        write_section(out, &section)?;
        section.clear();
        self.store.offsets.serialize(&mut section)?;
        write_section(out, &section)?;

        section.clear();
        write_u64(&mut section, self.store.ids.len() as u64)?;
        for &id in &self.store.ids {
            write_u64(&mut section, id as u64)?;
        }
        write_section(out, &section)?;
        Ok(())
    }

    /// Serializes into a byte vector.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buffer = Vec::new();
        self.serialize(&mut buffer)
            .expect("writing to a vector cannot fail");
        buffer
    }

    /// Reads and validates an index.
    pub fn deserialize<R: Read>(input: &mut R) -> Result<Self> {
        let mut magic = [0u8; 4];
        input
            .read_exact(&mut magic)
            .map_err(|_| GbwtError::UnsupportedFormat("missing magic".into()))?;
        if &magic != MAGIC {
            return Err(GbwtError::UnsupportedFormat(format!(
                "bad magic {:?}",
                magic
            )));
        }
        let mut version = [0u8; 4];
        input
            .read_exact(&mut version)
            .map_err(|_| GbwtError::UnsupportedFormat("missing version".into()))?;
        let version = u32::from_le_bytes(version);
        if version != VERSION {
            return Err(GbwtError::UnsupportedFormat(format!(
                "version {} (expected {})",
                version, VERSION
            )));
        }

        let header = Header::read(&read_section(input, "header")?)?;
        let directory = parse_section(input, "directory", |s| SparseBitvector::deserialize(s))?;
        let bytes = read_section(input, "records")?;
        let present = parse_section(input, "B_s", |s| PlainBitvector::deserialize(s))?;
        let ranges = parse_section(input, "B_r", |s| SparseBitvector::deserialize(s))?;
        let offsets = parse_section(input, "B_o", |s| SparseBitvector::deserialize(s))?;
        let ids = parse_section(input, "ids", |s| {
            let count = read_usize(s)?;
            let mut ids = Vec::with_capacity(count.min(1 << 20));
            for _ in 0..count {
                ids.push(read_usize(s)?);
            }
            Ok(ids)
        })?;
        let mut trailing = [0u8; 1];
        if input.read(&mut trailing)? != 0 {
            return Err(corrupt(
                "file",
                "trailing data after the last section".into(),
            ));
        }

        let index = CompressedGbwt {
            header,
            directory,
            bytes,
            store: HaplotypeIdStore {
                present,
                ranges,
                offsets,
                ids,
            },
        };
        index.validate()?;
        Ok(index)
    }

    /// Checks the structural invariants: directory shape, record decoding, lengths, cumulative
    /// ranks against a recount, and the sample store layout.
    pub fn validate(&self) -> Result<()> {
        let header = &self.header;
        let records = header
            .node_count
            .checked_add(1)
            .ok_or_else(|| corrupt("header", "node count overflow".into()))?;
        if header.node_count > 0 && header.first_node.checked_add(header.node_count).is_none() {
            return Err(corrupt("header", "node range overflow".into()));
        }
        if self.directory.len() != self.bytes.len() || self.directory.count_ones() != records {
            return Err(corrupt(
                "directory",
                format!(
                    "{} record starts over {} bytes for {} records",
                    self.directory.count_ones(),
                    self.directory.len(),
                    records
                ),
            ));
        }
        if self.directory.select1(1) != Some(0) {
            return Err(corrupt(
                "directory",
                "first record does not start at offset 0".into(),
            ));
        }

        let last_node = header.first_node + header.node_count;
        let in_range = |w: NodeId| w == ENDMARKER || (w >= header.first_node && w < last_node);
        let mut lengths = Vec::with_capacity(records);
        let mut occurrences = vec![0usize; records];
        let mut endmarkers = 0usize;
        let mut decoded = Vec::with_capacity(records);
        for r in 0..records {
            let record = decode_record(self.record_bytes(r))
                .map_err(|e| corrupt("records", format!("record {}: {}", r, e)))?;
            if let Some(edge) = record.edges.iter().find(|e| !in_range(e.node)) {
                return Err(corrupt(
                    "records",
                    format!(
                        "record {}: successor {} outside the node range",
                        r, edge.node
                    ),
                ));
            }
            if r == 0 && record.edges.first().is_some_and(|e| e.node == ENDMARKER) {
                return Err(corrupt(
                    "records",
                    "endmarker record refers to the endmarker".into(),
                ));
            }
            lengths.push(record.len());
            for (edge, count) in record.edges.iter().zip(record.counts()) {
                if edge.node == ENDMARKER {
                    if edge.offset != 0 {
                        return Err(corrupt(
                            "records",
                            format!("record {}: nonzero rank for the endmarker", r),
                        ));
                    }
                    endmarkers += count;
                } else {
                    occurrences[self.record_index(edge.node).unwrap()] += count;
                }
            }
            decoded.push(record);
        }
        if lengths[0] != header.sequences || endmarkers != header.sequences {
            return Err(corrupt(
                "records",
                format!(
                    "{} texts in the header, endmarker record length {}, {} endmarkers",
                    header.sequences, lengths[0], endmarkers
                ),
            ));
        }
        if lengths.iter().sum::<usize>() != header.size {
            return Err(corrupt(
                "records",
                "record lengths do not add up to the size".into(),
            ));
        }
        for r in 1..records {
            if occurrences[r] != lengths[r] {
                return Err(corrupt(
                    "records",
                    format!(
                        "record {}: length {} but {} occurrences",
                        r, lengths[r], occurrences[r]
                    ),
                ));
            }
        }
        if header.bidirectional {
            // Every text is followed by its reverse path, so both orientations of a node occur
            // equally often.
            if !header.sequences.is_multiple_of(2) {
                return Err(corrupt(
                    "header",
                    "odd number of texts in a bidirectional index".into(),
                ));
            }
            for r in 1..records {
                let v = header.first_node + r - 1;
                let other = if v < 2 {
                    0
                } else {
                    self.record_index(crate::model::flip(v))
                        .map_or(0, |i| lengths[i])
                };
                if other != lengths[r] {
                    return Err(corrupt(
                        "records",
                        format!(
                            "node {} and its reverse occur a different number of times",
                            v
                        ),
                    ));
                }
            }
        }
        // Cumulative ranks, in record order: the endmarker first, then nodes in ascending order.
        let mut seen = vec![0usize; records];
        for (r, record) in decoded.iter().enumerate() {
            for (edge, count) in record.edges.iter().zip(record.counts()) {
                if edge.node == ENDMARKER {
                    continue;
                }
                let target = self.record_index(edge.node).unwrap();
                if edge.offset != seen[target] {
                    return Err(corrupt(
                        "records",
                        format!(
                            "record {}: rank {} for successor {}, expected {}",
                            r, edge.offset, edge.node, seen[target]
                        ),
                    ));
                }
                seen[target] += count;
            }
        }

        let store = &self.store;
        if store.present.len() != records {
            return Err(corrupt(
                "B_s",
                format!("length {} for {} records", store.present.len(), records),
            ));
        }
        if store.ranges.count_ones() != store.present.count_ones()
            || store.offsets.len() != store.ranges.len()
        {
            return Err(corrupt(
                "B_r",
                "range structure does not match the sampled records".into(),
            ));
        }
        if store.offsets.count_ones() != store.ids.len() {
            return Err(corrupt("ids", "identifier count does not match B_o".into()));
        }
        if let Some(&id) = store.ids.iter().find(|&&id| id >= header.sequences) {
            return Err(corrupt(
                "ids",
                format!("identifier {} for {} texts", id, header.sequences),
            ));
        }
        let mut expected_total = 0;
        for (r, &length) in lengths.iter().enumerate() {
            if let Some((start, end)) = store.range(r) {
                if start != expected_total || end - start != length {
                    return Err(corrupt(
                        "B_r",
                        format!(
                            "record {}: range [{}, {}) for length {}",
                            r, start, end, length
                        ),
                    ));
                }
                if store.offsets.rank1(end) == store.offsets.rank1(start) {
                    return Err(corrupt(
                        "B_o",
                        format!("record {}: marked but without samples", r),
                    ));
                }
                expected_total = end;
            }
        }
        if expected_total != store.ranges.len() {
            return Err(corrupt("B_r", "ranges do not cover the universe".into()));
        }
        Ok(())
    }
}

fn write_section<W: Write>(out: &mut W, payload: &[u8]) -> Result<()> {
    write_u64(out, payload.len() as u64)?;
    out.write_all(payload)?;
    Ok(())
}

fn read_section<R: Read>(input: &mut R, section: &'static str) -> Result<Vec<u8>> {
    let len = read_u64(input).map_err(|_| corrupt(section, "missing section length".into()))?;
    let mut payload = Vec::new();
    input.take(len).read_to_end(&mut payload)?;
    if payload.len() as u64 != len {
        return Err(corrupt(
            section,
            format!("truncated: {} of {} bytes", payload.len(), len),
        ));
    }
    Ok(payload)
}

fn parse_section<R: Read, T>(
    input: &mut R,
    section: &'static str,
    parse: impl FnOnce(&mut &[u8]) -> Result<T>,
) -> Result<T> {
    let payload = read_section(input, section)?;
    let mut slice = payload.as_slice();
    let value = parse(&mut slice).map_err(|e| match e {
        GbwtError::Corrupt { detail, .. } => corrupt(section, detail),
        other => other,
    })?;
    if !slice.is_empty() {
        return Err(corrupt(section, format!("{} unused bytes", slice.len())));
    }
    Ok(value)
}

//-----------------------------------------------------------------------------

impl RecordSource for CompressedGbwt {
    fn sequences(&self) -> usize {
        self.header.sequences
    }

    fn size(&self) -> usize {
        self.header.size
    }

    fn first_node(&self) -> Option<NodeId> {
        (self.header.node_count > 0).then_some(self.header.first_node)
    }

    fn node_count(&self) -> usize {
        self.header.node_count
    }

    fn record(&self, v: NodeId) -> Option<RecordView<'_>> {
        let r = self.record_index(v)?;
        Some(decode_record(self.record_bytes(r)).expect("records are validated on construction"))
    }

    fn sampled_id(&self, v: NodeId, offset: usize) -> Option<usize> {
        self.store.lookup(self.record_index(v)?, offset)
    }

    fn samples(&self, v: NodeId) -> Vec<Sample> {
        self.record_index(v)
            .map_or_else(Vec::new, |r| self.store.samples(r))
    }

    fn has_samples(&self, v: NodeId) -> bool {
        self.record_index(v)
            .is_some_and(|r| self.store.has_samples(r))
    }

    fn sample_rate(&self) -> usize {
        self.header.sample_rate
    }

    fn is_bidirectional(&self) -> bool {
        self.header.bidirectional
    }
}

impl DynamicGbwt {
    /// Converts the index into the compressed encoding.
    pub fn freeze(&self) -> CompressedGbwt {
        CompressedGbwt::from_source(self)
    }
}

impl From<&DynamicGbwt> for CompressedGbwt {
    fn from(index: &DynamicGbwt) -> Self {
        index.freeze()
    }
}

//-----------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn corpus_a() -> Vec<Vec<NodeId>> {
        vec![vec![1, 2, 4, 6, 7], vec![1, 2, 5, 7], vec![1, 3, 4, 5, 7]]
    }

    #[test]
    fn packed_run_constants() {
        let mut out = Vec::new();
        // sigma = 2, value 1, length 3: 1 + 2 * 2.
        encode_run(2, Run::new(1, 3), &mut out);
        assert_eq!(out, vec![5]);
        // sigma = 1: cap is 254, so length 255 needs a zero continuation.
        out.clear();
        encode_run(1, Run::new(0, 254), &mut out);
        assert_eq!(out, vec![253]);
        out.clear();
        encode_run(1, Run::new(0, 255), &mut out);
        assert_eq!(out, vec![254, 0]);
        out.clear();
        encode_run(1, Run::new(0, 1000), &mut out);
        assert_eq!(out, vec![254, 0xE9, 0x05]);
        assert_eq!(decode_run(1, &out, 0).unwrap(), (Run::new(0, 1000), 3));
        // Large alphabets use two varints.
        out.clear();
        encode_run(200, Run::new(150, 2), &mut out);
        assert_eq!(out, vec![0x96, 0x01, 0x01]);
        assert!(decode_run(2, &[255], 0).is_err());
        assert!(decode_run(1, &[254], 0).is_err());
    }

    #[test]
    fn record_encoding() {
        let edges = [Edge::new(5, 1), Edge::new(6, 0)];
        let runs = [Run::new(0, 2), Run::new(1, 1)];
        let mut out = Vec::new();
        encode_record(&edges, &runs, &mut out);
        assert_eq!(out, vec![2, 5, 1, 1, 0, 2, 1]);
        let view = decode_record(&out).unwrap();
        assert_eq!(view.edges.as_ref(), &edges);
        assert_eq!(view.runs.as_ref(), &runs);
        let mut empty = Vec::new();
        encode_record(&[], &[], &mut empty);
        assert_eq!(empty, vec![0]);
        assert!(decode_record(&[2, 5, 1, 0, 0]).is_err());
    }

    #[test]
    fn record_access() {
        let dynamic = DynamicGbwt::from_paths(&[vec![2, 4, 8], vec![2, 6, 8]], 1, false).unwrap();
        let index = dynamic.freeze();
        assert!(index.record_at(3).unwrap().is_empty());
        assert!(matches!(
            index.record_at(9),
            Err(GbwtError::NodeOutOfRange { node: 9 })
        ));
        assert!(matches!(
            index.record_at(1),
            Err(GbwtError::NodeOutOfRange { node: 1 })
        ));
        assert_eq!(
            index.record_at(2).unwrap(),
            dynamic.record(2).unwrap().into_owned()
        );
    }

    #[test]
    fn empty_index() {
        let index = DynamicGbwt::new(1024, false).freeze();
        let bytes = index.to_bytes();
        assert_eq!(&bytes[..4], MAGIC);
        assert_eq!(
            u64::from_le_bytes(bytes[8..16].try_into().unwrap()),
            HEADER_SIZE as u64
        );
        let loaded = CompressedGbwt::deserialize(&mut bytes.as_slice()).unwrap();
        assert_eq!(loaded, index);
        assert_eq!(loaded.sequences(), 0);
    }

    #[test]
    fn format_errors() {
        let index = DynamicGbwt::from_paths(&corpus_a(), 1024, false)
            .unwrap()
            .freeze();
        let bytes = index.to_bytes();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(
            CompressedGbwt::deserialize(&mut bad.as_slice()),
            Err(GbwtError::UnsupportedFormat(_))
        ));
        let mut bad = bytes.clone();
        bad[4] = 9;
        assert!(matches!(
            CompressedGbwt::deserialize(&mut bad.as_slice()),
            Err(GbwtError::UnsupportedFormat(_))
        ));
        for cut in [5, 20, bytes.len() / 2, bytes.len() - 1] {
            assert!(matches!(
                CompressedGbwt::deserialize(&mut &bytes[..cut]),
                Err(GbwtError::Corrupt { .. }) | Err(GbwtError::UnsupportedFormat(_))
            ));
        }
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(CompressedGbwt::deserialize(&mut extra.as_slice()).is_err());
    }

    #[test]
    fn sample_store_corpus_a() {
        let index = DynamicGbwt::from_paths(&corpus_a(), 1024, false)
            .unwrap()
            .freeze();
        // Only the records of the last nodes have samples: node 7.
        for v in [ENDMARKER, 1, 2, 3, 4, 5, 6] {
            assert!(!index.id_store().has_samples(index.record_index(v).unwrap()));
            assert!(index.samples(v).is_empty());
        }
        assert_eq!(
            index.samples(7),
            vec![Sample::new(0, 1), Sample::new(1, 2), Sample::new(2, 0)]
        );
        assert_eq!(index.sampled_id(7, 2), Some(0));
        assert_eq!(index.sampled_id(7, 3), None);
    }

    proptest! {
        #[test]
        fn record_round_trip(
            nodes in proptest::collection::btree_set(0usize..100_000, 1..300),
            runs in proptest::collection::vec((any::<usize>(), 1usize..5000), 0..40),
        ) {
            let edges: Vec<Edge> = nodes.iter().enumerate().map(|(i, &w)| Edge::new(w, i * 31)).collect();
            let runs: Vec<Run> = runs.into_iter().map(|(v, l)| Run::new(v % edges.len(), l)).collect();
            let mut out = Vec::new();
            encode_record(&edges, &runs, &mut out);
            let view = decode_record(&out).unwrap();
            prop_assert_eq!(view.edges.as_ref(), edges.as_slice());
            prop_assert_eq!(view.runs.as_ref(), runs.as_slice());
        }
    }
}
