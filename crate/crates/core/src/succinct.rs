//! Bit-level building blocks: plain and sparse bitvectors with rank/select, and the byte code
//! used for integers inside compressed records.
//!
//! Positions are 0-based. The rank argument of `select` is 1-based: `select(1, b)` is the
//! position of the first occurrence of bit `b`.

use crate::error::{GbwtError, Result};

use std::io::{Read, Write};

//-----------------------------------------------------------------------------

/// Rank/select operations shared by [`PlainBitvector`] and [`SparseBitvector`].
///
/// The unchecked methods (`rank1`, `select1`, `select0`) are used on hot paths inside the
/// crate. The checked `rank` and `select` report out-of-range arguments as errors.
pub trait BitVec {
    /// Length of the bitvector in bits.
    fn len(&self) -> usize;

    /// Returns `true` if the bitvector has length 0.
    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of set bits.
    fn count_ones(&self) -> usize;

    /// Returns bit `i`.
    ///
    /// # Panics
    ///
    /// May panic if `i >= self.len()`.
    fn get(&self, i: usize) -> bool;

    /// Number of set bits in `[0, i)`. Requires `i <= len`.
    fn rank1(&self, i: usize) -> usize;

    /// Position of the set bit of rank `k` (1-based), or `None`.
    fn select1(&self, k: usize) -> Option<usize>;

    /// Position of the unset bit of rank `k` (1-based), or `None`.
    fn select0(&self, k: usize) -> Option<usize>;

    /// Number of occurrences of `bit` in `[0, i)`.
    fn rank(&self, i: usize, bit: bool) -> Result<usize> {
        if i > self.len() {
            return Err(GbwtError::OutOfBounds {
                index: i,
                len: self.len(),
            });
        }
        let ones = self.rank1(i);
        Ok(if bit { ones } else { i - ones })
    }

    /// Position of the `k`th occurrence of `bit`, with `k >= 1`.
    fn select(&self, k: usize, bit: bool) -> Result<usize> {
        let result = if k == 0 {
            None
        } else if bit {
            self.select1(k)
        } else {
            self.select0(k)
        };
        result.ok_or(GbwtError::NotFound { rank: k, bit })
    }
}

//-----------------------------------------------------------------------------

const WORD_BITS: usize = 64;
const SUPERBLOCK_BITS: usize = 512;
const WORDS_PER_SUPERBLOCK: usize = SUPERBLOCK_BITS / WORD_BITS;

#[inline]
fn low_mask(bits: usize) -> u64 {
    if bits >= WORD_BITS {
        !0
    } else {
        (1u64 << bits) - 1
    }
}

/// Position of the set bit of rank `k` (0-based) within a word.
#[inline]
fn select_in_word(mut word: u64, k: usize) -> usize {
    for _ in 0..k {
        word &= word - 1;
    }
    word.trailing_zeros() as usize
}

/// An uncompressed bitvector with a two-level rank directory.
///
/// Superblocks cover 512 bits and store absolute ranks; each 64-bit word stores its rank
/// relative to the superblock. Select is a binary search over superblocks followed by a
/// word scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainBitvector {
    len: usize,
    words: Vec<u64>,
    superblocks: Vec<u64>,
    blocks: Vec<u16>,
    ones: usize,
}

impl PlainBitvector {
    /// Builds a bitvector from raw words. Bits beyond `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(len.div_ceil(WORD_BITS), 0);
        if !len.is_multiple_of(WORD_BITS) {
            if let Some(last) = words.last_mut() {
                *last &= low_mask(len % WORD_BITS);
            }
        }
        let mut superblocks = Vec::with_capacity(words.len() / WORDS_PER_SUPERBLOCK + 1);
        let mut blocks = Vec::with_capacity(words.len());
        let mut total = 0usize;
        let mut in_superblock = 0usize;
        for (i, word) in words.iter().enumerate() {
            if i % WORDS_PER_SUPERBLOCK == 0 {
                superblocks.push(total as u64);
                in_superblock = 0;
            }
            blocks.push(in_superblock as u16);
            let ones = word.count_ones() as usize;
            in_superblock += ones;
            total += ones;
        }
        if superblocks.is_empty() {
            superblocks.push(0);
        }
        PlainBitvector {
            len,
            words,
            superblocks,
            blocks,
            ones: total,
        }
    }

    /// Builds a bitvector from an iterator of bits.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if bit {
                words[len / WORD_BITS] |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        Self::from_words(len, words)
    }

    /// Builds a bitvector of length `len` with the given positions set.
    pub fn from_ones(len: usize, ones: &[usize]) -> Result<Self> {
        let mut words = vec![0u64; len.div_ceil(WORD_BITS)];
        for &pos in ones {
            if pos >= len {
                return Err(GbwtError::OutOfBounds { index: pos, len });
            }
            words[pos / WORD_BITS] |= 1 << (pos % WORD_BITS);
        }
        Ok(Self::from_words(len, words))
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Writes the length and the payload words.
    pub fn serialize<W: Write>(&self, out: &mut W) -> Result<()> {
        write_u64(out, self.len as u64)?;
        for &word in &self.words {
            write_u64(out, word)?;
        }
        Ok(())
    }

    pub fn serialized_size(&self) -> usize {
        8 * (1 + self.words.len())
    }

    pub fn deserialize<R: Read>(input: &mut R) -> Result<Self> {
        let len = read_usize(input)?;
        let count = len.div_ceil(WORD_BITS);
        let mut words = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            words.push(read_u64(input)?);
        }
        if len % WORD_BITS != 0
            && words
                .last()
                .is_some_and(|w| w & !low_mask(len % WORD_BITS) != 0)
        {
            return Err(GbwtError::Corrupt {
                section: "bitvector",
                detail: "bits set past the end".into(),
            });
        }
        Ok(Self::from_words(len, words))
    }

    fn zeros_before_superblock(&self, sb: usize) -> usize {
        sb * SUPERBLOCK_BITS - self.superblocks[sb] as usize
    }
}

impl BitVec for PlainBitvector {
    fn len(&self) -> usize {
        self.len
    }

    fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit {} out of bounds (length {})",
            i,
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 != 0
    }

    #[inline]
    fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        if i >= self.len {
            return self.ones;
        }
        let w = i / WORD_BITS;
        self.superblocks[w / WORDS_PER_SUPERBLOCK] as usize
            + self.blocks[w] as usize
            + (self.words[w] & low_mask(i % WORD_BITS)).count_ones() as usize
    }

    fn select1(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.ones {
            return None;
        }
        // Last superblock with fewer than k ones before it.
        let sb = self.superblocks.partition_point(|&r| (r as usize) < k) - 1;
        let mut remaining = k - self.superblocks[sb] as usize;
        let start = sb * WORDS_PER_SUPERBLOCK;
        for w in start..self.words.len() {
            let ones = self.words[w].count_ones() as usize;
            if remaining <= ones {
                return Some(w * WORD_BITS + select_in_word(self.words[w], remaining - 1));
            }
            remaining -= ones;
        }
        None
    }

    fn select0(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.len - self.ones {
            return None;
        }
        let (mut low, mut high) = (0, self.superblocks.len());
        while high - low > 1 {
            let mid = (low + high) / 2;
            if self.zeros_before_superblock(mid) < k {
                low = mid;
            } else {
                high = mid;
            }
        }
        let mut remaining = k - self.zeros_before_superblock(low);
        let start = low * WORDS_PER_SUPERBLOCK;
        for w in start..self.words.len() {
            let valid = (self.len - w * WORD_BITS).min(WORD_BITS);
            let inverted = !self.words[w] & low_mask(valid);
            let zeros = inverted.count_ones() as usize;
            if remaining <= zeros {
                return Some(w * WORD_BITS + select_in_word(inverted, remaining - 1));
            }
            remaining -= zeros;
        }
        None
    }
}

//-----------------------------------------------------------------------------

/// An Elias-Fano encoded bitvector whose size depends on the number of set bits.
///
/// Each set position `x` is split into `x >> width` (stored in unary in `high`) and the low
/// `width` bits (packed in `low`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBitvector {
    universe: usize,
    ones: usize,
    width: usize,
    low: Vec<u64>,
    high: PlainBitvector,
}

impl SparseBitvector {
    /// Builds a sparse bitvector over `[0, universe)` from strictly increasing positions.
    pub fn new(universe: usize, ones: &[usize]) -> Result<Self> {
        for (i, &pos) in ones.iter().enumerate() {
            if pos >= universe {
                return Err(GbwtError::OutOfBounds {
                    index: pos,
                    len: universe,
                });
            }
            if i > 0 && ones[i - 1] >= pos {
                return Err(GbwtError::Corrupt {
                    section: "sparse bitvector",
                    detail: format!("positions not strictly increasing at {}", i),
                });
            }
        }
        let width = Self::low_width(universe, ones.len());
        let mut low = vec![0u64; (ones.len() * width).div_ceil(WORD_BITS)];
        let high_len = ones.len() + (universe >> width) + 1;
        let mut high_words = vec![0u64; high_len.div_ceil(WORD_BITS)];
        for (i, &pos) in ones.iter().enumerate() {
            set_field(&mut low, i * width, width, (pos as u64) & low_mask(width));
            let h = (pos >> width) + i;
            high_words[h / WORD_BITS] |= 1 << (h % WORD_BITS);
        }
        Ok(SparseBitvector {
            universe,
            ones: ones.len(),
            width,
            low,
            high: PlainBitvector::from_words(high_len, high_words),
        })
    }

    /// Builds a sparse bitvector with the same content as a plain one.
    pub fn from_plain(bv: &PlainBitvector) -> Self {
        let ones: Vec<usize> = (1..=bv.count_ones())
            .map(|k| bv.select1(k).unwrap())
            .collect();
        Self::new(bv.len(), &ones).expect("positions from a bitvector are valid")
    }

    fn low_width(universe: usize, ones: usize) -> usize {
        if ones == 0 || universe <= ones {
            return 1;
        }
        let ratio = universe / ones;
        (usize::BITS - 1 - ratio.leading_zeros()).max(1) as usize
    }

    #[inline]
    fn low_value(&self, i: usize) -> usize {
        get_field(&self.low, i * self.width, self.width) as usize
    }

    /// Iterates over the set positions in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        let mut pos = 0;
        (0..self.ones).map(move |i| {
            while !self.high.get(pos) {
                pos += 1;
            }
            let value = ((pos - i) << self.width) | self.low_value(i);
            pos += 1;
            value
        })
    }

    /// Writes the universe, the number of ones, and the low and high payload words.
    pub fn serialize<W: Write>(&self, out: &mut W) -> Result<()> {
        write_u64(out, self.universe as u64)?;
        write_u64(out, self.ones as u64)?;
        for &word in &self.low {
            write_u64(out, word)?;
        }
        for &word in self.high.words() {
            write_u64(out, word)?;
        }
        Ok(())
    }

    pub fn serialized_size(&self) -> usize {
        8 * (2 + self.low.len() + self.high.words().len())
    }

    pub fn deserialize<R: Read>(input: &mut R) -> Result<Self> {
        let universe = read_usize(input)?;
        let ones = read_usize(input)?;
        if ones > universe {
            return Err(GbwtError::Corrupt {
                section: "sparse bitvector",
                detail: "more ones than positions".into(),
            });
        }
        let width = Self::low_width(universe, ones);
        let low_words = (ones * width).div_ceil(WORD_BITS);
        let high_len = ones + (universe >> width) + 1;
        let mut low = Vec::with_capacity(low_words.min(1 << 20));
        for _ in 0..low_words {
            low.push(read_u64(input)?);
        }
        let mut high_words = Vec::with_capacity(high_len.div_ceil(WORD_BITS).min(1 << 20));
        for _ in 0..high_len.div_ceil(WORD_BITS) {
            high_words.push(read_u64(input)?);
        }
        let low_bits = ones * width;
        if low_bits % WORD_BITS != 0
            && low
                .last()
                .is_some_and(|w| w & !low_mask(low_bits % WORD_BITS) != 0)
        {
            return Err(GbwtError::Corrupt {
                section: "sparse bitvector",
                detail: "low bits set past the end".into(),
            });
        }
        if high_len % WORD_BITS != 0
            && high_words
                .last()
                .is_some_and(|w| w & !low_mask(high_len % WORD_BITS) != 0)
        {
            return Err(GbwtError::Corrupt {
                section: "sparse bitvector",
                detail: "high bits set past the end".into(),
            });
        }
        let high = PlainBitvector::from_words(high_len, high_words);
        if high.count_ones() != ones {
            return Err(GbwtError::Corrupt {
                section: "sparse bitvector",
                detail: "high part does not match the number of ones".into(),
            });
        }
        let result = SparseBitvector {
            universe,
            ones,
            width,
            low,
            high,
        };
        if ones > 0 && result.select1(ones).is_none_or(|last| last >= universe) {
            return Err(GbwtError::Corrupt {
                section: "sparse bitvector",
                detail: "set bit beyond the universe".into(),
            });
        }
        let positions: Vec<usize> = result.iter_ones().collect();
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GbwtError::Corrupt {
                section: "sparse bitvector",
                detail: "positions are not strictly increasing".into(),
            });
        }
        Ok(result)
    }
}

impl BitVec for SparseBitvector {
    fn len(&self) -> usize {
        self.universe
    }

    fn count_ones(&self) -> usize {
        self.ones
    }

    fn get(&self, i: usize) -> bool {
        assert!(
            i < self.universe,
            "bit {} out of bounds (length {})",
            i,
            self.universe
        );
        self.rank1(i + 1) > self.rank1(i)
    }

    fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.universe);
        if i >= self.universe {
            return self.ones;
        }
        let bucket = i >> self.width;
        let target = i & (low_mask(self.width) as usize);
        let mut pos = if bucket == 0 {
            0
        } else {
            match self.high.select0(bucket) {
                Some(p) => p + 1,
                None => return self.ones,
            }
        };
        let mut idx = pos - bucket;
        while pos < self.high.len() && self.high.get(pos) && self.low_value(idx) < target {
            pos += 1;
            idx += 1;
        }
        idx
    }

    fn select1(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.ones {
            return None;
        }
        let pos = self.high.select1(k)?;
        Some(((pos - (k - 1)) << self.width) | self.low_value(k - 1))
    }

    fn select0(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.universe - self.ones {
            return None;
        }
        // Smallest p with p + 1 - rank1(p + 1) >= k.
        let (mut low, mut high) = (0, self.universe - 1);
        while low < high {
            let mid = (low + high) / 2;
            if mid + 1 - self.rank1(mid + 1) >= k {
                high = mid;
            } else {
                low = mid + 1;
            }
        }
        Some(low)
    }
}

fn set_field(words: &mut [u64], offset: usize, width: usize, value: u64) {
    let w = offset / WORD_BITS;
    let shift = offset % WORD_BITS;
    words[w] |= value << shift;
    if shift + width > WORD_BITS {
        words[w + 1] |= value >> (WORD_BITS - shift);
    }
}

#[inline]
fn get_field(words: &[u64], offset: usize, width: usize) -> u64 {
    let w = offset / WORD_BITS;
    let shift = offset % WORD_BITS;
    let mut value = words[w] >> shift;
    if shift + width > WORD_BITS {
        value |= words[w + 1] << (WORD_BITS - shift);
    }
    value & low_mask(width)
}

//-----------------------------------------------------------------------------

/// Appends the byte code for `value`: 7 data bits per byte, least significant chunk first,
/// with the high bit set on every byte except the last.
pub fn varint_encode(value: usize, out: &mut Vec<u8>) {
    let mut value = value as u64;
    while value >= 0x80 {
        out.push((value as u8 & 0x7F) | 0x80);
        value >>= 7;
    }
    out.push(value as u8);
}

/// Decodes the value starting at `offset` and returns it with the offset of the next byte.
pub fn varint_decode(bytes: &[u8], offset: usize) -> Result<(usize, usize)> {
    let mut value: u64 = 0;
    let mut shift = 0;
    let mut pos = offset;
    loop {
        let byte = *bytes
            .get(pos)
            .ok_or(GbwtError::MalformedEncoding { offset })?;
        if shift >= 64 || (shift == 63 && byte & 0x7E != 0) {
            return Err(GbwtError::MalformedEncoding { offset });
        }
        value |= ((byte & 0x7F) as u64) << shift;
        pos += 1;
        if byte & 0x80 == 0 {
            return usize::try_from(value)
                .map(|v| (v, pos))
                .map_err(|_| GbwtError::MalformedEncoding { offset });
        }
        shift += 7;
    }
}

/// Number of bytes [`varint_encode`] writes for `value`.
pub fn varint_len(value: usize) -> usize {
    let bits = usize::BITS - value.leading_zeros();
    (bits as usize).div_ceil(7).max(1)
}

//-----------------------------------------------------------------------------

pub(crate) fn write_u64<W: Write>(out: &mut W, value: u64) -> Result<()> {
    out.write_all(&value.to_le_bytes())?;
    Ok(())
}

pub(crate) fn read_u64<R: Read>(input: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    input.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => GbwtError::Corrupt {
            section: "stream",
            detail: "unexpected end of data".into(),
        },
        _ => GbwtError::Io(e),
    })?;
    Ok(u64::from_le_bytes(buf))
}

pub(crate) fn read_usize<R: Read>(input: &mut R) -> Result<usize> {
    let value = read_u64(input)?;
    usize::try_from(value).map_err(|_| GbwtError::Corrupt {
        section: "stream",
        detail: format!("value {} does not fit", value),
    })
}

//-----------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn naive_rank(bits: &[bool], i: usize, bit: bool) -> usize {
        bits[..i].iter().filter(|&&b| b == bit).count()
    }

    fn naive_select(bits: &[bool], k: usize, bit: bool) -> Option<usize> {
        bits.iter()
            .enumerate()
            .filter(|(_, &b)| b == bit)
            .nth(k.checked_sub(1)?)
            .map(|(i, _)| i)
    }

    fn check_against_scan<B: BitVec>(bv: &B, bits: &[bool]) {
        assert_eq!(bv.len(), bits.len());
        for i in 0..=bits.len() {
            for bit in [false, true] {
                assert_eq!(
                    bv.rank(i, bit).unwrap(),
                    naive_rank(bits, i, bit),
                    "rank({}, {})",
                    i,
                    bit
                );
            }
        }
        for bit in [false, true] {
            let total = naive_rank(bits, bits.len(), bit);
            for k in 1..=total {
                let pos = bv.select(k, bit).unwrap();
                assert_eq!(Some(pos), naive_select(bits, k, bit));
                assert_eq!(bv.rank(pos, bit).unwrap(), k - 1);
                assert_eq!(bv.get(pos), bit);
            }
            assert!(bv.select(total + 1, bit).is_err());
            assert!(bv.select(0, bit).is_err());
        }
        for (i, &b) in bits.iter().enumerate() {
            assert_eq!(bv.get(i), b);
        }
    }

    fn parse(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn small_examples() {
        let bits = parse("0110");
        let plain = PlainBitvector::from_bits(bits.iter().copied());
        assert_eq!(plain.rank(0, true).unwrap(), 0);
        assert_eq!(plain.rank(4, true).unwrap(), 2);
        assert_eq!(plain.select(1, true).unwrap(), 1);
        assert_eq!(plain.select(2, false).unwrap(), 3);
        assert!(matches!(
            plain.rank(5, true),
            Err(GbwtError::OutOfBounds { .. })
        ));
        assert!(matches!(
            plain.select(3, true),
            Err(GbwtError::NotFound { .. })
        ));

        let sparse = SparseBitvector::from_plain(&plain);
        check_against_scan(&sparse, &bits);
        assert!(sparse.rank(5, false).is_err());
    }

    #[test]
    fn random_against_scan() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for density in [0.01, 0.1, 0.5, 0.9] {
            let bits: Vec<bool> = (0..1024).map(|_| rng.gen_bool(density)).collect();
            let plain = PlainBitvector::from_bits(bits.iter().copied());
            check_against_scan(&plain, &bits);
            let sparse = SparseBitvector::from_plain(&plain);
            check_against_scan(&sparse, &bits);
        }
    }

    #[test]
    fn empty_and_full() {
        for bits in [vec![], vec![false; 700], vec![true; 700]] {
            let plain = PlainBitvector::from_bits(bits.iter().copied());
            check_against_scan(&plain, &bits);
            check_against_scan(&SparseBitvector::from_plain(&plain), &bits);
        }
    }

    #[test]
    fn serialization_round_trip() {
        let mut rng = StdRng::seed_from_u64(7);
        let bits: Vec<bool> = (0..3000).map(|_| rng.gen_bool(0.05)).collect();
        let plain = PlainBitvector::from_bits(bits.iter().copied());
        let sparse = SparseBitvector::from_plain(&plain);

        let mut buf = Vec::new();
        plain.serialize(&mut buf).unwrap();
        assert_eq!(buf.len(), plain.serialized_size());
        assert_eq!(&buf[..8], &3000u64.to_le_bytes());
        assert_eq!(
            PlainBitvector::deserialize(&mut buf.as_slice()).unwrap(),
            plain
        );

        let mut buf = Vec::new();
        sparse.serialize(&mut buf).unwrap();
        assert_eq!(buf.len(), sparse.serialized_size());
        assert_eq!(
            SparseBitvector::deserialize(&mut buf.as_slice()).unwrap(),
            sparse
        );
        assert!(SparseBitvector::deserialize(&mut &buf[..buf.len() - 1]).is_err());
    }

    #[test]
    fn sparse_rejects_unsorted() {
        assert!(SparseBitvector::new(10, &[3, 3]).is_err());
        assert!(SparseBitvector::new(10, &[10]).is_err());
    }

    #[test]
    fn varint_boundaries() {
        let mut buf = Vec::new();
        varint_encode(0, &mut buf);
        assert_eq!(buf, vec![0]);
        buf.clear();
        varint_encode(127, &mut buf);
        assert_eq!(buf, vec![127]);
        buf.clear();
        varint_encode(128, &mut buf);
        assert_eq!(buf, vec![0x80, 0x01]);
        assert_eq!(varint_decode(&buf, 0).unwrap(), (128, 2));
        assert!(matches!(
            varint_decode(&[0x80], 0),
            Err(GbwtError::MalformedEncoding { .. })
        ));
        assert!(varint_decode(&[], 0).is_err());
        buf.clear();
        varint_encode(usize::MAX, &mut buf);
        assert_eq!(varint_decode(&buf, 0).unwrap(), (usize::MAX, buf.len()));
    }

    #[test]
    fn varint_exhaustive_round_trip() {
        let mut buf = Vec::new();
        for x in 0..(1usize << 20) {
            buf.clear();
            varint_encode(x, &mut buf);
            assert_eq!(buf.len(), varint_len(x));
            assert_ne!(*buf.last().unwrap(), 0x80, "non-minimal encoding for {}", x);
            assert_eq!(varint_decode(&buf, 0).unwrap(), (x, buf.len()));
        }
    }

    proptest! {
        #[test]
        fn varint_stream_is_prefix_free(values in proptest::collection::vec(any::<u64>(), 0..50)) {
            let mut buf = Vec::new();
            for &v in &values {
                varint_encode(v as usize, &mut buf);
            }
            let mut offset = 0;
            for &v in &values {
                let (decoded, next) = varint_decode(&buf, offset).unwrap();
                prop_assert_eq!(decoded, v as usize);
                offset = next;
            }
            prop_assert_eq!(offset, buf.len());
        }

        #[test]
        fn plain_and_sparse_agree(bits in proptest::collection::vec(any::<bool>(), 0..600)) {
            let plain = PlainBitvector::from_bits(bits.iter().copied());
            let sparse = SparseBitvector::from_plain(&plain);
            prop_assert_eq!(plain.count_ones(), sparse.count_ones());
            for i in 0..=bits.len() {
                prop_assert_eq!(plain.rank1(i), sparse.rank1(i));
            }
            for k in 1..=plain.count_ones() {
                prop_assert_eq!(plain.select1(k), sparse.select1(k));
            }
            for k in 1..=(bits.len() - plain.count_ones()) {
                prop_assert_eq!(plain.select0(k), sparse.select0(k));
            }
        }
    }
}
