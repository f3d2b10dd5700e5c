//! The built-in dictionary coder.
//!
//! Greedy longest-match LZ77 with a fixed token encoding, so compressed
//! lengths are reproducible bit for bit.
//!
//! Stream layout:
//!
//! ```text
//! header   4 bytes, little-endian u32: uncompressed length
//! body     bit stream, most significant bit of each byte first
//!          literal := 0 b7..b0                      (9 bits)
//!          match   := 1 (distance-1):15 (length-3):8 (24 bits)
//!          final byte zero-padded
//! ```
//!
//! Distances range over `1..=32768` (the window), lengths over `3..=258`.
//! At each position the encoder inspects up to `chain_limit` earlier
//! positions sharing the same 3-byte prefix hash, nearest first, and keeps
//! the longest match; ties go to the nearest candidate. A match of length
//! `>= 3` is emitted as a match token, otherwise a literal. Every position
//! covered by a token is then entered into the hash chains.

use crate::error::{Error, Result};

pub const HEADER_LEN: usize = 4;
pub const WINDOW: usize = 1 << 15;
pub const MIN_MATCH: usize = 3;
pub const MAX_MATCH: usize = MIN_MATCH + 255;

const HASH_BITS: u32 = 16;
const NIL: u32 = u32::MAX;

/// Number of chain candidates examined at compression level `level` (1..=9).
pub fn chain_limit(level: u8) -> usize {
    1 << (level.clamp(1, 9) as usize + 2)
}

struct BitWriter {
    bytes: Vec<u8>,
    acc: u64,
    filled: u32,
}

impl BitWriter {
    fn new(capacity: usize) -> Self {
        BitWriter {
            bytes: Vec::with_capacity(capacity),
            acc: 0,
            filled: 0,
        }
    }

    fn put(&mut self, value: u32, width: u32) {
        self.acc = (self.acc << width) | (value as u64 & ((1 << width) - 1));
        self.filled += width;
        while self.filled >= 8 {
            self.filled -= 8;
            self.bytes.push((self.acc >> self.filled) as u8);
        }
    }

    fn finish(mut self) -> Vec<u8> {
        if self.filled > 0 {
            self.bytes.push((self.acc << (8 - self.filled)) as u8);
        }
        self.bytes
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl BitReader<'_> {
    fn get(&mut self, width: u32) -> Result<u32> {
        let mut v = 0u32;
        for _ in 0..width {
            let byte = *self
                .bytes
                .get(self.pos / 8)
                .ok_or(Error::CorruptPayload("truncated token stream"))?;
            v = (v << 1) | ((byte >> (7 - self.pos % 8)) & 1) as u32;
            self.pos += 1;
        }
        Ok(v)
    }
}

fn hash3(data: &[u8], p: usize) -> usize {
    let key = (data[p] as u32) << 16 | (data[p + 1] as u32) << 8 | data[p + 2] as u32;
    (key.wrapping_mul(0x9E37_79B1) >> (32 - HASH_BITS)) as usize
}

pub fn compress(data: &[u8], level: u8) -> Vec<u8> {
    let limit = chain_limit(level);
    let n = data.len();
    let mut out = BitWriter::new(HEADER_LEN + n + n / 8 + 1);
    let mut head = vec![NIL; 1 << HASH_BITS];
    let mut prev = vec![NIL; n];
    let insert = |head: &mut Vec<u32>, prev: &mut Vec<u32>, q: usize| {
        if q + MIN_MATCH <= n {
            let h = hash3(data, q);
            prev[q] = head[h];
            head[h] = q as u32;
        }
    };

    let mut p = 0;
    while p < n {
        let (mut best_len, mut best_dist) = (0usize, 0usize);
        if p + MIN_MATCH <= n {
            let max_len = MAX_MATCH.min(n - p);
            let mut cand = head[hash3(data, p)];
            let mut tried = 0;
            while cand != NIL && tried < limit {
                let q = cand as usize;
                if p - q > WINDOW {
                    break;
                }
                let len = data[q..]
                    .iter()
                    .zip(&data[p..p + max_len])
                    .take_while(|(a, b)| a == b)
                    .count();
                if len > best_len {
                    best_len = len;
                    best_dist = p - q;
                    if len == max_len {
                        break;
                    }
                }
                cand = prev[q];
                tried += 1;
            }
        }
        let step = if best_len >= MIN_MATCH {
            out.put(1, 1);
            out.put((best_dist - 1) as u32, 15);
            out.put((best_len - MIN_MATCH) as u32, 8);
            best_len
        } else {
            out.put(data[p] as u32, 9);
            1
        };
        for q in p..p + step {
            insert(&mut head, &mut prev, q);
        }
        p += step;
    }

    let body = out.finish();
    let mut payload = Vec::with_capacity(HEADER_LEN + body.len());
    payload.extend_from_slice(&(n as u32).to_le_bytes());
    payload.extend_from_slice(&body);
    payload
}

pub fn decompress(payload: &[u8]) -> Result<Vec<u8>> {
    let header: [u8; HEADER_LEN] = payload
        .get(..HEADER_LEN)
        .ok_or(Error::CorruptPayload("missing header"))?
        .try_into()
        .expect("slice of header length");
    let n = u32::from_le_bytes(header) as usize;
    let mut reader = BitReader {
        bytes: &payload[HEADER_LEN..],
        pos: 0,
    };
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        if reader.get(1)? == 0 {
            out.push(reader.get(8)? as u8);
        } else {
            let dist = reader.get(15)? as usize + 1;
            let len = reader.get(8)? as usize + MIN_MATCH;
            if dist > out.len() || out.len() + len > n {
                return Err(Error::CorruptPayload("match outside decoded data"));
            }
            let start = out.len() - dist;
            for k in 0..len {
                out.push(out[start + k]);
            }
        }
    }
    if payload.len() - HEADER_LEN != reader.pos.div_ceil(8) {
        return Err(Error::CorruptPayload("trailing bytes"));
    }
    Ok(out)
}
