//! Deterministic LZ77 coder used as the built-in complexity estimator.
//!
//! Container layout:
//!
//! ```text
//! [tag: u8 = 0x4c] [varint: input length] token*
//! token := [varint: literal count] literal* ([varint: match length - 4] [varint: offset])?
//! ```
//!
//! The match part of a token is absent only on the final token, when the
//! input ends inside a literal run. All varints are unsigned LEB128. Offsets
//! are limited to the 64 KiB window and matches may overlap the cursor.

pub(crate) const WINDOW_SIZE: usize = 1 << 16;
pub(crate) const MIN_MATCH: usize = 4;
pub(crate) const FORMAT_TAG: u8 = 0x4c;

const MAX_OFFSET: usize = WINDOW_SIZE - 1;
const HASH_BITS: u32 = 16;
const MAX_CHAIN: usize = 1024;
const NIL: u32 = u32::MAX;

pub(crate) fn write_varint(out: &mut Vec<u8>, mut value: u64) {
    while value >= 0x80 {
        out.push((value as u8 & 0x7f) | 0x80);
        value >>= 7;
    }
    out.push(value as u8);
}

#[inline]
fn hash4(bytes: &[u8]) -> usize {
    let v = u32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
    (v.wrapping_mul(0x9e37_79b1) >> (32 - HASH_BITS)) as usize
}

struct MatchFinder<'a> {
    input: &'a [u8],
    head: Vec<u32>,
    prev: Vec<u32>,
}

impl<'a> MatchFinder<'a> {
    fn new(input: &'a [u8]) -> Self {
        Self {
            input,
            head: vec![NIL; 1 << HASH_BITS],
            prev: vec![NIL; input.len()],
        }
    }

    fn insert(&mut self, pos: usize) {
        if pos + MIN_MATCH > self.input.len() {
            return;
        }
        let h = hash4(&self.input[pos..]);
        self.prev[pos] = self.head[h];
        self.head[h] = pos as u32;
    }

    /// Longest match for `pos` among chained candidates, nearest first on ties.
    fn longest(&self, pos: usize) -> Option<(usize, usize)> {
        let input = self.input;
        if pos + MIN_MATCH > input.len() {
            return None;
        }
        let limit = input.len() - pos;
        let mut cand = self.head[hash4(&input[pos..])];
        let mut best: Option<(usize, usize)> = None;
        let mut steps = 0;
        while cand != NIL && steps < MAX_CHAIN {
            let c = cand as usize;
            let offset = pos - c;
            if offset > MAX_OFFSET {
                break;
            }
            let len = input[c..]
                .iter()
                .zip(&input[pos..])
                .take(limit)
                .take_while(|(a, b)| a == b)
                .count();
            if len >= MIN_MATCH && best.is_none_or(|(l, _)| len > l) {
                best = Some((len, offset));
                if len == limit {
                    break;
                }
            }
            cand = self.prev[c];
            steps += 1;
        }
        best
    }
}

/// Greedy longest-match encoding of `input`.
pub(crate) fn encode(input: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(input.len() / 2 + 16);
    out.push(FORMAT_TAG);
    write_varint(&mut out, input.len() as u64);

    let mut finder = MatchFinder::new(input);
    let mut literal_start = 0;
    let mut pos = 0;
    while pos < input.len() {
        match finder.longest(pos) {
            Some((len, offset)) => {
                let literals = &input[literal_start..pos];
                write_varint(&mut out, literals.len() as u64);
                out.extend_from_slice(literals);
                write_varint(&mut out, (len - MIN_MATCH) as u64);
                write_varint(&mut out, offset as u64);
                for p in pos..pos + len {
                    finder.insert(p);
                }
                pos += len;
                literal_start = pos;
            }
            None => {
                finder.insert(pos);
                pos += 1;
            }
        }
    }
    if literal_start < input.len() {
        let literals = &input[literal_start..];
        write_varint(&mut out, literals.len() as u64);
        out.extend_from_slice(literals);
    }
    out
}
