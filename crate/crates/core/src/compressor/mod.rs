//! Compressed-length oracles standing in for Kolmogorov complexity.
//!
//! Everything downstream only needs `Z(x)`, the byte length of a compressed
//! encoding of `x`. The [`Compressor`] trait captures that, and
//! [`CompressorHandle`] bundles the concrete choices the command line can
//! select: the built-in LZ77 coder, an external program, and a toy
//! run-length model whose lengths are easy to evaluate by hand.

mod external;
mod lz;
mod normality;

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

pub use external::ExternalCommand;
pub use normality::{check_normality, NormalityReport};

#[derive(Debug, Error)]
pub enum CompressorError {
    #[error("invalid external compressor template {template:?}: {reason}")]
    InvalidTemplate { template: String, reason: String },
    #[error("external compressor `{command}` failed: {detail}")]
    ExternalFailure { command: String, detail: String },
    #[error("normality check needs at least one sample pair")]
    NoSamples,
}

/// A deterministic compressed-length function.
pub trait Compressor: Send + Sync {
    fn name(&self) -> &str;

    /// Length in bytes of the compressed encoding of `data`.
    fn compress_len(&self, data: &[u8]) -> Result<u64, CompressorError>;
}

impl<C: Compressor + ?Sized> Compressor for &C {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn compress_len(&self, data: &[u8]) -> Result<u64, CompressorError> {
        (**self).compress_len(data)
    }
}

/// Orders byte strings by length, then lexicographically.
pub fn canonical_cmp(a: &[u8], b: &[u8]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Separator-free concatenation of `x` and `y` in canonical order.
pub fn canonical_concat(x: &[u8], y: &[u8]) -> Vec<u8> {
    let (first, second) = match canonical_cmp(x, y) {
        Ordering::Greater => (y, x),
        _ => (x, y),
    };
    let mut joined = Vec::with_capacity(first.len() + second.len());
    joined.extend_from_slice(first);
    joined.extend_from_slice(second);
    joined
}

/// `Z(xy)` over the canonical concatenation, so exactly symmetric in `x`, `y`.
pub fn compress_len_joint<C: Compressor + ?Sized>(
    c: &C,
    x: &[u8],
    y: &[u8],
) -> Result<u64, CompressorError> {
    c.compress_len(&canonical_concat(x, y))
}

/// The built-in LZ77 coder: 64 KiB window, greedy longest match, minimum
/// match length 4, LEB128 token framing. Its parameters are fixed so that
/// lengths are reproducible everywhere.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuiltinLz;

impl BuiltinLz {
    pub const WINDOW_SIZE: usize = lz::WINDOW_SIZE;
    pub const MIN_MATCH: usize = lz::MIN_MATCH;
}

impl Compressor for BuiltinLz {
    fn name(&self) -> &str {
        "builtin-lz"
    }

    fn compress_len(&self, data: &[u8]) -> Result<u64, CompressorError> {
        Ok(lz::encode(data).len() as u64)
    }
}

/// Toy model: two bytes per maximal run of equal bytes.
///
/// Only useful for checking formulas against hand-computed values.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunLength;

impl Compressor for RunLength {
    fn name(&self) -> &str {
        "rle"
    }

    fn compress_len(&self, data: &[u8]) -> Result<u64, CompressorError> {
        let runs = match data.split_first() {
            None => 0,
            Some((_, rest)) => 1 + data.iter().zip(rest).filter(|(a, b)| a != b).count() as u64,
        };
        Ok(2 * runs)
    }
}

#[derive(Debug, Clone)]
pub enum CompressorKind {
    BuiltinLz(BuiltinLz),
    External(ExternalCommand),
    RunLength(RunLength),
}

/// A named compressor selection.
#[derive(Debug, Clone)]
pub struct CompressorHandle {
    name: String,
    kind: CompressorKind,
}

impl CompressorHandle {
    pub fn builtin() -> Self {
        Self {
            name: BuiltinLz.name().to_owned(),
            kind: CompressorKind::BuiltinLz(BuiltinLz),
        }
    }

    pub fn external(template: &str) -> Result<Self, CompressorError> {
        let cmd = ExternalCommand::new(template)?;
        Ok(Self {
            name: cmd.name().to_owned(),
            kind: CompressorKind::External(cmd),
        })
    }

    pub fn run_length() -> Self {
        Self {
            name: RunLength.name().to_owned(),
            kind: CompressorKind::RunLength(RunLength),
        }
    }

    pub fn kind(&self) -> &CompressorKind {
        &self.kind
    }
}

impl fmt::Display for CompressorHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Compressor for CompressorHandle {
    fn name(&self) -> &str {
        &self.name
    }

    fn compress_len(&self, data: &[u8]) -> Result<u64, CompressorError> {
        match &self.kind {
            CompressorKind::BuiltinLz(c) => c.compress_len(data),
            CompressorKind::External(c) => c.compress_len(data),
            CompressorKind::RunLength(c) => c.compress_len(data),
        }
    }
}
