//! Information distance estimates for lists of more than two strings.
//!
//! With `Z(X)` the compressed length of the canonical concatenation of the
//! list and `K(X|x) ≈ Z(X) - Z(x)`:
//!
//! - `e_max_est(X) = Z(X) - min_x Z(x)`
//! - `e_min_est(X) = Z(X) - max_x Z(x)`
//! - `pairwise_bound(X) = min_i Σ_{k≠i} e_max_est((x_i, x_k))`
//!
//! For exact Kolmogorov complexity these satisfy
//! `E_min ≤ E_max ≤ pairwise bound` up to a logarithmic term; with a real
//! compressor the right-hand inequality is only checked with slack.

use thiserror::Error;

use crate::compressor::{canonical_cmp, Compressor, CompressorError};

#[derive(Debug, Error)]
pub enum MultilistError {
    #[error("a list needs at least 2 items, got {0}")]
    TooSmall(usize),
    #[error("slack must be a non-negative number, got {0}")]
    InvalidSlack(f64),
    #[error(transparent)]
    Compressor(#[from] CompressorError),
}

/// Byte strings in canonical order: length increasing, ties broken
/// lexicographically. Duplicates are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringList {
    items: Vec<Vec<u8>>,
}

impl StringList {
    pub fn items(&self) -> &[Vec<u8>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_bytes(&self) -> usize {
        self.items.iter().map(Vec::len).sum()
    }

    fn concatenated(&self) -> Vec<u8> {
        self.items.concat()
    }
}

pub fn canonical_order<I, T>(items: I) -> Result<StringList, MultilistError>
where
    I: IntoIterator<Item = T>,
    T: Into<Vec<u8>>,
{
    let mut items: Vec<Vec<u8>> = items.into_iter().map(Into::into).collect();
    if items.len() < 2 {
        return Err(MultilistError::TooSmall(items.len()));
    }
    items.sort_by(|a, b| canonical_cmp(a, b));
    Ok(StringList { items })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiDistanceReport {
    pub e_min_est: f64,
    pub e_max_est: f64,
    pub pairwise_bound: f64,
    pub sandwich_ok: bool,
    pub slack_used: f64,
}

struct Lengths {
    joint: u64,
    singles: Vec<u64>,
}

fn lengths<C: Compressor + ?Sized>(x: &StringList, c: &C) -> Result<Lengths, CompressorError> {
    Ok(Lengths {
        joint: c.compress_len(&x.concatenated())?,
        singles: x
            .items
            .iter()
            .map(|s| c.compress_len(s))
            .collect::<Result<_, _>>()?,
    })
}

fn spread(l: &Lengths) -> (f64, f64) {
    let lo = *l.singles.iter().min().expect("list is non-empty");
    let hi = *l.singles.iter().max().expect("list is non-empty");
    (l.joint as f64 - lo as f64, l.joint as f64 - hi as f64)
}

pub fn e_max_est<C: Compressor + ?Sized>(x: &StringList, c: &C) -> Result<f64, MultilistError> {
    Ok(spread(&lengths(x, c)?).0)
}

pub fn e_min_est<C: Compressor + ?Sized>(x: &StringList, c: &C) -> Result<f64, MultilistError> {
    Ok(spread(&lengths(x, c)?).1)
}

/// Each pair is estimated as a two-item list, so for `m = 2` this equals
/// [`e_max_est`].
pub fn pairwise_bound<C: Compressor + ?Sized>(
    x: &StringList,
    c: &C,
) -> Result<f64, MultilistError> {
    let m = x.len();
    let singles: Vec<u64> = x
        .items
        .iter()
        .map(|s| c.compress_len(s))
        .collect::<Result<_, _>>()?;
    // pair[i][k] = e_max_est((x_i, x_k)); items are already canonical, so
    // the lower index goes first.
    let mut pair = vec![0.0; m * m];
    for i in 0..m {
        for k in i + 1..m {
            let joint = c.compress_len(&[x.items[i].as_slice(), x.items[k].as_slice()].concat())?;
            let v = joint as f64 - singles[i].min(singles[k]) as f64;
            pair[i * m + k] = v;
            pair[k * m + i] = v;
        }
    }
    Ok((0..m)
        .map(|i| (0..m).filter(|&k| k != i).map(|k| pair[i * m + k]).sum::<f64>())
        .fold(f64::INFINITY, f64::min))
}

/// `2 * log2(total bytes) + 64`; 64 alone for an all-empty list.
pub fn default_slack(x: &StringList) -> f64 {
    let total = x.total_bytes();
    if total == 0 {
        64.0
    } else {
        2.0 * (total as f64).log2() + 64.0
    }
}

pub fn check_sandwich<C: Compressor + ?Sized>(
    x: &StringList,
    c: &C,
    slack: f64,
) -> Result<MultiDistanceReport, MultilistError> {
    if !(slack >= 0.0) || slack.is_infinite() {
        return Err(MultilistError::InvalidSlack(slack));
    }
    let (e_max, e_min) = spread(&lengths(x, c)?);
    let bound = pairwise_bound(x, c)?;
    Ok(MultiDistanceReport {
        e_min_est: e_min,
        e_max_est: e_max,
        pairwise_bound: bound,
        sandwich_ok: e_min <= e_max + slack && e_max <= bound + slack,
        slack_used: slack,
    })
}
