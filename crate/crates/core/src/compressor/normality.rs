use super::{Compressor, CompressorError};

/// Empirical check of the idempotency, monotonicity and symmetry conditions
/// a well-behaved compressor should satisfy. Gaps are in bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NormalityReport {
    /// max |Z(xx) - Z(x)| over every sampled string.
    pub idempotency_gap: u64,
    /// Sample pairs where Z(xy) < Z(x) or Z(xy) < Z(y).
    pub monotonicity_violations: usize,
    /// max |Z(xy) - Z(yx)| over the pairs, plain (not canonical) concatenation.
    pub symmetry_gap: u64,
    pub sample_count: usize,
}

/// Measures the normality conditions on `samples`. Violations are reported,
/// never raised; only compressor failures are errors.
pub fn check_normality<C: Compressor + ?Sized>(
    c: &C,
    samples: &[(Vec<u8>, Vec<u8>)],
) -> Result<NormalityReport, CompressorError> {
    if samples.is_empty() {
        return Err(CompressorError::NoSamples);
    }
    let mut report = NormalityReport {
        sample_count: samples.len(),
        ..Default::default()
    };
    let concat = |a: &[u8], b: &[u8]| [a, b].concat();
    for (x, y) in samples {
        let zx = c.compress_len(x)?;
        let zy = c.compress_len(y)?;
        let zxx = c.compress_len(&concat(x, x))?;
        let zyy = c.compress_len(&concat(y, y))?;
        let zxy = c.compress_len(&concat(x, y))?;
        let zyx = if x == y { zxy } else { c.compress_len(&concat(y, x))? };

        report.idempotency_gap = report
            .idempotency_gap
            .max(zxx.abs_diff(zx))
            .max(zyy.abs_diff(zy));
        if zxy < zx || zxy < zy {
            report.monotonicity_violations += 1;
        }
        report.symmetry_gap = report.symmetry_gap.max(zxy.abs_diff(zyx));
    }
    Ok(report)
}
