//! Optimal 1-D binning of numeric attribute values.
//!
//! Bins minimize the total within-bin sum of squared deviations, found by
//! exact dynamic programming over the sorted values. Bin `i` covers
//! `(boundary[i-1], boundary[i]]`; the first bin is open below and the last
//! open above. Boundaries sit midway between the neighbouring observed
//! values on either side of a cut.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::log::Warning;
use crate::model::{AttributeValue, ServiceEvent, ServiceRequest};

pub const DEFAULT_BIN_COUNT: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinningSpec {
    pub attribute: String,
    pub bin_count: usize,
    /// Strictly increasing, `bin_count - 1` entries.
    pub boundaries: Vec<f64>,
    /// Observed value range.
    pub min: f64,
    pub max: f64,
}

/// Prefix sums over values shifted by their mean, for O(1) segment SSE.
struct SegmentCost {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl SegmentCost {
    fn new(sorted: &[f64]) -> Self {
        let shift = sorted.iter().sum::<f64>() / sorted.len() as f64;
        let mut sum = vec![0.0; sorted.len() + 1];
        let mut sum_sq = vec![0.0; sorted.len() + 1];
        for (i, &x) in sorted.iter().enumerate() {
            let d = x - shift;
            sum[i + 1] = sum[i] + d;
            sum_sq[i + 1] = sum_sq[i] + d * d;
        }
        Self { sum, sum_sq }
    }

    /// SSE of `sorted[from..to]`.
    fn sse(&self, from: usize, to: usize) -> f64 {
        let n = (to - from) as f64;
        let s = self.sum[to] - self.sum[from];
        let sq = self.sum_sq[to] - self.sum_sq[from];
        (sq - s * s / n).max(0.0)
    }
}

/// Cut positions (indices into the sorted values where a new bin starts)
/// that minimize total within-bin SSE, and that SSE. Cuts are only placed
/// between distinct values.
pub fn optimal_partition(sorted: &[f64], bin_count: usize) -> (Vec<usize>, f64) {
    let n = sorted.len();
    debug_assert!(bin_count >= 1 && bin_count <= n);
    let cost = SegmentCost::new(sorted);
    let cut_ok = |i: usize| i > 0 && i < n && sorted[i - 1] < sorted[i];

    // best[k][j]: min SSE of sorted[..j] in k+1 bins; from[k][j]: start of the last bin.
    let mut best = vec![vec![f64::INFINITY; n + 1]; bin_count];
    let mut from = vec![vec![0usize; n + 1]; bin_count];
    for j in 1..=n {
        best[0][j] = cost.sse(0, j);
    }
    for k in 1..bin_count {
        for j in (k + 1)..=n {
            for i in k..j {
                if !cut_ok(i) || !best[k - 1][i].is_finite() {
                    continue;
                }
                let c = best[k - 1][i] + cost.sse(i, j);
                if c < best[k][j] {
                    best[k][j] = c;
                    from[k][j] = i;
                }
            }
        }
    }

    let mut cuts = Vec::with_capacity(bin_count - 1);
    let mut j = n;
    for k in (1..bin_count).rev() {
        let i = from[k][j];
        cuts.push(i);
        j = i;
    }
    cuts.reverse();
    (cuts, best[bin_count - 1][n])
}

pub fn compute_bins(attribute: &str, values: &[f64], bin_count: usize) -> Result<BinningSpec> {
    let fail = |reason: String| Error::Binning {
        attribute: attribute.to_owned(),
        bins: bin_count,
        reason,
    };
    if bin_count == 0 {
        return Err(fail("bin count must be positive".into()));
    }
    if let Some(x) = values.iter().find(|x| !x.is_finite()) {
        return Err(fail(format!("non-finite value {x}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let distinct = 1 + sorted.windows(2).filter(|w| w[0] < w[1]).count();
    if sorted.is_empty() || distinct < bin_count {
        return Err(fail(format!(
            "only {} distinct values",
            if sorted.is_empty() { 0 } else { distinct }
        )));
    }
    let (cuts, _) = optimal_partition(&sorted, bin_count);
    Ok(BinningSpec {
        attribute: attribute.to_owned(),
        bin_count,
        boundaries: cuts.iter().map(|&i| (sorted[i - 1] + sorted[i]) / 2.0).collect(),
        min: sorted[0],
        max: sorted[sorted.len() - 1],
    })
}

impl BinningSpec {
    /// Bin index for `x`, and whether `x` fell outside the observed range.
    pub fn bin_of(&self, x: f64) -> (usize, bool) {
        let index = self
            .boundaries
            .iter()
            .position(|&b| x <= b)
            .unwrap_or(self.boundaries.len());
        (index, x < self.min || x > self.max)
    }

    pub fn bounds(&self, index: usize) -> (f64, f64) {
        let lower = if index == 0 { self.min } else { self.boundaries[index - 1] };
        let upper = self.boundaries.get(index).copied().unwrap_or(self.max);
        (lower, upper)
    }

    pub fn binned(&self, x: f64) -> (AttributeValue, bool) {
        let (index, clamped) = self.bin_of(x);
        let (lower, upper) = self.bounds(index);
        (AttributeValue::Binned { index, lower, upper }, clamped)
    }
}

/// Replaces the spec's numeric attribute with its bin. Events without a
/// numeric value for the attribute pass through unchanged.
pub fn apply_bins(event: &ServiceEvent, spec: &BinningSpec) -> (ServiceEvent, Option<Warning>) {
    let mut out = event.clone();
    let Some(x) = event.attribute(&spec.attribute).and_then(AttributeValue::as_numeric) else {
        return (out, None);
    };
    let (value, clamped) = spec.binned(x);
    out.attributes.insert(spec.attribute.clone(), value);
    let warning = clamped.then(|| Warning {
        line: 0,
        message: format!(
            "event {}: {} = {x} outside observed range [{}, {}]; clamped",
            event.event_id, spec.attribute, spec.min, spec.max
        ),
    });
    (out, warning)
}

/// Bins a request's numeric value when it targets the spec's attribute.
pub fn bin_request(request: &ServiceRequest, spec: &BinningSpec) -> ServiceRequest {
    let mut out = request.clone();
    if request.attribute == spec.attribute {
        if let Some(x) = request.value.as_numeric() {
            out.value = spec.binned(x).0;
        }
    }
    out
}
