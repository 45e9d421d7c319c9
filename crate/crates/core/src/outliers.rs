//! Anomalous-record handling: manual exclusion lists and box-plot (Tukey) fences.
//!
//! Excluded records never contribute to reference bounds or to aggregate
//! means. They can still be rescaled against the kept bounds, in which case
//! their values are clamped into `[0, 1]`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{compute_pir, Phase, RecordKey, StatLine};

pub const DEFAULT_IQR_MULTIPLIER: f64 = 1.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutlierMode {
    None,
    Manual(Vec<RecordKey>),
    Iqr { multiplier: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutlierPolicy {
    pub mode: OutlierMode,
    /// Excluded records are still rescaled (clamped) and reported.
    pub clamp_excluded: bool,
}

impl OutlierPolicy {
    pub fn none() -> Self {
        Self {
            mode: OutlierMode::None,
            clamp_excluded: true,
        }
    }

    pub fn manual(entries: Vec<RecordKey>) -> Self {
        Self {
            mode: OutlierMode::Manual(entries),
            clamp_excluded: true,
        }
    }

    pub fn iqr(multiplier: f64) -> Result<Self> {
        check_multiplier(multiplier)?;
        Ok(Self {
            mode: OutlierMode::Iqr { multiplier },
            clamp_excluded: true,
        })
    }

    pub fn with_clamp_excluded(mut self, clamp: bool) -> Self {
        self.clamp_excluded = clamp;
        self
    }

    pub fn is_none(&self) -> bool {
        matches!(self.mode, OutlierMode::None)
    }
}

impl Default for OutlierPolicy {
    fn default() -> Self {
        Self::none()
    }
}

fn check_multiplier(multiplier: f64) -> Result<()> {
    if !(multiplier.is_finite() && multiplier > 0.0) {
        return Err(Error::InvalidPolicy(format!(
            "IQR multiplier must be > 0, got {multiplier}"
        )));
    }
    Ok(())
}

/// Quantile by linear interpolation between order statistics
/// (`h = (n - 1) p`), on an ascending slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Lower and upper Tukey fences of a series.
pub fn tukey_fences(values: &[f64], multiplier: f64) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::NoData("empty series".into()));
    }
    check_multiplier(multiplier)?;
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidValue(format!(
            "non-finite value {bad} in series"
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    Ok((q1 - multiplier * iqr, q3 + multiplier * iqr))
}

/// Indices of the values lying strictly outside the Tukey fences.
pub fn detect_iqr(values: &[f64], multiplier: f64) -> Result<BTreeSet<usize>> {
    let (lower, upper) = tukey_fences(values, multiplier)?;
    Ok(values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < lower || v > upper)
        .map(|(i, _)| i)
        .collect())
}

/// Records split into the ones that define bounds and the anomalous ones.
#[derive(Clone, Debug)]
pub struct Partition<'a> {
    pub kept: Vec<&'a StatLine>,
    pub excluded: Vec<&'a StatLine>,
    excluded_keys: HashSet<RecordKey>,
}

impl<'a> Partition<'a> {
    fn from_excluded(records: &'a [StatLine], excluded_keys: HashSet<RecordKey>) -> Self {
        let (excluded, kept) = records
            .iter()
            .partition(|s| excluded_keys.contains(&s.key()));
        Self {
            kept,
            excluded,
            excluded_keys,
        }
    }

    pub fn is_excluded(&self, s: &StatLine) -> bool {
        self.excluded_keys.contains(&s.key())
    }

    pub fn excluded_keys(&self) -> &HashSet<RecordKey> {
        &self.excluded_keys
    }
}

/// Splits `records` according to `policy`; IQR screening uses the PIR value.
pub fn apply_policy<'a>(records: &'a [StatLine], policy: &OutlierPolicy) -> Result<Partition<'a>> {
    apply_policy_by(records, policy, compute_pir)
}

/// Like [`apply_policy`] with a caller-chosen screening metric.
///
/// IQR fences are computed per (player, phase) group, i.e. against each
/// player's own career in that phase.
pub fn apply_policy_by<'a, F>(
    records: &'a [StatLine],
    policy: &OutlierPolicy,
    metric: F,
) -> Result<Partition<'a>>
where
    F: Fn(&StatLine) -> f64,
{
    if records.is_empty() {
        return Err(Error::NoData("no records to screen".into()));
    }
    let excluded = match &policy.mode {
        OutlierMode::None => HashSet::new(),
        OutlierMode::Manual(entries) => {
            let present: HashSet<RecordKey> = records.iter().map(StatLine::key).collect();
            let unmatched: Vec<String> = entries
                .iter()
                .filter(|k| !present.contains(k))
                .map(ToString::to_string)
                .collect();
            if !unmatched.is_empty() {
                return Err(Error::UnmatchedExclusions(unmatched));
            }
            entries.iter().cloned().collect()
        }
        OutlierMode::Iqr { multiplier } => {
            check_multiplier(*multiplier)?;
            let mut groups: BTreeMap<(&str, Phase), Vec<&StatLine>> = BTreeMap::new();
            for s in records {
                groups
                    .entry((s.player.as_str(), s.phase))
                    .or_default()
                    .push(s);
            }
            let mut out = HashSet::new();
            for group in groups.values() {
                let values: Vec<f64> = group.iter().map(|s| metric(s)).collect();
                for i in detect_iqr(&values, *multiplier)? {
                    out.insert(group[i].key());
                }
            }
            out
        }
    };
    Ok(Partition::from_excluded(records, excluded))
}
