//! Group satisfaction metrics.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::model::{ResidentId, ServiceEvent};
use crate::preference::{find_overlapping_events, HistoryQuery, PreferenceTable};

/// Which items count as adopted when scoring a recommendation.
#[derive(Clone, Debug, PartialEq)]
pub enum Adopted {
    All,
    Shared(BTreeSet<String>),
    PerResident(BTreeMap<ResidentId, BTreeSet<String>>),
}

impl Adopted {
    pub fn contains(&self, resident: &ResidentId, item: &str) -> bool {
        match self {
            Adopted::All => true,
            Adopted::Shared(items) => items.contains(item),
            Adopted::PerResident(map) => map.get(resident).is_some_and(|s| s.contains(item)),
        }
    }
}

/// Mean over members of their summed scores for the recommended items they
/// have adopted.
pub fn satisfaction_gain<S: AsRef<str>>(
    table: &PreferenceTable,
    group: &[ResidentId],
    recommended: &[S],
    adopted: &Adopted,
) -> f64 {
    if group.is_empty() {
        return 0.0;
    }
    let total: f64 = group
        .iter()
        .map(|r| {
            recommended
                .iter()
                .filter(|i| adopted.contains(r, i.as_ref()))
                .map(|i| table.score(r, i.as_ref()))
                .sum::<f64>()
        })
        .sum();
    total / group.len() as f64
}

/// Items the resident used, on more than `threshold` of the days on which
/// they used the service in the queried window at all.
pub fn adopted_items(
    history: &[ServiceEvent],
    resident: &ResidentId,
    query: &HistoryQuery,
    attribute: &str,
    threshold: f64,
) -> BTreeSet<String> {
    let mut active_days = BTreeSet::new();
    let mut days_by_item: BTreeMap<String, BTreeSet<chrono::NaiveDate>> = BTreeMap::new();
    for e in find_overlapping_events(history, query) {
        if &e.resident != resident {
            continue;
        }
        active_days.insert(e.date);
        if let Some(v) = e.attribute(attribute) {
            days_by_item.entry(v.label()).or_default().insert(e.date);
        }
    }
    let bar = threshold * active_days.len() as f64;
    days_by_item
        .into_iter()
        .filter(|(_, days)| days.len() as f64 > bar)
        .map(|(item, _)| item)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarmonicScore {
    pub value: f64,
    /// Members whose summed score was zero, forcing the metric to 0.
    pub zero_members: Vec<ResidentId>,
}

/// Harmonic mean of the members' summed scores over the recommended items.
pub fn harmonic<S: AsRef<str>>(table: &PreferenceTable, group: &[ResidentId], recommended: &[S]) -> HarmonicScore {
    let sums: Vec<(ResidentId, f64)> = group
        .iter()
        .map(|r| (r.clone(), recommended.iter().map(|i| table.score(r, i.as_ref())).sum()))
        .collect();
    let zero_members: Vec<ResidentId> = sums.iter().filter(|(_, s)| *s <= 0.0).map(|(r, _)| r.clone()).collect();
    let value = if sums.is_empty() || !zero_members.is_empty() {
        0.0
    } else {
        sums.len() as f64 / sums.iter().map(|(_, s)| 1.0 / s).sum::<f64>()
    };
    HarmonicScore { value, zero_members }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SatisfactionScore {
    /// `None` when every member was excluded.
    pub value: Option<f64>,
    /// Members with no positive score at all.
    pub excluded: Vec<ResidentId>,
}

/// Mean over members of the chosen item's score relative to their own best.
pub fn average_satisfaction(table: &PreferenceTable, group: &[ResidentId], chosen: &str) -> SatisfactionScore {
    let mut ratios = Vec::new();
    let mut excluded = Vec::new();
    for r in group {
        let best = table
            .row(r)
            .map(|row| row.values().copied().fold(0.0, f64::max))
            .unwrap_or(0.0);
        if best > 0.0 {
            ratios.push(table.score(r, chosen) / best);
        } else {
            excluded.push(r.clone());
        }
    }
    let value = (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
    SatisfactionScore { value, excluded }
}
