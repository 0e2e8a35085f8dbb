//! Preference extraction: per-resident, per-item scores from the history of
//! events that overlap a conflict window, each weighted by how closely its
//! time interval coincides with the window.

use std::collections::BTreeMap;
use std::io::Write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    ConflictSituation, Location, ResidentId, Segment, ServiceEvent, ServiceId, TimeOfDayInterval,
    SECONDS_PER_DAY,
};

/// Overlap density of a set of intervals: the integral of the number of
/// active intervals over their joint span, divided by `span * n`.
///
/// Equal to 1 iff all intervals coincide. For sets containing a
/// midnight-wrapping interval the span is the shortest arc of the 24-hour
/// clock covering all of them.
pub fn temporal_proximity(intervals: &[TimeOfDayInterval]) -> Result<f64> {
    if intervals.is_empty() {
        return Err(Error::EmptyIntervalSet);
    }
    let covered: u64 = intervals.iter().map(|i| u64::from(i.duration())).sum();
    let span = if intervals.iter().any(TimeOfDayInterval::wraps) {
        circular_span(intervals)
    } else {
        let first = intervals.iter().map(|i| i.start().seconds()).min().expect("non-empty");
        let last = intervals.iter().map(|i| i.end().seconds()).max().expect("non-empty");
        last - first
    };
    Ok(covered as f64 / (f64::from(span) * intervals.len() as f64))
}

/// Length of the shortest arc containing every interval: the day minus the
/// widest gap left uncovered by their union.
fn circular_span(intervals: &[TimeOfDayInterval]) -> u32 {
    let mut segs: Vec<Segment> = intervals.iter().flat_map(|i| i.segments()).collect();
    segs.sort();
    let mut union: Vec<Segment> = Vec::new();
    for s in segs {
        match union.last_mut() {
            Some(last) if s.start <= last.end => last.end = last.end.max(s.end),
            _ => union.push(s),
        }
    }
    let mut widest = 0;
    for w in union.windows(2) {
        widest = widest.max(w[1].start - w[0].end);
    }
    let wrap_gap = union[0].start + (SECONDS_PER_DAY - union[union.len() - 1].end);
    widest = widest.max(wrap_gap);
    SECONDS_PER_DAY - widest
}

/// Proximity of one historical event to the conflict window, i.e.
/// [`temporal_proximity`] of the pair.
pub fn event_window_proximity(event: &TimeOfDayInterval, window: &TimeOfDayInterval) -> Result<f64> {
    if !event.overlaps(window) {
        return Err(Error::NoOverlap(event.to_string(), window.to_string()));
    }
    temporal_proximity(&[*event, *window])
}

pub fn frequency<S: AsRef<str>>(items: &[S], a: &str) -> usize {
    items.iter().filter(|s| s.as_ref() == a).count()
}

/// Which part of the history to search.
#[derive(Clone, Debug)]
pub struct HistoryQuery {
    pub service_id: ServiceId,
    pub location: Location,
    pub window: TimeOfDayInterval,
    /// Only events dated within this many days up to and including
    /// `as_of`.
    pub lookback: Option<Lookback>,
}

#[derive(Clone, Copy, Debug)]
pub struct Lookback {
    pub as_of: NaiveDate,
    pub days: u32,
}

impl Lookback {
    fn admits(&self, date: NaiveDate) -> bool {
        let age = (self.as_of - date).num_days();
        (0..i64::from(self.days)).contains(&age)
    }
}

/// Events on the query's service and location whose time of day overlaps
/// the window on any date.
pub fn find_overlapping_events<'a>(history: &'a [ServiceEvent], query: &HistoryQuery) -> Vec<&'a ServiceEvent> {
    history
        .iter()
        .filter(|e| e.service_id == query.service_id && e.location == query.location)
        .filter(|e| query.lookback.is_none_or(|lb| lb.admits(e.date)))
        .filter(|e| e.interval.overlaps(&query.window))
        .collect()
}

/// An overlapping event reduced to the item it used and its proximity
/// weight.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlappingEvent<'a> {
    pub event: &'a ServiceEvent,
    pub item: String,
    /// In (0, 1].
    pub proximity: f64,
}

/// Pairs each event with its value for `attribute` and its proximity to the
/// window. Events without the attribute are skipped.
pub fn weigh<'a>(
    events: &[&'a ServiceEvent],
    attribute: &str,
    window: &TimeOfDayInterval,
) -> Result<Vec<OverlappingEvent<'a>>> {
    events
        .iter()
        .filter_map(|e| e.attribute(attribute).map(|v| (*e, v.label())))
        .map(|(event, item)| {
            Ok(OverlappingEvent {
                event,
                item,
                proximity: event_window_proximity(&event.interval, window)?,
            })
        })
        .collect()
}

/// Proximity-weighted usage count of item `a`.
pub fn preference_score(overlapping: &[OverlappingEvent<'_>], a: &str) -> f64 {
    overlapping.iter().filter(|o| o.item == a).map(|o| o.proximity).sum()
}

/// Resident × item preference scores.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PreferenceTable {
    pub service_id: Option<ServiceId>,
    pub window: Option<TimeOfDayInterval>,
    rows: BTreeMap<ResidentId, BTreeMap<String, f64>>,
}

impl PreferenceTable {
    pub fn new(service_id: Option<ServiceId>, window: Option<TimeOfDayInterval>) -> Self {
        Self {
            service_id,
            window,
            rows: BTreeMap::new(),
        }
    }

    /// Ensures `resident` has a (possibly empty) row.
    pub fn add_resident(&mut self, resident: ResidentId) {
        self.rows.entry(resident).or_default();
    }

    pub fn set(&mut self, resident: ResidentId, item: impl Into<String>, score: f64) -> Result<()> {
        if !(score.is_finite() && score >= 0.0) {
            return Err(Error::Config(format!("preference score {score} must be finite and nonnegative")));
        }
        self.rows.entry(resident).or_default().insert(item.into(), score);
        Ok(())
    }

    /// Score of `item` for `resident`, zero when unscored.
    pub fn score(&self, resident: &ResidentId, item: &str) -> f64 {
        self.rows
            .get(resident)
            .and_then(|row| row.get(item))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn row(&self, resident: &ResidentId) -> Option<&BTreeMap<String, f64>> {
        self.rows.get(resident)
    }

    pub fn residents(&self) -> impl Iterator<Item = &ResidentId> {
        self.rows.keys()
    }

    pub fn rows(&self) -> &BTreeMap<ResidentId, BTreeMap<String, f64>> {
        &self.rows
    }

    /// The resident's `n` best items, ties broken lexicographically.
    pub fn top_items(&self, resident: &ResidentId, n: usize) -> Vec<&str> {
        let Some(row) = self.rows.get(resident) else {
            return Vec::new();
        };
        let mut items: Vec<(&str, f64)> = row.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        items.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(b.0)));
        items.into_iter().take(n).map(|(k, _)| k).collect()
    }

    /// `resident,item,score` rows with four decimals.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "resident,item,score")?;
        for (resident, row) in &self.rows {
            for (item, score) in row {
                writeln!(out, "{resident},{item},{score:.4}")?;
            }
        }
        Ok(())
    }
}

/// Options for [`build_preference_table`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtractionOptions {
    pub lookback_days: Option<u32>,
    /// Anchor date for the lookback; defaults to the latest date in the
    /// history.
    pub as_of: Option<NaiveDate>,
}

pub fn build_preference_table(
    history: &[ServiceEvent],
    situation: &ConflictSituation,
    opts: ExtractionOptions,
) -> Result<PreferenceTable> {
    let lookback = match opts.lookback_days {
        Some(days) => opts
            .as_of
            .or_else(|| history.iter().map(|e| e.date).max())
            .map(|as_of| Lookback { as_of, days }),
        None => None,
    };
    let query = HistoryQuery {
        service_id: situation.service_id.clone(),
        location: situation.location.clone(),
        window: situation.window,
        lookback,
    };
    let overlapping = find_overlapping_events(history, &query);
    let mut table = PreferenceTable::new(Some(situation.service_id.clone()), Some(situation.window));
    for resident in situation.residents() {
        let own: Vec<&ServiceEvent> = overlapping.iter().copied().filter(|e| e.resident == resident).collect();
        let weighted = weigh(&own, situation.attribute(), &situation.window)?;
        let mut scores: BTreeMap<&str, f64> = BTreeMap::new();
        for o in &weighted {
            *scores.entry(o.item.as_str()).or_default() += o.proximity;
        }
        table.add_resident(resident.clone());
        for (item, score) in scores {
            table.set(resident.clone(), item, score)?;
        }
    }
    Ok(table)
}
