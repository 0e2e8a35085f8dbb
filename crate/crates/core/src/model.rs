//! Domain vocabulary: services, historical events, current requests and
//! the time-of-day arithmetic they share.
//!
//! Times are seconds since midnight. An interval whose end precedes its
//! start wraps past midnight and is handled internally as two ordinary
//! half-open segments, `[start, 86400)` and `[0, end)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const SECONDS_PER_DAY: u32 = 86_400;

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }
    };
}

string_id!(
    /// Identifier of an IoT service (the device abstraction, e.g. `tv`).
    ServiceId
);
string_id!(ResidentId);

/// Location label, normalized by trimming and lowercasing so that two
/// labels denote the same place iff they compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Location(String);

impl Location {
    pub fn new(label: &str) -> Self {
        Location(label.trim().to_lowercase())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl<'de> Deserialize<'de> for Location {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        Ok(Location::new(&raw))
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Location {
    fn from(s: &str) -> Self {
        Location::new(s)
    }
}

/// A time of day at one-second resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeOfDay(u32);

impl TimeOfDay {
    pub const MIDNIGHT: TimeOfDay = TimeOfDay(0);
    pub const END_OF_DAY: TimeOfDay = TimeOfDay(SECONDS_PER_DAY - 1);

    pub fn from_seconds(secs: u32) -> Result<Self> {
        if secs >= SECONDS_PER_DAY {
            return Err(Error::InvalidInterval(format!("{secs} s is not a time of day")));
        }
        Ok(TimeOfDay(secs))
    }

    pub fn hms(h: u32, m: u32, s: u32) -> Result<Self> {
        if h > 23 || m > 59 || s > 59 {
            return Err(Error::InvalidInterval(format!("{h:02}:{m:02}:{s:02}")));
        }
        Ok(TimeOfDay(h * 3600 + m * 60 + s))
    }

    pub fn seconds(self) -> u32 {
        self.0
    }
}

impl fmt::Display for TimeOfDay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.0;
        write!(f, "{:02}:{:02}:{:02}", s / 3600, (s / 60) % 60, s % 60)
    }
}

impl FromStr for TimeOfDay {
    type Err = Error;

    /// Accepts `HH:MM:SS` or `HH:MM`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInterval(format!("malformed time `{s}`"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(bad());
        }
        let mut fields = [0u32; 3];
        for (slot, part) in fields.iter_mut().zip(&parts) {
            if part.is_empty() || part.len() > 2 || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            *slot = part.parse().map_err(|_| bad())?;
        }
        TimeOfDay::hms(fields[0], fields[1], fields[2])
    }
}

impl Serialize for TimeOfDay {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TimeOfDay {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

/// Half-open `[start, end)` time-of-day interval. `end < start` wraps past
/// midnight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct TimeOfDayInterval {
    start: TimeOfDay,
    end: TimeOfDay,
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    start: TimeOfDay,
    end: TimeOfDay,
}

impl TryFrom<RawInterval> for TimeOfDayInterval {
    type Error = Error;

    fn try_from(raw: RawInterval) -> Result<Self> {
        TimeOfDayInterval::new(raw.start, raw.end)
    }
}

impl From<TimeOfDayInterval> for RawInterval {
    fn from(i: TimeOfDayInterval) -> Self {
        RawInterval {
            start: i.start,
            end: i.end,
        }
    }
}

/// A non-wrapping half-open piece of an interval, in seconds. `end` may be
/// 86400.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Segment {
    pub start: u32,
    pub end: u32,
}

impl Segment {
    pub fn len(self) -> u32 {
        self.end - self.start
    }

    pub fn is_empty(self) -> bool {
        self.end <= self.start
    }

    fn intersect(self, other: Segment) -> Option<Segment> {
        let s = Segment {
            start: self.start.max(other.start),
            end: self.end.min(other.end),
        };
        (!s.is_empty()).then_some(s)
    }
}

impl TimeOfDayInterval {
    pub fn new(start: TimeOfDay, end: TimeOfDay) -> Result<Self> {
        if start == end {
            return Err(Error::InvalidInterval(format!("zero-length interval at {start}")));
        }
        Ok(TimeOfDayInterval { start, end })
    }

    pub fn from_seconds(start: u32, end: u32) -> Result<Self> {
        Self::new(TimeOfDay::from_seconds(start)?, TimeOfDay::from_seconds(end)?)
    }

    /// Parses `"HH:MM[:SS]"` endpoints.
    pub fn parse(start: &str, end: &str) -> Result<Self> {
        Self::new(start.parse()?, end.parse()?)
    }

    pub fn start(&self) -> TimeOfDay {
        self.start
    }

    pub fn end(&self) -> TimeOfDay {
        self.end
    }

    pub fn wraps(&self) -> bool {
        self.end < self.start
    }

    /// Length in seconds.
    pub fn duration(&self) -> u32 {
        self.segments().iter().map(|s| s.len()).sum()
    }

    /// The one or two non-wrapping segments covering this interval.
    pub fn segments(&self) -> Vec<Segment> {
        let (s, e) = (self.start.0, self.end.0);
        if s < e {
            vec![Segment { start: s, end: e }]
        } else if e == 0 {
            vec![Segment { start: s, end: SECONDS_PER_DAY }]
        } else {
            vec![
                Segment { start: s, end: SECONDS_PER_DAY },
                Segment { start: 0, end: e },
            ]
        }
    }

    /// Whether second `t` (0..86400) lies inside the interval.
    pub fn contains_second(&self, t: u32) -> bool {
        self.segments().iter().any(|s| s.start <= t && t < s.end)
    }

    /// Length of the intersection in seconds. Touching endpoints do not
    /// overlap.
    pub fn overlap_length(&self, other: &TimeOfDayInterval) -> u32 {
        let theirs = other.segments();
        self.segments()
            .iter()
            .flat_map(|a| theirs.iter().filter_map(move |b| a.intersect(*b)))
            .map(Segment::len)
            .sum()
    }

    pub fn overlaps(&self, other: &TimeOfDayInterval) -> bool {
        self.overlap_length(other) > 0
    }

    /// The common sub-interval, or `None` when the intervals do not overlap.
    ///
    /// Two wrap-around intervals can intersect in two disjoint pieces; the
    /// longest piece is returned in that case (earliest start on ties).
    pub fn intersect(&self, other: &TimeOfDayInterval) -> Option<TimeOfDayInterval> {
        let theirs = other.segments();
        let mut pieces: Vec<Segment> = self
            .segments()
            .iter()
            .flat_map(|a| theirs.iter().filter_map(move |b| a.intersect(*b)))
            .collect();
        pieces.sort();
        Self::from_pieces(&pieces)
            .into_iter()
            .max_by(|a, b| a.duration().cmp(&b.duration()).then(b.start.cmp(&a.start)))
    }

    /// Rebuilds intervals from sorted, disjoint segments, joining a piece
    /// ending at midnight with one starting at midnight.
    pub(crate) fn from_pieces(pieces: &[Segment]) -> Vec<TimeOfDayInterval> {
        let mut out = Vec::new();
        let mut pieces = pieces.to_vec();
        let wrap_tail = match (pieces.first(), pieces.last()) {
            (Some(first), Some(last))
                if pieces.len() > 1 && first.start == 0 && last.end == SECONDS_PER_DAY =>
            {
                let head = pieces.remove(0);
                Some(head.end)
            }
            _ => None,
        };
        let n = pieces.len();
        for (i, p) in pieces.into_iter().enumerate() {
            let end = if i + 1 == n {
                wrap_tail.unwrap_or(p.end % SECONDS_PER_DAY)
            } else {
                p.end % SECONDS_PER_DAY
            };
            out.push(TimeOfDayInterval {
                start: TimeOfDay(p.start),
                end: TimeOfDay(end),
            });
        }
        out
    }
}

impl fmt::Display for TimeOfDayInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.start, self.end)
    }
}

pub fn overlap_length(a: &TimeOfDayInterval, b: &TimeOfDayInterval) -> u32 {
    a.overlap_length(b)
}

pub fn intersect(a: &TimeOfDayInterval, b: &TimeOfDayInterval) -> Option<TimeOfDayInterval> {
    a.intersect(b)
}

/// Value of a service attribute.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeValue {
    Categorical(String),
    Numeric(f64),
    /// A numeric reading mapped to a statistical bin. The bounds are the
    /// `(lower, upper]` range the bin covers.
    Binned { index: usize, lower: f64, upper: f64 },
}

impl AttributeValue {
    /// Parses a free-form value: numbers become `Numeric`, anything else
    /// `Categorical`.
    pub fn parse(raw: &str) -> Self {
        let raw = raw.trim();
        match raw.parse::<f64>() {
            Ok(x) if x.is_finite() => AttributeValue::Numeric(x),
            _ => AttributeValue::Categorical(raw.to_owned()),
        }
    }

    /// The item label used for preference bookkeeping.
    pub fn label(&self) -> String {
        match self {
            AttributeValue::Categorical(s) => s.clone(),
            AttributeValue::Numeric(x) => format!("{x}"),
            AttributeValue::Binned { index, .. } => format!("bin{index}"),
        }
    }

    pub fn as_numeric(&self) -> Option<f64> {
        match self {
            AttributeValue::Numeric(x) => Some(*x),
            _ => None,
        }
    }
}

impl fmt::Display for AttributeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl From<&str> for AttributeValue {
    fn from(s: &str) -> Self {
        AttributeValue::Categorical(s.to_owned())
    }
}

/// One historical usage of a service.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ServiceEvent {
    pub event_id: String,
    pub service_id: ServiceId,
    pub attributes: BTreeMap<String, AttributeValue>,
    pub date: NaiveDate,
    pub interval: TimeOfDayInterval,
    pub location: Location,
    pub resident: ResidentId,
}

impl ServiceEvent {
    pub fn attribute(&self, name: &str) -> Option<&AttributeValue> {
        self.attributes.get(name)
    }

    pub(crate) fn sort_key(&self) -> (NaiveDate, TimeOfDay) {
        (self.date, self.interval.start())
    }
}

/// A resident's current demand for one attribute value of a service.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ServiceRequest {
    pub request_id: String,
    pub service_id: ServiceId,
    pub attribute: String,
    pub value: AttributeValue,
    pub interval: TimeOfDayInterval,
    pub location: Location,
    pub resident: ResidentId,
}

/// Mutually conflicting requests on one service at one location, together
/// with the window over which they all hold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConflictSituation {
    pub service_id: ServiceId,
    pub location: Location,
    pub window: TimeOfDayInterval,
    /// Sorted by request id.
    pub requests: Vec<ServiceRequest>,
}

impl ConflictSituation {
    /// Residents in lexicographic order.
    pub fn residents(&self) -> Vec<ResidentId> {
        let mut r: Vec<ResidentId> = self.requests.iter().map(|q| q.resident.clone()).collect();
        r.sort();
        r.dedup();
        r
    }

    /// The attribute the requests compete over.
    pub fn attribute(&self) -> &str {
        self.requests.first().map(|r| r.attribute.as_str()).unwrap_or("")
    }

    pub fn request_of(&self, resident: &ResidentId) -> Option<&ServiceRequest> {
        self.requests.iter().find(|r| &r.resident == resident)
    }

    pub fn member_ids(&self) -> Vec<&str> {
        self.requests.iter().map(|r| r.request_id.as_str()).collect()
    }
}
