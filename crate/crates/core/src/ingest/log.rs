//! Event-log CSV reader and writer.
//!
//! One record per line with header `date,time,sensor,status,value,resident,location`.
//! `ON`/`OFF` pairs for the same sensor and resident fold into one
//! [`ServiceEvent`]; a `SET` while the sensor is on closes the current
//! segment and opens a new one carrying the updated attributes.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::model::{
    AttributeValue, Location, ResidentId, ServiceEvent, ServiceId, TimeOfDay, TimeOfDayInterval,
};

pub const LOG_HEADER: [&str; 7] = ["date", "time", "sensor", "status", "value", "resident", "location"];

/// Attribute recorded on sessions whose `ON` line carries no value.
pub const POWER_ATTRIBUTE: &str = "power";

/// User-supplied mapping from raw sensor labels to services and locations.
#[derive(Clone, Debug, Default, serde::Serialize, serde::Deserialize)]
pub struct SensorMap {
    #[serde(default)]
    pub services: BTreeMap<String, ServiceId>,
    #[serde(default)]
    pub locations: BTreeMap<String, Location>,
}

impl SensorMap {
    fn service(&self, sensor: &str) -> ServiceId {
        self.services.get(sensor).cloned().unwrap_or_else(|| ServiceId::new(sensor))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Warning {
    pub line: u64,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct ParsedLog {
    pub events: Vec<ServiceEvent>,
    pub warnings: Vec<Warning>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    On,
    Off,
    Set,
}

struct Open {
    date: NaiveDate,
    start: TimeOfDay,
    attributes: BTreeMap<String, AttributeValue>,
    line: u64,
}

type SessionKey = (ServiceId, ResidentId, Location);

struct Folder {
    open: BTreeMap<SessionKey, Open>,
    last_instant: BTreeMap<SessionKey, (NaiveDate, TimeOfDay)>,
    closed: Vec<(SessionKey, NaiveDate, TimeOfDayInterval, BTreeMap<String, AttributeValue>)>,
    warnings: Vec<Warning>,
}

impl Folder {
    /// Closes the open session for `key` at `(date, time)`.
    fn close(&mut self, key: &SessionKey, date: NaiveDate, time: TimeOfDay, line: u64) {
        let Some(open) = self.open.remove(key) else {
            return;
        };
        let same_day = date == open.date && time > open.start;
        let next_day = open.date.succ_opt() == Some(date) && time < open.start;
        if same_day || next_day {
            let interval = TimeOfDayInterval::new(open.start, time).expect("non-empty by construction");
            self.closed.push((key.clone(), open.date, interval, open.attributes));
        } else if date == open.date && time == open.start {
            self.warnings.push(Warning {
                line,
                message: format!("zero-length session for `{}` dropped", key.0),
            });
        } else {
            self.close_at_end_of_day(key.clone(), open);
        }
    }

    fn close_at_end_of_day(&mut self, key: SessionKey, open: Open) {
        match TimeOfDayInterval::new(open.start, TimeOfDay::END_OF_DAY) {
            Ok(interval) => {
                self.warnings.push(Warning {
                    line: open.line,
                    message: format!(
                        "`{}` turned on at {} {} without matching OFF; closed at end of day",
                        key.0, open.date, open.start
                    ),
                });
                self.closed.push((key, open.date, interval, open.attributes));
            }
            Err(_) => self.warnings.push(Warning {
                line: open.line,
                message: format!("`{}` turned on at end of day without OFF; dropped", key.0),
            }),
        }
    }
}

fn parse_value_field(raw: &str) -> std::result::Result<BTreeMap<String, AttributeValue>, String> {
    let mut attrs = BTreeMap::new();
    for token in raw.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        match token.split_once('=') {
            Some((k, v)) => {
                let k = k.trim();
                if k.is_empty() {
                    return Err(format!("empty attribute name in `{token}`"));
                }
                attrs.insert(k.to_owned(), AttributeValue::parse(v));
            }
            None => {
                attrs.insert("value".to_owned(), AttributeValue::parse(token));
            }
        }
    }
    Ok(attrs)
}

fn format_value_field(attrs: &BTreeMap<String, AttributeValue>) -> String {
    attrs
        .iter()
        .map(|(k, v)| format!("{k}={}", v.label()))
        .collect::<Vec<_>>()
        .join(";")
}

/// `HH:MM:SS`, optionally followed by fractional seconds which are dropped.
fn parse_time(raw: &str) -> Option<TimeOfDay> {
    let whole = raw.trim().split('.').next()?;
    if whole.len() != 8 {
        return None;
    }
    whole.parse().ok()
}

pub fn parse_event_log(path: &Path, resident: Option<&ResidentId>, sensors: &SensorMap) -> Result<ParsedLog> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_event_log_reader(file, path, resident, sensors)
}

/// Parses an event log from any reader; `source` is only used in messages.
pub fn parse_event_log_reader<R: Read>(
    reader: R,
    source: &Path,
    resident: Option<&ResidentId>,
    sensors: &SensorMap,
) -> Result<ParsedLog> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut folder = Folder {
        open: BTreeMap::new(),
        last_instant: BTreeMap::new(),
        closed: Vec::new(),
        warnings: Vec::new(),
    };

    let mut records = rdr.records();
    match records.next() {
        None => return Ok(ParsedLog::default()),
        Some(header) => {
            let header = header.map_err(|e| Error::parse(source, 1, e.to_string()))?;
            let fields: Vec<&str> = header.iter().map(str::trim).collect();
            if fields != LOG_HEADER {
                return Err(Error::parse(
                    source,
                    1,
                    format!("expected header `{}`", LOG_HEADER.join(",")),
                ));
            }
        }
    }

    for record in records {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Error::parse(source, line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        if record.len() != LOG_HEADER.len() {
            return Err(Error::parse(
                source,
                line,
                format!("expected {} fields, found {}", LOG_HEADER.len(), record.len()),
            ));
        }
        let field = |i: usize| record[i].trim();
        let date = NaiveDate::parse_from_str(field(0), "%Y-%m-%d")
            .map_err(|_| Error::parse(source, line, format!("malformed date `{}`", field(0))))?;
        let time = parse_time(field(1))
            .ok_or_else(|| Error::parse(source, line, format!("malformed time `{}`", field(1))))?;
        let sensor = field(2);
        if sensor.is_empty() {
            return Err(Error::parse(source, line, "empty sensor label"));
        }
        let status = match field(3).to_ascii_uppercase().as_str() {
            "ON" => Status::On,
            "OFF" => Status::Off,
            "SET" => Status::Set,
            other => return Err(Error::parse(source, line, format!("unknown status `{other}`"))),
        };
        let attrs = parse_value_field(field(4)).map_err(|m| Error::parse(source, line, m))?;
        let who = match resident {
            Some(r) => r.clone(),
            None if !field(5).is_empty() => ResidentId::new(field(5)),
            None => return Err(Error::parse(source, line, "missing resident")),
        };
        let location = match sensors.locations.get(sensor) {
            Some(l) => l.clone(),
            None if !field(6).is_empty() => Location::new(field(6)),
            None => return Err(Error::parse(source, line, format!("no location for sensor `{sensor}`"))),
        };
        let key: SessionKey = (sensors.service(sensor), who, location);

        if let Some(&prev) = folder.last_instant.get(&key) {
            if (date, time) < prev {
                return Err(Error::parse(source, line, "record out of chronological order"));
            }
        }
        folder.last_instant.insert(key.clone(), (date, time));

        match status {
            Status::On => {
                if folder.open.contains_key(&key) {
                    folder.warnings.push(Warning {
                        line,
                        message: format!("`{sensor}` ON while already on; previous session closed"),
                    });
                    folder.close(&key, date, time, line);
                }
                let attributes = if attrs.is_empty() {
                    BTreeMap::from([(POWER_ATTRIBUTE.to_owned(), AttributeValue::from("on"))])
                } else {
                    attrs
                };
                folder.open.insert(key, Open { date, start: time, attributes, line });
            }
            Status::Set => {
                if attrs.is_empty() {
                    folder.warnings.push(Warning {
                        line,
                        message: format!("`{sensor}` SET without value ignored"),
                    });
                    continue;
                }
                let mut attributes = folder
                    .open
                    .get(&key)
                    .map(|o| o.attributes.clone())
                    .unwrap_or_default();
                let same_instant = folder
                    .open
                    .get(&key)
                    .is_some_and(|o| o.date == date && o.start == time);
                attributes.extend(attrs);
                if same_instant {
                    folder.open.get_mut(&key).expect("checked").attributes = attributes;
                } else {
                    folder.close(&key, date, time, line);
                    folder.open.insert(key, Open { date, start: time, attributes, line });
                }
            }
            Status::Off => {
                if folder.open.contains_key(&key) {
                    folder.close(&key, date, time, line);
                } else {
                    folder.warnings.push(Warning {
                        line,
                        message: format!("`{sensor}` OFF without matching ON ignored"),
                    });
                }
            }
        }
    }

    let leftovers: Vec<(SessionKey, Open)> = std::mem::take(&mut folder.open).into_iter().collect();
    for (key, open) in leftovers {
        folder.close_at_end_of_day(key, open);
    }

    let mut closed = folder.closed;
    closed.sort_by(|a, b| (a.1, a.2.start(), &a.0).cmp(&(b.1, b.2.start(), &b.0)));
    let events = closed
        .into_iter()
        .enumerate()
        .map(|(n, ((service_id, resident, location), date, interval, attributes))| ServiceEvent {
            event_id: format!("{resident}-{n}"),
            service_id,
            attributes,
            date,
            interval,
            location,
            resident,
        })
        .collect();
    let mut warnings = folder.warnings;
    warnings.sort_by_key(|w| w.line);
    Ok(ParsedLog { events, warnings })
}

/// Writes events back as an `ON`/`OFF` log that parses to the same events.
pub fn write_event_log<W: Write>(events: &[ServiceEvent], out: W) -> Result<()> {
    // OFF sorts before ON at the same instant so contiguous segments re-fold.
    let mut lines: Vec<(NaiveDate, TimeOfDay, u8, usize)> = Vec::with_capacity(events.len() * 2);
    for (i, e) in events.iter().enumerate() {
        lines.push((e.date, e.interval.start(), 1, i));
        let end_date = if e.interval.wraps() {
            e.date.succ_opt().unwrap_or(e.date)
        } else {
            e.date
        };
        lines.push((end_date, e.interval.end(), 0, i));
    }
    lines.sort();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io_err = |e: csv::Error| Error::io("<event log>", std::io::Error::other(e.to_string()));
    w.write_record(LOG_HEADER).map_err(io_err)?;
    for (date, time, kind, i) in lines {
        let e = &events[i];
        let (status, value) = if kind == 1 {
            ("ON", format_value_field(&e.attributes))
        } else {
            ("OFF", String::new())
        };
        w.write_record([
            date.format("%Y-%m-%d").to_string().as_str(),
            &time.to_string(),
            e.service_id.as_str(),
            status,
            &value,
            e.resident.as_str(),
            e.location.as_str(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io("<event log>", e))?;
    Ok(())
}
