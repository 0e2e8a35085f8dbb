//! Canonical event store: a schema-versioned JSON-lines file holding the
//! preprocessed history, so later stages never re-parse raw logs.
//!
//! Line 1 is a [`StoreHeader`]; every following line is one
//! [`ServiceEvent`], sorted by `(date, start)`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::binning::{apply_bins, bin_request, compute_bins, BinningSpec};
use crate::ingest::log::{parse_event_log, SensorMap};
use crate::ingest::merge::{augment_channels, merge_households, AUGMENT_PRNG};
use crate::ingest::stabilize::{stabilize, StabilizationConfig};
use crate::model::{AttributeValue, ResidentId, ServiceEvent, ServiceId, ServiceRequest};
use crate::provenance::{InputDigest, ReportHeader, RunConfig};

pub const STORE_SCHEMA: &str = "iot-conflict/event-store";
pub const STORE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Augmentation {
    pub service: ServiceId,
    pub channels: Vec<String>,
    pub prng: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoreHeader {
    pub schema: String,
    pub version: u32,
    pub provenance: ReportHeader,
    pub binning: Vec<BinningSpec>,
    pub augmentation: Option<Augmentation>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EventStore {
    pub header: StoreHeader,
    pub events: Vec<ServiceEvent>,
}

/// One raw log to ingest. `resident` labels single-resident logs.
#[derive(Clone, Debug)]
pub struct LogSource {
    pub path: PathBuf,
    pub resident: Option<ResidentId>,
}

#[derive(Clone, Debug, Default)]
pub struct IngestOptions {
    pub sensors: SensorMap,
    /// Service whose events get random channels, and the channel labels.
    pub augment: Option<(ServiceId, Vec<String>)>,
    /// Attributes to bin. `None` bins every numeric attribute with enough
    /// distinct values.
    pub bin_attributes: Option<Vec<String>>,
}

/// parse → merge → augment → stabilize → bin.
pub fn ingest(sources: &[LogSource], opts: &IngestOptions, config: &RunConfig) -> Result<EventStore> {
    config.validate()?;
    let mut logs = Vec::with_capacity(sources.len());
    let mut inputs = Vec::with_capacity(sources.len());
    let mut warnings = Vec::new();
    for src in sources {
        let parsed = parse_event_log(&src.path, src.resident.as_ref(), &opts.sensors)?;
        let name = src.path.display().to_string();
        warnings.extend(parsed.warnings.iter().map(|w| format!("{name}:{}: {}", w.line, w.message)));
        let label = src
            .resident
            .clone()
            .unwrap_or_else(|| ResidentId::new(format!("file:{name}")));
        logs.push((label, parsed.events));
        inputs.push(InputDigest::of_file(&src.path)?);
    }
    let mut events = merge_households(logs)?;

    let augmentation = match &opts.augment {
        Some((service, channels)) => {
            events = augment_channels(&events, service, channels, config.seed)?;
            Some(Augmentation {
                service: service.clone(),
                channels: channels.clone(),
                prng: AUGMENT_PRNG.to_owned(),
                seed: config.seed,
            })
        }
        None => None,
    };

    events = stabilize(&events, StabilizationConfig::new(config.settling_window)?);

    let mut numeric: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for e in &events {
        for (name, v) in &e.attributes {
            if let Some(x) = v.as_numeric() {
                numeric.entry(name.as_str()).or_default().push(x);
            }
        }
    }
    let mut binning = Vec::new();
    match &opts.bin_attributes {
        Some(names) => {
            for name in names {
                let values = numeric.get(name.as_str()).map(Vec::as_slice).unwrap_or(&[]);
                binning.push(compute_bins(name, values, config.bin_count)?);
            }
        }
        None => {
            for (name, values) in &numeric {
                let distinct: BTreeSet<u64> = values.iter().map(|x| x.to_bits()).collect();
                if distinct.len() >= config.bin_count {
                    binning.push(compute_bins(name, values, config.bin_count)?);
                } else {
                    warnings.push(format!(
                        "attribute `{name}` has {} distinct values; left unbinned",
                        distinct.len()
                    ));
                }
            }
        }
    }
    for spec in &binning {
        events = events
            .iter()
            .map(|e| {
                let (binned, warning) = apply_bins(e, spec);
                warnings.extend(warning.map(|w| w.message));
                binned
            })
            .collect();
    }

    Ok(EventStore {
        header: StoreHeader {
            schema: STORE_SCHEMA.to_owned(),
            version: STORE_VERSION,
            provenance: ReportHeader::new("event-store", config, inputs),
            binning,
            augmentation,
            warnings,
        },
        events,
    })
}

impl EventStore {
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", serde_json::to_string(&self.header)?)?;
        for e in &self.events {
            writeln!(out, "{}", serde_json::to_string(e)?)?;
        }
        Ok(())
    }

    pub fn read_reader<R: Read>(reader: R, source: &Path) -> Result<Self> {
        let mut lines = BufReader::new(reader).lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::parse(source, 1, "empty event store"))?
            .map_err(|e| Error::io(source, e))?;
        let header: StoreHeader =
            serde_json::from_str(&first).map_err(|e| Error::parse(source, 1, e.to_string()))?;
        if header.schema != STORE_SCHEMA || header.version != STORE_VERSION {
            return Err(Error::parse(
                source,
                1,
                format!(
                    "unsupported store {} v{} (expected {STORE_SCHEMA} v{STORE_VERSION})",
                    header.schema, header.version
                ),
            ));
        }
        let mut events = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::io(source, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let e: ServiceEvent = serde_json::from_str(&line)
                .map_err(|err| Error::parse(source, idx as u64 + 2, err.to_string()))?;
            events.push(e);
        }
        Ok(Self { header, events })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_reader(file, path)
    }

    /// Maps numeric request values onto the store's bins so they compare
    /// with historical items.
    pub fn prepare_request(&self, request: &ServiceRequest) -> ServiceRequest {
        self.header
            .binning
            .iter()
            .fold(request.clone(), |r, spec| bin_request(&r, spec))
    }

    pub fn latest_date(&self) -> Option<chrono::NaiveDate> {
        self.events.iter().map(|e| e.date).max()
    }
}

/// Whether any event carries a binned value (handy in tests and reports).
pub fn has_binned_values(events: &[ServiceEvent]) -> bool {
    events
        .iter()
        .any(|e| e.attributes.values().any(|v| matches!(v, AttributeValue::Binned { .. })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_log(dir: &Path, name: &str, body: &str) -> PathBuf {
        let path = dir.join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "date,time,sensor,status,value,resident,location").unwrap();
        f.write_all(body.as_bytes()).unwrap();
        path
    }

    #[test]
    fn ingest_round_trips_through_store_file() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_log(
            dir.path(),
            "a.csv",
            "2011-06-15,20:00:00,TV,ON,,,lr\n2011-06-15,21:00:00,TV,OFF,,,lr\n\
             2011-06-15,19:00:00,Lamp,SET,brightness=10,,lr\n2011-06-15,19:30:00,Lamp,SET,brightness=80,,lr\n\
             2011-06-15,20:30:00,Lamp,OFF,,,lr\n",
        );
        let b = write_log(
            dir.path(),
            "b.csv",
            "2011-06-15,20:10:00,TV,ON,channel=Ch2,,lr\n2011-06-15,20:10:30,TV,SET,channel=Ch5,,lr\n\
             2011-06-15,20:50:00,TV,OFF,,,lr\n",
        );
        let sources = [
            LogSource { path: a, resident: Some("R1".into()) },
            LogSource { path: b, resident: Some("R2".into()) },
        ];
        let opts = IngestOptions {
            augment: Some(("TV".into(), vec!["Ch1".into(), "Ch2".into()])),
            bin_attributes: Some(vec!["brightness".into()]),
            ..Default::default()
        };
        let config = RunConfig { bin_count: 2, seed: 7, ..RunConfig::default() };
        let store = ingest(&sources, &opts, &config).unwrap();
        assert_eq!(store.events.len(), 4);
        assert!(store.events.iter().filter(|e| e.service_id.as_str() == "TV").all(|e| e.attributes.contains_key("channel")));
        // R2's quick switch collapsed to Ch5.
        let r2: Vec<_> = store.events.iter().filter(|e| e.resident.as_str() == "R2").collect();
        assert_eq!(r2.len(), 1);
        assert_eq!(r2[0].attributes["channel"].label(), "Ch5");
        assert!(has_binned_values(&store.events));
        assert_eq!(store.header.provenance.inputs.len(), 2);

        let mut buf = Vec::new();
        store.write(&mut buf).unwrap();
        let back = EventStore::read_reader(buf.as_slice(), Path::new("s")).unwrap();
        assert_eq!(back, store);

        let again = ingest(&sources, &opts, &config).unwrap();
        let mut buf2 = Vec::new();
        again.write(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn rejects_foreign_schema() {
        let err = EventStore::read_reader(r#"{"schema":"x"}"#.as_bytes(), Path::new("s")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
