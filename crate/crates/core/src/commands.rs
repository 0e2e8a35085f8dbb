//! The command-line operations as library calls. Each writes a
//! reproducibility header first: the run configuration and SHA-256 digests
//! of every input.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::aggregate::{resolve_with_table, ResolveConfig, Resolution, Strategy, SvdTrace};
use crate::detect::detect_conflicts;
use crate::error::{Error, Result};
use crate::evaluate::{run_experiment, write_plot_data, write_report_csv, write_report_json, EvaluationConfig, MetricReport};
use crate::ingest::{ingest, parse_requests, EventStore, IngestOptions, LogSource, SensorMap};
use crate::model::{ConflictSituation, Location, ServiceId, ServiceRequest, TimeOfDayInterval};
use crate::preference::{build_preference_table, ExtractionOptions};
use crate::provenance::{InputDigest, ReportHeader, RunConfig};

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::io(path, e)
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

#[derive(Clone, Debug, Default)]
pub struct IngestArgs {
    pub logs: Vec<LogSource>,
    /// JSON [`SensorMap`].
    pub sensors: Option<PathBuf>,
    pub augment: Option<(ServiceId, Vec<String>)>,
    pub bin_attributes: Option<Vec<String>>,
}

pub fn cmd_ingest<W: Write>(args: &IngestArgs, config: &RunConfig, out: W) -> Result<EventStore> {
    let sensors = match &args.sensors {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(io_err(path))?;
            serde_json::from_str::<SensorMap>(&text).map_err(|e| Error::parse(path, e.line() as u64, e.to_string()))?
        }
        None => SensorMap::default(),
    };
    let opts = IngestOptions {
        sensors,
        augment: args.augment.clone(),
        bin_attributes: args.bin_attributes.clone(),
    };
    let store = ingest(&args.logs, &opts, config)?;
    store.write(out).map_err(io_err(Path::new("<output>")))?;
    Ok(store)
}

/// Store, binned requests and the digests identifying both.
struct Inputs {
    store: EventStore,
    requests: Vec<ServiceRequest>,
    digests: Vec<InputDigest>,
}

fn load_inputs(store_path: &Path, requests_path: &Path) -> Result<Inputs> {
    let store = EventStore::read(store_path)?;
    let raw = parse_requests(requests_path)?;
    let requests = raw.iter().map(|r| store.prepare_request(r)).collect();
    Ok(Inputs {
        store,
        requests,
        digests: vec![InputDigest::of_file(store_path)?, InputDigest::of_file(requests_path)?],
    })
}

#[derive(Serialize)]
struct HeaderLine<'a> {
    header: &'a ReportHeader,
}

/// One line of `detect` output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SituationLine {
    pub service: ServiceId,
    pub location: Location,
    pub window: TimeOfDayInterval,
    pub members: Vec<String>,
}

impl SituationLine {
    fn of(s: &ConflictSituation) -> Self {
        Self {
            service: s.service_id.clone(),
            location: s.location.clone(),
            window: s.window,
            members: s.member_ids().into_iter().map(str::to_owned).collect(),
        }
    }
}

fn write_json_line<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    let line = serde_json::to_string(value).map_err(|e| Error::Config(e.to_string()))?;
    writeln!(out, "{line}").map_err(io_err(Path::new("<output>")))
}

pub fn cmd_detect<W: Write>(store: &Path, requests: &Path, config: &RunConfig, mut out: W) -> Result<Vec<ConflictSituation>> {
    config.validate()?;
    let inputs = load_inputs(store, requests)?;
    let header = ReportHeader::new("conflicts", config, inputs.digests);
    write_json_line(&mut out, &HeaderLine { header: &header })?;
    let situations = detect_conflicts(&inputs.requests);
    for s in &situations {
        write_json_line(&mut out, &SituationLine::of(s))?;
    }
    Ok(situations)
}

#[derive(Deserialize)]
struct ParsedHeaderLine {
    header: ReportHeader,
}

/// Reads `detect` output (`-` for stdin) back into situations over
/// `requests`.
fn read_situations(path: &Path, requests: &[ServiceRequest], expected: &[InputDigest]) -> Result<Vec<ConflictSituation>> {
    let reader: Box<dyn std::io::Read> = if path == Path::new("-") {
        Box::new(std::io::stdin().lock())
    } else {
        Box::new(std::fs::File::open(path).map_err(io_err(path))?)
    };
    let mut lines = BufReader::new(reader).lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "missing header line"))?
        .map_err(io_err(path))?;
    let header: ParsedHeaderLine = serde_json::from_str(&first).map_err(|e| Error::parse(path, 1, e.to_string()))?;
    if header.header.inputs != expected {
        return Err(Error::parse(path, 1, "situations were detected from different store or request files"));
    }
    let mut out = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx as u64 + 2;
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let s: SituationLine = serde_json::from_str(&line).map_err(|e| Error::parse(path, lineno, e.to_string()))?;
        let members = s
            .members
            .iter()
            .map(|id| {
                requests
                    .iter()
                    .find(|r| &r.request_id == id)
                    .cloned()
                    .ok_or_else(|| Error::parse(path, lineno, format!("unknown request id `{id}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(ConflictSituation {
            service_id: s.service,
            location: s.location,
            window: s.window,
            requests: members,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ResolveArgs {
    pub strategy: Strategy,
    pub debug: bool,
    /// Output of an earlier `detect` run on the same inputs; `-` reads
    /// stdin.
    pub situations: Option<PathBuf>,
    pub dump_preferences: Option<PathBuf>,
}

impl Default for ResolveArgs {
    fn default() -> Self {
        Self { strategy: Strategy::Svd, debug: false, situations: None, dump_preferences: None }
    }
}

#[derive(Serialize)]
struct Debug6 {
    residents: Vec<String>,
    items: Vec<String>,
    h: Vec<Vec<f64>>,
    singular_values: Vec<f64>,
    w: usize,
    crim: Vec<f64>,
    irim: Vec<f64>,
}

impl Debug6 {
    fn of(t: &SvdTrace) -> Self {
        let r = |v: &[f64]| v.iter().copied().map(round6).collect::<Vec<_>>();
        Self {
            residents: t.residents.iter().map(|x| x.to_string()).collect(),
            items: t.items.clone(),
            h: t.h.iter().map(|row| r(row)).collect(),
            singular_values: r(&t.singular_values),
            w: t.w,
            crim: r(&t.crim),
            irim: r(&t.irim),
        }
    }
}

fn resolution_json(s: &ConflictSituation, r: &Resolution, debug: bool) -> serde_json::Value {
    let key = r.strategy.score_name();
    let ranked: Vec<serde_json::Value> = r
        .ranked_items
        .iter()
        .map(|x| serde_json::json!({ "item": x.item, key: round6(x.score) }))
        .collect();
    let mut v = serde_json::json!({
        "situation": SituationLine::of(s),
        "strategy": r.strategy,
        "ranked": ranked,
        "chosen": r.chosen,
    });
    if let (true, Some(t)) = (debug, &r.trace) {
        v["debug"] = serde_json::to_value(Debug6::of(t)).expect("plain data");
    }
    v
}

pub fn cmd_resolve<W: Write>(
    store: &Path,
    requests: &Path,
    args: &ResolveArgs,
    config: &RunConfig,
    mut out: W,
) -> Result<Vec<Resolution>> {
    config.validate()?;
    let inputs = load_inputs(store, requests)?;
    let situations = match &args.situations {
        Some(path) => read_situations(path, &inputs.requests, &inputs.digests)?,
        None => detect_conflicts(&inputs.requests),
    };
    let header = ReportHeader::new("resolutions", config, inputs.digests);
    write_json_line(&mut out, &HeaderLine { header: &header })?;

    let mut cfg = ResolveConfig::from_run_config(config);
    cfg.extraction = ExtractionOptions { lookback_days: config.lookback_days, as_of: inputs.store.latest_date() };
    if let Some(dir) = &args.dump_preferences {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut resolutions = Vec::new();
    for (i, s) in situations.iter().enumerate() {
        let table = build_preference_table(&inputs.store.events, s, cfg.extraction)?;
        if let Some(dir) = &args.dump_preferences {
            let path = dir.join(format!("situation-{:03}.csv", i + 1));
            let mut buf = Vec::new();
            writeln!(buf, "# {}", serde_json::to_string(&header).expect("plain data")).map_err(io_err(&path))?;
            writeln!(buf, "# {}", serde_json::to_string(&SituationLine::of(s)).expect("plain data")).map_err(io_err(&path))?;
            table.write_csv(&mut buf).map_err(io_err(&path))?;
            std::fs::write(&path, buf).map_err(io_err(&path))?;
        }
        let r = resolve_with_table(s, &table, args.strategy, &cfg)?;
        write_json_line(&mut out, &resolution_json(s, &r, args.debug))?;
        resolutions.push(r);
    }
    Ok(resolutions)
}

#[derive(Clone, Debug, Default)]
pub struct EvaluateArgs {
    pub strategies: Option<Vec<Strategy>>,
    pub group_sizes: Option<Vec<usize>>,
    pub list_size: Option<usize>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub plot_data: Option<PathBuf>,
}

/// Runs the experiment and writes the report files. The CSV goes to `out`
/// when no CSV path is given.
pub fn cmd_evaluate<W: Write>(
    store: &Path,
    requests: &Path,
    args: &EvaluateArgs,
    config: &RunConfig,
    mut out: W,
) -> Result<MetricReport> {
    config.validate()?;
    let inputs = load_inputs(store, requests)?;
    let mut cfg = EvaluationConfig::from_run_config(config);
    if let Some(s) = &args.strategies {
        cfg.strategies = s.clone();
    }
    if let Some(g) = &args.group_sizes {
        cfg.group_sizes = g.clone();
    }
    if let Some(l) = args.list_size {
        cfg.recommendation_list_size = l;
    }
    let report = run_experiment(&inputs.store.events, &inputs.requests, &cfg)?;
    let header = ReportHeader::new("evaluation", config, inputs.digests);

    match &args.csv {
        Some(path) => {
            let mut buf = Vec::new();
            write_report_csv(&report, &header, &mut buf).map_err(io_err(path))?;
            std::fs::write(path, buf).map_err(io_err(path))?;
        }
        None => write_report_csv(&report, &header, &mut out).map_err(io_err(Path::new("<stdout>")))?,
    }
    if let Some(path) = &args.json {
        let mut buf = Vec::new();
        write_report_json(&report, &header, &mut buf).map_err(io_err(path))?;
        std::fs::write(path, buf).map_err(io_err(path))?;
    }
    if let Some(dir) = &args.plot_data {
        write_plot_data(&report, &header, dir)?;
    }
    Ok(report)
}

pub fn cmd_demo<W: Write>(out: W) -> Result<bool> {
    crate::demo::print_report(out)
}
