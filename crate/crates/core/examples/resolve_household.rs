//! Ingest the bundled three-resident logs, detect conflicts among the
//! bundled requests and resolve each one.

use std::path::Path;

use iot_conflict::aggregate::{resolve, ResolveConfig};
use iot_conflict::detect::detect_conflicts;
use iot_conflict::ingest::{ingest, parse_requests, IngestOptions, LogSource};
use iot_conflict::RunConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let sources: Vec<LogSource> = ["R1", "R2", "R3"]
        .iter()
        .map(|r| LogSource { path: data.join(format!("{}.csv", r.to_lowercase())), resident: Some((*r).into()) })
        .collect();
    let config = RunConfig::default();
    let store = ingest(&sources, &IngestOptions::default(), &config)?;
    println!("{} events after stabilization", store.events.len());

    let requests: Vec<_> = parse_requests(&data.join("requests.jsonl"))?
        .iter()
        .map(|r| store.prepare_request(r))
        .collect();
    let cfg = ResolveConfig::from_run_config(&config);
    for s in detect_conflicts(&requests) {
        let r = resolve(&s, &store.events, &cfg)?;
        let wants: Vec<String> = s.requests.iter().map(|q| format!("{}:{}", q.resident, q.value)).collect();
        println!("{} [{}] -> {}", s.window, wants.join(" "), r.chosen.join(", "));
    }
    Ok(())
}
