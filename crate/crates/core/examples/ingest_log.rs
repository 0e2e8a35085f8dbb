//! Parse a raw sensor log, collapse channel surfing and bin a numeric
//! attribute.

use std::path::Path;

use iot_conflict::ingest::{apply_bins, compute_bins, parse_event_log_reader, stabilize, SensorMap, StabilizationConfig};

const LOG: &str = "\
date,time,sensor,status,value,resident,location
2011-06-15,20:00:00,TV,ON,channel=Ch1,R1,Living Room
2011-06-15,20:00:20,TV,SET,channel=Ch2,R1,Living Room
2011-06-15,20:00:40,TV,SET,channel=Ch3,R1,Living Room
2011-06-15,21:00:00,TV,OFF,,R1,Living Room
2011-06-15,23:30:00,TV,ON,channel=Ch5,R2,Living Room
2011-06-16,00:45:00,TV,OFF,,R2,Living Room
2011-06-16,19:00:00,AC,SET,temperature=21,R1,Bedroom
2011-06-16,20:00:00,AC,SET,temperature=25,R1,Bedroom
2011-06-16,21:00:00,AC,SET,temperature=26,R1,Bedroom
2011-06-16,22:00:00,AC,OFF,,R1,Bedroom
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let parsed = parse_event_log_reader(LOG.as_bytes(), Path::new("inline.csv"), None, &SensorMap::default())?;
    println!("{} raw segments, {} warnings", parsed.events.len(), parsed.warnings.len());

    let events = stabilize(&parsed.events, StabilizationConfig::default());
    let temps: Vec<f64> = events
        .iter()
        .filter_map(|e| e.attribute("temperature").and_then(|v| v.as_numeric()))
        .collect();
    let spec = compute_bins("temperature", &temps, 2)?;
    println!("temperature bin boundaries {:?}", spec.boundaries);

    for e in &events {
        let (e, _) = apply_bins(e, &spec);
        let attrs: Vec<String> = e.attributes.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("{} {} {} {} {}", e.date, e.interval, e.service_id, e.resident, attrs.join(" "));
    }
    Ok(())
}
