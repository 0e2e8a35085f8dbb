//! Compare all strategies on a freshly generated household.

use iot_conflict::evaluate::{run_experiment, EvaluationConfig};
use iot_conflict::ingest::{merge_households, parse_event_log_reader, stabilize, SensorMap, StabilizationConfig};
use iot_conflict::synthetic::{generate, HouseholdSpec};
use iot_conflict::RunConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(7);
    let household = generate(&HouseholdSpec { seed, ..HouseholdSpec::default() });

    let mut logs = Vec::new();
    for (resident, text) in &household.logs {
        let parsed = parse_event_log_reader(text.as_bytes(), "generated".as_ref(), Some(resident), &SensorMap::default())?;
        logs.push((resident.clone(), parsed.events));
    }
    let history = stabilize(&merge_households(logs)?, StabilizationConfig::default());

    let cfg = EvaluationConfig::from_run_config(&RunConfig { seed, ..RunConfig::default() });
    let report = run_experiment(&history, &household.requests, &cfg)?;
    println!("{:<10} {:>5} {:>9} {:>9} {:>9} {:>9}", "strategy", "size", "conflicts", "sg", "harmonic", "avg_sat");
    let show = |x: Option<f64>| x.map_or("-".to_owned(), |v| format!("{v:.3}"));
    for row in &report.rows {
        println!(
            "{:<10} {:>5} {:>9} {:>9} {:>9} {:>9}",
            row.strategy.label(),
            row.group_size,
            row.conflicts,
            show(row.sg),
            show(row.harmonic),
            show(row.avg_satisfaction)
        );
    }
    Ok(())
}
