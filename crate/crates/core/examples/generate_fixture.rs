//! Regenerates the bundled synthetic household under `data/`.
//!
//! ```text
//! cargo run --example generate_fixture [-- OUT_DIR]
//! ```

use std::path::PathBuf;

use iot_conflict::ingest::write_requests;
use iot_conflict::synthetic::{generate, HouseholdSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    std::fs::create_dir_all(&dir)?;
    let household = generate(&HouseholdSpec::default());
    for (resident, log) in &household.logs {
        let path = dir.join(format!("{}.csv", resident.as_str().to_lowercase()));
        std::fs::write(&path, log)?;
        println!("wrote {}", path.display());
    }
    let path = dir.join("requests.jsonl");
    let mut buf = Vec::new();
    write_requests(&household.requests, &mut buf)?;
    std::fs::write(&path, buf)?;
    println!("wrote {} ({} requests)", path.display(), household.requests.len());
    Ok(())
}
