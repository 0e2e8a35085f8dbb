//! The same conflict resolved by every strategy.

use iot_conflict::aggregate::{resolve_with_table, ResolveConfig, Strategy};
use iot_conflict::demo;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (situation, table) = (demo::situation(), demo::table());
    let cfg = ResolveConfig::default();
    for strategy in Strategy::ALL {
        let r = resolve_with_table(&situation, &table, strategy, &cfg)?;
        let ranking: Vec<String> = r.ranked_items.iter().map(|x| format!("{} {:.2}", x.item, x.score)).collect();
        println!("{:<9} ({}) {}", strategy.label(), strategy.score_name(), ranking.join(", "));
    }
    Ok(())
}
