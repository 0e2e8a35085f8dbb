//! Explicit ratings: a `resident,item,score` CSV with scores in [1, 100].
//! Lines starting with `#` are skipped.

use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::ResidentId;
use crate::preference::PreferenceTable;

#[derive(Deserialize)]
struct RatingRow {
    resident: String,
    item: String,
    score: f64,
}

pub fn parse_ratings_reader<R: Read>(reader: R, source: &Path) -> Result<PreferenceTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut table = PreferenceTable::default();
    let mut seen = BTreeSet::new();
    let headers = rdr.headers().map_err(|e| Error::parse(source, 1, e.to_string()))?.clone();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(source, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row: RatingRow = record
            .deserialize(Some(&headers))
            .map_err(|e| Error::parse(source, line, e.to_string()))?;
        if !(1.0..=100.0).contains(&row.score) {
            return Err(Error::parse(source, line, format!("score {} outside [1, 100]", row.score)));
        }
        if !seen.insert((row.resident.clone(), row.item.clone())) {
            return Err(Error::parse(
                source,
                line,
                format!("duplicate rating for ({}, {})", row.resident, row.item),
            ));
        }
        table.set(ResidentId::new(row.resident), row.item, row.score)?;
    }
    Ok(table)
}

pub fn parse_ratings(path: &Path) -> Result<PreferenceTable> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_ratings_reader(file, path)
}
