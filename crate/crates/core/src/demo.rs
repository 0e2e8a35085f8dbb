//! The three-resident TV example: residents R1, R2, R3 want Ch3, Ch2 and
//! Ch5 between 20:00 and 20:30, and their historical preference scores are
//! known.

use std::io::Write;

use crate::aggregate::{resolve_with_table, ResolveConfig, Resolution, Strategy};
use crate::error::Result;
use crate::model::{AttributeValue, ConflictSituation, ServiceRequest, TimeOfDayInterval};
use crate::preference::PreferenceTable;

pub const ITEMS: [&str; 4] = ["Ch1", "Ch2", "Ch3", "Ch5"];
pub const RESIDENTS: [&str; 3] = ["R1", "R2", "R3"];
pub const H: [[f64; 4]; 3] = [
    [19.44, 14.48, 15.20, 11.04],
    [20.00, 17.20, 14.52, 20.00],
    [16.08, 14.12, 14.40, 20.00],
];
pub const REQUESTED: [&str; 3] = ["Ch3", "Ch2", "Ch5"];

pub fn table() -> PreferenceTable {
    let mut t = PreferenceTable::default();
    for (r, row) in RESIDENTS.iter().zip(H) {
        for (item, s) in ITEMS.iter().zip(row) {
            t.set((*r).into(), *item, s).expect("finite scores");
        }
    }
    t
}

pub fn situation() -> ConflictSituation {
    let window = TimeOfDayInterval::parse("20:00", "20:30").expect("valid window");
    ConflictSituation {
        service_id: "tv".into(),
        location: "living room".into(),
        window,
        requests: RESIDENTS
            .iter()
            .zip(REQUESTED)
            .enumerate()
            .map(|(i, (r, v))| ServiceRequest {
                request_id: format!("q{}", i + 1),
                service_id: "tv".into(),
                attribute: "channel".into(),
                value: AttributeValue::from(v),
                interval: window,
                location: "living room".into(),
                resident: (*r).into(),
            })
            .collect(),
    }
}

/// Resolves the example. `crim_decimals = Some(2)` reproduces the
/// published hand arithmetic, which rounds CRIM before projecting.
pub fn run(crim_decimals: Option<u32>) -> Result<Resolution> {
    let cfg = ResolveConfig { k: 2, crim_decimals, ..ResolveConfig::default() };
    resolve_with_table(&situation(), &table(), Strategy::Svd, &cfg)
}

struct Check {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn near(name: &'static str, got: &[f64], want: &[f64], tol: f64) -> Check {
    let ok = got.len() == want.len() && got.iter().zip(want).all(|(g, w)| (g - w).abs() <= tol);
    Check { name, ok, detail: format!("got {got:.4?}, expected {want:?} ± {tol}") }
}

/// Prints the example and checks it against the published numbers.
/// Returns whether every check passed.
pub fn print_report<W: Write>(mut out: W) -> Result<bool> {
    let r = run(Some(2))?;
    let trace = r.trace.clone().expect("svd strategy records its trace");
    let io = |e| crate::error::Error::io("<stdout>", e);

    writeln!(out, "H ({} x {}), columns {}", trace.h.len(), trace.items.len(), trace.items.join(" ")).map_err(io)?;
    for (res, row) in trace.residents.iter().zip(&trace.h) {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:6.2}")).collect();
        writeln!(out, "  {res}  {}", cells.join("  ")).map_err(io)?;
    }
    writeln!(out, "singular values  {:.4?}", trace.singular_values).map_err(io)?;
    writeln!(out, "w                {}", trace.w).map_err(io)?;
    writeln!(out, "CRIM (2 dp)      {:.2?}", trace.crim).map_err(io)?;
    writeln!(out, "IRIM             {:.3?}", trace.irim).map_err(io)?;
    let ranking: Vec<String> = r.ranked_items.iter().map(|x| format!("{} {:.2}", x.item, x.score)).collect();
    writeln!(out, "IRID ranking     {}", ranking.join(" < ")).map_err(io)?;
    writeln!(out, "chosen (k = 2)   {}", r.chosen.join(", ")).map_err(io)?;

    let crim_abs: Vec<f64> = trace.crim.iter().map(|c| c.abs()).collect();
    let irid = |item: &str| r.ranked_items.iter().find(|x| x.item == item).map_or(f64::NAN, |x| x.score);
    let order: Vec<&str> = r.ranked_items.iter().map(|x| x.item.as_str()).collect();
    let checks = [
        near("singular values", &trace.singular_values, &[57.1127, 6.8771, 1.8235], 1e-3),
        Check { name: "rank", ok: trace.w == 2, detail: format!("w = {}", trace.w) },
        near("|CRIM|", &crim_abs, &[0.48, 0.15], 0.01),
        near("IRIM", &trace.irim, &[13.623, 17.539, 16.107], 0.05),
        near(
            "IRID",
            &[irid("Ch1"), irid("Ch2"), irid("Ch3"), irid("Ch5")],
            &[6.32, 2.19, 3.81, 5.28],
            0.02,
        ),
        Check {
            name: "ranking",
            ok: order == ["Ch2", "Ch3", "Ch5", "Ch1"],
            detail: order.join(" < "),
        },
    ];
    let mut all = true;
    for c in &checks {
        all &= c.ok;
        writeln!(out, "{} {:<16} {}", if c.ok { "PASS" } else { "FAIL" }, c.name, c.detail).map_err(io)?;
    }
    writeln!(out, "{}", if all { "PASS" } else { "FAIL" }).map_err(io)?;
    Ok(all)
}
