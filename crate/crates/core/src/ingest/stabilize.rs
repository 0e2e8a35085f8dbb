//! Value stabilization: bursts of quick attribute changes (channel surfing,
//! dial twiddling) collapse to the value the resident settled on.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Location, ResidentId, ServiceEvent, ServiceId, TimeOfDayInterval};

pub const DEFAULT_SETTLING_WINDOW: u32 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationConfig {
    settling_window: u32,
}

impl StabilizationConfig {
    pub fn new(settling_window: u32) -> Result<Self> {
        if settling_window == 0 {
            return Err(Error::Config("settling window must be positive".into()));
        }
        Ok(Self { settling_window })
    }

    pub fn settling_window(&self) -> u32 {
        self.settling_window
    }
}

impl Default for StabilizationConfig {
    fn default() -> Self {
        Self {
            settling_window: DEFAULT_SETTLING_WINDOW,
        }
    }
}

/// Collapses runs of contiguous segments on the same service, resident and
/// location where each value was held for less than the settling window.
/// The survivor carries the final value and starts where the run started.
pub fn stabilize(events: &[ServiceEvent], cfg: StabilizationConfig) -> Vec<ServiceEvent> {
    let mut groups: BTreeMap<(&ServiceId, &ResidentId, &Location), Vec<&ServiceEvent>> = BTreeMap::new();
    for e in events {
        groups.entry((&e.service_id, &e.resident, &e.location)).or_default().push(e);
    }

    let mut out = Vec::with_capacity(events.len());
    for (_, mut group) in groups {
        group.sort_by_key(|e| e.sort_key());
        // (survivor so far, start of the value it currently holds)
        let mut current: Option<(ServiceEvent, u32)> = None;
        for e in group {
            current = match current.take() {
                Some((run, held_since)) if continues_run(&run, e, held_since, cfg.settling_window) => {
                    let mut merged = e.clone();
                    merged.interval = TimeOfDayInterval::new(run.interval.start(), e.interval.end())
                        .expect("contiguous non-wrapping segments");
                    Some((merged, e.interval.start().seconds()))
                }
                Some((run, _)) => {
                    out.push(run);
                    Some((e.clone(), e.interval.start().seconds()))
                }
                None => Some((e.clone(), e.interval.start().seconds())),
            };
        }
        out.extend(current.map(|(e, _)| e));
    }
    out.sort_by(|a, b| {
        (a.sort_key(), &a.service_id, &a.resident, &a.location)
            .cmp(&(b.sort_key(), &b.service_id, &b.resident, &b.location))
    });
    out
}

fn continues_run(run: &ServiceEvent, next: &ServiceEvent, held_since: u32, window: u32) -> bool {
    run.date == next.date
        && !run.interval.wraps()
        && !next.interval.wraps()
        && next.interval.start() == run.interval.end()
        && next.interval.start().seconds() - held_since < window
}
